#include "magdirac/sparse.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace magdirac {

namespace {
int g_threads = 0;
}

void set_num_threads(int n) {
  g_threads = n;
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#endif
}

int num_threads() {
#ifdef _OPENMP
  return g_threads > 0 ? g_threads : omp_get_max_threads();
#else
  return 1;
#endif
}

void SparseMatrixZ::apply_serial(const cd* x, cd* y) const {
  for (int i = 0; i < n; ++i) {
    cd acc = 0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) acc += val[k] * x[col[k]];
    y[i] = acc;
  }
}

void SparseMatrixZ::apply(const cd* x, cd* y) const {
  // Each output row is accumulated by exactly one thread in CSR order, so the
  // result is independent of the thread count.
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    cd acc = 0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) acc += val[k] * x[col[k]];
    y[i] = acc;
  }
}

VecZ SparseMatrixZ::apply(const VecZ& x) const {
  VecZ y(n);
  apply(x.data(), y.data());
  return y;
}

double SparseMatrixZ::hermiticity_residual() const {
  // Compare stored entries against the conjugate transpose via a transposed
  // lookup table.
  Eigen::SparseMatrix<cd> E = to_eigen();
  Eigen::SparseMatrix<cd> D = E - Eigen::SparseMatrix<cd>(E.adjoint());
  double m = 0;
  for (int k = 0; k < D.outerSize(); ++k)
    for (Eigen::SparseMatrix<cd>::InnerIterator it(D, k); it; ++it)
      m = std::max(m, std::abs(it.value()));
  return m;
}

Eigen::MatrixXcd SparseMatrixZ::to_dense() const {
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) D(i, col[k]) += val[k];
  return D;
}

Eigen::SparseMatrix<cd> SparseMatrixZ::to_eigen() const {
  std::vector<Eigen::Triplet<cd>> trips;
  trips.reserve(nnz());
  for (int i = 0; i < n; ++i)
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      trips.emplace_back(i, col[k], val[k]);
  Eigen::SparseMatrix<cd> E(n, n);
  E.setFromTriplets(trips.begin(), trips.end());
  return E;
}

SparseMatrixZ CooBuilder::compress(bool hermitian_flag, LayoutMeta meta) const {
  const std::size_t m = v_.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (i_[a] != i_[b]) return i_[a] < i_[b];
    return j_[a] < j_[b];
  });

  SparseMatrixZ out;
  out.n = n_;
  out.hermitian = hermitian_flag;
  out.layout = meta;
  out.row_ptr.assign(n_ + 1, 0);
  out.col.reserve(m);
  out.val.reserve(m);

  std::size_t k = 0;
  for (int row = 0; row < n_; ++row) {
    out.row_ptr[row] = static_cast<int>(out.col.size());
    while (k < m && i_[order[k]] == row) {
      int c = j_[order[k]];
      cd acc = 0;
      while (k < m && i_[order[k]] == row && j_[order[k]] == c) {
        acc += v_[order[k]];
        ++k;
      }
      if (acc != cd(0, 0)) {
        out.col.push_back(c);
        out.val.push_back(acc);
      }
    }
  }
  out.row_ptr[n_] = static_cast<int>(out.col.size());
  return out;
}

SparseMatrixZ sparse_identity(int n) {
  CooBuilder b(n);
  for (int i = 0; i < n; ++i) b.add(i, i, 1.0);
  return b.compress(true);
}

SparseMatrixZ sparse_diag(const VecZ& d) {
  CooBuilder b(static_cast<int>(d.size()));
  bool herm = true;
  for (int i = 0; i < static_cast<int>(d.size()); ++i) {
    b.add(i, i, d[i]);
    if (d[i].imag() != 0) herm = false;
  }
  return b.compress(herm);
}

SparseMatrixZ sparse_from_dense(const Eigen::MatrixXcd& D, double drop_tol) {
  CooBuilder b(static_cast<int>(D.rows()));
  for (int j = 0; j < D.cols(); ++j)
    for (int i = 0; i < D.rows(); ++i)
      if (std::abs(D(i, j)) > drop_tol) b.add(i, j, D(i, j));
  return b.compress(false);
}

SparseMatrixZ kron_sparse_dense(const SparseMatrixZ& A, const Eigen::MatrixXcd& B) {
  const int nb = static_cast<int>(B.rows());
  CooBuilder out(A.n * nb);
  for (int i = 0; i < A.n; ++i)
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      for (int c = 0; c < nb; ++c)
        for (int r = 0; r < nb; ++r)
          if (B(r, c) != cd(0, 0))
            out.add(i * nb + r, A.col[k] * nb + c, A.val[k] * B(r, c));
  return out.compress(A.hermitian && B.isApprox(B.adjoint()));
}

SparseMatrixZ kron_sparse_id(const SparseMatrixZ& A, int n_right) {
  CooBuilder out(A.n * n_right);
  for (int i = 0; i < A.n; ++i)
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      for (int r = 0; r < n_right; ++r)
        out.add(i * n_right + r, A.col[k] * n_right + r, A.val[k]);
  return out.compress(A.hermitian);
}

SparseMatrixZ kron_id_dense(int n_left, const Eigen::MatrixXcd& B) {
  const int nb = static_cast<int>(B.rows());
  CooBuilder out(n_left * nb);
  for (int i = 0; i < n_left; ++i)
    for (int c = 0; c < nb; ++c)
      for (int r = 0; r < nb; ++r)
        if (B(r, c) != cd(0, 0)) out.add(i * nb + r, i * nb + c, B(r, c));
  return out.compress(B.isApprox(B.adjoint()));
}

SparseMatrixZ sparse_add(const SparseMatrixZ& A, const SparseMatrixZ& B,
                         cd alpha, cd beta) {
  if (A.n != B.n) throw SolverError("sparse_add: dimension mismatch");
  CooBuilder out(A.n);
  for (int i = 0; i < A.n; ++i)
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      out.add(i, A.col[k], alpha * A.val[k]);
  for (int i = 0; i < B.n; ++i)
    for (int k = B.row_ptr[i]; k < B.row_ptr[i + 1]; ++k)
      out.add(i, B.col[k], beta * B.val[k]);
  bool herm = A.hermitian && B.hermitian && alpha.imag() == 0 && beta.imag() == 0;
  return out.compress(herm, A.layout.n12 ? A.layout : B.layout);
}

SparseMatrixZ sparse_matmul(const SparseMatrixZ& A, const SparseMatrixZ& B) {
  if (A.n != B.n) throw SolverError("sparse_matmul: dimension mismatch");
  Eigen::SparseMatrix<cd> C = (A.to_eigen() * B.to_eigen()).pruned();
  CooBuilder out(A.n);
  for (int k = 0; k < C.outerSize(); ++k)
    for (Eigen::SparseMatrix<cd>::InnerIterator it(C, k); it; ++it)
      out.add(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  return out.compress(false, A.layout.n12 ? A.layout : B.layout);
}

SparseMatrixZ sparse_scale(const SparseMatrixZ& A, cd alpha) {
  SparseMatrixZ out = A;
  for (cd& v : out.val) v *= alpha;
  out.hermitian = A.hermitian && alpha.imag() == 0;
  return out;
}

void export_coo_text(const SparseMatrixZ& M, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw ConfigError("cannot open for writing: " + path);
  std::fprintf(f, "%d %zu\n", M.n, M.nnz());
  for (int i = 0; i < M.n; ++i)
    for (int k = M.row_ptr[i]; k < M.row_ptr[i + 1]; ++k)
      std::fprintf(f, "%d %d %.17g %.17g\n", i, M.col[k], M.val[k].real(),
                   M.val[k].imag());
  std::fclose(f);
}

SparseMatrixZ import_coo_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open: " + path);
  int n = 0;
  std::size_t m = 0;
  in >> n >> m;
  if (!in || n <= 0) throw ConfigError("bad coordinate-list header in " + path);
  CooBuilder b(n);
  for (std::size_t k = 0; k < m; ++k) {
    int i, j;
    double re, im;
    in >> i >> j >> re >> im;
    if (!in) throw ConfigError("truncated coordinate-list file " + path);
    b.add(i, j, cd(re, im));
  }
  return b.compress(false);
}

}  // namespace magdirac
