#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>

#include "magdirac/core.hpp"

namespace magdirac {

// Spinor/site layout of an assembled operator. Flattened index convention:
// ((site12 * spinor_comps + component) * n3 + n3_index).
struct LayoutMeta {
  int spinor_comps = 1;
  int n12 = 0;
  int n3 = 1;
};

// Compressed sparse row complex matrix. Rows are immutable after assembly;
// matvec is row-parallel, so results are bitwise identical for any thread
// count.
struct SparseMatrixZ {
  int n = 0;
  std::vector<int> row_ptr;  // size n+1
  std::vector<int> col;
  VecZ val;
  bool hermitian = false;
  LayoutMeta layout;

  std::size_t nnz() const { return val.size(); }

  void apply(const cd* x, cd* y) const;         // OpenMP kernel
  void apply_serial(const cd* x, cd* y) const;  // reference kernel
  VecZ apply(const VecZ& x) const;

  // max_ij |M - M^dag| over stored entries (structurally symmetric pattern
  // assumed for hermitian operators; asymmetric fills count in full).
  double hermiticity_residual() const;

  Eigen::MatrixXcd to_dense() const;
  Eigen::SparseMatrix<cd> to_eigen() const;
};

// Accumulates coordinate triplets, then compresses to CSR (duplicates summed,
// entries sorted, exact zeros dropped).
class CooBuilder {
 public:
  explicit CooBuilder(int n) : n_(n) {}

  void add(int i, int j, cd v) {
    if (v == cd(0, 0)) return;
    i_.push_back(i);
    j_.push_back(j);
    v_.push_back(v);
  }

  // Adds v at (i,j) and conj(v) at (j,i); diagonal entries get re(v).
  void add_herm(int i, int j, cd v) {
    if (i == j) {
      add(i, j, cd(v.real(), 0.0));
    } else {
      add(i, j, v);
      add(j, i, std::conj(v));
    }
  }

  void add_block(int i0, int j0, const Eigen::MatrixXcd& B) {
    for (int c = 0; c < B.cols(); ++c)
      for (int r = 0; r < B.rows(); ++r) add(i0 + r, j0 + c, B(r, c));
  }

  SparseMatrixZ compress(bool hermitian_flag = false,
                         LayoutMeta meta = {}) const;

 private:
  int n_;
  std::vector<int> i_, j_;
  VecZ v_;
};

SparseMatrixZ sparse_identity(int n);
SparseMatrixZ sparse_diag(const VecZ& d);
SparseMatrixZ sparse_from_dense(const Eigen::MatrixXcd& D, double drop_tol = 0.0);

// kron(A, B) with index iA*nB + iB. B is a small dense block (spinor matrix
// or an x3-axis operator).
SparseMatrixZ kron_sparse_dense(const SparseMatrixZ& A, const Eigen::MatrixXcd& B);
SparseMatrixZ kron_sparse_id(const SparseMatrixZ& A, int n_right);
SparseMatrixZ kron_id_dense(int n_left, const Eigen::MatrixXcd& B);

SparseMatrixZ sparse_add(const SparseMatrixZ& A, const SparseMatrixZ& B,
                         cd alpha = cd(1, 0), cd beta = cd(1, 0));
SparseMatrixZ sparse_matmul(const SparseMatrixZ& A, const SparseMatrixZ& B);
SparseMatrixZ sparse_scale(const SparseMatrixZ& A, cd alpha);

// Coordinate-list text export: header "dimension nnz", rows "i j re im".
void export_coo_text(const SparseMatrixZ& M, const std::string& path);
SparseMatrixZ import_coo_text(const std::string& path);

void set_num_threads(int n);  // 0 = library default
int num_threads();

}  // namespace magdirac
