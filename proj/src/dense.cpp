#include "magdirac/dense.hpp"

#include <cmath>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace magdirac {

EighResult eigh_dense(const Eigen::MatrixXcd& A, bool vectors) {
  const int n = static_cast<int>(A.rows());
  EighResult res;
  res.w.resize(n);
  res.V = A;  // overwritten with eigenvectors (column-major matches LAPACK)
  int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n,
                            res.V.data(), n, res.w.data());
  if (info != 0)
    throw SolverError("zheevd failed, info=" + std::to_string(info));
  if (!vectors) res.V.resize(0, 0);
  return res;
}

Eigen::MatrixXcd solve_dense(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& b) {
  const int n = static_cast<int>(A.rows());
  const int nrhs = static_cast<int>(b.cols());
  Eigen::MatrixXcd lu = A;
  Eigen::MatrixXcd x = b;
  std::vector<lapack_int> ipiv(n);
  int info = LAPACKE_zgesv(LAPACK_COL_MAJOR, n, nrhs, lu.data(), n, ipiv.data(),
                           x.data(), n);
  if (info != 0)
    throw SolverError("zgesv failed, info=" + std::to_string(info));
  return x;
}

int inertia_below(const Eigen::MatrixXcd& A, double sigma) {
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXcd F = A;
  for (int i = 0; i < n; ++i) F(i, i) -= sigma;
  std::vector<lapack_int> ipiv(n);
  int info = LAPACKE_zhetrf(LAPACK_COL_MAJOR, 'L', n, F.data(), n, ipiv.data());
  if (info < 0)
    throw SolverError("zhetrf failed, info=" + std::to_string(info));
  // Walk the block-diagonal D: 1x1 blocks contribute by sign, 2x2 blocks
  // (ipiv < 0 in pairs) always have one positive and one negative eigenvalue
  // unless the determinant is positive.
  int neg = 0;
  int i = 0;
  while (i < n) {
    if (ipiv[i] > 0) {
      double d = F(i, i).real();
      if (d < 0) ++neg;
      if (d == 0) ++neg;  // exactly singular shift counts below by convention
      ++i;
    } else {
      double a = F(i, i).real();
      double b = F(i + 1, i + 1).real();
      double c2 = std::norm(F(i + 1, i));
      double det = a * b - c2;
      double tr = a + b;
      if (det < 0) {
        ++neg;  // one of each sign
      } else if (tr < 0) {
        neg += 2;
      }
      i += 2;
    }
  }
  return neg;
}

double spectral_norm_dense(const Eigen::MatrixXcd& A, int iters) {
  const int n = static_cast<int>(A.cols());
  if (n == 0) return 0.0;
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = cd(1.0 / (1.0 + i), 1.0 / (2.0 + i));
  v.normalize();
  double s = 0;
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXcd w = A.adjoint() * (A * v);
    double nw = w.norm();
    if (nw == 0) return 0.0;
    v = w / nw;
    s = std::sqrt(nw);
  }
  return s;
}

}  // namespace magdirac
