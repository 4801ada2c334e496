#pragma once

#include <functional>

#include "magdirac/sparse.hpp"

namespace magdirac {

using ApplyFn = std::function<void(const cd*, cd*)>;

struct SolveStats {
  VecZ x;
  double rel_residual = 0;
  int iterations = 0;
  bool converged = false;
};

// Spectral norm estimate by power iteration on M^2 (M Hermitian) or M^dag M.
double normest(const SparseMatrixZ& M, int iters = 40);

// MINRES for Hermitian (possibly indefinite) systems A x = b.
SolveStats minres_hermitian(const ApplyFn& A, int n, const VecZ& b, double tol,
                            int max_iter);

// CG on the normal equations for (H - z) x = b with complex shift z; the
// reported residual is measured on the original system.
SolveStats cgnr_shifted(const SparseMatrixZ& H, cd z, const VecZ& b, double tol,
                        int max_iter);

// Chebyshev approximation of s -> 1/sqrt(s) on [a, b], 0 < a < b, for
// applying |H|^{-1} = p(H^2) without a factorization.
struct ChebInvSqrt {
  double a = 0, b = 0;
  std::vector<double> coeff;  // Chebyshev series coefficients
  int degree() const { return static_cast<int>(coeff.size()) - 1; }
  double eval(double s) const;  // Clenshaw on scalars (for error checks)
  // y = p(H^2) x via Clenshaw with matrix argument.
  void apply(const SparseMatrixZ& H, const cd* x, cd* y) const;
};

ChebInvSqrt chebyshev_inv_sqrt(double a, double b, double target_rel_err,
                               int max_degree = 4000);

}  // namespace magdirac
