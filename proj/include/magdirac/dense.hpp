#pragma once

#include <Eigen/Dense>

#include "magdirac/core.hpp"

namespace magdirac {

struct EighResult {
  std::vector<double> w;  // ascending
  Eigen::MatrixXcd V;     // columns are eigenvectors (empty if not requested)
};

// Full Hermitian eigendecomposition (LAPACK divide & conquer).
EighResult eigh_dense(const Eigen::MatrixXcd& A, bool vectors = true);

// Solves A x = b for general complex A (LU with partial pivoting). A is
// copied; multiple right-hand sides as columns.
Eigen::MatrixXcd solve_dense(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& b);

// Number of eigenvalues of Hermitian A strictly below sigma, from the inertia
// of the Bunch-Kaufman factorization of A - sigma*I.
int inertia_below(const Eigen::MatrixXcd& A, double sigma);

// Spectral norm by power iteration on A^dag A (deterministic start vector).
double spectral_norm_dense(const Eigen::MatrixXcd& A, int iters = 60);

}  // namespace magdirac
