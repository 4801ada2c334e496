#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>

#include "magdirac/sparse.hpp"

namespace magdirac {

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

// The 4x4 Dirac-Pauli matrices in the standard representation together with
// the 2x2 Pauli matrices. All entries are exact (0, +-1, +-i), so the Clifford
// relations hold with zero floating-point residual.
struct DiracMatrixSet {
  Mat4 alpha1, alpha2, alpha3, beta;
  Mat2 sigma1, sigma2, sigma3;
  std::string representation_name;

  const Mat4& alpha(int j) const;  // j = 0 is beta
  // max entry of {alpha_i, alpha_j} - 2 delta_ij I over all pairs.
  double clifford_residual() const;
  double pauli_residual() const;
};

DiracMatrixSet dirac_matrices();

// Splits the 4-component zero-momentum operator into its two 2x2-block
// constituents via the spinor permutation (1,4,2,3): components {1,4} carry
// [[M, Pi-],[Pi+, -M]] and components {2,3} carry [[M, Pi+],[Pi-, -M]].
struct BlockDecomposition {
  SparseMatrixZ K;       // block on spinor pair {1,4}
  SparseMatrixZ Ktilde;  // block on spinor pair {2,3}
  std::array<int, 4> perm{0, 3, 1, 2};
};

BlockDecomposition block_decompose_internal(const SparseMatrixZ& H00);

// Inverse of block_decompose_internal, for the exactness check.
SparseMatrixZ reassemble_internal(const BlockDecomposition& d);

}  // namespace magdirac
