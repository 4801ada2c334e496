#pragma once

#include <functional>
#include <optional>

#include "magdirac/dense.hpp"
#include "magdirac/lattice.hpp"
#include "magdirac/solvers.hpp"
#include "magdirac/spinor.hpp"
#include "magdirac/step.hpp"

namespace magdirac {

// Gauge-covariant momentum -i d_j - a_j as a scalar (spinor-free) lattice
// operator: symmetric difference with Peierls link phases. Dirichlet drops
// hops across the box edge; magnetic-periodic uses Landau-gauge link phases
// with the magnetic-translation twist at the x1 seam (requires quantized
// flux).
SparseMatrixZ build_pi(const LatticeSpec& lat, const GaugeField& gauge, int axis);

// Covariant Wilson operator W = sum_j (1/h_j)(1 - (hop_j + hop_j^dag)/2).
SparseMatrixZ build_wilson(const LatticeSpec& lat, const GaugeField& gauge);

// 2-component internal operator sigma1 Pi1 + sigma2 Pi2 + sigma3 (m + r W).
SparseMatrixZ build_internal_h(const LatticeSpec& lat, const GaugeField& gauge,
                               double m, double wilson_r);

// 4-component zero-fiber operator alpha1 Pi1 + alpha2 Pi2 + beta (m + r W).
SparseMatrixZ build_internal_h4(const LatticeSpec& lat, const GaugeField& gauge,
                                double m, double wilson_r);

// Spinor matrix acting identically on every site (and x3 plane if n3 > 1).
SparseMatrixZ spinor_op(const LatticeSpec& lat, const Eigen::MatrixXcd& S);

// H00 + xi * alpha3 on the 4-component transverse lattice.
SparseMatrixZ build_fiber_h(const SparseMatrixZ& H00, double xi);

// Exact spectral derivative along the periodic x3 axis, and functions of it.
Eigen::MatrixXcd p3_matrix(const LatticeSpec& lat3);
Eigen::MatrixXcd function_of_p3(const LatticeSpec& lat3,
                                const std::function<double(double)>& fn);

// 3-D operator H00 (x) 1 + alpha3 (x) P3. Throws when the assembled
// nonzero count would exceed nnz_budget.
SparseMatrixZ build_h0_3d(const LatticeSpec& lat3, const GaugeField& gauge,
                          double m, double wilson_r,
                          std::size_t nnz_budget = 80'000'000);

// Multiplication by F(xi_k) in the Fourier basis along x3 (plain step:
// annihilates non-positive momentum modes).
SparseMatrixZ build_f_of_p3(const LatticeSpec& lat3, const SmoothStepF& F);

// Centered sawtooth coordinate x3 as a diagonal operator.
SparseMatrixZ build_q3(const LatticeSpec& lat3);

// Conjugate generator (Q3 G(P3) + G(P3) Q3)/2 with G the odd extension of F.
SparseMatrixZ build_a_conjugate(const LatticeSpec& lat3, const SmoothStepF& F);

// T = alpha3 G(P3) and R = G(P3) P3 |H0|^{-1} with G the odd extension of F.
// R is dense (from the eigendecomposition of H0) below dense_cap and
// matrix-free (Chebyshev approximation of the inverse square root of H0^2)
// above it.
struct BuiltTR {
  SparseMatrixZ T;
  bool dense_path = true;
  Eigen::MatrixXcd R_dense;
  // Chebyshev path pieces
  SparseMatrixZ G;  // G(P3) P3 as a sparse operator
  ChebInvSqrt cheb;
  const SparseMatrixZ* H0 = nullptr;
  double mu0 = 0, hnorm = 0;
  int dim = 0;

  void apply_R(const cd* x, cd* y) const;
};

BuiltTR build_t_r(const LatticeSpec& lat3, const SparseMatrixZ& H0,
                  const SmoothStepF& F, int dense_cap = kDefaultDenseCap,
                  const EighResult* h0_eig = nullptr);

// Residuals of the resolvent/conjugate commutator identities on a test set:
//  lemma_g     : H0^{-1} g(Q3) - g(Q3) H0^{-1} - i H0^{-1} alpha3 g'(Q3) H0^{-1}
//  inverse_comm: i[H0^{-1}, A] + H0^{-1} alpha3 G(P3) H0^{-1}
//  h0_comm     : i[H0, A] - alpha3 G(P3)
// Each entry is max over test vectors of ||LHS psi - RHS psi|| / ||psi||.
struct CommutatorReport {
  double lemma_g = 0;
  double inverse_comm = 0;
  double h0_comm = 0;
};

CommutatorReport commutator_residuals(const LatticeSpec& lat3,
                                      const SparseMatrixZ& H0,
                                      const SparseMatrixZ& A,
                                      const SmoothStepF& F,
                                      const std::function<double(double)>& g,
                                      const std::function<double(double)>& gp,
                                      const std::vector<VecZ>& test_set);

// Deterministic test vectors: random transverse profile times a Gaussian in
// x3 of the given physical width, truncated to the middle third of the box.
std::vector<VecZ> seam_avoiding_vectors(const LatticeSpec& lat3, int count,
                                        double width, std::uint64_t seed);

}  // namespace magdirac
