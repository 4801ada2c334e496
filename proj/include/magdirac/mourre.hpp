#pragma once

#include "magdirac/operators.hpp"
#include "magdirac/spectra.hpp"

namespace magdirac {

// Explicit lower-bound formula for the projected commutator at energy lambda:
//   inf over mu in sigma_sym, 0 <= mu <= |lambda|, of
//   F(sqrt(lambda^2 - mu^2)) sqrt(lambda^2 - mu^2) / |lambda|,
// +infinity when the set is empty (energies below mu0). Negative lambda is
// the mirrored bound for the sign-flipped commutator.
double mourre_lower_bound(double lambda, const SymmetrizedSpectrum& sym,
                          const SmoothStepF& F);

struct MourreReport {
  double lambda = 0;
  double epsilon = 0;
  double bound_formula = 0;   // worst case over the window, +inf possible
  double measured_inf = 0;    // min eigenvalue of the projected commutator
  int window_dim = 0;
  double t_vs_r_deviation = 0;  // ||E T E - E R E|| on the window
};

// Projects the commutator surrogates onto spectral windows of a dense-capable
// 3-D operator. The eigendecomposition is computed once and shared across
// windows.
class MourreVerifier {
 public:
  MourreVerifier(const SparseMatrixZ& H0, const BuiltTR& tr,
                 int dense_cap = kDefaultDenseCap);

  // sign = +1 checks T on positive-energy windows, -1 checks -T on
  // negative-energy windows.
  MourreReport verify(double lambda, double eps,
                      const SymmetrizedSpectrum& sym_discrete,
                      const SmoothStepF& F, int sign = +1) const;

  // ||E T E - E R E|| on range(E); the window must stay strictly on one side
  // of zero (distance >= eps from 0).
  double rho_t_vs_r(double lambda, double eps) const;

  // min eigenvalue of E S E restricted to range(E) for S in {T, R};
  // +infinity when the projection vanishes.
  double measured_rho_T(double lambda, double eps, int sign = +1) const;
  double measured_rho_R(double lambda, double eps) const;
  int window_dim(double lambda, double eps) const;

  const EighResult& eig() const { return eig_; }
  double hnorm() const { return hnorm_; }

 private:
  Eigen::MatrixXcd window_basis(double lambda, double eps) const;
  const SparseMatrixZ* H0_;
  const BuiltTR* tr_;
  EighResult eig_;
  double hnorm_ = 0;
};

}  // namespace magdirac
