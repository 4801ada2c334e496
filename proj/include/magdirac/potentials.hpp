#pragma once

#include <array>

#include "magdirac/operators.hpp"
#include "magdirac/spectra.hpp"

namespace magdirac {

using Vec3 = std::array<double, 3>;

// One term of the regular (or locally-bounded) part: scalar profile times a
// constant Hermitian 4x4 matrix.
struct ProfileTerm {
  enum class Kind { Constant, Yukawa, PowerX3, PowerR, Gaussian };
  Kind kind = Kind::Constant;
  double A = 0;    // amplitude
  double par = 1;  // decay constant / exponent / width
  Mat4 mat = Mat4::Identity();

  double profile(const Vec3& x) const;
  double profile_dx3(const Vec3& x) const;  // analytic x3-derivative
};

// Smooth compactly supported cutoff: 1 on |x| <= r0, 0 on |x| >= r1.
struct CutoffChi {
  double r0 = 1.0, r1 = 2.0;
  double eval(const Vec3& x) const;
};

struct PotentialSpec {
  std::vector<ProfileTerm> regular_terms;
  std::vector<ProfileTerm> vloc_terms;  // inside the cutoff
  std::vector<Vec3> centers;
  double nu = 0;  // shared coupling, strictly below 1
  Mat4 coulomb_matrix = -Mat4::Identity();
  CutoffChi chi;

  void validate() const;
  bool has_singular() const { return !centers.empty() && nu != 0; }
};

// V(x) = regular(x) + chi(x) [ vloc(x) + sum_a coulomb_matrix * nu / |x - a| ].
Mat4 sample_potential(const PotentialSpec& spec, const Vec3& x);
Mat4 sample_regular(const PotentialSpec& spec, const Vec3& x);
Mat4 sample_singular(const PotentialSpec& spec, const Vec3& x);

struct DecayReport {
  std::vector<std::pair<double, double>> shell_sup_norms;  // (r, sup)
  std::vector<std::pair<double, double>> short_range_partial;  // (R, integral)
  std::vector<std::pair<double, double>> long_range_partial;
  double fitted_exponent = 0;
  bool small_at_infinity = false;
  bool short_range = false;
  bool long_range = false;
};

// Numerical decay classification of the regular part by shell/slab sampling
// (documented under-estimate of the sup norms).
DecayReport classify_decay(const PotentialSpec& spec,
                           const std::vector<double>& radii,
                           const SmoothStepF& F, int angular_samples = 64,
                           int radial_samples = 32);

// max over sample points of ||V_coulomb(x)|| - sum_a nu/|x-a| (<= 0 required).
double coulomb_bound_verify(const PotentialSpec& spec,
                            const std::vector<Vec3>& samples);

// H = H0 + diag-sampled V on the lattice sites.
SparseMatrixZ build_perturbed_h(const SparseMatrixZ& H0, const PotentialSpec& spec,
                                const LatticeSpec& lat3);

// Sample points on the lattice (all sites) for the bound verification.
std::vector<Vec3> lattice_sample_points(const LatticeSpec& lat3, int stride = 1);

struct LocalizationDecay {
  std::vector<std::pair<double, double>> norms;  // (r, ||theta(|Q|/r)(Rt - R)||)
  double fitted_exponent = 0;
  bool short_range_like = false;
};

// Decay of the resolvent difference of two operators that agree outside a
// compact region, measured with the radial cutoff theta(t) = F(2t - 1).
LocalizationDecay resolvent_localization_decay(
    const SparseMatrixZ& H_reg, const SparseMatrixZ& H, cd z,
    const std::vector<double>& radii, const SmoothStepF& F,
    const LatticeSpec& lat3, int dense_cap = kDefaultDenseCap);

// Log-log least-squares slope of (r, value) pairs, ignoring zero values.
double fit_power_law(const std::vector<std::pair<double, double>>& pts);

}  // namespace magdirac
