#pragma once

#include <functional>

#include "magdirac/operators.hpp"
#include "magdirac/spectra.hpp"

namespace magdirac {

enum class ScanSign { Upper, Lower };  // +i eps / -i eps
enum class ScanVerdict { Convergent, Divergent, Inconclusive };
enum class X3Profile { GaussianX3, PolynomialX3 };

// Normalized state with finite <x3>^s-weighted norm: an x3 profile decaying
// at least like <x3>^{-s-1} times a transverse internal eigenvector (mode
// index >= 0 into the transverse spectrum) or a centered Gaussian (mode -1).
struct WeightedVector {
  VecZ psi;
  double weighted_norm = 0;  // || <Q3>^s psi ||
};

WeightedVector weighted_vector(const LatticeSpec& lat3, double s,
                               X3Profile profile, int transverse_mode,
                               const SparseMatrixZ* H00,
                               std::uint64_t seed = 0x5EEDull);

struct ResolventSolve {
  VecZ x;
  double rel_residual = 0;
  int iterations = 0;
  std::string method;
};

// Solves (H - z) x = psi to relative residual <= 1e-8: spectral solve when an
// eigendecomposition is supplied, dense LU below the cap, iterative
// normal-equations CG above it.
ResolventSolve resolvent_apply(const SparseMatrixZ& H, cd z, const VecZ& psi,
                               int dense_cap = kDefaultDenseCap,
                               const EighResult* eig = nullptr);

struct LapScanResult {
  double lambda = 0;
  ScanSign sign = ScanSign::Upper;
  std::vector<double> epsilons;
  VecZ values;  // <psi, (H - lambda -+ i eps)^{-1} psi>
  std::vector<double> diffs;
  ScanVerdict verdict = ScanVerdict::Inconclusive;
  cd extrapolated_limit = 0;
  std::vector<double> solver_residuals;
  bool imag_sign_ok = true;
};

// Mean spacing of the provided eigenvalues within +-halfwidth of lambda;
// zero when fewer than two lie there (resolvent smooth off the spectrum).
double local_level_spacing(const std::vector<double>& eigs, double lambda,
                           double halfwidth);

// Geometric epsilon ladder eps0 * 2^{-k}. Fails when eps0 sits below five
// local mean level spacings (finite-volume validity floor).
LapScanResult lap_scan(const SparseMatrixZ& H, double lambda, const VecZ& psi,
                       double eps0, int levels, ScanSign sign,
                       const std::vector<double>& spectrum_hint,
                       int dense_cap = kDefaultDenseCap,
                       const EighResult* eig = nullptr);

struct GapEigenvalue {
  double value = 0;      // finest-level position
  int multiplicity = 1;
  double movement = 0;   // against the previous level
  bool stable = false;
};

struct GapEigReport {
  std::vector<GapEigenvalue> eigenvalues;
  std::vector<std::vector<double>> per_level;  // clustered values per level
  bool count_stable = false;
  double trend = 0;  // discretization scale used for the stability flag
};

// Tracks point spectrum inside a gap across lattice refinements. The trend
// parameter sets the allowed movement scale (10x trend); pairing is by
// nearest match between consecutive levels.
GapEigReport gap_eigenvalues(const std::vector<const SparseMatrixZ*>& levels,
                             std::pair<double, double> gap, double trend,
                             const WindowOptions& opts = {});

}  // namespace magdirac
