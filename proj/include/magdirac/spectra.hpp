#pragma once

#include <optional>
#include <string>

#include "magdirac/dense.hpp"
#include "magdirac/sparse.hpp"

namespace magdirac {

enum class EigMethod { Dense, Lanczos, ShiftInvert };

// Scale-aware clustering tolerance for degeneracy detection.
inline double cluster_tolerance(double matrix_norm) {
  return std::max(1e-8, 1e-6 * matrix_norm);
}

struct SpectrumResult {
  std::vector<double> values;          // clustered, strictly increasing
  std::vector<int> multiplicities;     // per cluster
  std::vector<double> raw_values;      // every pair, ascending
  std::vector<double> residual_norms;  // ||Hv - lambda v|| per pair
  EigMethod method = EigMethod::Dense;
  double cluster_tol = 0;
  bool count_certified = false;  // inertia cross-check (windowed solves)

  double max_residual() const {
    double m = 0;
    for (double r : residual_norms) m = std::max(m, r);
    return m;
  }
};

// Full spectrum (LAPACK) with eigenvectors; throws above the dense cap.
EighResult eig_dense_full(const SparseMatrixZ& M, int dense_cap = kDefaultDenseCap,
                          bool vectors = true);
SpectrumResult eig_dense(const SparseMatrixZ& M, int dense_cap = kDefaultDenseCap);
SpectrumResult spectrum_from_pairs(const SparseMatrixZ& M,
                                   const std::vector<double>& w,
                                   const Eigen::MatrixXcd& V, EigMethod method,
                                   double tol = 0);

struct WindowOptions {
  int dense_cap = kDefaultDenseCap;  // certification uses inertia below this
  int max_basis = 300;               // Lanczos basis per restart
  int max_restarts = 6;
  double residual_tol = 1e-8;  // relative to ||M||
  std::uint64_t seed = 0xC0FFEEull;
};

// All eigenvalues in (lo, hi) by shift-invert Lanczos at the midpoint with
// deflated restarts; the count is certified against Bunch-Kaufman inertia
// when the dimension admits a dense factorization. Eigenvectors are returned
// on request (columns ordered by eigenvalue).
SpectrumResult eig_window(const SparseMatrixZ& M, double lo, double hi,
                          int max_count, const WindowOptions& opts = {},
                          Eigen::MatrixXcd* vectors_out = nullptr);

struct SymmetrizedSpectrum {
  std::vector<double> values;  // sorted union of sigma and -sigma, clustered
  double mu0 = 0;
  double resolution = 0;
  std::string source;
};

SymmetrizedSpectrum symmetrize(const SpectrumResult& spec, double tol);
SymmetrizedSpectrum symmetrize_values(const std::vector<double>& vals, double tol,
                                      const std::string& source);

struct GapList {
  std::vector<std::pair<double, double>> intervals;
  double resolution = 0;
};

GapList find_gaps(const SymmetrizedSpectrum& sym, std::pair<double, double> range,
                  double min_width);

// Essential-spectrum prediction for the 3-D operator, plus the fiber
// dispersion law (e, xi) -> +-sqrt(e^2 + xi^2).
struct SigmaSet3D {
  double mu0 = 0;
  bool full_line = false;
  std::pair<double, double> branch(double e, double xi) const {
    double r = std::sqrt(e * e + xi * xi);
    return {-r, r};
  }
};

SigmaSet3D assemble_sigma_3d(const SymmetrizedSpectrum& sym);

}  // namespace magdirac
