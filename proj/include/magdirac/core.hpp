#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace magdirac {

using cd = std::complex<double>;
using VecZ = std::vector<cd>;

inline constexpr const char* kVersion = "magdirac 0.1.0";
inline constexpr int kDefaultDenseCap = 6000;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Error categories map to CLI exit codes (config=2, solver=3, hypothesis=4).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct HypothesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double norm2(const VecZ& v) {
  double s = 0;
  for (const cd& z : v) s += std::norm(z);
  return std::sqrt(s);
}

inline cd dot(const VecZ& a, const VecZ& b) {
  cd s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline void axpy(cd alpha, const VecZ& x, VecZ& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(VecZ& v, cd alpha) {
  for (cd& z : v) z *= alpha;
}

// Deterministic unit-norm random vector (all randomized paths take a seed).
inline VecZ random_unit_vector(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  VecZ v(n);
  for (cd& z : v) z = cd(dist(gen), dist(gen));
  double nv = norm2(v);
  if (nv == 0) throw SolverError("random vector degenerated to zero");
  scale(v, cd(1.0 / nv, 0.0));
  return v;
}

// FNV-1a, used to stamp output files with a config fingerprint.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace magdirac
