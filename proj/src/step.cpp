#include "magdirac/step.hpp"

#include <cmath>

#include "magdirac/field.hpp"

namespace magdirac {

namespace {

double bump(double t) {
  if (t <= 0 || t >= 1) return 0.0;
  return std::exp(-1.0 / (t * (1.0 - t)));
}

// int_0^x bump, 64-point Gauss-Legendre (integrand is C-infinity and flat at
// both endpoints; the quadrature is exact to machine precision here).
double bump_integral(double x) {
  static std::vector<double> nodes, weights;
  if (nodes.empty()) gauss_legendre_01(64, nodes, weights);
  if (x <= 0) return 0.0;
  if (x > 1) x = 1;
  double s = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    s += weights[i] * x * bump(nodes[i] * x);
  return s;
}

double bump_norm() {
  static const double n = bump_integral(1.0);
  return n;
}

constexpr double kHardWidth = 1e-6;

}  // namespace

double SmoothStepF::eval(double x) const {
  if (x <= 0) return 0.0;
  if (kind == Kind::HardStep) return x >= kHardWidth ? 1.0 : x / kHardWidth;
  if (x >= 1) return 1.0;
  return bump_integral(x) / bump_norm();
}

double SmoothStepF::deriv(double x) const {
  if (kind == Kind::HardStep)
    return (x > 0 && x < kHardWidth) ? 1.0 / kHardWidth : 0.0;
  return bump(x) / bump_norm();
}

}  // namespace magdirac
