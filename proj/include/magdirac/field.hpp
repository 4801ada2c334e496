#pragma once

#include <vector>

#include "magdirac/core.hpp"

namespace magdirac {

// Magnetic field profile B(x1, x2) along the third axis.
struct FieldSpec {
  enum class Kind { Constant, Periodic, RadialPower, Tabulated };
  Kind kind = Kind::Constant;
  double B0 = 0;                  // constant
  double amplitude = 0, k1 = 0, k2 = 0;  // periodic: amp * cos(k . x)
  double c = 0, p = 0;            // radial power: c * |x|^p, p >= 0
  // tabulated: complete rectangular grid, bilinear interpolation
  double x0 = 0, y0 = 0, dx = 1, dy = 1;
  int nx = 0, ny = 0;
  std::vector<double> values;  // row-major [iy * nx + ix]

  bool is_constant() const { return kind == Kind::Constant; }
};

double evaluate_field(const FieldSpec& spec, double x1, double x2);

// Vector potential in the transversal gauge:
//   a1(x) = -x2 * I(x),  a2(x) = +x1 * I(x),  I(x) = int_0^1 s B(s x) ds,
// evaluated by fixed-order Gauss-Legendre quadrature with a doubling check
// (analytic short-circuits for constant and radial-power fields).
struct GaugeField {
  FieldSpec field;
  int quadrature_order = 32;
  double doubling_tol = 1e-10;

  // returns (a1, a2) at the point
  std::pair<double, double> at(double x1, double x2) const;
};

GaugeField transversal_gauge(const FieldSpec& spec, int order = 32);

struct Point2 {
  double x1, x2;
};

// max over probes of |d1 a2 - d2 a1 - B| with central differences of step h.
double curl_residual(const GaugeField& gauge, const FieldSpec& spec,
                     const std::vector<Point2>& probes, double h);

// Gauss-Legendre nodes/weights on [0,1].
void gauss_legendre_01(int order, std::vector<double>& nodes,
                       std::vector<double>& weights);

}  // namespace magdirac
