#include "magdirac/field.hpp"

#include <cmath>

namespace magdirac {

void gauss_legendre_01(int order, std::vector<double>& nodes,
                       std::vector<double>& weights) {
  // Newton iteration on Legendre polynomials, then map [-1,1] -> [0,1].
  nodes.resize(order);
  weights.resize(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= order; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = order * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1 - x * x) * pp * pp);
    nodes[i] = 0.5 * (1 - x);
    nodes[order - 1 - i] = 0.5 * (1 + x);
    weights[i] = 0.5 * w;
    weights[order - 1 - i] = 0.5 * w;
  }
}

double evaluate_field(const FieldSpec& spec, double x1, double x2) {
  if (!std::isfinite(x1) || !std::isfinite(x2))
    throw ConfigError("field evaluation at non-finite point");
  switch (spec.kind) {
    case FieldSpec::Kind::Constant:
      return spec.B0;
    case FieldSpec::Kind::Periodic:
      return spec.amplitude * std::cos(spec.k1 * x1 + spec.k2 * x2);
    case FieldSpec::Kind::RadialPower: {
      double r = std::hypot(x1, x2);
      return spec.c * std::pow(r, spec.p);
    }
    case FieldSpec::Kind::Tabulated: {
      double u = (x1 - spec.x0) / spec.dx;
      double v = (x2 - spec.y0) / spec.dy;
      if (u < 0 || v < 0 || u > spec.nx - 1 || v > spec.ny - 1)
        throw ConfigError("tabulated field evaluated outside table bounds");
      int i = std::min(static_cast<int>(u), spec.nx - 2);
      int j = std::min(static_cast<int>(v), spec.ny - 2);
      if (spec.nx == 1 || spec.ny == 1)
        throw ConfigError("tabulated field needs at least a 2x2 grid");
      double fu = u - i, fv = v - j;
      auto tv = [&](int ix, int iy) { return spec.values[iy * spec.nx + ix]; };
      return (1 - fu) * (1 - fv) * tv(i, j) + fu * (1 - fv) * tv(i + 1, j) +
             (1 - fu) * fv * tv(i, j + 1) + fu * fv * tv(i + 1, j + 1);
    }
  }
  throw ConfigError("unknown field kind");
}

namespace {

double radial_integral(const FieldSpec& spec, double x1, double x2, int order) {
  // int_0^1 s B(s x) ds
  std::vector<double> t, w;
  gauss_legendre_01(order, t, w);
  double s = 0;
  for (int i = 0; i < order; ++i)
    s += w[i] * t[i] * evaluate_field(spec, t[i] * x1, t[i] * x2);
  return s;
}

}  // namespace

std::pair<double, double> GaugeField::at(double x1, double x2) const {
  if (x1 == 0 && x2 == 0) return {0.0, 0.0};
  double I;
  switch (field.kind) {
    case FieldSpec::Kind::Constant:
      I = 0.5 * field.B0;
      break;
    case FieldSpec::Kind::RadialPower:
      // int_0^1 s * c (s|x|)^p ds = c |x|^p / (p + 2)
      I = field.c * std::pow(std::hypot(x1, x2), field.p) / (field.p + 2.0);
      break;
    default: {
      I = radial_integral(field, x1, x2, quadrature_order);
      double I2 = radial_integral(field, x1, x2, 2 * quadrature_order);
      double scale = std::max(1.0, std::abs(I2));
      if (std::abs(I - I2) > doubling_tol * scale)
        throw SolverError("transversal-gauge quadrature did not converge");
      I = I2;
      break;
    }
  }
  return {-x2 * I, x1 * I};
}

GaugeField transversal_gauge(const FieldSpec& spec, int order) {
  GaugeField g;
  g.field = spec;
  g.quadrature_order = order;
  return g;
}

double curl_residual(const GaugeField& gauge, const FieldSpec& spec,
                     const std::vector<Point2>& probes, double h) {
  if (h <= 0) throw ConfigError("curl_residual: step must be positive");
  double worst = 0;
  for (const Point2& pt : probes) {
    double d1a2 =
        (gauge.at(pt.x1 + h, pt.x2).second - gauge.at(pt.x1 - h, pt.x2).second) /
        (2 * h);
    double d2a1 =
        (gauge.at(pt.x1, pt.x2 + h).first - gauge.at(pt.x1, pt.x2 - h).first) /
        (2 * h);
    double b = evaluate_field(spec, pt.x1, pt.x2);
    worst = std::max(worst, std::abs(d1a2 - d2a1 - b));
  }
  return worst;
}

}  // namespace magdirac
