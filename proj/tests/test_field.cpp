#include "doctest.h"
#include "magdirac/field.hpp"

#include <cmath>

using namespace magdirac;

TEST_SUITE_BEGIN("field");

TEST_CASE("field evaluation") {
  FieldSpec c;
  c.kind = FieldSpec::Kind::Constant;
  c.B0 = 1.0;
  CHECK(evaluate_field(c, 3, -7) == 1.0);

  FieldSpec rp;
  rp.kind = FieldSpec::Kind::RadialPower;
  rp.c = 1;
  rp.p = 2;
  CHECK(evaluate_field(rp, 1, 1) == doctest::Approx(2.0).epsilon(1e-14));

  FieldSpec per;
  per.kind = FieldSpec::Kind::Periodic;
  per.amplitude = 1;
  per.k1 = 2 * M_PI;
  per.k2 = 0;
  // analytic: cos(2 pi * 0.25) = 0
  CHECK(std::abs(evaluate_field(per, 0.25, 0)) < 1e-15);
}

TEST_CASE("tabulated field interpolates and rejects out-of-range") {
  FieldSpec t;
  t.kind = FieldSpec::Kind::Tabulated;
  t.x0 = 0;
  t.y0 = 0;
  t.dx = 1;
  t.dy = 1;
  t.nx = 2;
  t.ny = 2;
  t.values = {0, 1, 2, 3};  // B(x,y) = x + 2y on the unit square
  CHECK(evaluate_field(t, 0.5, 0.5) == doctest::Approx(1.5));
  CHECK_THROWS_AS(evaluate_field(t, 3.0, 0.0), ConfigError);
}

TEST_CASE("transversal gauge analytic values") {
  FieldSpec c;
  c.kind = FieldSpec::Kind::Constant;
  c.B0 = 1.0;
  GaugeField g = transversal_gauge(c);
  // int_0^1 s ds = 1/2: a = (-B0 x2 / 2, B0 x1 / 2)
  auto [a1, a2] = g.at(1, 2);
  CHECK(a1 == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(a2 == doctest::Approx(0.5).epsilon(1e-15));

  auto [z1, z2] = g.at(0, 0);
  CHECK(z1 == 0.0);
  CHECK(z2 == 0.0);

  FieldSpec rp;
  rp.kind = FieldSpec::Kind::RadialPower;
  rp.c = 1;
  rp.p = 2;
  GaugeField grp = transversal_gauge(rp);
  // int_0^1 s * s^2 ds = 1/4
  auto [b1, b2] = grp.at(1, 0);
  CHECK(b1 == 0.0);
  CHECK(b2 == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("quadrature matches analytic radial integral for smooth fields") {
  // periodic field: I(x) = int_0^1 s cos(k1 s x1) ds has the closed form
  // (cos(u) + u sin(u) - 1)/u^2 at u = k1 x1
  FieldSpec per;
  per.kind = FieldSpec::Kind::Periodic;
  per.amplitude = 1;
  per.k1 = 1.3;
  per.k2 = 0;
  GaugeField g = transversal_gauge(per);
  double x1 = 2.0, x2 = 0.7;
  double u = per.k1 * x1;
  double I = (std::cos(u) + u * std::sin(u) - 1.0) / (u * u);
  auto [a1, a2] = g.at(x1, x2);
  CHECK(a2 == doctest::Approx(x1 * I).epsilon(1e-12));
  CHECK(a1 == doctest::Approx(-x2 * I).epsilon(1e-12));
}

TEST_CASE("curl residual") {
  std::vector<Point2> probes;
  for (int i = 0; i < 8; ++i)
    probes.push_back({std::cos(2 * M_PI * i / 8.0), std::sin(2 * M_PI * i / 8.0)});

  FieldSpec c;
  c.kind = FieldSpec::Kind::Constant;
  c.B0 = 1.0;
  CHECK(curl_residual(transversal_gauge(c), c, probes, 1e-3) <= 1e-8);

  FieldSpec rp;
  rp.kind = FieldSpec::Kind::RadialPower;
  rp.c = 1;
  rp.p = 2;
  CHECK(curl_residual(transversal_gauge(rp), rp, probes, 1e-3) <= 1e-5);

  // second-order decrease under step halving
  FieldSpec per;
  per.kind = FieldSpec::Kind::Periodic;
  per.amplitude = 1;
  per.k1 = 1.0;
  per.k2 = 0.6;
  GaugeField g = transversal_gauge(per);
  double r1 = curl_residual(g, per, probes, 2e-2);
  double r2 = curl_residual(g, per, probes, 1e-2);
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_SUITE_END();
