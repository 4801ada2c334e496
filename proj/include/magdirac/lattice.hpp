#pragma once

#include <array>

#include "magdirac/field.hpp"

namespace magdirac {

enum class Boundary { MagneticPeriodic, Dirichlet };

// Uniform lattice covering a centered box. Sites sit at half-integer offsets,
//   x_j(n) = (n + 1/2) h_j - L_j / 2,
// so the origin (and any grid-aligned perturbation center) is never a site.
// The third axis is always periodic.
struct LatticeSpec {
  int dims = 2;  // 2 or 3
  std::array<double, 3> extents{0, 0, 0};
  std::array<int, 3> points{0, 0, 0};
  Boundary boundary = Boundary::Dirichlet;
  int flux_quanta = 0;  // magnetic-periodic only
  int spinor_comps = 2;

  double h(int j) const { return extents[j] / points[j]; }
  double coord(int j, int n) const {
    return (n + 0.5) * h(j) - 0.5 * extents[j];
  }
  int n12() const { return points[0] * points[1]; }
  int n3() const { return dims == 3 ? points[2] : 1; }
  int site(int n1, int n2) const { return n1 * points[1] + n2; }

  void validate() const;
  // flux quantization B0 L1 L2 = 2 pi * flux_quanta (magnetic-periodic only)
  void validate_flux(const FieldSpec& field) const;

  LatticeSpec transverse() const {  // 2-D restriction of a 3-D lattice
    LatticeSpec t = *this;
    t.dims = 2;
    return t;
  }
};

LatticeSpec make_lattice2(double L1, double L2, int N1, int N2, Boundary b,
                          int flux_quanta = 0, int spinor_comps = 2);
LatticeSpec make_lattice3(double L1, double L2, double L3, int N1, int N2,
                          int N3, Boundary b, int flux_quanta = 0);

// Fourier frequencies 2*pi*k/L3 in FFT ordering (k = 0..N/2-1, -N/2..-1).
std::vector<double> fourier_xi(const LatticeSpec& lat3);

}  // namespace magdirac
