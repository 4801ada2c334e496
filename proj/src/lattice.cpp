#include "magdirac/lattice.hpp"

#include <cmath>

namespace magdirac {

void LatticeSpec::validate() const {
  if (dims != 2 && dims != 3) throw ConfigError("lattice dims must be 2 or 3");
  for (int j = 0; j < dims; ++j) {
    if (points[j] < 4) throw ConfigError("lattice needs at least 4 points per axis");
    if (extents[j] <= 0) throw ConfigError("lattice extents must be positive");
  }
  if (spinor_comps != 2 && spinor_comps != 4)
    throw ConfigError("spinor_comps must be 2 or 4");
}

void LatticeSpec::validate_flux(const FieldSpec& field) const {
  if (boundary != Boundary::MagneticPeriodic) return;
  if (!field.is_constant())
    throw ConfigError("magnetic-periodic boundary requires a constant field");
  double target = 2 * M_PI * flux_quanta;
  double flux = field.B0 * extents[0] * extents[1];
  if (std::abs(flux - target) > 1e-9 * std::max(1.0, std::abs(target)))
    throw ConfigError("flux quantization violated: B0*L1*L2 != 2*pi*quanta");
}

LatticeSpec make_lattice2(double L1, double L2, int N1, int N2, Boundary b,
                          int flux_quanta, int spinor_comps) {
  LatticeSpec lat;
  lat.dims = 2;
  lat.extents = {L1, L2, 0};
  lat.points = {N1, N2, 0};
  lat.boundary = b;
  lat.flux_quanta = flux_quanta;
  lat.spinor_comps = spinor_comps;
  lat.validate();
  return lat;
}

LatticeSpec make_lattice3(double L1, double L2, double L3, int N1, int N2,
                          int N3, Boundary b, int flux_quanta) {
  LatticeSpec lat;
  lat.dims = 3;
  lat.extents = {L1, L2, L3};
  lat.points = {N1, N2, N3};
  lat.boundary = b;
  lat.flux_quanta = flux_quanta;
  lat.spinor_comps = 4;
  lat.validate();
  return lat;
}

std::vector<double> fourier_xi(const LatticeSpec& lat3) {
  const int n = lat3.n3();
  const double L = lat3.extents[2];
  std::vector<double> xi(n);
  for (int k = 0; k < n; ++k) {
    int kk = (k <= (n - 1) / 2) ? k : k - n;
    xi[k] = 2 * M_PI * kk / L;
  }
  return xi;
}

}  // namespace magdirac
