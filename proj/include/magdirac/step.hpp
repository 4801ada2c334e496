#pragma once

#include "magdirac/core.hpp"

namespace magdirac {

// Non-decreasing switch function: 0 on (-inf, 0], 1 on [1, inf).
// bump_integral is the normalized integral of exp(-1/(t(1-t))) (C-infinity);
// hard_step is the indicator of (0, inf) regularized over width 1e-6.
//
// signed_eval is the odd extension F(x) - F(-x). The conjugate-operator
// construction uses the odd extension so that the projected commutator is
// strictly positive on both momentum directions; the plain step enters the
// positive-momentum projector F(P3).
struct SmoothStepF {
  enum class Kind { BumpIntegral, HardStep };
  Kind kind = Kind::BumpIntegral;

  double eval(double x) const;
  double deriv(double x) const;
  double signed_eval(double x) const { return eval(x) - eval(-x); }
};

}  // namespace magdirac
