#pragma once

#include "phasefield.hpp"

namespace vesicle {

// Captured from the initial phase field; the relaxation terms drive V(phi)
// and A(phi) back to these each step.
struct ConservationTargets {
  double volume = 0.0;
  double area = 0.0;
};

// Solves the 2x2 system for (lambda_volume, lambda_global):
//   lambda_v |Omega| + lambda_g int f   = int g + (V0 - V)/(2 tau)
//   lambda_v int f   + lambda_g int f^2 = int ((1/eta) v.grad phi + g) f - (A0 - A)/(2 tau)
// with all fields at time n+1 (relaxation signs chosen so both constraint
// errors contract; see the implementation note). Raises the documented error
// when f is numerically constant (zero determinant); a vanishing f (empty
// domain) is handled by dropping the area row.
GlobalMultipliers solve_multipliers(const PhaseState& phase, const VectorField& v,
                                    const ConservationTargets& targets, const PhaseParams& params,
                                    double tau);

}  // namespace vesicle
