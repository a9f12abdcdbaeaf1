#pragma once

#include <utility>

#include "assembly.hpp"
#include "fields.hpp"
#include "solver.hpp"

namespace vesicle {

struct PhaseParams {
  double eps = 0.03;    // interface thickness
  double h0 = 0.0;      // spontaneous curvature
  double eta = 0.1;     // phase-field mobility
  double re_be = 20.0;  // Re * Be
};

// Phase field and its bending-force chain. After init or a transport solve the
// discrete relations between the four fields hold to solver tolerance.
struct PhaseState {
  ScalarField phi, f_c, f, g;
};

struct GlobalMultipliers {
  double lambda_global = 0.0;
  double lambda_volume = 0.0;
};

// Signed distance from (px, py) to the axis-aligned ellipse x^2/a^2 + y^2/b^2
// = 1 centered at the origin; negative inside. Safeguarded Newton on the
// closest-point root equation, at most 50 iterations.
double ellipse_signed_distance(double a, double b, double px, double py);

// phi = tanh(-d / (sqrt(2) eps)) with d the signed ellipse distance, followed
// by one evaluation of the bending chain.
PhaseState init_ellipse(const Mesh& mesh, const PhaseParams& params, const Vec2& center,
                        const Vec2& semi_axes);

// Recomputes (f_c, f, g) from phi via weak mass solves:
//   f_c = eps lap(phi) - (1/eps)(phi^2-1)(phi+H0)
//   f   = eps lap(phi) - (1/eps)(phi^2-1) phi
//   g   = (1/(Re Be)) (lap(f_c) - (1/eps^2)(3 phi_lag^2 + 2 H0 phi_lag - 1) f_c)
void bending_chain(PhaseState& state, const PhaseParams& params, const ScalarField& phi_lag,
                   SolverConfig solver_cfg = {});

// V(phi) = int 1/2 (phi+1), A(phi) = int eps/2 |grad phi|^2 + 1/(4 eps)(phi^2-1)^2.
std::pair<double, double> volume_area(const ScalarField& phi, const PhaseParams& params);

// Backward-Euler solve of the coupled (phi, f_c, f, g) system
//   d_t phi + v . grad phi = -eta (g - lambda_global f - lambda_volume)
// (the volume-multiplier sign is the one consistent with the 2x2 constraint
// system: it makes d/dt V(phi) = eta/(4 tau) (V0 - V), a contraction).
// Cubic terms are linearized about the previous phi. f and g enter only
// through mass-matrix products, so they
// are eliminated exactly: one sparse solve for (phi, f_c) per step, then two
// back-solves with the constant (pre-factorized) mass matrix recover f and g.
class PhaseSolver {
 public:
  PhaseSolver(const Mesh& mesh, PhaseParams params, SolverConfig solver_cfg = {});

  void advance(PhaseState& state, const VectorField& v, const GlobalMultipliers& multipliers,
               double tau, SolveReport* report = nullptr);

  const PhaseParams& params() const { return params_; }

 private:
  const Mesh* mesh_;
  PhaseParams params_;
  DofMap dofs_;
  PatternCache pattern_;
  LuSolver lu_;
  PatternCache mass_pattern_;
  LuSolver mass_lu_;
  bool mass_ready_ = false;
};

}  // namespace vesicle
