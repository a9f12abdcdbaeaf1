#pragma once

#include <utility>
#include <vector>

#include "assembly.hpp"
#include "phasefield.hpp"
#include "solver.hpp"

namespace vesicle {

enum class ModelVariant { A, B, C };

struct FlowParams {
  double re = 1.0;           // Reynolds number
  double visc_ratio = 10.0;  // nu_inside / nu_outside
  double dens_ratio = 1.0;   // rho_inside / rho_outside
  double xi = 1.0;           // extension regularization, > 0
  double zeta = 0.0;         // Hooke relaxation rate (Model C), typically 1/tau
  double shear_speed = 10.0; // wall speed magnitude (+x on top, -x on bottom)
};

// P2 velocity, P1 pressure, P2 local tension multiplier (identically zero for
// Model A). Wall values are imposed strongly on top/bottom.
struct FlowState {
  VectorField v;
  ScalarField p;
  ScalarField lambda_local;
};

FlowState make_initial_flow(const Mesh& mesh, const FlowParams& params);

// Affine phase interpolation of density and viscosity, floored at
// 0.01 * min(1, ratio) against overshoot of phi beyond [-1, 1].
std::pair<double, double> material_properties(double phi_value, const FlowParams& params);

// Hooke relaxation source zeta * (c-1)/c * delta_eps, with c clamped at 1e-3.
double hooke_rhs(double c_value, const InterfaceGeometry& geom, double zeta);

inline constexpr double kStretchFloor = 1e-3;

// One implicitly coupled solve of momentum + continuity (+ the inextensibility
// multiplier equation for Models B/C), all phase-dependent coefficients lagged
// to time n. Dirichlet walls top/bottom, do-nothing left/right (with the
// transpose-part boundary correction so a plain shear profile is an exact
// steady state), homogeneous Neumann for lambda.
class FlowSolver {
 public:
  FlowSolver(const Mesh& mesh, ModelVariant variant, FlowParams params, PhaseParams phase_params,
             SolverConfig solver_cfg = {});

  struct System {
    const SparseMatrix* matrix;
    const std::vector<double>* rhs;
  };

  // Assembles the coupled system without solving (testing hook; solve() uses
  // the same path).
  System assemble(const FlowState& prev, const PhaseState& phase, const ScalarField& c,
                  const GlobalMultipliers& multipliers, double tau);

  FlowState solve(const FlowState& prev, const PhaseState& phase, const ScalarField& c,
                  const GlobalMultipliers& multipliers, double tau, SolveReport* report = nullptr);

  // max_a | int L_a div(v) | over all P1 test functions (discrete continuity).
  double continuity_residual(const FlowState& state) const;

  ModelVariant variant() const { return variant_; }
  int dof_count() const { return total_dofs_; }

 private:
  void detect_pinning(const PhaseState& phase);

  const Mesh* mesh_;
  ModelVariant variant_;
  FlowParams params_;
  PhaseParams phase_params_;
  DofMap p2_, p1_;
  int off_vx_ = 0, off_vy_ = 0, off_p_ = 0, off_lam_ = 0, total_dofs_ = 0;
  bool has_lambda_ = false;
  int pin_lambda_ = -1;  // -1 undecided, 0 no, 1 pin the whole block
  std::vector<double> rhs_;
  PatternCache pattern_;
  LuSolver lu_;
  long clamp_warn_count_ = 0;

  // Left/right boundary edges for the do-nothing correction term.
  struct BoundaryEdge {
    int tri;
    double normal_x;
    Vec2 ref_a, ref_b;  // reference coordinates of the edge endpoints
    double length;
  };
  std::vector<BoundaryEdge> open_edges_;
};

}  // namespace vesicle
