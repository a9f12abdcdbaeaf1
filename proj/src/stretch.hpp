#pragma once

#include "assembly.hpp"
#include "fields.hpp"
#include "solver.hpp"

namespace vesicle {

// Stretching concentration, initialized to 1; c > 1 marks compression and
// c < 1 stretching. Dirichlet c = 1 on the whole boundary.
struct StretchState {
  ScalarField c;
  double theta = 0.01;  // surface diffusion coefficient
};

StretchState make_initial_stretch(const Mesh& mesh, double theta);

// Backward-Euler solve of
//   d_t c + v . grad c + c P : grad v = theta div(P grad c)
// with P built from the given phase field and v the end-of-step velocity.
class StretchSolver {
 public:
  StretchSolver(const Mesh& mesh, double theta, SolverConfig solver_cfg = {});

  void advance(StretchState& state, const VectorField& v, const ScalarField& phi, double tau,
               SolveReport* report = nullptr);

 private:
  const Mesh* mesh_;
  double theta_;
  DofMap dofs_;
  PatternCache pattern_;
  LuSolver lu_;
  long warn_count_ = 0;
};

}  // namespace vesicle
