#include "stretch.hpp"

#include <cmath>

#include "common.hpp"
#include "flow.hpp"

namespace vesicle {

StretchState make_initial_stretch(const Mesh& mesh, double theta) {
  StretchState state;
  state.c = ScalarField(mesh, Space::P2, 1.0);
  state.theta = theta;
  return state;
}

StretchSolver::StretchSolver(const Mesh& mesh, double theta, SolverConfig solver_cfg)
    : mesh_(&mesh), theta_(theta), dofs_(mesh, Space::P2), lu_(solver_cfg) {}

void StretchSolver::advance(StretchState& state, const VectorField& v, const ScalarField& phi,
                            double tau, SolveReport* report) {
  const Mesh& mesh = *mesh_;
  const QuadBasis& qb = QuadBasis::degree5();
  const int n = dofs_.count;
  const double inv_tau = 1.0 / tau;

  std::vector<double> rhs(n, 0.0);
  const auto emit = [&](auto&& add) {
    for (int i = 0; i < n; ++i) {
      if (mesh.node_tags[i] != Boundary::Interior) {
        add(i, i, 1.0);
        rhs[i] = 1.0;
      }
    }

    TriQuadData td;
    double c_local[6], phi_local[6], vx_local[6], vy_local[6];
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      td.build(mesh, t, qb);
      gather_local(state.c, dofs_, t, c_local);
      gather_local(phi, dofs_, t, phi_local);
      gather_local(v.x, dofs_, t, vx_local);
      gather_local(v.y, dofs_, t, vy_local);
      int glob[6];
      bool boundary[6];
      for (int a = 0; a < 6; ++a) {
        glob[a] = dofs_.global(t, a);
        boundary[a] = mesh.node_tags[glob[a]] != Boundary::Interior;
      }
      for (int q = 0; q < qb.nq; ++q) {
        const double w = td.wq[q];
        const InterfaceGeometry geom = interface_geometry_from_grad(td.grad_p2(q, phi_local));
        const double vx_q = td.value_p2(qb, q, vx_local);
        const double vy_q = td.value_p2(qb, q, vy_local);
        // Reaction coefficient P : grad v from the end-of-step velocity.
        Mat2 jac = {{{0.0, 0.0}, {0.0, 0.0}}};
        for (int b = 0; b < 6; ++b) {
          jac[0][0] += vx_local[b] * td.p2g[q][b][0];
          jac[0][1] += vx_local[b] * td.p2g[q][b][1];
          jac[1][0] += vy_local[b] * td.p2g[q][b][0];
          jac[1][1] += vy_local[b] * td.p2g[q][b][1];
        }
        const double reaction = surface_divergence(jac, geom);
        const double cn_q = td.value_p2(qb, q, c_local);

        for (int a = 0; a < 6; ++a) {
          if (boundary[a]) continue;
          const double na = qb.p2[q][a];
          rhs[glob[a]] += w * inv_tau * cn_q * na;
          const double gxa = td.p2g[q][a][0], gya = td.p2g[q][a][1];
          const double pgx_a = geom.P[0][0] * gxa + geom.P[0][1] * gya;
          const double pgy_a = geom.P[1][0] * gxa + geom.P[1][1] * gya;
          for (int b = 0; b < 6; ++b) {
            const double nb = qb.p2[q][b];
            const double gxb = td.p2g[q][b][0], gyb = td.p2g[q][b][1];
            add(glob[a], glob[b],
                w * ((inv_tau + reaction) * na * nb + (vx_q * gxb + vy_q * gyb) * na +
                     theta_ * (pgx_a * gxb + pgy_a * gyb)));
          }
        }
      }
    }
  };

  const SparseMatrix& A = pattern_.fill(n, n, emit);
  SolveReport fact = lu_.factorize(A);
  if (!fact.converged) throw SolverError("advance_c: factorization failed: " + fact.message);
  SolveReport rep;
  state.c.coeffs = lu_.solve(rhs, &rep);
  rep.seconds += fact.seconds;
  if (!rep.converged) throw SolverError("advance_c: solve failed: " + rep.message);
  if (report) *report = rep;

  long floored = 0;
  double min_c = state.c.coeffs.empty() ? 1.0 : state.c.coeffs[0];
  for (double& ci : state.c.coeffs) {
    min_c = std::min(min_c, ci);
    if (ci < kStretchFloor) {
      ci = kStretchFloor;
      ++floored;
    }
  }
  if (floored > 0 || min_c < 0.1) {
    ++warn_count_;
    if (warn_count_ <= 3 || warn_count_ % 500 == 0)
      log_warn("advance_c: min c = %.3e, floored %ld DOFs at %.0e (occurrence %ld)", min_c,
               floored, kStretchFloor, warn_count_);
  }
}

}  // namespace vesicle
