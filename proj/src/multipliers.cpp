#include "multipliers.hpp"

#include <cmath>

#include "common.hpp"

namespace vesicle {

GlobalMultipliers solve_multipliers(const PhaseState& phase, const VectorField& v,
                                    const ConservationTargets& targets, const PhaseParams& params,
                                    double tau) {
  const Mesh& mesh = *phase.phi.mesh;
  const DofMap dofs(mesh, Space::P2);
  const QuadBasis& qb = QuadBasis::degree5();

  double int_f = 0.0, int_f2 = 0.0, int_g = 0.0, int_advg_f = 0.0;
  double vol = 0.0, area = 0.0;
  const double eps = params.eps;

  TriQuadData td;
  double phi_local[6], f_local[6], g_local[6], vx_local[6], vy_local[6];
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    td.build(mesh, t, qb);
    gather_local(phase.phi, dofs, t, phi_local);
    gather_local(phase.f, dofs, t, f_local);
    gather_local(phase.g, dofs, t, g_local);
    gather_local(v.x, dofs, t, vx_local);
    gather_local(v.y, dofs, t, vy_local);
    for (int q = 0; q < qb.nq; ++q) {
      const double w = td.wq[q];
      const double f_q = td.value_p2(qb, q, f_local);
      const double g_q = td.value_p2(qb, q, g_local);
      const double phi_q = td.value_p2(qb, q, phi_local);
      const Vec2 grad_phi = td.grad_p2(q, phi_local);
      const double adv =
          td.value_p2(qb, q, vx_local) * grad_phi[0] + td.value_p2(qb, q, vy_local) * grad_phi[1];
      int_f += w * f_q;
      int_f2 += w * f_q * f_q;
      int_g += w * g_q;
      int_advg_f += w * (adv / params.eta + g_q) * f_q;
      const double well = phi_q * phi_q - 1.0;
      vol += w * 0.5 * (phi_q + 1.0);
      area += w * (0.5 * eps * (grad_phi[0] * grad_phi[0] + grad_phi[1] * grad_phi[1]) +
                   well * well / (4.0 * eps));
    }
  }

  const double omega = mesh.domain.area();
  // Relaxation signs are the ones that contract the constraint errors under
  // the transport convention d_t phi = -eta (g - lambda_g f - lambda_v):
  // they give d/dt V = eta/(4 tau) (V0 - V) and d/dt A = eta/(2 tau) (A0 - A).
  const double rhs1 = int_g + (targets.volume - vol) / (2.0 * tau);
  const double rhs2 = int_advg_f - (targets.area - area) / (2.0 * tau);

  // f numerically zero everywhere: the area equation is vacuous; only the
  // volume row constrains anything.
  if (int_f2 <= 1e-20 * omega) return {0.0, rhs1 / omega};

  const double det = omega * int_f2 - int_f * int_f;
  if (det <= 1e-14 * omega * int_f2)
    throw SolverError(format_string(
        "solve_multipliers: f is (numerically) constant (det=%.3e, |Omega| int f^2=%.3e)", det,
        omega * int_f2));

  GlobalMultipliers out;
  out.lambda_volume = (rhs1 * int_f2 - int_f * rhs2) / det;
  out.lambda_global = (omega * rhs2 - int_f * rhs1) / det;
  return out;
}

}  // namespace vesicle
