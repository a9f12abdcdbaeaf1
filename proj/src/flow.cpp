#include "flow.hpp"

#include <cmath>

#include "common.hpp"

namespace vesicle {

FlowState make_initial_flow(const Mesh& mesh, const FlowParams& params) {
  FlowState state;
  state.v = VectorField(mesh, Space::P2);
  state.p = ScalarField(mesh, Space::P1);
  state.lambda_local = ScalarField(mesh, Space::P2);
  for (int i = 0; i < state.v.x.size(); ++i) {
    const Boundary tag = mesh.node_tags[i];
    if (tag == Boundary::Top) state.v.x.coeffs[i] = params.shear_speed;
    if (tag == Boundary::Bottom) state.v.x.coeffs[i] = -params.shear_speed;
  }
  return state;
}

std::pair<double, double> material_properties(double phi_value, const FlowParams& params) {
  const double up = 0.5 * (phi_value + 1.0);
  const double down = 0.5 * (1.0 - phi_value);
  const double rho_floor = 0.01 * std::min(1.0, params.dens_ratio);
  const double nu_floor = 0.01 * std::min(1.0, params.visc_ratio);
  const double rho = std::max(up * params.dens_ratio + down, rho_floor);
  const double nu = std::max(up * params.visc_ratio + down, nu_floor);
  return {rho, nu};
}

double hooke_rhs(double c_value, const InterfaceGeometry& geom, double zeta) {
  const double c = std::max(c_value, kStretchFloor);
  return zeta * (c - 1.0) / c * geom.delta;
}

FlowSolver::FlowSolver(const Mesh& mesh, ModelVariant variant, FlowParams params,
                       PhaseParams phase_params, SolverConfig solver_cfg)
    : mesh_(&mesh),
      variant_(variant),
      params_(params),
      phase_params_(phase_params),
      p2_(mesh, Space::P2),
      p1_(mesh, Space::P1),
      lu_(solver_cfg) {
  has_lambda_ = variant != ModelVariant::A;
  off_vx_ = 0;
  off_vy_ = p2_.count;
  off_p_ = 2 * p2_.count;
  off_lam_ = 2 * p2_.count + p1_.count;
  total_dofs_ = off_lam_ + (has_lambda_ ? p2_.count : 0);

  // Left/right boundary edges with their owning triangle. Lower triangles own
  // the right wall edges, upper triangles the left wall edges.
  for (int j = 0; j < mesh.ny; ++j) {
    const int left_tri = 2 * (j * mesh.nx + 0) + 1;         // (SW, NE, NW)
    const int right_tri = 2 * (j * mesh.nx + mesh.nx - 1);  // (SW, SE, NE)
    open_edges_.push_back({left_tri, -1.0, {0.0, 0.0}, {0.0, 1.0}, mesh.hy()});
    open_edges_.push_back({right_tri, 1.0, {1.0, 0.0}, {0.0, 1.0}, mesh.hy()});
  }
}

void FlowSolver::detect_pinning(const PhaseState& phase) {
  if (!has_lambda_ || pin_lambda_ >= 0) return;
  const QuadBasis& qb = QuadBasis::degree5();
  double delta_mass = 0.0;
  TriQuadData td;
  double phi_local[6];
  for (int t = 0; t < mesh_->num_triangles(); ++t) {
    td.build(*mesh_, t, qb);
    gather_local(phase.phi, p2_, t, phi_local);
    for (int q = 0; q < qb.nq; ++q) {
      const Vec2 grad = td.grad_p2(q, phi_local);
      delta_mass += td.wq[q] * 0.5 * std::hypot(grad[0], grad[1]);
    }
  }
  pin_lambda_ = delta_mass < 1e-8 * mesh_->domain.area() ? 1 : 0;
  if (pin_lambda_ == 1)
    log_warn("no resolved interface (integrated delta = %.3e); pinning lambda_local to zero",
             delta_mass);
}

FlowSolver::System FlowSolver::assemble(const FlowState& prev, const PhaseState& phase,
                                        const ScalarField& c, const GlobalMultipliers& multipliers,
                                        double tau) {
  const Mesh& mesh = *mesh_;
  const QuadBasis& qb = QuadBasis::degree5();
  detect_pinning(phase);
  const bool lambda_active = has_lambda_ && pin_lambda_ == 0;
  const double inv_tau = 1.0 / tau;
  const double inv_re = 1.0 / params_.re;
  const double ext_coeff = params_.xi * phase_params_.eps * phase_params_.eps;
  const bool hooke = variant_ == ModelVariant::C;
  long clamped = 0;

  rhs_.assign(total_dofs_, 0.0);
  const auto wall_value = [&](Boundary tag) {
    return tag == Boundary::Top ? params_.shear_speed : -params_.shear_speed;
  };

  const auto emit = [&](auto&& add) {
    // Strong wall rows.
    for (int i = 0; i < p2_.count; ++i) {
      const Boundary tag = mesh.node_tags[i];
      if (tag == Boundary::Top || tag == Boundary::Bottom) {
        add(off_vx_ + i, off_vx_ + i, 1.0);
        add(off_vy_ + i, off_vy_ + i, 1.0);
        rhs_[off_vx_ + i] = wall_value(tag);
        rhs_[off_vy_ + i] = 0.0;
      }
    }
    if (has_lambda_ && !lambda_active)
      for (int i = 0; i < p2_.count; ++i) add(off_lam_ + i, off_lam_ + i, 1.0);

    TriQuadData td;
    double phi_local[6], vx_local[6], vy_local[6], g_local[6], f_local[6], c_local[6];
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      td.build(mesh, t, qb);
      gather_local(phase.phi, p2_, t, phi_local);
      gather_local(prev.v.x, p2_, t, vx_local);
      gather_local(prev.v.y, p2_, t, vy_local);
      gather_local(phase.g, p2_, t, g_local);
      gather_local(phase.f, p2_, t, f_local);
      gather_local(c, p2_, t, c_local);
      int glob2[6], glob1[3];
      bool wall[6];
      for (int a = 0; a < 6; ++a) {
        glob2[a] = p2_.global(t, a);
        const Boundary tag = mesh.node_tags[glob2[a]];
        wall[a] = tag == Boundary::Top || tag == Boundary::Bottom;
      }
      for (int a = 0; a < 3; ++a) glob1[a] = p1_.global(t, a);

      for (int q = 0; q < qb.nq; ++q) {
        const double w = td.wq[q];
        const double phi_q = td.value_p2(qb, q, phi_local);
        const Vec2 grad_phi = td.grad_p2(q, phi_local);
        const InterfaceGeometry geom = interface_geometry_from_grad(grad_phi);
        const auto [rho, nu] = material_properties(phi_q, params_);
        const double vxn = td.value_p2(qb, q, vx_local);
        const double vyn = td.value_p2(qb, q, vy_local);
        const double g_q = td.value_p2(qb, q, g_local);
        const double f_q = td.value_p2(qb, q, f_local);
        // Bending + global-constraint excess forces, all at time n. The
        // volume multiplier enters with the sign that makes the constraint
        // system contract |V - V0| (see the phase-transport equation).
        const double force_coeff =
            g_q - multipliers.lambda_global * f_q - multipliers.lambda_volume;

        const double visc = nu * inv_re;
        const double phi_sq = phi_q * phi_q;
        double hooke_q = 0.0;
        if (hooke && lambda_active) {
          // Interpolate the nodal ratio zeta (c-1)/c rather than forming the
          // ratio from interpolated c: a field that is exactly 1 at the DOFs
          // then contributes an exact zero (Model B and C coincide bitwise).
          double ratio_q = 0.0;
          for (int b = 0; b < 6; ++b) {
            if (c_local[b] < kStretchFloor) ++clamped;
            const double cb = std::max(c_local[b], kStretchFloor);
            ratio_q += params_.zeta * (cb - 1.0) / cb * qb.p2[q][b];
          }
          hooke_q = ratio_q * geom.delta;
        }

        for (int a = 0; a < 6; ++a) {
          const double na = qb.p2[q][a];
          const double gxa = td.p2g[q][a][0], gya = td.p2g[q][a][1];
          const int row_x = off_vx_ + glob2[a];
          const int row_y = off_vy_ + glob2[a];

          if (!wall[a]) {
            rhs_[row_x] += w * (force_coeff * grad_phi[0] + rho * inv_tau * vxn) * na;
            rhs_[row_y] += w * (force_coeff * grad_phi[1] + rho * inv_tau * vyn) * na;

            for (int b = 0; b < 6; ++b) {
              const double nb = qb.p2[q][b];
              const double gxb = td.p2g[q][b][0], gyb = td.p2g[q][b][1];
              const double mass = rho * inv_tau * na * nb;
              const double adv = rho * na * (vxn * gxb + vyn * gyb);
              add(row_x, off_vx_ + glob2[b],
                  w * (mass + adv + visc * (gxb * gxa + 0.5 * gyb * gya)));
              add(row_x, off_vy_ + glob2[b], w * visc * 0.5 * gxb * gya);
              add(row_y, off_vy_ + glob2[b],
                  w * (mass + adv + visc * (gyb * gya + 0.5 * gxb * gxa)));
              add(row_y, off_vx_ + glob2[b], w * visc * 0.5 * gyb * gxa);
            }
            for (int b = 0; b < 3; ++b) {
              const double lb = qb.p1[q][b];
              add(row_x, off_p_ + glob1[b], -w * lb * gxa);
              add(row_y, off_p_ + glob1[b], -w * lb * gya);
            }
            if (lambda_active) {
              const double px = geom.P[0][0] * gxa + geom.P[0][1] * gya;
              const double py = geom.P[1][0] * gxa + geom.P[1][1] * gya;
              for (int b = 0; b < 6; ++b) {
                add(row_x, off_lam_ + glob2[b], w * geom.delta * qb.p2[q][b] * px);
                add(row_y, off_lam_ + glob2[b], w * geom.delta * qb.p2[q][b] * py);
              }
            }
          }

          if (lambda_active) {
            // Extension equation row: xi eps^2 div(phi^2 grad lambda) +
            // delta P : grad v = [zeta (c-1)/c delta].
            const int row_l = off_lam_ + glob2[a];
            rhs_[row_l] += w * hooke_q * na;
            for (int b = 0; b < 6; ++b) {
              const double gxb = td.p2g[q][b][0], gyb = td.p2g[q][b][1];
              add(row_l, off_lam_ + glob2[b],
                  -w * ext_coeff * phi_sq * (gxb * gxa + gyb * gya));
              add(row_l, off_vx_ + glob2[b],
                  w * geom.delta * na * (geom.P[0][0] * gxb + geom.P[0][1] * gyb));
              add(row_l, off_vy_ + glob2[b],
                  w * geom.delta * na * (geom.P[1][0] * gxb + geom.P[1][1] * gyb));
            }
          }
        }

        for (int a = 0; a < 3; ++a) {
          const int row_p = off_p_ + glob1[a];
          const double la = qb.p1[q][a];
          for (int b = 0; b < 6; ++b) {
            add(row_p, off_vx_ + glob2[b], w * la * td.p2g[q][b][0]);
            add(row_p, off_vy_ + glob2[b], w * la * td.p2g[q][b][1]);
          }
        }
      }
    }

    // Transpose-part correction of the viscous traction on the open left and
    // right boundaries; makes (-pI + (nu/(2Re)) grad v) n = 0 the effective
    // outflow condition.
    static const double gauss_s[3] = {0.5 - std::sqrt(15.0) / 10.0, 0.5,
                                      0.5 + std::sqrt(15.0) / 10.0};
    static const double gauss_w[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    for (const BoundaryEdge& edge : open_edges_) {
      const TriGeom geom_t = tri_geometry(mesh, edge.tri);
      double phi_local[6];
      gather_local(phase.phi, p2_, edge.tri, phi_local);
      int glob2[6];
      bool wall[6];
      for (int a = 0; a < 6; ++a) {
        glob2[a] = p2_.global(edge.tri, a);
        const Boundary tag = mesh.node_tags[glob2[a]];
        wall[a] = tag == Boundary::Top || tag == Boundary::Bottom;
      }
      for (int q = 0; q < 3; ++q) {
        const double s = gauss_s[q];
        const double xi = edge.ref_a[0] + s * (edge.ref_b[0] - edge.ref_a[0]);
        const double eta = edge.ref_a[1] + s * (edge.ref_b[1] - edge.ref_a[1]);
        double vals[6], grads_ref[6][2];
        p2_values(xi, eta, vals);
        p2_grads(xi, eta, grads_ref);
        double gx[6], gy[6];
        double phi_q = 0.0;
        for (int a = 0; a < 6; ++a) {
          gx[a] = geom_t.inv_jt[0][0] * grads_ref[a][0] + geom_t.inv_jt[0][1] * grads_ref[a][1];
          gy[a] = geom_t.inv_jt[1][0] * grads_ref[a][0] + geom_t.inv_jt[1][1] * grads_ref[a][1];
          phi_q += vals[a] * phi_local[a];
        }
        const double nu = material_properties(phi_q, params_).second;
        const double coeff = -0.5 * inv_re * nu * edge.normal_x * gauss_w[q] * edge.length;
        for (int a = 0; a < 6; ++a) {
          if (wall[a]) continue;
          for (int b = 0; b < 6; ++b) {
            add(off_vx_ + glob2[a], off_vx_ + glob2[b], coeff * gx[b] * vals[a]);
            add(off_vy_ + glob2[a], off_vx_ + glob2[b], coeff * gy[b] * vals[a]);
          }
        }
      }
    }
  };

  const SparseMatrix& A = pattern_.fill(total_dofs_, total_dofs_, emit);
  if (clamped > 0) {
    ++clamp_warn_count_;
    if (clamp_warn_count_ <= 3 || clamp_warn_count_ % 500 == 0)
      log_warn("hooke_rhs: clamped c below %.0e at %ld nodes (occurrence %ld)", kStretchFloor,
               clamped, clamp_warn_count_);
  }
  return {&A, &rhs_};
}

FlowState FlowSolver::solve(const FlowState& prev, const PhaseState& phase, const ScalarField& c,
                            const GlobalMultipliers& multipliers, double tau, SolveReport* report) {
  const System sys = assemble(prev, phase, c, multipliers, tau);
  SolveReport fact = lu_.factorize(*sys.matrix);
  if (!fact.converged) throw SolverError("solve_flow: factorization failed: " + fact.message);
  SolveReport rep;
  std::vector<double> x = lu_.solve(*sys.rhs, &rep);
  rep.seconds += fact.seconds;
  if (!rep.converged)
    throw SolverError(format_string("solve_flow: %s (relative residual %.3e)", rep.message.c_str(),
                                    rep.rel_residual));
  if (report) *report = rep;

  FlowState next;
  next.v = VectorField(*mesh_, Space::P2);
  next.p = ScalarField(*mesh_, Space::P1);
  next.lambda_local = ScalarField(*mesh_, Space::P2);
  for (int i = 0; i < p2_.count; ++i) {
    next.v.x.coeffs[i] = x[off_vx_ + i];
    next.v.y.coeffs[i] = x[off_vy_ + i];
    if (has_lambda_) next.lambda_local.coeffs[i] = x[off_lam_ + i];
  }
  for (int i = 0; i < p1_.count; ++i) next.p.coeffs[i] = x[off_p_ + i];
  return next;
}

double FlowSolver::continuity_residual(const FlowState& state) const {
  const Mesh& mesh = *mesh_;
  const QuadBasis& qb = QuadBasis::degree5();
  std::vector<double> res(p1_.count, 0.0);
  TriQuadData td;
  double vx_local[6], vy_local[6];
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    td.build(mesh, t, qb);
    gather_local(state.v.x, p2_, t, vx_local);
    gather_local(state.v.y, p2_, t, vy_local);
    for (int q = 0; q < qb.nq; ++q) {
      double div = 0.0;
      for (int b = 0; b < 6; ++b)
        div += vx_local[b] * td.p2g[q][b][0] + vy_local[b] * td.p2g[q][b][1];
      for (int a = 0; a < 3; ++a) res[p1_.global(t, a)] += td.wq[q] * qb.p1[q][a] * div;
    }
  }
  double max_res = 0.0;
  for (double r : res) max_res = std::max(max_res, std::abs(r));
  return max_res;
}

}  // namespace vesicle
