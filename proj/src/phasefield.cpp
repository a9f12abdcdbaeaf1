#include "phasefield.hpp"

#include <cmath>

#include "common.hpp"

namespace vesicle {

namespace {

// Double-well products and their derivatives. Wc carries the spontaneous
// curvature offset, Wf is the plain cubic.
inline double wc(double s, double h0) { return (s * s - 1.0) * (s + h0); }
inline double wc_prime(double s, double h0) { return 3.0 * s * s + 2.0 * h0 * s - 1.0; }
inline double wf(double s) { return (s * s - 1.0) * s; }
inline double wf_prime(double s) { return 3.0 * s * s - 1.0; }

struct ClosestPoint {
  double x, y;
};

// Root of F(s) = (a u / (s+a^2))^2 + (b v / (s+b^2))^2 - 1 for u, v > 0;
// F is strictly decreasing on the bracket.
ClosestPoint closest_point_interior(double a, double b, double u, double v) {
  const double au = a * u, bv = b * v;
  double lo = std::max(au - a * a, bv - b * b);
  double hi = std::hypot(au, bv);
  const auto F = [&](double s) {
    const double ta = au / (s + a * a);
    const double tb = bv / (s + b * b);
    return ta * ta + tb * tb - 1.0;
  };
  const auto dF = [&](double s) {
    const double pa = s + a * a, pb = s + b * b;
    return -2.0 * (au * au / (pa * pa * pa) + bv * bv / (pb * pb * pb));
  };
  double s = 0.5 * (lo + hi);
  bool converged = false;
  for (int it = 0; it < 50; ++it) {
    const double f = F(s);
    if (std::abs(f) < 1e-14) {
      converged = true;
      break;
    }
    (f > 0.0 ? lo : hi) = s;
    const double step = f / dF(s);
    double next = s - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) < 1e-15 * (1.0 + std::abs(s))) {
      s = next;
      converged = true;
      break;
    }
    s = next;
  }
  if (!converged && std::abs(F(s)) > 1e-10)
    throw SolverError(format_string(
        "ellipse closest-point iteration did not converge (a=%g b=%g point=(%g, %g))", a, b, u, v));
  return {a * a * u / (s + a * a), b * b * v / (s + b * b)};
}

}  // namespace

double ellipse_signed_distance(double a, double b, double px, double py) {
  const double u = std::abs(px), v = std::abs(py);
  double dist;
  if (u == 0.0 && v == 0.0) {
    dist = -std::min(a, b);
    return dist;
  }
  ClosestPoint cp{};
  if (v == 0.0) {
    const double cusp = (a * a - b * b) / a;
    if (u < cusp) {  // only reachable when a > b
      cp.x = a * a * u / (a * a - b * b);
      cp.y = b * std::sqrt(std::max(0.0, 1.0 - (cp.x / a) * (cp.x / a)));
    } else {
      cp = {a, 0.0};
    }
  } else if (u == 0.0) {
    const double cusp = (b * b - a * a) / b;
    if (v < cusp) {  // only reachable when b > a
      cp.y = b * b * v / (b * b - a * a);
      cp.x = a * std::sqrt(std::max(0.0, 1.0 - (cp.y / b) * (cp.y / b)));
    } else {
      cp = {0.0, b};
    }
  } else {
    cp = closest_point_interior(a, b, u, v);
  }
  dist = std::hypot(u - cp.x, v - cp.y);
  const double inside = (u / a) * (u / a) + (v / b) * (v / b);
  return inside < 1.0 ? -dist : dist;
}

PhaseState init_ellipse(const Mesh& mesh, const PhaseParams& params, const Vec2& center,
                        const Vec2& semi_axes) {
  const double a = semi_axes[0], b = semi_axes[1];
  if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("init_ellipse: semi-axes must be positive");
  const Rect& d = mesh.domain;
  if (center[0] - a < d.x0 || center[0] + a > d.x1 || center[1] - b < d.y0 || center[1] + b > d.y1)
    throw ValidationError("init_ellipse: ellipse does not fit inside the domain");

  PhaseState state;
  state.phi = ScalarField(mesh, Space::P2);
  state.f_c = ScalarField(mesh, Space::P2);
  state.f = ScalarField(mesh, Space::P2);
  state.g = ScalarField(mesh, Space::P2);

  const double scale = 1.0 / (std::sqrt(2.0) * params.eps);
  for (int i = 0; i < state.phi.size(); ++i) {
    const Vec2 p = mesh.node_position(i);
    const double dist = ellipse_signed_distance(a, b, p[0] - center[0], p[1] - center[1]);
    state.phi.coeffs[i] = std::tanh(-dist * scale);
  }
  bending_chain(state, params, state.phi);
  return state;
}

void bending_chain(PhaseState& state, const PhaseParams& params, const ScalarField& phi_lag,
                   SolverConfig solver_cfg) {
  const Mesh& mesh = *state.phi.mesh;
  const DofMap dofs(mesh, Space::P2);
  const QuadBasis& qb = QuadBasis::degree5();
  const int n = dofs.count;
  const double eps = params.eps;

  // P2 mass matrix, shared by all three solves.
  PatternCache mass_pattern;
  const SparseMatrix& mass = mass_pattern.fill(n, n, [&](auto&& add) {
    TriQuadData td;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      td.build(mesh, t, qb);
      for (int q = 0; q < qb.nq; ++q)
        for (int a = 0; a < 6; ++a)
          for (int bq = 0; bq < 6; ++bq)
            add(dofs.global(t, a), dofs.global(t, bq), td.wq[q] * qb.p2[q][a] * qb.p2[q][bq]);
    }
  });

  LuSolver lu(solver_cfg);
  const SolveReport fact = lu.factorize(mass);
  if (!fact.converged) throw SolverError("bending_chain: mass factorization failed: " + fact.message);

  std::vector<double> rhs_fc(n, 0.0), rhs_f(n, 0.0);
  {
    TriQuadData td;
    double phi_local[6];
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      td.build(mesh, t, qb);
      gather_local(state.phi, dofs, t, phi_local);
      for (int q = 0; q < qb.nq; ++q) {
        const double phi_q = td.value_p2(qb, q, phi_local);
        const Vec2 grad_q = td.grad_p2(q, phi_local);
        for (int a = 0; a < 6; ++a) {
          const int ga = dofs.global(t, a);
          const double stiff =
              td.p2g[q][a][0] * grad_q[0] + td.p2g[q][a][1] * grad_q[1];
          rhs_fc[ga] += td.wq[q] * (-eps * stiff - (1.0 / eps) * wc(phi_q, params.h0) * qb.p2[q][a]);
          rhs_f[ga] += td.wq[q] * (-eps * stiff - (1.0 / eps) * wf(phi_q) * qb.p2[q][a]);
        }
      }
    }
  }
  SolveReport rep;
  state.f_c.coeffs = lu.solve(rhs_fc, &rep);
  if (!rep.converged) throw SolverError("bending_chain: f_c solve failed: " + rep.message);
  state.f.coeffs = lu.solve(rhs_f, &rep);
  if (!rep.converged) throw SolverError("bending_chain: f solve failed: " + rep.message);

  std::vector<double> rhs_g(n, 0.0);
  {
    TriQuadData td;
    double fc_local[6], lag_local[6];
    const double c0 = 1.0 / params.re_be;
    const double c1 = 1.0 / (params.re_be * eps * eps);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      td.build(mesh, t, qb);
      gather_local(state.f_c, dofs, t, fc_local);
      gather_local(phi_lag, dofs, t, lag_local);
      for (int q = 0; q < qb.nq; ++q) {
        const double fc_q = td.value_p2(qb, q, fc_local);
        const Vec2 grad_fc = td.grad_p2(q, fc_local);
        const double lag_q = td.value_p2(qb, q, lag_local);
        for (int a = 0; a < 6; ++a) {
          const int ga = dofs.global(t, a);
          const double stiff = td.p2g[q][a][0] * grad_fc[0] + td.p2g[q][a][1] * grad_fc[1];
          rhs_g[ga] +=
              td.wq[q] * (-c0 * stiff - c1 * wc_prime(lag_q, params.h0) * fc_q * qb.p2[q][a]);
        }
      }
    }
  }
  state.g.coeffs = lu.solve(rhs_g, &rep);
  if (!rep.converged) throw SolverError("bending_chain: g solve failed: " + rep.message);
}

std::pair<double, double> volume_area(const ScalarField& phi, const PhaseParams& params) {
  const Mesh& mesh = *phi.mesh;
  const DofMap dofs(mesh, Space::P2);
  const QuadBasis& qb = QuadBasis::degree5();
  const double eps = params.eps;
  double vol = 0.0, area = 0.0;
  TriQuadData td;
  double phi_local[6];
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    td.build(mesh, t, qb);
    gather_local(phi, dofs, t, phi_local);
    for (int q = 0; q < qb.nq; ++q) {
      const double phi_q = td.value_p2(qb, q, phi_local);
      const Vec2 grad_q = td.grad_p2(q, phi_local);
      const double well = phi_q * phi_q - 1.0;
      vol += td.wq[q] * 0.5 * (phi_q + 1.0);
      area += td.wq[q] * (0.5 * eps * (grad_q[0] * grad_q[0] + grad_q[1] * grad_q[1]) +
                          well * well / (4.0 * eps));
    }
  }
  return {vol, area};
}

PhaseSolver::PhaseSolver(const Mesh& mesh, PhaseParams params, SolverConfig solver_cfg)
    : mesh_(&mesh), params_(params), dofs_(mesh, Space::P2), lu_(solver_cfg) {}

void PhaseSolver::advance(PhaseState& state, const VectorField& v,
                          const GlobalMultipliers& multipliers, double tau, SolveReport* report) {
  const Mesh& mesh = *mesh_;
  const QuadBasis& qb = QuadBasis::degree5();
  const int n = dofs_.count;
  const double eps = params_.eps;
  const double inv_tau = 1.0 / tau;
  const double c_g = 1.0 / params_.re_be;
  const double c_g_mass = 1.0 / (params_.re_be * eps * eps);
  const double eta = params_.eta;
  const double lam_g = multipliers.lambda_global;

  if (!mass_ready_) {
    const SparseMatrix& mass = mass_pattern_.fill(n, n, [&](auto&& add) {
      TriQuadData td;
      for (int t = 0; t < mesh.num_triangles(); ++t) {
        td.build(mesh, t, qb);
        for (int q = 0; q < qb.nq; ++q)
          for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b)
              add(dofs_.global(t, a), dofs_.global(t, b), td.wq[q] * qb.p2[q][a] * qb.p2[q][b]);
      }
    });
    const SolveReport fact = mass_lu_.factorize(mass);
    if (!fact.converged)
      throw SolverError("advance_phi: mass factorization failed: " + fact.message);
    mass_ready_ = true;
  }

  // Eliminated system for (phi, f_c):
  //   (M/tau + C + eta lam_g S_f) phi - eta (c_g K + c_gm M_wc') f_c = b_phi + eta lam_g b_f
  //   (eps K + (1/eps) M_wc') phi + M f_c = b_fc
  // with f and g recovered afterwards from their mass equations.
  const int off_phi = 0, off_fc = n;
  std::vector<double> rhs(2 * n, 0.0);
  std::vector<double> rhs_f(n, 0.0);  // b_f - S_f phi^{n+1}, assembled after the solve

  const auto emit = [&](auto&& add) {
    TriQuadData td;
    double phi_local[6], vx_local[6], vy_local[6];
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      td.build(mesh, t, qb);
      gather_local(state.phi, dofs_, t, phi_local);
      gather_local(v.x, dofs_, t, vx_local);
      gather_local(v.y, dofs_, t, vy_local);
      int glob[6];
      for (int a = 0; a < 6; ++a) glob[a] = dofs_.global(t, a);

      for (int q = 0; q < qb.nq; ++q) {
        const double w = td.wq[q];
        const double phi_q = td.value_p2(qb, q, phi_local);
        const double vx_q = td.value_p2(qb, q, vx_local);
        const double vy_q = td.value_p2(qb, q, vy_local);
        const double wcp = wc_prime(phi_q, params_.h0);
        const double wfp = wf_prime(phi_q);
        // Taylor linearization about phi^n moves the affine remainder to the
        // right-hand side.
        const double rhs_fc_q = (wcp * phi_q - wc(phi_q, params_.h0)) / eps;
        const double rhs_f_q = (wfp * phi_q - wf(phi_q)) / eps;

        for (int a = 0; a < 6; ++a) {
          const double na = qb.p2[q][a] * w;
          rhs[off_phi + glob[a]] +=
              (inv_tau * phi_q + eta * multipliers.lambda_volume + eta * lam_g * rhs_f_q) * na;
          rhs[off_fc + glob[a]] += rhs_fc_q * na;

          for (int b = 0; b < 6; ++b) {
            const double nb = qb.p2[q][b];
            const double mass_ab = na * nb;
            const double adv = (vx_q * td.p2g[q][b][0] + vy_q * td.p2g[q][b][1]) * na;
            const double stiff_ab =
                (td.p2g[q][a][0] * td.p2g[q][b][0] + td.p2g[q][a][1] * td.p2g[q][b][1]) * w;

            add(off_phi + glob[a], off_phi + glob[b],
                inv_tau * mass_ab + adv + eta * lam_g * (eps * stiff_ab + (wfp / eps) * mass_ab));
            add(off_phi + glob[a], off_fc + glob[b],
                -eta * (c_g * stiff_ab + c_g_mass * wcp * mass_ab));
            add(off_fc + glob[a], off_fc + glob[b], mass_ab);
            add(off_fc + glob[a], off_phi + glob[b], eps * stiff_ab + (wcp / eps) * mass_ab);
          }
        }
      }
    }
  };

  const SparseMatrix& A = pattern_.fill(2 * n, 2 * n, emit);
  SolveReport fact = lu_.factorize(A);
  if (!fact.converged) throw SolverError("advance_phi: factorization failed: " + fact.message);
  SolveReport rep;
  std::vector<double> x = lu_.solve(rhs, &rep);
  rep.seconds += fact.seconds;
  if (!rep.converged) throw SolverError("advance_phi: solve failed: " + rep.message);
  if (report) *report = rep;

  // Recovery right-hand sides: b_f - S_f phi and -(c_g K + c_gm M_wc') f_c,
  // with the nonlinearity coefficients still lagged to phi^n.
  std::vector<double> rhs_g(n, 0.0);
  {
    TriQuadData td;
    double lag_local[6], phi_local[6], fc_local[6];
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      td.build(mesh, t, qb);
      gather_local(state.phi, dofs_, t, lag_local);
      int glob[6];
      for (int a = 0; a < 6; ++a) glob[a] = dofs_.global(t, a);
      for (int a = 0; a < 6; ++a) {
        phi_local[a] = x[off_phi + glob[a]];
        fc_local[a] = x[off_fc + glob[a]];
      }
      for (int q = 0; q < qb.nq; ++q) {
        const double w = td.wq[q];
        const double lag_q = td.value_p2(qb, q, lag_local);
        const double phi_q = td.value_p2(qb, q, phi_local);
        const double fc_q = td.value_p2(qb, q, fc_local);
        const Vec2 grad_phi = td.grad_p2(q, phi_local);
        const Vec2 grad_fc = td.grad_p2(q, fc_local);
        const double wcp = wc_prime(lag_q, params_.h0);
        const double wfp = wf_prime(lag_q);
        const double b_f_q = (wfp * lag_q - wf(lag_q)) / eps - (wfp / eps) * phi_q;
        for (int a = 0; a < 6; ++a) {
          const double na = qb.p2[q][a];
          const double stiff_phi =
              td.p2g[q][a][0] * grad_phi[0] + td.p2g[q][a][1] * grad_phi[1];
          const double stiff_fc = td.p2g[q][a][0] * grad_fc[0] + td.p2g[q][a][1] * grad_fc[1];
          rhs_f[glob[a]] += w * (b_f_q * na - eps * stiff_phi);
          rhs_g[glob[a]] -= w * (c_g * stiff_fc + c_g_mass * wcp * fc_q * na);
        }
      }
    }
  }
  SolveReport rep_f, rep_g;
  state.f.coeffs = mass_lu_.solve(rhs_f, &rep_f);
  state.g.coeffs = mass_lu_.solve(rhs_g, &rep_g);
  if (!rep_f.converged || !rep_g.converged)
    throw SolverError("advance_phi: recovery solve failed");

  double max_abs = 0.0;
  for (int i = 0; i < n; ++i) {
    state.phi.coeffs[i] = x[off_phi + i];
    state.f_c.coeffs[i] = x[off_fc + i];
    max_abs = std::max(max_abs, std::abs(state.phi.coeffs[i]));
  }
  if (max_abs > 1.2)
    log_warn("phase field overshoot: max |phi| = %.3f exceeds the 1.2 sanity bound", max_abs);
}

}  // namespace vesicle
