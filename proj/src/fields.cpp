#include "fields.hpp"

#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace vesicle {

ScalarField::ScalarField(const Mesh& m, Space s, double value)
    : space(s), mesh(&m), coeffs(DofMap(m, s).count, value) {}

void ScalarField::set_from(const std::function<double(double, double)>& f) {
  const int n = size();
  for (int i = 0; i < n; ++i) {
    // P1 DOFs are the leading vertex block of the P2 node set.
    const Vec2 p = mesh->node_position(i);
    coeffs[i] = f(p[0], p[1]);
  }
}

namespace {

template <int kLocals>
EvalResult eval_impl(const ScalarField& field, const DofMap& dofs, const TriGeom& g, int tri,
                     double xi, double eta) {
  double vals[6];
  double grads[6][2];
  if constexpr (kLocals == 3) {
    p1_values(xi, eta, vals);
    double ref[3][2];
    p1_grads(ref);
    for (int a = 0; a < 3; ++a) {
      grads[a][0] = ref[a][0];
      grads[a][1] = ref[a][1];
    }
  } else {
    p2_values(xi, eta, vals);
    p2_grads(xi, eta, grads);
  }
  EvalResult out;
  for (int a = 0; a < kLocals; ++a) {
    const double c = field.coeffs[dofs.global(tri, a)];
    out.value += c * vals[a];
    const double gx = g.inv_jt[0][0] * grads[a][0] + g.inv_jt[0][1] * grads[a][1];
    const double gy = g.inv_jt[1][0] * grads[a][0] + g.inv_jt[1][1] * grads[a][1];
    out.grad[0] += c * gx;
    out.grad[1] += c * gy;
  }
  return out;
}

}  // namespace

EvalResult eval_with_gradient(const ScalarField& field, int tri, double xi, double eta) {
  const DofMap dofs(*field.mesh, field.space);
  const TriGeom g = tri_geometry(*field.mesh, tri);
  return field.space == Space::P1 ? eval_impl<3>(field, dofs, g, tri, xi, eta)
                                  : eval_impl<6>(field, dofs, g, tri, xi, eta);
}

PointLocation locate_point(const Mesh& mesh, double x, double y) {
  const Rect& d = mesh.domain;
  const double u = std::clamp((x - d.x0) / d.width() * mesh.nx, 0.0, mesh.nx - 1e-14);
  const double v = std::clamp((y - d.y0) / d.height() * mesh.ny, 0.0, mesh.ny - 1e-14);
  const int i = static_cast<int>(u);
  const int j = static_cast<int>(v);
  const double lu = u - i, lv = v - j;
  PointLocation loc;
  const int cell = 2 * (j * mesh.nx + i);
  if (lv <= lu) {  // lower triangle (SW, SE, NE)
    loc.tri = cell;
    loc.xi = lu - lv;
    loc.eta = lv;
  } else {  // upper triangle (SW, NE, NW)
    loc.tri = cell + 1;
    loc.xi = lu;
    loc.eta = lv - lu;
  }
  return loc;
}

double eval_at_point(const ScalarField& field, double x, double y) {
  const PointLocation loc = locate_point(*field.mesh, x, y);
  return eval_with_gradient(field, loc.tri, loc.xi, loc.eta).value;
}

InterfaceGeometry interface_geometry_from_grad(const Vec2& grad_phi) {
  InterfaceGeometry geom;
  geom.grad_phi = grad_phi;
  geom.norm_sq = grad_phi[0] * grad_phi[0] + grad_phi[1] * grad_phi[1];
  if (geom.norm_sq < kGradFloor) {
    geom.delta = 0.0;
    geom.P = {{{1.0, 0.0}, {0.0, 1.0}}};
    return geom;
  }
  geom.delta = 0.5 * std::sqrt(geom.norm_sq);
  const double inv = 1.0 / geom.norm_sq;
  geom.P[0][0] = 1.0 - grad_phi[0] * grad_phi[0] * inv;
  geom.P[0][1] = -grad_phi[0] * grad_phi[1] * inv;
  geom.P[1][0] = geom.P[0][1];
  geom.P[1][1] = 1.0 - grad_phi[1] * grad_phi[1] * inv;
  return geom;
}

InterfaceGeometry interface_geometry(const ScalarField& phi, int tri, double xi, double eta) {
  return interface_geometry_from_grad(eval_with_gradient(phi, tri, xi, eta).grad);
}

double surface_divergence(const Mat2& jac, const InterfaceGeometry& geom) {
  return geom.P[0][0] * jac[0][0] + geom.P[0][1] * jac[0][1] + geom.P[1][0] * jac[1][0] +
         geom.P[1][1] * jac[1][1];
}

Mat2 velocity_jacobian(const VectorField& v, int tri, double xi, double eta) {
  const EvalResult ex = eval_with_gradient(v.x, tri, xi, eta);
  const EvalResult ey = eval_with_gradient(v.y, tri, xi, eta);
  return {{{ex.grad[0], ex.grad[1]}, {ey.grad[0], ey.grad[1]}}};
}

void gather_local(const ScalarField& field, const DofMap& dofs, int tri, double out[6]) {
  const int n = dofs.locals_per_tri();
  for (int a = 0; a < n; ++a) out[a] = field.coeffs[dofs.global(tri, a)];
}

}  // namespace vesicle
