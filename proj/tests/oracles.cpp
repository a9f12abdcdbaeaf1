#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace vesicle::test {

double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
  if (intervals % 2) ++intervals;
  const double h = (b - a) / intervals;
  double sum = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

namespace {

double profile_integral(double eps, const std::function<double(double, double)>& density) {
  const double halfwidth = 25.0 * eps;
  return simpson(
      [&](double r) {
        const double phi = std::tanh(-r / (std::sqrt(2.0) * eps));
        const double dphi = -(1.0 - phi * phi) / (std::sqrt(2.0) * eps);
        return density(phi, dphi);
      },
      -halfwidth, halfwidth, 40000);
}

}  // namespace

double tanh_area_line_density(double eps) {
  return profile_integral(eps, [eps](double phi, double dphi) {
    const double well = phi * phi - 1.0;
    return 0.5 * eps * dphi * dphi + well * well / (4.0 * eps);
  });
}

double tanh_delta_line_density(double eps) {
  return profile_integral(eps, [](double, double dphi) { return 0.5 * std::abs(dphi); });
}

double tanh_ec_weight_line_density(double eps) {
  return profile_integral(eps, [eps](double phi, double) {
    const double w = 1.0 - phi * phi;
    return w * w / eps;
  });
}

double ref_triangle_monomial(int a, int b) {
  // int_T xi^a eta^b = a! b! / (a + b + 2)!
  double value = 1.0;
  for (int k = 1; k <= a; ++k) value *= k;
  for (int k = 1; k <= b; ++k) value *= k;
  for (int k = 1; k <= a + b + 2; ++k) value /= k;
  return value;
}

ResidualNorms bending_residual_norms(const ScalarField& phi, double eps, double h0) {
  const Mesh& mesh = *phi.mesh;
  const DofMap dofs(mesh, Space::P2);
  const QuadratureRule& rule = QuadratureRule::triangle_degree5();
  std::vector<double> r(dofs.count, 0.0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriGeom g = tri_geometry(mesh, t);
    for (int q = 0; q < rule.size(); ++q) {
      const double xi = rule.points[q][0], eta = rule.points[q][1];
      const EvalResult e = eval_with_gradient(phi, t, xi, eta);
      const double well = (e.value * e.value - 1.0) * (e.value + h0);
      double vals[6], grads[6][2];
      p2_values(xi, eta, vals);
      p2_grads(xi, eta, grads);
      for (int a = 0; a < 6; ++a) {
        const double gx = g.inv_jt[0][0] * grads[a][0] + g.inv_jt[0][1] * grads[a][1];
        const double gy = g.inv_jt[1][0] * grads[a][0] + g.inv_jt[1][1] * grads[a][1];
        r[dofs.global(t, a)] += g.det * rule.weights[q] *
                                (-eps * (gx * e.grad[0] + gy * e.grad[1]) - well / eps * vals[a]);
      }
    }
  }
  ResidualNorms norms;
  double acc = 0.0;
  for (double v : r) {
    acc += v * v;
    norms.norm_inf = std::max(norms.norm_inf, std::abs(v));
  }
  norms.norm2 = std::sqrt(acc);
  return norms;
}

double subdivided_integrate(const Mesh& mesh,
                            const std::function<double(int, double, double)>& fn) {
  const QuadratureRule& rule = QuadratureRule::triangle_degree5();
  using P = std::array<double, 2>;
  const P a{0.0, 0.0}, b{1.0, 0.0}, c{0.0, 1.0};
  const P ab{0.5, 0.0}, bc{0.5, 0.5}, ca{0.0, 0.5};
  const std::array<std::array<P, 3>, 4> children = {{{a, ab, ca}, {ab, b, bc}, {ca, bc, c}, {ab, bc, ca}}};

  double total = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriGeom g = tri_geometry(mesh, t);
    double local = 0.0;
    for (const auto& child : children) {
      for (int q = 0; q < rule.size(); ++q) {
        const double xi = rule.points[q][0], eta = rule.points[q][1];
        const double l0 = 1.0 - xi - eta;
        const double cx = l0 * child[0][0] + xi * child[1][0] + eta * child[2][0];
        const double cy = l0 * child[0][1] + xi * child[1][1] + eta * child[2][1];
        local += 0.25 * rule.weights[q] * fn(t, cx, cy);
      }
    }
    total += g.det * local;
  }
  return total;
}

}  // namespace vesicle::test
