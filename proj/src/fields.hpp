#pragma once

#include <array>
#include <functional>
#include <vector>

#include "mesh.hpp"

namespace vesicle {

using Mat2 = std::array<std::array<double, 2>, 2>;

// Finite-element scalar field: one coefficient per DOF of its space.
struct ScalarField {
  Space space = Space::P2;
  const Mesh* mesh = nullptr;
  std::vector<double> coeffs;

  ScalarField() = default;
  ScalarField(const Mesh& m, Space s, double value = 0.0);

  int size() const { return static_cast<int>(coeffs.size()); }
  // Nodal interpolation of f(x, y) at every DOF position.
  void set_from(const std::function<double(double, double)>& f);
};

struct VectorField {
  ScalarField x, y;

  VectorField() = default;
  VectorField(const Mesh& m, Space s, double vx = 0.0, double vy = 0.0) : x(m, s, vx), y(m, s, vy) {}
  const Mesh* mesh() const { return x.mesh; }
};

struct EvalResult {
  double value = 0.0;
  Vec2 grad = {0.0, 0.0};
};

// Value and physical gradient at reference point (xi, eta) of a triangle.
EvalResult eval_with_gradient(const ScalarField& field, int tri, double xi, double eta);

// Locates the triangle and reference coordinates of a physical point on the
// structured mesh (points outside the domain are clamped to it).
struct PointLocation {
  int tri = 0;
  double xi = 0.0, eta = 0.0;
};
PointLocation locate_point(const Mesh& mesh, double x, double y);

double eval_at_point(const ScalarField& field, double x, double y);

// Geometry of the diffuse interface at one evaluation point: the phase-field
// gradient, the surface delta weight delta = 0.5 |grad phi| and the tangential
// projection P = I - n (x) n with n = -grad phi / |grad phi|. Below the
// regularization floor on |grad phi|^2 the fallback is P = I, delta = 0.
struct InterfaceGeometry {
  Vec2 grad_phi = {0.0, 0.0};
  double norm_sq = 0.0;
  double delta = 0.0;
  Mat2 P = {{{1.0, 0.0}, {0.0, 1.0}}};
};

inline constexpr double kGradFloor = 1e-10;  // on |grad phi|^2

InterfaceGeometry interface_geometry_from_grad(const Vec2& grad_phi);
InterfaceGeometry interface_geometry(const ScalarField& phi, int tri, double xi, double eta);

// P : grad(v) with Jacobian convention jac[i][j] = d v_i / d x_j.
double surface_divergence(const Mat2& jacobian, const InterfaceGeometry& geom);

// Jacobian of a vector field at a reference point of a triangle.
Mat2 velocity_jacobian(const VectorField& v, int tri, double xi, double eta);

// Local gather of the coefficients a field contributes to one triangle.
void gather_local(const ScalarField& field, const DofMap& dofs, int tri, double out[6]);

}  // namespace vesicle
