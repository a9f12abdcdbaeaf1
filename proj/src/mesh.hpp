#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace vesicle {

struct Rect {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
};

enum class Boundary : std::uint8_t { Interior = 0, Left, Right, Bottom, Top };

using Vec2 = std::array<double, 2>;

// Uniform triangulation of a rectangle: every grid cell is split along its
// SW-NE diagonal into a lower and an upper triangle, both counterclockwise.
// Nodes (vertices and edge midpoints) carry a boundary tag; corner vertices
// are tagged Top/Bottom so that wall conditions cover the full moving walls.
struct Mesh {
  Rect domain;
  int nx = 0, ny = 0;

  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;   // vertex ids, CCW
  std::vector<std::array<int, 2>> edges;       // (vmin, vmax)
  std::vector<std::array<int, 3>> tri_edges;   // edge ids (v0v1, v1v2, v2v0)
  std::vector<Boundary> node_tags;             // per P2 node: vertices then edges

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  double hx() const { return domain.width() / nx; }
  double hy() const { return domain.height() / ny; }

  // Position of a P2 node (vertex or edge midpoint).
  Vec2 node_position(int node) const;
};

Mesh build_uniform(const Rect& domain, int nx, int ny);

enum class Space { P1, P2 };

// Global index per (triangle, local node). P1 locals 0..2 are the triangle
// vertices; P2 adds locals 3..5 for the edge midpoints opposite the usual
// (v0v1, v1v2, v2v0) ordering of the reference midpoints.
struct DofMap {
  Space space = Space::P2;
  const Mesh* mesh = nullptr;
  int count = 0;

  DofMap() = default;
  DofMap(const Mesh& m, Space s);

  int locals_per_tri() const { return space == Space::P1 ? 3 : 6; }
  int global(int tri, int local) const {
    const auto& tv = mesh->triangles[tri];
    if (local < 3) return tv[local];
    return mesh->num_vertices() + mesh->tri_edges[tri][local - 3];
  }
  Boundary node_tag(int dof) const { return mesh->node_tags[dof]; }
};

// Quadrature on the reference triangle {(x,y) : x,y >= 0, x+y <= 1}.
// Weights sum to the reference area 1/2; a physical integral is
// det(J) * sum_q w_q f(x_q).
struct QuadratureRule {
  int degree = 0;
  std::vector<Vec2> points;      // (xi, eta)
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
  static const QuadratureRule& triangle_degree5();
};

// Affine map data of one triangle.
struct TriGeom {
  Vec2 p0;
  double jac[2][2];      // columns (p1-p0), (p2-p0)
  double inv_jt[2][2];   // inverse transpose, maps reference to physical grads
  double det;            // = 2 * area > 0
  Vec2 to_physical(double xi, double eta) const {
    return {p0[0] + jac[0][0] * xi + jac[0][1] * eta,
            p0[1] + jac[1][0] * xi + jac[1][1] * eta};
  }
};

TriGeom tri_geometry(const Mesh& mesh, int tri);

// Reference shape values/gradients. P1 locals follow the triangle vertices,
// P2 adds midpoints at (1/2,0), (1/2,1/2), (0,1/2).
void p1_values(double xi, double eta, double out[3]);
void p1_grads(double out[3][2]);
void p2_values(double xi, double eta, double out[6]);
void p2_grads(double xi, double eta, double out[6][2]);

// Sum of mapped quadrature over all triangles of a pointwise integrand f(x,y).
template <class F>
double integrate(const Mesh& mesh, const QuadratureRule& quad, F&& f) {
  double total = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriGeom g = tri_geometry(mesh, t);
    double local = 0.0;
    for (int q = 0; q < quad.size(); ++q) {
      const Vec2 x = g.to_physical(quad.points[q][0], quad.points[q][1]);
      local += quad.weights[q] * f(x[0], x[1]);
    }
    total += g.det * local;
  }
  return total;
}

}  // namespace vesicle
