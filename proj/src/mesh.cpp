#include "mesh.hpp"

#include <cmath>

#include "common.hpp"

namespace vesicle {

Vec2 Mesh::node_position(int node) const {
  if (node < num_vertices()) return vertices[node];
  const auto& e = edges[node - num_vertices()];
  const Vec2& a = vertices[e[0]];
  const Vec2& b = vertices[e[1]];
  return {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
}

namespace {

Boundary classify(const Rect& d, double x, double y) {
  if (y == d.y1) return Boundary::Top;
  if (y == d.y0) return Boundary::Bottom;
  if (x == d.x0) return Boundary::Left;
  if (x == d.x1) return Boundary::Right;
  return Boundary::Interior;
}

}  // namespace

Mesh build_uniform(const Rect& domain, int nx, int ny) {
  if (nx < 1 || ny < 1)
    throw ValidationError(format_string("build_uniform: cell counts must be positive (nx=%d, ny=%d)", nx, ny));
  if (!(domain.x1 > domain.x0) || !(domain.y1 > domain.y0))
    throw ValidationError("build_uniform: degenerate rectangle");

  Mesh m;
  m.domain = domain;
  m.nx = nx;
  m.ny = ny;

  const int nvx = nx + 1, nvy = ny + 1;
  m.vertices.resize(static_cast<std::size_t>(nvx) * nvy);
  for (int j = 0; j < nvy; ++j) {
    // Endpoints are set exactly so boundary classification needs no tolerance.
    const double y = (j == ny) ? domain.y1 : domain.y0 + j * domain.height() / ny;
    for (int i = 0; i < nvx; ++i) {
      const double x = (i == nx) ? domain.x1 : domain.x0 + i * domain.width() / nx;
      m.vertices[static_cast<std::size_t>(j) * nvx + i] = {x, y};
    }
  }
  const auto vid = [nvx](int i, int j) { return j * nvx + i; };

  // Edge ids: horizontal block, then vertical, then SW-NE diagonals.
  const int nh = nx * nvy;
  const int nv = nvx * ny;
  const auto h_edge = [&](int i, int j) { return j * nx + i; };
  const auto v_edge = [&](int i, int j) { return nh + j * nvx + i; };
  const auto d_edge = [&](int i, int j) { return nh + nv + j * nx + i; };

  m.edges.resize(static_cast<std::size_t>(nh + nv + nx * ny));
  for (int j = 0; j < nvy; ++j)
    for (int i = 0; i < nx; ++i) m.edges[h_edge(i, j)] = {vid(i, j), vid(i + 1, j)};
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nvx; ++i) m.edges[v_edge(i, j)] = {vid(i, j), vid(i, j + 1)};
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) m.edges[d_edge(i, j)] = {vid(i, j), vid(i + 1, j + 1)};

  m.triangles.reserve(static_cast<std::size_t>(2) * nx * ny);
  m.tri_edges.reserve(m.triangles.capacity());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int sw = vid(i, j), se = vid(i + 1, j), ne = vid(i + 1, j + 1), nw = vid(i, j + 1);
      m.triangles.push_back({sw, se, ne});
      m.tri_edges.push_back({h_edge(i, j), v_edge(i + 1, j), d_edge(i, j)});
      m.triangles.push_back({sw, ne, nw});
      m.tri_edges.push_back({d_edge(i, j), h_edge(i, j + 1), v_edge(i, j)});
    }
  }

  m.node_tags.resize(static_cast<std::size_t>(m.num_vertices()) + m.num_edges());
  for (int v = 0; v < m.num_vertices(); ++v)
    m.node_tags[v] = classify(domain, m.vertices[v][0], m.vertices[v][1]);
  for (int e = 0; e < m.num_edges(); ++e) {
    const Vec2 p = m.node_position(m.num_vertices() + e);
    m.node_tags[m.num_vertices() + e] = classify(domain, p[0], p[1]);
  }
  return m;
}

DofMap::DofMap(const Mesh& m, Space s) : space(s), mesh(&m) {
  count = (s == Space::P1) ? m.num_vertices() : m.num_vertices() + m.num_edges();
}

const QuadratureRule& QuadratureRule::triangle_degree5() {
  // 7-point rule, exact through degree 5.
  static const QuadratureRule rule = [] {
    QuadratureRule r;
    r.degree = 5;
    const double s = std::sqrt(15.0);
    const double a = (6.0 - s) / 21.0;
    const double b = (6.0 + s) / 21.0;
    const double wa = (155.0 - s) / 1200.0 * 0.5;
    const double wb = (155.0 + s) / 1200.0 * 0.5;
    r.points = {{1.0 / 3.0, 1.0 / 3.0},
                {a, a}, {1.0 - 2.0 * a, a}, {a, 1.0 - 2.0 * a},
                {b, b}, {1.0 - 2.0 * b, b}, {b, 1.0 - 2.0 * b}};
    r.weights = {9.0 / 40.0 * 0.5, wa, wa, wa, wb, wb, wb};
    return r;
  }();
  return rule;
}

TriGeom tri_geometry(const Mesh& mesh, int tri) {
  const auto& tv = mesh.triangles[tri];
  const Vec2& a = mesh.vertices[tv[0]];
  const Vec2& b = mesh.vertices[tv[1]];
  const Vec2& c = mesh.vertices[tv[2]];
  TriGeom g;
  g.p0 = a;
  g.jac[0][0] = b[0] - a[0];
  g.jac[0][1] = c[0] - a[0];
  g.jac[1][0] = b[1] - a[1];
  g.jac[1][1] = c[1] - a[1];
  g.det = g.jac[0][0] * g.jac[1][1] - g.jac[0][1] * g.jac[1][0];
  const double inv = 1.0 / g.det;
  // inv(J)^T
  g.inv_jt[0][0] = g.jac[1][1] * inv;
  g.inv_jt[0][1] = -g.jac[1][0] * inv;
  g.inv_jt[1][0] = -g.jac[0][1] * inv;
  g.inv_jt[1][1] = g.jac[0][0] * inv;
  return g;
}

void p1_values(double xi, double eta, double out[3]) {
  out[0] = 1.0 - xi - eta;
  out[1] = xi;
  out[2] = eta;
}

void p1_grads(double out[3][2]) {
  out[0][0] = -1.0; out[0][1] = -1.0;
  out[1][0] = 1.0;  out[1][1] = 0.0;
  out[2][0] = 0.0;  out[2][1] = 1.0;
}

void p2_values(double xi, double eta, double out[6]) {
  const double l0 = 1.0 - xi - eta;
  out[0] = l0 * (2.0 * l0 - 1.0);
  out[1] = xi * (2.0 * xi - 1.0);
  out[2] = eta * (2.0 * eta - 1.0);
  out[3] = 4.0 * l0 * xi;
  out[4] = 4.0 * xi * eta;
  out[5] = 4.0 * eta * l0;
}

void p2_grads(double xi, double eta, double out[6][2]) {
  const double l0 = 1.0 - xi - eta;
  out[0][0] = 1.0 - 4.0 * l0; out[0][1] = 1.0 - 4.0 * l0;
  out[1][0] = 4.0 * xi - 1.0; out[1][1] = 0.0;
  out[2][0] = 0.0;            out[2][1] = 4.0 * eta - 1.0;
  out[3][0] = 4.0 * (l0 - xi); out[3][1] = -4.0 * xi;
  out[4][0] = 4.0 * eta;       out[4][1] = 4.0 * xi;
  out[5][0] = -4.0 * eta;      out[5][1] = 4.0 * (l0 - eta);
}

}  // namespace vesicle
