#pragma once

#include "fields.hpp"
#include "mesh.hpp"

namespace vesicle {

// Reference basis tables at the degree-5 quadrature points, shared by all
// assemblers.
struct QuadBasis {
  static constexpr int kMaxQ = 7;
  int nq = 0;
  double w[kMaxQ] = {};
  Vec2 pts[kMaxQ] = {};
  double p1[kMaxQ][3] = {};
  double p2[kMaxQ][6] = {};
  double p1g_ref[3][2] = {};
  double p2g_ref[kMaxQ][6][2] = {};

  static const QuadBasis& degree5();
};

// Per-triangle, per-quadrature-point physical data built in assembly loops.
struct TriQuadData {
  TriGeom geom;
  double p2g[QuadBasis::kMaxQ][6][2];  // physical P2 gradients
  double p1g[3][2];                    // physical P1 gradients (constant)
  Vec2 xq[QuadBasis::kMaxQ];           // physical quadrature points
  double wq[QuadBasis::kMaxQ];         // det(J) * reference weight

  void build(const Mesh& mesh, int tri, const QuadBasis& qb) {
    geom = tri_geometry(mesh, tri);
    for (int q = 0; q < qb.nq; ++q) {
      wq[q] = geom.det * qb.w[q];
      xq[q] = geom.to_physical(qb.pts[q][0], qb.pts[q][1]);
      for (int a = 0; a < 6; ++a) {
        const double* r = qb.p2g_ref[q][a];
        p2g[q][a][0] = geom.inv_jt[0][0] * r[0] + geom.inv_jt[0][1] * r[1];
        p2g[q][a][1] = geom.inv_jt[1][0] * r[0] + geom.inv_jt[1][1] * r[1];
      }
    }
    double ref[3][2];
    p1_grads(ref);
    for (int a = 0; a < 3; ++a) {
      p1g[a][0] = geom.inv_jt[0][0] * ref[a][0] + geom.inv_jt[0][1] * ref[a][1];
      p1g[a][1] = geom.inv_jt[1][0] * ref[a][0] + geom.inv_jt[1][1] * ref[a][1];
    }
  }

  double value_p2(const QuadBasis& qb, int q, const double local[6]) const {
    double v = 0.0;
    for (int a = 0; a < 6; ++a) v += local[a] * qb.p2[q][a];
    return v;
  }
  Vec2 grad_p2(int q, const double local[6]) const {
    Vec2 g = {0.0, 0.0};
    for (int a = 0; a < 6; ++a) {
      g[0] += local[a] * p2g[q][a][0];
      g[1] += local[a] * p2g[q][a][1];
    }
    return g;
  }
};

}  // namespace vesicle
