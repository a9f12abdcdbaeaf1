#include "assembly.hpp"

namespace vesicle {

const QuadBasis& QuadBasis::degree5() {
  static const QuadBasis qb = [] {
    QuadBasis b;
    const QuadratureRule& rule = QuadratureRule::triangle_degree5();
    b.nq = rule.size();
    for (int q = 0; q < b.nq; ++q) {
      b.w[q] = rule.weights[q];
      b.pts[q] = rule.points[q];
      p1_values(rule.points[q][0], rule.points[q][1], b.p1[q]);
      p2_values(rule.points[q][0], rule.points[q][1], b.p2[q]);
      p2_grads(rule.points[q][0], rule.points[q][1], b.p2g_ref[q]);
    }
    p1_grads(b.p1g_ref);
    return b;
  }();
  return qb;
}

}  // namespace vesicle
