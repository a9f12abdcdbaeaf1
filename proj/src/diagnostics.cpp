#include "diagnostics.hpp"

#include <cmath>

#include "assembly.hpp"
#include "common.hpp"

namespace vesicle {

std::pair<double, double> stretching_errors(const ScalarField& phi, const VectorField& v,
                                            const ScalarField& c, double eps) {
  const Mesh& mesh = *phi.mesh;
  const DofMap dofs(mesh, Space::P2);
  const QuadBasis& qb = QuadBasis::degree5();
  double e_v = 0.0, e_c = 0.0;
  TriQuadData td;
  double phi_local[6], c_local[6], vx_local[6], vy_local[6];
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    td.build(mesh, t, qb);
    gather_local(phi, dofs, t, phi_local);
    gather_local(c, dofs, t, c_local);
    gather_local(v.x, dofs, t, vx_local);
    gather_local(v.y, dofs, t, vy_local);
    for (int q = 0; q < qb.nq; ++q) {
      const double phi_q = td.value_p2(qb, q, phi_local);
      const double well = 1.0 - phi_q * phi_q;
      const double weight = td.wq[q] * well * well / eps;
      const InterfaceGeometry geom = interface_geometry_from_grad(td.grad_p2(q, phi_local));
      Mat2 jac = {{{0.0, 0.0}, {0.0, 0.0}}};
      for (int b = 0; b < 6; ++b) {
        jac[0][0] += vx_local[b] * td.p2g[q][b][0];
        jac[0][1] += vx_local[b] * td.p2g[q][b][1];
        jac[1][0] += vy_local[b] * td.p2g[q][b][0];
        jac[1][1] += vy_local[b] * td.p2g[q][b][1];
      }
      e_v += weight * std::abs(surface_divergence(jac, geom));
      // Nodal ratio (c-1)/c interpolated to the quadrature point, with the
      // same floor as the c-equation; exactly zero when c = 1 at the DOFs.
      double ratio_q = 0.0;
      for (int b = 0; b < 6; ++b) {
        const double cb = std::max(c_local[b], 1e-3);
        ratio_q += (cb - 1.0) / cb * qb.p2[q][b];
      }
      e_c += weight * std::abs(ratio_q);
    }
  }
  return {e_v, e_c};
}

double inclination_angle_raw(const ScalarField& phi, bool* degenerate) {
  const Mesh& mesh = *phi.mesh;
  const DofMap dofs(mesh, Space::P2);
  const QuadBasis& qb = QuadBasis::degree5();

  double mass = 0.0, cx = 0.0, cy = 0.0;
  TriQuadData td;
  double phi_local[6];
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    td.build(mesh, t, qb);
    gather_local(phi, dofs, t, phi_local);
    for (int q = 0; q < qb.nq; ++q) {
      const double ind = 0.5 * (td.value_p2(qb, q, phi_local) + 1.0);
      mass += td.wq[q] * ind;
      cx += td.wq[q] * ind * td.xq[q][0];
      cy += td.wq[q] * ind * td.xq[q][1];
    }
  }
  if (degenerate) *degenerate = false;
  if (!(mass > 1e-12 * mesh.domain.area())) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  cx /= mass;
  cy /= mass;

  double mxx = 0.0, mxy = 0.0, myy = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    td.build(mesh, t, qb);
    gather_local(phi, dofs, t, phi_local);
    for (int q = 0; q < qb.nq; ++q) {
      const double ind = 0.5 * (td.value_p2(qb, q, phi_local) + 1.0);
      const double dx = td.xq[q][0] - cx, dy = td.xq[q][1] - cy;
      mxx += td.wq[q] * ind * dx * dx;
      mxy += td.wq[q] * ind * dx * dy;
      myy += td.wq[q] * ind * dy * dy;
    }
  }
  const double gap = std::hypot(mxx - myy, 2.0 * mxy);
  if (gap < 1e-10 * (mxx + myy)) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  // Major-axis direction of the symmetric 2x2 moment tensor, in (-90, 90].
  // A vertical axis sits on the branch cut; the band absorbs the quadrature
  // asymmetry of the diagonal mesh split (1e-4 deg at coarse resolution) and
  // pins near-vertical to +90.
  double angle = 0.5 * std::atan2(2.0 * mxy, mxx - myy) * 180.0 / M_PI;
  if (angle <= -90.0 + 1e-3) angle += 180.0;
  return angle;
}

double AngleTracker::update(const ScalarField& phi) {
  bool degenerate = false;
  const double raw = inclination_angle_raw(phi, &degenerate);
  if (degenerate) {
    log_warn("inclination angle: near-degenerate moment tensor, holding previous angle");
    return angle_;
  }
  if (!started_) {
    angle_ = raw;
    started_ = true;
    return angle_;
  }
  double unwrapped = raw;
  while (unwrapped - angle_ > 90.0) unwrapped -= 180.0;
  while (unwrapped - angle_ < -90.0) unwrapped += 180.0;
  angle_ = unwrapped;
  return angle_;
}

CsvWriter::CsvWriter(const std::string& path) {
  file_ = std::fopen(path.c_str(), "w");
  if (!file_) throw IoError("cannot open CSV for writing: " + path);
  std::fputs(kCsvHeader, file_);
  std::fputc('\n', file_);
  std::fflush(file_);
}

CsvWriter::~CsvWriter() {
  if (file_) std::fclose(file_);
}

CsvWriter::CsvWriter(CsvWriter&& other) noexcept : file_(other.file_) { other.file_ = nullptr; }

CsvWriter& CsvWriter::operator=(CsvWriter&& other) noexcept {
  if (this != &other) {
    if (file_) std::fclose(file_);
    file_ = other.file_;
    other.file_ = nullptr;
  }
  return *this;
}

void CsvWriter::append(const DiagRecord& rec) {
  std::fputs(csv_row(rec).c_str(), file_);
  std::fputc('\n', file_);
  std::fflush(file_);
}

const char* const kCsvHeader =
    "t,V,A,E_v,E_c,angle_deg,lambda_global,lambda_volume,flow_residual,phi_residual";

std::string csv_row(const DiagRecord& r) {
  return format_string("%.17e,%.17e,%.17e,%.17e,%.17e,%.17e,%.17e,%.17e,%.17e,%.17e", r.t, r.volume,
                       r.area, r.e_v, r.e_c, r.angle_deg, r.lambda_global, r.lambda_volume,
                       r.flow_residual, r.phi_residual);
}

}  // namespace vesicle
