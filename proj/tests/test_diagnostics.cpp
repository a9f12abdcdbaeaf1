#include <cmath>

#include "diagnostics.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "phasefield.hpp"

using namespace vesicle;

namespace {

ScalarField circle_phi(const Mesh& mesh, double eps, double cx, double cy, double radius) {
  ScalarField phi(mesh, Space::P2);
  phi.set_from([=](double x, double y) {
    const double r = std::hypot(x - cx, y - cy);
    return std::tanh(-(r - radius) / (std::sqrt(2.0) * eps));
  });
  return phi;
}

ScalarField rotated_ellipse_phi(const Mesh& mesh, double eps, double a, double b,
                                double angle_deg) {
  // Major axis of the (a < b) ellipse rotated to angle_deg from the +x axis;
  // unrotated it points along +y (90 degrees).
  const double rot = (angle_deg - 90.0) * M_PI / 180.0;
  ScalarField phi(mesh, Space::P2);
  phi.set_from([=](double x, double y) {
    const double dx = x - 2.0, dy = y - 2.0;
    const double u = std::cos(rot) * dx + std::sin(rot) * dy;
    const double v = -std::sin(rot) * dx + std::cos(rot) * dy;
    return std::tanh(-ellipse_signed_distance(a, b, u, v) / (std::sqrt(2.0) * eps));
  });
  return phi;
}

}  // namespace

TEST_CASE("stretching errors vanish for rigid motion and unit concentration") {
  const Mesh mesh = build_uniform({0, 4, 0, 4}, 32, 32);
  const double eps = 0.12;
  const ScalarField phi = circle_phi(mesh, eps, 2.0, 2.0, 1.0);
  VectorField v(mesh, Space::P2);
  v.x.set_from([](double, double y) { return 1.3 - 0.7 * (y - 2.0); });
  v.y.set_from([](double x, double) { return 0.7 * (x - 2.0); });
  const ScalarField c(mesh, Space::P2, 1.0);
  const auto [e_v, e_c] = stretching_errors(phi, v, c, eps);
  CHECK(e_v < 1e-10);
  CHECK(e_c == 0.0);
}

TEST_CASE("accumulated stretching of a uniform c = 2 matches the profile oracle") {
  const double eps = 0.03;
  const Mesh mesh = build_uniform({0, 4, 0, 4}, 128, 128);
  const ScalarField phi = circle_phi(mesh, eps, 2.0, 2.0, 1.0);
  const VectorField v(mesh, Space::P2);
  const ScalarField c(mesh, Space::P2, 2.0);
  const auto [e_v, e_c] = stretching_errors(phi, v, c, eps);
  CHECK(e_v == 0.0);
  const double line_density = test::tanh_ec_weight_line_density(eps);
  CHECK(line_density == doctest::Approx(4.0 * std::sqrt(2.0) / 3.0).epsilon(1e-8));
  CHECK(e_c == doctest::Approx(0.5 * line_density * 2.0 * M_PI).epsilon(0.02));
}

TEST_CASE("stretching errors are invariant under rigid translation") {
  // Sharp enough interface that the tanh tails at the walls are below
  // roundoff; the two placements then integrate identical multisets.
  const double eps = 0.06;
  const Mesh mesh = build_uniform({0, 4, 0, 4}, 64, 64);
  const auto compute = [&](double cx, double cy) {
    const ScalarField phi = circle_phi(mesh, eps, cx, cy, 0.8);
    VectorField v(mesh, Space::P2);
    v.x.set_from([=](double x, double y) { return std::sin(y - cy) + 0.2 * (x - cx); });
    v.y.set_from([=](double x, double y) { return std::cos(x - cx) - 0.2 * (y - cy); });
    ScalarField c(mesh, Space::P2);
    c.set_from([=](double x, double y) { return 1.0 + 0.1 * std::sin(x - cx) * std::sin(y - cy); });
    return stretching_errors(phi, v, c, eps);
  };
  // Shift by an exact multiple of the grid spacing.
  const auto [ev1, ec1] = compute(1.5, 1.5);
  const auto [ev2, ec2] = compute(2.5, 2.5);
  CHECK(ev1 == doctest::Approx(ev2).epsilon(1e-10));
  CHECK(ec1 == doctest::Approx(ec2).epsilon(1e-10));
}

TEST_CASE("inclination angle of axis-aligned and rotated ellipses") {
  const Mesh mesh = build_uniform({0, 4, 0, 4}, 64, 64);
  const double eps = 0.06;
  // y-oriented ellipse: major axis vertical (branch cut pins it to +90).
  CHECK(inclination_angle_raw(rotated_ellipse_phi(mesh, eps, 0.5, 1.25, 90.0)) ==
        doctest::Approx(90.0).epsilon(1e-6));
  // x-oriented: swap the axes.
  {
    ScalarField phi(mesh, Space::P2);
    phi.set_from([=](double x, double y) {
      return std::tanh(-ellipse_signed_distance(1.25, 0.5, x - 2.0, y - 2.0) /
                       (std::sqrt(2.0) * eps));
    });
    CHECK(std::abs(inclination_angle_raw(phi)) < 0.5);
  }
  // Rotated by -30 degrees from the y-axis.
  CHECK(inclination_angle_raw(rotated_ellipse_phi(mesh, eps, 0.5, 1.25, 60.0)) ==
        doctest::Approx(60.0).epsilon(0.01));
  // Orientation does not depend on the vesicle size (moment scaling).
  CHECK(inclination_angle_raw(rotated_ellipse_phi(mesh, eps, 0.3, 0.75, 60.0)) ==
        doctest::Approx(60.0).epsilon(0.01));
}

TEST_CASE("angle tracker unwraps through -90 degrees") {
  const Mesh mesh = build_uniform({0, 4, 0, 4}, 48, 48);
  const double eps = 0.08;
  AngleTracker tracker;
  tracker.restore(-85.0, true);
  // Raw angle +85 is 5 degrees past -90 for a clockwise-rotating vesicle.
  const double unwrapped = tracker.update(rotated_ellipse_phi(mesh, eps, 0.5, 1.25, 85.0));
  CHECK(unwrapped == doctest::Approx(-95.0).epsilon(0.01));
  CHECK(tracker.current() == doctest::Approx(unwrapped));

  // A degenerate moment tensor holds the previous angle.
  AngleTracker held;
  held.restore(42.0, true);
  ScalarField empty(mesh, Space::P2, -1.0);
  CHECK(held.update(empty) == 42.0);
}

TEST_CASE("csv rows carry full precision and the documented column order") {
  CHECK(std::string(kCsvHeader) ==
        "t,V,A,E_v,E_c,angle_deg,lambda_global,lambda_volume,flow_residual,phi_residual");
  DiagRecord rec;
  rec.t = 1.0 / 3.0;
  rec.volume = M_PI;
  rec.angle_deg = -95.5;
  const std::string row = csv_row(rec);
  CHECK(row.find("3.14159265358979312e+00") != std::string::npos);
  CHECK(row.find("3.33333333333333315e-01") != std::string::npos);
  // 10 columns.
  CHECK(std::count(row.begin(), row.end(), ',') == 9);
}
