#include <cmath>
#include <cstring>
#include <map>

#include "common.hpp"
#include "doctest.h"
#include "flow.hpp"

using namespace vesicle;

namespace {

PhaseState uniform_phase(const Mesh& mesh, const PhaseParams& params, double value) {
  PhaseState state;
  state.phi = ScalarField(mesh, Space::P2, value);
  state.f_c = ScalarField(mesh, Space::P2);
  state.f = ScalarField(mesh, Space::P2);
  state.g = ScalarField(mesh, Space::P2);
  bending_chain(state, params, state.phi);
  return state;
}

PhaseState circle_phase(const Mesh& mesh, const PhaseParams& params, double radius) {
  PhaseState state;
  state.phi = ScalarField(mesh, Space::P2);
  const double eps = params.eps;
  state.phi.set_from([eps, radius](double x, double y) {
    const double r = std::hypot(x - 2.0, y - 2.0);
    return std::tanh(-(r - radius) / (std::sqrt(2.0) * eps));
  });
  state.f_c = ScalarField(mesh, Space::P2);
  state.f = ScalarField(mesh, Space::P2);
  state.g = ScalarField(mesh, Space::P2);
  bending_chain(state, params, state.phi);
  return state;
}

double max_speed(const FlowState& state) {
  double m = 0.0;
  for (int i = 0; i < state.v.x.size(); ++i)
    m = std::max(m, std::hypot(state.v.x.coeffs[i], state.v.y.coeffs[i]));
  return m;
}

}  // namespace

TEST_CASE("material properties interpolate the phase ratios") {
  FlowParams params;
  params.visc_ratio = 10.0;
  params.dens_ratio = 1.0;
  CHECK(material_properties(1.0, params).second == doctest::Approx(10.0));
  CHECK(material_properties(-1.0, params).first == doctest::Approx(1.0));
  CHECK(material_properties(0.0, params).second == doctest::Approx(5.5));
  // Overshoot clamps at the floor instead of going negative.
  CHECK(material_properties(-1.5, params).second == doctest::Approx(0.01 * 1.0));
  CHECK(material_properties(-1.5, params).first > 0.0);
}

TEST_CASE("hooke relaxation source") {
  InterfaceGeometry geom;
  geom.delta = 10.0;
  CHECK(hooke_rhs(1.0, geom, 2000.0) == 0.0);
  CHECK(hooke_rhs(2.0, geom, 2000.0) == doctest::Approx(10000.0));
  CHECK(hooke_rhs(0.5, geom, 2000.0) == doctest::Approx(-20000.0));
  // Values below the floor are clamped.
  CHECK(hooke_rhs(1e-6, geom, 2000.0) == doctest::Approx(2000.0 * (1e-3 - 1.0) / 1e-3 * 10.0));
}

TEST_CASE("steady Couette flow is recovered exactly without a vesicle") {
  const Mesh mesh = build_uniform({0, 4, 0, 4}, 32, 32);
  const PhaseParams phase_params{0.25, 0.0, 0.1, 20.0};
  FlowParams params;
  params.re = 1.0;
  params.visc_ratio = 10.0;
  params.shear_speed = 10.0;
  const PhaseState phase = uniform_phase(mesh, phase_params, -1.0);
  const ScalarField c(mesh, Space::P2, 1.0);

  for (ModelVariant variant : {ModelVariant::A, ModelVariant::B}) {
    CAPTURE(static_cast<int>(variant));
    FlowSolver solver(mesh, variant, params, phase_params);
    FlowState state = make_initial_flow(mesh, params);
    SolveReport report;
    for (int n = 0; n < 30; ++n) state = solver.solve(state, phase, c, {0.0, 0.0}, 20.0, &report);
    CHECK(report.converged);

    double err_vx = 0.0, err_vy = 0.0;
    for (int i = 0; i < state.v.x.size(); ++i) {
      const Vec2 p = mesh.node_position(i);
      err_vx = std::max(err_vx, std::abs(state.v.x.coeffs[i] - 5.0 * (p[1] - 2.0)));
      err_vy = std::max(err_vy, std::abs(state.v.y.coeffs[i]));
    }
    CHECK(err_vx < 1e-6);
    CHECK(err_vy < 1e-6);
    // The pinned multiplier stays at its constant (zero).
    for (double l : state.lambda_local.coeffs) CHECK(std::abs(l) < 1e-12);
  }
}

TEST_CASE("lambda block reduces to a pinned constant when the interface is absent") {
  // phi identically 0 zeroes the extension coefficient entirely; the pinned
  // fallback must still produce a well-posed system and lambda = constant 0.
  const Mesh mesh = build_uniform({0, 4, 0, 4}, 16, 16);
  const PhaseParams phase_params{0.25, 0.0, 0.1, 20.0};
  FlowParams params;
  params.shear_speed = 10.0;
  const PhaseState phase = uniform_phase(mesh, phase_params, 0.0);
  const ScalarField c(mesh, Space::P2, 1.0);
  FlowSolver solver(mesh, ModelVariant::B, params, phase_params);
  FlowState state = make_initial_flow(mesh, params);
  SolveReport report;
  state = solver.solve(state, phase, c, {0.0, 0.0}, 1.0, &report);
  CHECK(report.converged);
  for (double l : state.lambda_local.coeffs) CHECK(std::abs(l) < 1e-12);
}

TEST_CASE("Model B and Model C assemble identical systems at c = 1") {
  const Mesh mesh = build_uniform({0, 4, 0, 4}, 24, 24);
  const PhaseParams phase_params{0.18, 0.0, 0.1, 20.0};
  FlowParams params;
  params.zeta = 1.0 / 5e-4;
  const PhaseState phase = circle_phase(mesh, phase_params, 1.0);
  const ScalarField c(mesh, Space::P2, 1.0);
  const GlobalMultipliers multipliers{0.3, -0.2};
  const FlowState prev = make_initial_flow(mesh, params);

  FlowSolver solver_b(mesh, ModelVariant::B, params, phase_params);
  FlowSolver solver_c(mesh, ModelVariant::C, params, phase_params);
  const auto sys_b = solver_b.assemble(prev, phase, c, multipliers, 5e-4);
  const auto sys_c = solver_c.assemble(prev, phase, c, multipliers, 5e-4);

  REQUIRE(sys_b.matrix->nnz() == sys_c.matrix->nnz());
  CHECK(std::memcmp(sys_b.matrix->values().data(), sys_c.matrix->values().data(),
                    sys_b.matrix->values().size() * sizeof(double)) == 0);
  CHECK(std::memcmp(sys_b.matrix->col_idx().data(), sys_c.matrix->col_idx().data(),
                    sys_b.matrix->col_idx().size() * sizeof(int)) == 0);
  REQUIRE(sys_b.rhs->size() == sys_c.rhs->size());
  CHECK(std::memcmp(sys_b.rhs->data(), sys_c.rhs->data(), sys_b.rhs->size() * sizeof(double)) == 0);
}

TEST_CASE("discrete continuity residual vanishes for converged solves") {
  const Mesh mesh = build_uniform({0, 4, 0, 4}, 24, 24);
  const PhaseParams phase_params{0.18, 0.0, 0.1, 20.0};
  FlowParams params;
  params.shear_speed = 10.0;
  const PhaseState phase = circle_phase(mesh, phase_params, 1.0);
  const ScalarField c(mesh, Space::P2, 1.0);
  FlowSolver solver(mesh, ModelVariant::B, params, phase_params);
  FlowState state = make_initial_flow(mesh, params);
  SolveReport report;
  state = solver.solve(state, phase, c, {0.0, 0.0}, 5e-4, &report);
  REQUIRE(report.converged);
  CHECK(solver.continuity_residual(state) <= 1e-8 * std::max(1.0, max_speed(state)));
}

TEST_CASE("spurious currents shrink under mesh refinement at fixed eps") {
  // Equilibrated circle, no wall motion: any velocity is numerical error.
  const double eps = 0.12;
  double max_v[2];
  for (int level = 0; level < 2; ++level) {
    const int nx = 32 << level;
    const Mesh mesh = build_uniform({0, 4, 0, 4}, nx, nx);
    const PhaseParams phase_params{eps, 0.0, 0.1, 20.0};
    FlowParams params;
    params.shear_speed = 0.0;
    const PhaseState phase = circle_phase(mesh, phase_params, 1.0);
    const ScalarField c(mesh, Space::P2, 1.0);
    FlowSolver solver(mesh, ModelVariant::B, params, phase_params);
    FlowState state = make_initial_flow(mesh, params);
    for (int n = 0; n < 3; ++n) state = solver.solve(state, phase, c, {0.0, 0.0}, 1e-3);
    max_v[level] = max_speed(state);
  }
  CHECK(max_v[1] <= 0.6 * max_v[0]);
}

TEST_CASE("shear setup is equivariant under 180-degree rotation") {
  // Rotating the initial data about the domain center and negating the
  // velocity maps solutions to solutions (the walls swap roles), which is the
  // mirror-plus-negated-walls symmetry composed with a streamwise mirror.
  const Mesh mesh = build_uniform({0, 4, 0, 4}, 24, 24);
  const PhaseParams phase_params{0.18, 0.0, 0.1, 20.0};
  FlowParams params;
  params.shear_speed = 10.0;
  const ScalarField c(mesh, Space::P2, 1.0);

  const auto offset_circle = [&](double dy) {
    PhaseState state;
    state.phi = ScalarField(mesh, Space::P2);
    state.phi.set_from([&](double x, double y) {
      const double r = std::hypot(x - 2.0, y - (2.0 + dy));
      return std::tanh(-(r - 0.8) / (std::sqrt(2.0) * phase_params.eps));
    });
    state.f_c = ScalarField(mesh, Space::P2);
    state.f = ScalarField(mesh, Space::P2);
    state.g = ScalarField(mesh, Space::P2);
    bending_chain(state, phase_params, state.phi);
    return state;
  };

  FlowSolver solver_up(mesh, ModelVariant::B, params, phase_params);
  FlowSolver solver_down(mesh, ModelVariant::B, params, phase_params);
  const FlowState init = make_initial_flow(mesh, params);
  const FlowState up = solver_up.solve(init, offset_circle(0.4), c, {0.0, 0.0}, 5e-4);
  const FlowState down = solver_down.solve(init, offset_circle(-0.4), c, {0.0, 0.0}, 5e-4);

  std::map<std::pair<long, long>, int> index;
  const int n2 = up.v.x.size();
  const auto key = [&](double x, double y) {
    return std::pair<long, long>(std::lround(x * 1e6), std::lround(y * 1e6));
  };
  for (int i = 0; i < n2; ++i) {
    const Vec2 p = mesh.node_position(i);
    index[key(p[0], p[1])] = i;
  }
  double max_mismatch = 0.0;
  for (int i = 0; i < n2; ++i) {
    const Vec2 p = mesh.node_position(i);
    const int j = index.at(key(4.0 - p[0], 4.0 - p[1]));
    max_mismatch = std::max(max_mismatch, std::abs(up.v.x.coeffs[i] + down.v.x.coeffs[j]));
    max_mismatch = std::max(max_mismatch, std::abs(up.v.y.coeffs[i] + down.v.y.coeffs[j]));
  }
  CHECK(max_mismatch < 1e-7 * std::max(1.0, max_speed(up)));
}
