#include <cmath>

#include "common.hpp"
#include "doctest.h"
#include "multipliers.hpp"
#include "oracles.hpp"

using namespace vesicle;

namespace {

PhaseState manufactured_state(const Mesh& mesh) {
  PhaseState state;
  state.phi = ScalarField(mesh, Space::P2);
  state.phi.set_from([](double x, double y) { return std::tanh(x - 2.0) * std::cos(0.3 * y); });
  state.f = ScalarField(mesh, Space::P2);
  state.f.set_from([](double x, double y) { return std::sin(0.9 * x) + 0.2 * y; });
  state.g = ScalarField(mesh, Space::P2);
  state.g.set_from([](double x, double y) { return std::cos(0.7 * x) * y - 0.1; });
  state.f_c = state.f;
  return state;
}

}  // namespace

TEST_CASE("zero right-hand side yields zero multipliers") {
  const Mesh mesh = build_uniform({0, 4, 0, 4}, 16, 16);
  const PhaseParams params{0.25, 0.0, 0.1, 20.0};
  PhaseState state;
  state.phi = ScalarField(mesh, Space::P2, 0.3);  // arbitrary uniform level
  state.g = ScalarField(mesh, Space::P2, 0.0);
  state.f = ScalarField(mesh, Space::P2);
  state.f.set_from([](double x, double) { return x; });  // non-constant
  state.f_c = state.f;
  const VectorField v(mesh, Space::P2);

  const auto [vol, area] = volume_area(state.phi, params);
  const GlobalMultipliers m = solve_multipliers(state, v, {vol, area}, params, 5e-4);
  CHECK(std::abs(m.lambda_volume) < 1e-12);
  CHECK(std::abs(m.lambda_global) < 1e-12);
}

TEST_CASE("constant f raises the documented error") {
  const Mesh mesh = build_uniform({0, 4, 0, 4}, 8, 8);
  const PhaseParams params{0.25, 0.0, 0.1, 20.0};
  PhaseState state;
  state.phi = ScalarField(mesh, Space::P2, 0.0);
  state.g = ScalarField(mesh, Space::P2);
  state.g.set_from([](double x, double) { return x; });
  state.f = ScalarField(mesh, Space::P2, 3.0);
  state.f_c = state.f;
  const VectorField v(mesh, Space::P2);
  CHECK_THROWS_WITH_AS(solve_multipliers(state, v, {1.0, 2.0}, params, 5e-4),
                       doctest::Contains("constant"), SolverError);
}

TEST_CASE("numerically vanishing f drops the area row instead of failing") {
  const Mesh mesh = build_uniform({0, 4, 0, 4}, 8, 8);
  const PhaseParams params{0.25, 0.0, 0.1, 20.0};
  PhaseState state;
  state.phi = ScalarField(mesh, Space::P2, -1.0);
  state.g = ScalarField(mesh, Space::P2, 0.0);
  state.f = ScalarField(mesh, Space::P2, 0.0);
  state.f_c = state.f;
  const VectorField v(mesh, Space::P2);
  const auto [vol, area] = volume_area(state.phi, params);
  const GlobalMultipliers m = solve_multipliers(state, v, {vol, area}, params, 5e-4);
  CHECK(std::abs(m.lambda_global) == 0.0);
  CHECK(std::abs(m.lambda_volume) < 1e-12);
}

TEST_CASE("multiplier solve matches the independent dense quadrature oracle") {
  const Mesh mesh = build_uniform({0, 4, 0, 4}, 12, 12);
  const PhaseParams params{0.25, 0.0, 0.1, 20.0};
  PhaseState state = manufactured_state(mesh);
  VectorField v(mesh, Space::P2);
  v.x.set_from([](double x, double y) { return 0.5 * y - 0.1 * x; });
  v.y.set_from([](double x, double y) { return 0.2 * std::sin(x) + 0.05 * y; });

  // Targets equal to the current functionals: the relaxation terms vanish in
  // both routes and every remaining integrand is a polynomial the rule
  // integrates exactly.
  const auto [vol, area] = volume_area(state.phi, params);
  const GlobalMultipliers got = solve_multipliers(state, v, {vol, area}, params, 5e-4);

  // Independent route: subdivided quadrature + dense 2x2 Cramer solve.
  const auto value_of = [&](const ScalarField& field) {
    return [&field](int t, double xi, double eta) {
      return eval_with_gradient(field, t, xi, eta).value;
    };
  };
  const double omega = mesh.domain.area();
  const double int_f = test::subdivided_integrate(mesh, value_of(state.f));
  const double int_f2 = test::subdivided_integrate(mesh, [&](int t, double xi, double eta) {
    const double f = eval_with_gradient(state.f, t, xi, eta).value;
    return f * f;
  });
  const double int_g = test::subdivided_integrate(mesh, value_of(state.g));
  const double int_advg_f = test::subdivided_integrate(mesh, [&](int t, double xi, double eta) {
    const EvalResult phi = eval_with_gradient(state.phi, t, xi, eta);
    const double vx = eval_with_gradient(v.x, t, xi, eta).value;
    const double vy = eval_with_gradient(v.y, t, xi, eta).value;
    const double f = eval_with_gradient(state.f, t, xi, eta).value;
    const double g = eval_with_gradient(state.g, t, xi, eta).value;
    return ((vx * phi.grad[0] + vy * phi.grad[1]) / params.eta + g) * f;
  });
  const double det = omega * int_f2 - int_f * int_f;
  const double expected_volume = (int_g * int_f2 - int_f * int_advg_f) / det;
  const double expected_global = (omega * int_advg_f - int_f * int_g) / det;

  const double scale = std::max({1.0, std::abs(expected_volume), std::abs(expected_global)});
  CHECK(std::abs(got.lambda_volume - expected_volume) <= 1e-12 * scale);
  CHECK(std::abs(got.lambda_global - expected_global) <= 1e-12 * scale);

  // Relaxation terms enter linearly with the 1/(2 tau) weights (volume error
  // added, area error subtracted).
  const double tau = 5e-4;
  const GlobalMultipliers relaxed =
      solve_multipliers(state, v, {vol + 0.02, area - 0.05}, params, tau);
  const double rhs1 = int_g + 0.02 / (2.0 * tau);
  const double rhs2 = int_advg_f + 0.05 / (2.0 * tau);
  const double exp_vol = (rhs1 * int_f2 - int_f * rhs2) / det;
  const double exp_glob = (omega * rhs2 - int_f * rhs1) / det;
  CHECK(relaxed.lambda_volume ==
        doctest::Approx(exp_vol).epsilon(1e-9));
  CHECK(relaxed.lambda_global == doctest::Approx(exp_glob).epsilon(1e-9));
}
