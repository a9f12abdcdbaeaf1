#pragma once

#include <cstdint>
#include <string>

#include "flow.hpp"
#include "mesh.hpp"

namespace vesicle {

// Full description of one simulation. Defaults reproduce the reference shear
// experiment: [0,4]^2 domain, walls moving at +-10, a y-oriented ellipse of
// semi-axes (0.5, 1.25) in the center, Model C, eps = 0.03 on a 128^2 grid.
struct SimConfig {
  ModelVariant model = ModelVariant::C;
  Rect domain = {0.0, 4.0, 0.0, 4.0};
  int nx = 128, ny = 128;

  double re = 1.0;
  double be = 20.0;
  double h0 = 0.0;
  double visc_ratio = 10.0;
  double dens_ratio = 1.0;
  double shear_speed = 10.0;

  double epsilon = 0.03;
  double tau = 5.0e-4;
  double t_end = 8.0;
  double eta = 0.1;
  double xi = 1.0;
  double theta = 0.01;
  double solver_tol = 1e-10;

  Vec2 ellipse_center = {2.0, 2.0};
  Vec2 ellipse_semi_axes = {0.5, 1.25};

  std::string csv_name = "diagnostics.csv";
  int snapshot_stride = 0;  // 0 disables field snapshots

  int total_steps() const;
  PhaseParams phase_params() const { return {epsilon, h0, eta, re * be}; }
  FlowParams flow_params() const {
    // The Hooke relaxation rate is fixed to the inverse time step.
    return {re, visc_ratio, dens_ratio, xi, 1.0 / tau, shear_speed};
  }
};

// Grid spacing allowed per unit of interface thickness (h <= epsilon * this).
inline constexpr double kResolutionRatio = 0.03125 / 0.03;

// Throws ValidationError naming the offending key.
void validate(const SimConfig& config);

// Key-value text config (TOML syntax, flat keys). Unknown keys are hard
// errors; missing keys take the defaults above. Parse errors carry the line
// number. validate_now=false defers the consistency checks (used while
// applying overrides in arbitrary order).
SimConfig parse_config_text(const std::string& text, bool validate_now = true);
SimConfig parse_config_file(const std::string& path);

// Canonical echo of the effective config; re-parsing yields an identical
// config.
std::string config_echo(const SimConfig& config);
std::uint64_t config_hash(const SimConfig& config);

const char* model_name(ModelVariant variant);

}  // namespace vesicle
