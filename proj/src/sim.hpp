#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "common.hpp"
#include "config.hpp"
#include "diagnostics.hpp"
#include "flow.hpp"
#include "multipliers.hpp"
#include "stretch.hpp"

namespace vesicle {

struct SimState {
  int step = 0;
  double time = 0.0;
  PhaseState phase;
  FlowState flow;
  StretchState stretch;
  GlobalMultipliers multipliers;
  ConservationTargets targets;
};

// Records which fields each sub-solve consumed (hashes taken at the moment of
// consumption), for ordering tests.
struct StepTrace {
  std::vector<std::pair<std::string, std::uint64_t>> events;
  void record(const std::string& label, const ScalarField& field) {
    events.emplace_back(label, fnv1a(field.coeffs.data(), field.coeffs.size() * sizeof(double)));
  }
};

std::uint64_t field_hash(const ScalarField& field);

// One vesicle simulation: initialization plus the per-step sequence
// flow -> phase transport -> global multipliers -> stretch -> diagnostics.
class Simulation {
 public:
  explicit Simulation(const SimConfig& config);

  DiagRecord step(StepTrace* trace = nullptr);

  const SimConfig& config() const { return config_; }
  const Mesh& mesh() const { return *mesh_; }
  const SimState& state() const { return state_; }
  SimState& mutable_state() { return state_; }
  AngleTracker& angle_tracker() { return angle_; }
  DiagRecord diagnostics_now() const;  // observables of the current state

  void save_checkpoint(const std::string& path) const;
  void load_checkpoint(const std::string& path);

  void write_snapshot(const std::string& path) const;

 private:
  SimConfig config_;
  std::shared_ptr<const Mesh> mesh_;
  std::unique_ptr<FlowSolver> flow_solver_;
  std::unique_ptr<PhaseSolver> phase_solver_;
  std::unique_ptr<StretchSolver> stretch_solver_;
  SimState state_;
  AngleTracker angle_;
  SolveReport last_flow_report_, last_phi_report_;
};

struct RunOptions {
  std::string out_dir;             // empty: no files written
  int snapshot_stride = -1;        // -1: use config value
  std::function<void(const DiagRecord&)> on_record;
};

struct RunResult {
  std::vector<DiagRecord> history;
};

// Runs a configured simulation to t_end. With an output directory set, writes
// diagnostics.csv (one row per step), the effective config echo, and VTK
// snapshots at the configured stride (step 0 included).
RunResult run_simulation(const SimConfig& config, const RunOptions& options = {});

// --- epsilon-convergence harness ---

enum class SweepObservable { Ev, Ec };

struct SweepCase {
  double eps = 0.0;
  int nx = 0;
  double value = 0.0;
  double seconds = 0.0;
};

struct SweepResult {
  std::vector<SweepCase> cases;
  double slope = 0.0;  // least-squares slope of log(value) vs log(eps)
};

// Grid resolution for a given interface thickness: the power-of-two division
// nearest (in log) to h = eps * kResolutionRatio, refined if needed to satisfy
// the resolution rule.
int sweep_nx_for_epsilon(double eps, const SimConfig& base);

double fit_loglog_slope(std::span<const SweepCase> cases);

// Observable evaluator; the default runs the simulation to t_measure and reads
// the observable off the last diagnostics record. Tests may inject synthetic
// evaluators.
using SweepRunner = std::function<double(const SimConfig&, SweepObservable, double)>;

struct SweepOptions {
  std::string out_dir;  // empty: no files; else per-case run directories + sweep.csv
  int threads = 0;      // 0: from VESICLE_NUM_THREADS (default 1)
  SweepRunner runner;   // empty: run the simulation
};

SweepResult sweep_epsilon(const SimConfig& base, std::span<const double> eps_list,
                          SweepObservable observable, double t_measure,
                          const SweepOptions& options = {});

void write_sweep_csv(const std::string& path, const SweepResult& result,
                     SweepObservable observable, double t_measure);

}  // namespace vesicle
