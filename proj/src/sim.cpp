#include "sim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <limits>
#include <thread>

#include "common.hpp"
#include "vtk.hpp"

namespace vesicle {

std::uint64_t field_hash(const ScalarField& field) {
  return fnv1a(field.coeffs.data(), field.coeffs.size() * sizeof(double));
}

Simulation::Simulation(const SimConfig& config) : config_(config) {
  validate(config_);
  mesh_ = std::make_shared<const Mesh>(build_uniform(config_.domain, config_.nx, config_.ny));
  const SolverConfig solver_cfg{config_.solver_tol};
  flow_solver_ = std::make_unique<FlowSolver>(*mesh_, config_.model, config_.flow_params(),
                                              config_.phase_params(), solver_cfg);
  phase_solver_ = std::make_unique<PhaseSolver>(*mesh_, config_.phase_params(), solver_cfg);
  stretch_solver_ = std::make_unique<StretchSolver>(*mesh_, config_.theta, solver_cfg);

  state_.phase = init_ellipse(*mesh_, config_.phase_params(), config_.ellipse_center,
                              config_.ellipse_semi_axes);
  state_.flow = make_initial_flow(*mesh_, config_.flow_params());
  state_.stretch = make_initial_stretch(*mesh_, config_.theta);
  state_.multipliers = {0.0, 0.0};
  const auto [v0, a0] = volume_area(state_.phase.phi, config_.phase_params());
  state_.targets = {v0, a0};
  angle_.update(state_.phase.phi);  // seed the unwrapping with the initial orientation
}

DiagRecord Simulation::step(StepTrace* trace) {
  const double tau = config_.tau;
  try {
    if (trace) {
      trace->record("flow.phi_in", state_.phase.phi);
      trace->record("flow.c_in", state_.stretch.c);
      trace->record("flow.v_prev_in", state_.flow.v.x);
    }
    FlowState next_flow = flow_solver_->solve(state_.flow, state_.phase, state_.stretch.c,
                                              state_.multipliers, tau, &last_flow_report_);

    if (trace) trace->record("phi.v_in", next_flow.v.x);
    phase_solver_->advance(state_.phase, next_flow.v, state_.multipliers, tau, &last_phi_report_);

    if (trace) {
      trace->record("multipliers.phi_in", state_.phase.phi);
      trace->record("multipliers.v_in", next_flow.v.x);
    }
    const GlobalMultipliers next_multipliers = solve_multipliers(
        state_.phase, next_flow.v, state_.targets, config_.phase_params(), tau);

    if (trace) {
      trace->record("stretch.v_in", next_flow.v.x);
      trace->record("stretch.phi_in", state_.phase.phi);
    }
    stretch_solver_->advance(state_.stretch, next_flow.v, state_.phase.phi, tau, nullptr);

    state_.flow = std::move(next_flow);
    state_.multipliers = next_multipliers;
    state_.step += 1;
    state_.time = state_.step * tau;
  } catch (const SolverError& err) {
    throw SolverError(format_string("step %d (t = %.6g): %s", state_.step + 1,
                                    (state_.step + 1) * tau, err.what()));
  }

  DiagRecord rec = diagnostics_now();
  rec.angle_deg = angle_.update(state_.phase.phi);
  rec.flow_residual = last_flow_report_.rel_residual;
  rec.phi_residual = last_phi_report_.rel_residual;
  return rec;
}

DiagRecord Simulation::diagnostics_now() const {
  DiagRecord rec;
  rec.t = state_.time;
  const auto [vol, area] = volume_area(state_.phase.phi, config_.phase_params());
  rec.volume = vol;
  rec.area = area;
  const auto [e_v, e_c] =
      stretching_errors(state_.phase.phi, state_.flow.v, state_.stretch.c, config_.epsilon);
  rec.e_v = e_v;
  rec.e_c = e_c;
  rec.angle_deg = angle_.current();
  rec.lambda_global = state_.multipliers.lambda_global;
  rec.lambda_volume = state_.multipliers.lambda_volume;
  rec.flow_residual = last_flow_report_.rel_residual;
  rec.phi_residual = last_phi_report_.rel_residual;
  return rec;
}

namespace {

constexpr char kCheckpointMagic[8] = {'V', 'E', 'S', '2', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kCheckpointVersion = 1;

void write_bytes(std::FILE* f, const void* data, std::size_t n, const std::string& path) {
  if (std::fwrite(data, 1, n, f) != n) throw IoError("short write to checkpoint: " + path);
}

void read_bytes(std::FILE* f, void* data, std::size_t n, const std::string& path) {
  if (std::fread(data, 1, n, f) != n) throw IoError("truncated checkpoint: " + path);
}

void write_field(std::FILE* f, const ScalarField& field, const std::string& path) {
  const std::uint64_t n = field.coeffs.size();
  write_bytes(f, &n, sizeof n, path);
  write_bytes(f, field.coeffs.data(), n * sizeof(double), path);
}

void read_field(std::FILE* f, ScalarField& field, const std::string& path) {
  std::uint64_t n = 0;
  read_bytes(f, &n, sizeof n, path);
  if (n != field.coeffs.size())
    throw IoError(format_string("checkpoint field length %llu does not match mesh (%zu): %s",
                                static_cast<unsigned long long>(n), field.coeffs.size(),
                                path.c_str()));
  read_bytes(f, field.coeffs.data(), n * sizeof(double), path);
}

}  // namespace

void Simulation::save_checkpoint(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("cannot open checkpoint for writing: " + path);
  write_bytes(f, kCheckpointMagic, sizeof kCheckpointMagic, path);
  write_bytes(f, &kCheckpointVersion, sizeof kCheckpointVersion, path);
  const std::uint64_t hash = config_hash(config_);
  write_bytes(f, &hash, sizeof hash, path);
  const std::int32_t step = state_.step;
  write_bytes(f, &step, sizeof step, path);
  write_bytes(f, &state_.time, sizeof state_.time, path);
  write_bytes(f, &state_.multipliers.lambda_global, sizeof(double), path);
  write_bytes(f, &state_.multipliers.lambda_volume, sizeof(double), path);
  write_bytes(f, &state_.targets.volume, sizeof(double), path);
  write_bytes(f, &state_.targets.area, sizeof(double), path);
  const double angle = angle_.current();
  const std::uint8_t started = angle_.started() ? 1 : 0;
  write_bytes(f, &angle, sizeof angle, path);
  write_bytes(f, &started, sizeof started, path);
  for (const ScalarField* field :
       {&state_.phase.phi, &state_.phase.f_c, &state_.phase.f, &state_.phase.g, &state_.flow.v.x,
        &state_.flow.v.y, &state_.flow.p, &state_.flow.lambda_local, &state_.stretch.c})
    write_field(f, *field, path);
  std::fclose(f);
}

void Simulation::load_checkpoint(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw IoError("cannot open checkpoint for reading: " + path);
  char magic[8];
  read_bytes(f, magic, sizeof magic, path);
  if (std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0) {
    std::fclose(f);
    throw IoError("not a checkpoint file: " + path);
  }
  std::uint32_t version = 0;
  read_bytes(f, &version, sizeof version, path);
  if (version != kCheckpointVersion) {
    std::fclose(f);
    throw IoError(format_string("unsupported checkpoint version %u: %s", version, path.c_str()));
  }
  std::uint64_t hash = 0;
  read_bytes(f, &hash, sizeof hash, path);
  if (hash != config_hash(config_)) {
    std::fclose(f);
    throw ValidationError("checkpoint was produced by a different config: " + path);
  }
  std::int32_t step = 0;
  read_bytes(f, &step, sizeof step, path);
  state_.step = step;
  read_bytes(f, &state_.time, sizeof state_.time, path);
  read_bytes(f, &state_.multipliers.lambda_global, sizeof(double), path);
  read_bytes(f, &state_.multipliers.lambda_volume, sizeof(double), path);
  read_bytes(f, &state_.targets.volume, sizeof(double), path);
  read_bytes(f, &state_.targets.area, sizeof(double), path);
  double angle = 0.0;
  std::uint8_t started = 0;
  read_bytes(f, &angle, sizeof angle, path);
  read_bytes(f, &started, sizeof started, path);
  angle_.restore(angle, started != 0);
  for (ScalarField* field :
       {&state_.phase.phi, &state_.phase.f_c, &state_.phase.f, &state_.phase.g, &state_.flow.v.x,
        &state_.flow.v.y, &state_.flow.p, &state_.flow.lambda_local, &state_.stretch.c})
    read_field(f, *field, path);
  std::fclose(f);
}

void Simulation::write_snapshot(const std::string& path) const {
  write_vtk_snapshot(path, *mesh_, state_.phase.phi, state_.stretch.c, state_.flow.lambda_local,
                     state_.flow.p, state_.flow.v);
}

RunResult run_simulation(const SimConfig& config, const RunOptions& options) {
  namespace fs = std::filesystem;
  Simulation sim(config);
  const bool writing = !options.out_dir.empty();
  const int stride = options.snapshot_stride >= 0 ? options.snapshot_stride : config.snapshot_stride;

  CsvWriter csv;
  if (writing) {
    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    const fs::path dir(options.out_dir);
    {
      const std::string echo_path = (dir / "config_effective.toml").string();
      std::FILE* f = std::fopen(echo_path.c_str(), "w");
      if (!f) throw IoError("cannot write config echo: " + echo_path);
      const std::string echo = config_echo(config);
      std::fwrite(echo.data(), 1, echo.size(), f);
      std::fclose(f);
    }
    csv = CsvWriter((dir / config.csv_name).string());
    if (stride > 0) sim.write_snapshot((dir / "snapshot_000000.vtk").string());
  }

  RunResult result;
  const int total = config.total_steps();
  result.history.reserve(total);
  for (int n = 1; n <= total; ++n) {
    DiagRecord rec = sim.step();
    if (writing) {
      csv.append(rec);
      if (stride > 0 && n % stride == 0)
        sim.write_snapshot(
            (fs::path(options.out_dir) / format_string("snapshot_%06d.vtk", n)).string());
    }
    if (options.on_record) options.on_record(rec);
    result.history.push_back(rec);
  }
  return result;
}

int sweep_nx_for_epsilon(double eps, const SimConfig& base) {
  if (!(eps > 0.0)) throw ValidationError("sweep: epsilon must be positive");
  const double target_nx = base.domain.width() / (eps * kResolutionRatio);
  int nx = 1 << std::max(0, static_cast<int>(std::lround(std::log2(target_nx))));
  while (base.domain.width() / nx > eps * kResolutionRatio * (1.0 + 1e-9)) nx *= 2;
  return nx;
}

double fit_loglog_slope(std::span<const SweepCase> cases) {
  const int n = static_cast<int>(cases.size());
  double sx = 0.0, sy = 0.0;
  for (const SweepCase& c : cases) {
    if (!(c.value > 0.0))
      throw ValidationError(format_string("sweep: observable %.3e at eps=%g is not positive; "
                                          "cannot fit a log-log slope", c.value, c.eps));
    sx += std::log(c.eps);
    sy += std::log(c.value);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const SweepCase& c : cases) {
    const double dx = std::log(c.eps) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(c.value) - my);
  }
  return sxy / sxx;
}

namespace {

double run_observable(const SimConfig& config, SweepObservable observable, double t_measure,
                      const std::string& case_dir) {
  SimConfig cfg = config;
  cfg.t_end = t_measure;
  RunOptions opts;
  opts.out_dir = case_dir;
  const RunResult result = run_simulation(cfg, opts);
  if (result.history.empty()) throw SolverError("sweep: case produced no diagnostics");
  const DiagRecord& last = result.history.back();
  return observable == SweepObservable::Ev ? last.e_v : last.e_c;
}

int sweep_thread_count(int requested, int cases) {
  int n = requested;
  if (n <= 0) {
    n = 1;
    if (const char* env = std::getenv("VESICLE_NUM_THREADS")) {
      n = std::atoi(env);
      if (n < 1) n = 1;
    }
  }
  return std::min(n, cases);
}

}  // namespace

SweepResult sweep_epsilon(const SimConfig& base, std::span<const double> eps_list,
                          SweepObservable observable, double t_measure,
                          const SweepOptions& options) {
  if (eps_list.size() < 3)
    throw ValidationError("sweep: need at least 3 epsilon values to fit a slope");
  for (double eps : eps_list)
    if (!(eps > 0.0)) throw ValidationError("sweep: epsilon values must be positive");
  const double steps = t_measure / base.tau;
  if (std::abs(steps - std::llround(steps)) > 1e-9 * std::max(1.0, steps))
    throw ValidationError("sweep: measurement time must be a multiple of tau");

  namespace fs = std::filesystem;
  const bool writing = !options.out_dir.empty();
  if (writing) {
    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
  }

  const int n_cases = static_cast<int>(eps_list.size());
  std::vector<SimConfig> configs(n_cases);
  std::vector<std::string> case_dirs(n_cases);
  SweepResult result;
  result.cases.resize(n_cases);
  for (int i = 0; i < n_cases; ++i) {
    SimConfig cfg = base;
    cfg.epsilon = eps_list[i];
    cfg.nx = sweep_nx_for_epsilon(eps_list[i], base);
    cfg.ny = std::max(1, static_cast<int>(std::lround(
                             cfg.nx * base.domain.height() / base.domain.width())));
    configs[i] = cfg;
    result.cases[i].eps = eps_list[i];
    result.cases[i].nx = cfg.nx;
    if (writing)
      case_dirs[i] = (fs::path(options.out_dir) / format_string("eps_%g", eps_list[i])).string();
  }

  const SweepRunner runner = options.runner
                                 ? options.runner
                                 : SweepRunner([&case_dirs, &configs](const SimConfig& cfg,
                                                                      SweepObservable obs,
                                                                      double t) {
                                     // Locate the case directory of this config.
                                     std::string dir;
                                     for (std::size_t i = 0; i < configs.size(); ++i)
                                       if (configs[i].epsilon == cfg.epsilon) dir = case_dirs[i];
                                     return run_observable(cfg, obs, t, dir);
                                   });

  std::vector<std::string> errors(n_cases);
  std::vector<char> done(n_cases, 0);
  std::atomic<int> next_case{0};
  const int threads = sweep_thread_count(options.threads, n_cases);
  const auto worker = [&] {
    for (;;) {
      const int i = next_case.fetch_add(1);
      if (i >= n_cases) return;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        result.cases[i].value = runner(configs[i], observable, t_measure);
        done[i] = 1;
      } catch (const std::exception& err) {
        errors[i] = err.what();
      }
      result.cases[i].seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  for (int i = 0; i < n_cases; ++i) {
    if (!errors[i].empty()) {
      // Preserve the partial table before aborting.
      SweepResult partial;
      for (int k = 0; k < n_cases; ++k)
        if (done[k]) partial.cases.push_back(result.cases[k]);
      partial.slope = std::numeric_limits<double>::quiet_NaN();
      if (writing)
        write_sweep_csv((fs::path(options.out_dir) / "sweep.csv").string(), partial, observable,
                        t_measure);
      throw SolverError(format_string("sweep: case eps=%g failed: %s", eps_list[i],
                                      errors[i].c_str()));
    }
  }

  result.slope = fit_loglog_slope(result.cases);
  if (writing)
    write_sweep_csv((fs::path(options.out_dir) / "sweep.csv").string(), result, observable,
                    t_measure);
  return result;
}

void write_sweep_csv(const std::string& path, const SweepResult& result,
                     SweepObservable observable, double t_measure) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open sweep CSV for writing: " + path);
  std::fprintf(f, "eps,observable,nx,runtime_seconds\n");
  for (const SweepCase& c : result.cases)
    std::fprintf(f, "%.17e,%.17e,%d,%.3f\n", c.eps, c.value, c.nx, c.seconds);
  std::fprintf(f, "# observable = %s at t = %.17g\n",
               observable == SweepObservable::Ev ? "Ev" : "Ec", t_measure);
  std::fprintf(f, "# slope = %.12g\n", result.slope);
  std::fclose(f);
}

}  // namespace vesicle
