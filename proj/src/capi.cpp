#include "vesicle/vesicle.h"

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "common.hpp"
#include "sim.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

template <class Fn>
vesicle_status guarded(Fn&& fn) {
  try {
    fn();
    return VESICLE_OK;
  } catch (const vesicle::ValidationError& err) {
    set_error(err.what());
    return VESICLE_ERR_VALIDATION;
  } catch (const vesicle::IoError& err) {
    set_error(err.what());
    return VESICLE_ERR_IO;
  } catch (const std::exception& err) {
    set_error(err.what());
    return VESICLE_ERR_SOLVER;
  }
}

vesicle_diag to_c(const vesicle::DiagRecord& rec) {
  return {rec.t,         rec.volume,        rec.area,          rec.e_v,
          rec.e_c,       rec.angle_deg,     rec.lambda_global, rec.lambda_volume,
          rec.flow_residual, rec.phi_residual};
}

}  // namespace

struct vesicle_config {
  vesicle::SimConfig config;
};

struct vesicle_sim {
  std::unique_ptr<vesicle::Simulation> sim;
};

extern "C" {

const char* vesicle_version(void) { return "1.0.0"; }

const char* vesicle_last_error(void) { return g_last_error.c_str(); }

vesicle_status vesicle_config_default(vesicle_config** out) {
  return guarded([&] {
    if (!out) throw vesicle::ValidationError("config_default: null output pointer");
    *out = new vesicle_config{vesicle::SimConfig{}};
  });
}

vesicle_status vesicle_config_load(const char* path, vesicle_config** out) {
  return guarded([&] {
    if (!path || !out) throw vesicle::ValidationError("config_load: null argument");
    *out = new vesicle_config{vesicle::parse_config_file(path)};
  });
}

vesicle_status vesicle_config_set(vesicle_config* config, const char* key, const char* value) {
  return guarded([&] {
    if (!config || !key || !value) throw vesicle::ValidationError("config_set: null argument");
    // Route through the parser: rewrite the echoed config with the key
    // replaced, so syntax and unknown-key handling match config files.
    std::string echo = vesicle::config_echo(config->config);
    const std::string prefix = std::string(key) + " = ";
    std::string rewritten;
    bool replaced = false;
    std::size_t start = 0;
    while (start < echo.size()) {
      std::size_t end = echo.find('\n', start);
      if (end == std::string::npos) end = echo.size();
      const std::string line = echo.substr(start, end - start);
      if (line.rfind(prefix, 0) == 0) {
        rewritten += prefix + value + "\n";
        replaced = true;
      } else {
        rewritten += line + "\n";
      }
      start = end + 1;
    }
    if (!replaced) rewritten += prefix + value + "\n";
    config->config = vesicle::parse_config_text(rewritten, /*validate_now=*/false);
  });
}

vesicle_status vesicle_config_echo(const vesicle_config* config, const char* path) {
  return guarded([&] {
    if (!config || !path) throw vesicle::ValidationError("config_echo: null argument");
    std::FILE* f = std::fopen(path, "w");
    if (!f) throw vesicle::IoError(std::string("cannot write config echo: ") + path);
    const std::string echo = vesicle::config_echo(config->config);
    std::fwrite(echo.data(), 1, echo.size(), f);
    std::fclose(f);
  });
}

void vesicle_config_free(vesicle_config* config) { delete config; }

vesicle_status vesicle_sim_create(const vesicle_config* config, vesicle_sim** out) {
  return guarded([&] {
    if (!config || !out) throw vesicle::ValidationError("sim_create: null argument");
    auto sim = std::make_unique<vesicle::Simulation>(config->config);
    *out = new vesicle_sim{std::move(sim)};
  });
}

void vesicle_sim_free(vesicle_sim* sim) { delete sim; }

vesicle_status vesicle_sim_step(vesicle_sim* sim, vesicle_diag* out_diag) {
  return guarded([&] {
    if (!sim) throw vesicle::ValidationError("sim_step: null simulation");
    const vesicle::DiagRecord rec = sim->sim->step();
    if (out_diag) *out_diag = to_c(rec);
  });
}

int vesicle_sim_step_index(const vesicle_sim* sim) { return sim ? sim->sim->state().step : -1; }

double vesicle_sim_time(const vesicle_sim* sim) { return sim ? sim->sim->state().time : 0.0; }

int vesicle_sim_total_steps(const vesicle_sim* sim) {
  return sim ? sim->sim->config().total_steps() : 0;
}

vesicle_status vesicle_sim_diagnostics(const vesicle_sim* sim, vesicle_diag* out) {
  return guarded([&] {
    if (!sim || !out) throw vesicle::ValidationError("sim_diagnostics: null argument");
    *out = to_c(sim->sim->diagnostics_now());
  });
}

vesicle_status vesicle_sim_write_snapshot(const vesicle_sim* sim, const char* path) {
  return guarded([&] {
    if (!sim || !path) throw vesicle::ValidationError("sim_write_snapshot: null argument");
    sim->sim->write_snapshot(path);
  });
}

vesicle_status vesicle_sim_save_checkpoint(const vesicle_sim* sim, const char* path) {
  return guarded([&] {
    if (!sim || !path) throw vesicle::ValidationError("sim_save_checkpoint: null argument");
    sim->sim->save_checkpoint(path);
  });
}

vesicle_status vesicle_sim_load_checkpoint(vesicle_sim* sim, const char* path) {
  return guarded([&] {
    if (!sim || !path) throw vesicle::ValidationError("sim_load_checkpoint: null argument");
    sim->sim->load_checkpoint(path);
  });
}

vesicle_status vesicle_run(const vesicle_config* config, const char* out_dir, int snapshot_stride,
                           int progress_every) {
  return guarded([&] {
    if (!config || !out_dir) throw vesicle::ValidationError("run: null argument");
    vesicle::RunOptions options;
    options.out_dir = out_dir;
    options.snapshot_stride = snapshot_stride;
    const int total = config->config.total_steps();
    int count = 0;
    if (progress_every > 0) {
      options.on_record = [total, progress_every, &count](const vesicle::DiagRecord& rec) {
        ++count;
        if (count % progress_every == 0 || count == total)
          std::fprintf(stderr,
                       "[vesicle] step %d/%d  t=%.4f  V=%.5f  A=%.5f  angle=%.2f  E_c=%.4f\n",
                       count, total, rec.t, rec.volume, rec.area, rec.angle_deg, rec.e_c);
      };
    }
    vesicle::run_simulation(config->config, options);
  });
}

vesicle_status vesicle_sweep(const vesicle_config* config, const double* eps_list, int n_eps,
                             int observable, double t_measure, const char* out_dir,
                             double* out_slope) {
  return guarded([&] {
    if (!config || !eps_list || n_eps < 0) throw vesicle::ValidationError("sweep: null argument");
    if (observable != 0 && observable != 1)
      throw vesicle::ValidationError("sweep: observable must be 0 (Ev) or 1 (Ec)");
    vesicle::SweepOptions options;
    if (out_dir) options.out_dir = out_dir;
    const std::vector<double> eps(eps_list, eps_list + n_eps);
    const vesicle::SweepResult result = vesicle::sweep_epsilon(
        config->config, eps,
        observable == 0 ? vesicle::SweepObservable::Ev : vesicle::SweepObservable::Ec, t_measure,
        options);
    if (out_slope) *out_slope = result.slope;
  });
}

}  // extern "C"
