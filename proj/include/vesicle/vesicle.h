/* C interface to the vesicle2d simulator.
 *
 * All functions returning vesicle_status use 0 for success; on failure a
 * thread-local message is available through vesicle_last_error(). Handles are
 * opaque and must be released with the matching *_free function.
 */
#ifndef VESICLE_VESICLE_H
#define VESICLE_VESICLE_H

#if defined(_WIN32)
#define VESICLE_API __declspec(dllexport)
#else
#define VESICLE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vesicle_status {
  VESICLE_OK = 0,
  VESICLE_ERR_VALIDATION = 1,
  VESICLE_ERR_SOLVER = 2,
  VESICLE_ERR_IO = 3
} vesicle_status;

typedef struct vesicle_config vesicle_config;
typedef struct vesicle_sim vesicle_sim;

/* Per-step scalar diagnostics, matching the diagnostics.csv columns. */
typedef struct vesicle_diag {
  double t;
  double volume;
  double area;
  double e_v;
  double e_c;
  double angle_deg;
  double lambda_global;
  double lambda_volume;
  double flow_residual;
  double phi_residual;
} vesicle_diag;

VESICLE_API const char* vesicle_version(void);
VESICLE_API const char* vesicle_last_error(void);

/* Configs. Keys and values follow the config file syntax (flat TOML-style
 * key = value lines; string values quoted). vesicle_config_set defers
 * validation to the point of use so keys may be set in any order. */
VESICLE_API vesicle_status vesicle_config_default(vesicle_config** out);
VESICLE_API vesicle_status vesicle_config_load(const char* path, vesicle_config** out);
VESICLE_API vesicle_status vesicle_config_set(vesicle_config* config, const char* key,
                                              const char* value);
VESICLE_API vesicle_status vesicle_config_echo(const vesicle_config* config, const char* path);
VESICLE_API void vesicle_config_free(vesicle_config* config);

/* Simulations. */
VESICLE_API vesicle_status vesicle_sim_create(const vesicle_config* config, vesicle_sim** out);
VESICLE_API void vesicle_sim_free(vesicle_sim* sim);
VESICLE_API vesicle_status vesicle_sim_step(vesicle_sim* sim, vesicle_diag* out_diag);
VESICLE_API int vesicle_sim_step_index(const vesicle_sim* sim);
VESICLE_API double vesicle_sim_time(const vesicle_sim* sim);
VESICLE_API int vesicle_sim_total_steps(const vesicle_sim* sim);
VESICLE_API vesicle_status vesicle_sim_diagnostics(const vesicle_sim* sim, vesicle_diag* out);
VESICLE_API vesicle_status vesicle_sim_write_snapshot(const vesicle_sim* sim, const char* path);
VESICLE_API vesicle_status vesicle_sim_save_checkpoint(const vesicle_sim* sim, const char* path);
VESICLE_API vesicle_status vesicle_sim_load_checkpoint(vesicle_sim* sim, const char* path);

/* Full run to t_end: writes diagnostics.csv, the effective config echo and
 * VTK snapshots into out_dir. snapshot_stride < 0 keeps the configured value;
 * progress_every > 0 prints a progress line to stderr every that many steps. */
VESICLE_API vesicle_status vesicle_run(const vesicle_config* config, const char* out_dir,
                                       int snapshot_stride, int progress_every);

/* Interface-thickness convergence sweep. observable: 0 = Ev, 1 = Ec. Writes
 * per-case run directories and sweep.csv (with the fitted slope in a footer
 * comment) into out_dir when non-null/non-empty. */
VESICLE_API vesicle_status vesicle_sweep(const vesicle_config* config, const double* eps_list,
                                         int n_eps, int observable, double t_measure,
                                         const char* out_dir, double* out_slope);

#ifdef __cplusplus
}
#endif

#endif /* VESICLE_VESICLE_H */
