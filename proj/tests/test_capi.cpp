#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "vesicle/vesicle.h"

namespace fs = std::filesystem;

namespace {

struct Config {
  vesicle_config* ptr = nullptr;
  ~Config() { vesicle_config_free(ptr); }
};

struct Sim {
  vesicle_sim* ptr = nullptr;
  ~Sim() { vesicle_sim_free(ptr); }
};

void set(vesicle_config* cfg, const char* key, const char* value) {
  REQUIRE(vesicle_config_set(cfg, key, value) == VESICLE_OK);
}

Config small_config() {
  Config cfg;
  REQUIRE(vesicle_config_default(&cfg.ptr) == VESICLE_OK);
  set(cfg.ptr, "nx", "24");
  set(cfg.ptr, "ny", "24");
  set(cfg.ptr, "epsilon", "0.18");
  set(cfg.ptr, "tau", "1e-3");
  set(cfg.ptr, "t_end", "5e-3");
  return cfg;
}

int count_lines(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  int lines = 0;
  std::string line;
  while (std::getline(in, line)) ++lines;
  return lines;
}

}  // namespace

TEST_CASE("version and error strings are always available") {
  CHECK(std::string(vesicle_version()) == "1.0.0");
  CHECK(vesicle_last_error() != nullptr);
}

TEST_CASE("config loading maps failures to status codes") {
  vesicle_config* cfg = nullptr;
  CHECK(vesicle_config_load("/nonexistent/path/config.toml", &cfg) == VESICLE_ERR_IO);
  CHECK(std::string(vesicle_last_error()).find("config") != std::string::npos);

  const fs::path dir = fs::temp_directory_path() / "vesicle_capi_cfg";
  fs::create_directories(dir);
  const std::string bad = (dir / "bad.toml").string();
  {
    std::ofstream out(bad);
    out << "epsilon = -0.1\n";
  }
  CHECK(vesicle_config_load(bad.c_str(), &cfg) == VESICLE_ERR_VALIDATION);
  CHECK(std::string(vesicle_last_error()).find("epsilon") != std::string::npos);

  const std::string good = (dir / "good.toml").string();
  {
    std::ofstream out(good);
    out << "nx = 24\nny = 24\nepsilon = 0.18\ntau = 1e-3\nt_end = 5e-3\n";
  }
  REQUIRE(vesicle_config_load(good.c_str(), &cfg) == VESICLE_OK);
  vesicle_config_free(cfg);
  fs::remove_all(dir);
}

TEST_CASE("config_set defers validation until use") {
  Config cfg;
  REQUIRE(vesicle_config_default(&cfg.ptr) == VESICLE_OK);
  // Transiently inconsistent (coarse grid at default epsilon) is fine...
  set(cfg.ptr, "nx", "24");
  set(cfg.ptr, "ny", "24");
  // ...but creating a simulation from it fails validation.
  vesicle_sim* sim = nullptr;
  CHECK(vesicle_sim_create(cfg.ptr, &sim) == VESICLE_ERR_VALIDATION);
  set(cfg.ptr, "epsilon", "0.18");
  set(cfg.ptr, "t_end", "5e-3");
  set(cfg.ptr, "tau", "1e-3");
  REQUIRE(vesicle_sim_create(cfg.ptr, &sim) == VESICLE_OK);
  vesicle_sim_free(sim);

  CHECK(vesicle_config_set(cfg.ptr, "no_such_key", "1") == VESICLE_ERR_VALIDATION);
  CHECK(vesicle_config_set(cfg.ptr, "model", "\"D\"") == VESICLE_ERR_VALIDATION);
}

TEST_CASE("stepping through the C interface") {
  Config cfg = small_config();
  Sim sim;
  REQUIRE(vesicle_sim_create(cfg.ptr, &sim.ptr) == VESICLE_OK);
  CHECK(vesicle_sim_total_steps(sim.ptr) == 5);
  CHECK(vesicle_sim_step_index(sim.ptr) == 0);

  vesicle_diag diag{};
  REQUIRE(vesicle_sim_diagnostics(sim.ptr, &diag) == VESICLE_OK);
  CHECK(diag.angle_deg == doctest::Approx(90.0).epsilon(1e-3));

  REQUIRE(vesicle_sim_step(sim.ptr, &diag) == VESICLE_OK);
  CHECK(vesicle_sim_step_index(sim.ptr) == 1);
  CHECK(vesicle_sim_time(sim.ptr) == doctest::Approx(1e-3));
  CHECK(diag.t == doctest::Approx(1e-3));
  CHECK(diag.volume > 0.0);
  CHECK(diag.area > 0.0);
  CHECK(std::isfinite(diag.e_v));
  CHECK(std::isfinite(diag.e_c));
  CHECK(diag.flow_residual <= 1e-10);
}

TEST_CASE("checkpoints round-trip through the C interface") {
  const fs::path dir = fs::temp_directory_path() / "vesicle_capi_ckpt";
  fs::create_directories(dir);
  const std::string ckpt = (dir / "s.ckpt").string();

  Config cfg = small_config();
  Sim a;
  REQUIRE(vesicle_sim_create(cfg.ptr, &a.ptr) == VESICLE_OK);
  vesicle_diag d2{}, d3{};
  REQUIRE(vesicle_sim_step(a.ptr, nullptr) == VESICLE_OK);
  REQUIRE(vesicle_sim_step(a.ptr, &d2) == VESICLE_OK);
  REQUIRE(vesicle_sim_save_checkpoint(a.ptr, ckpt.c_str()) == VESICLE_OK);
  REQUIRE(vesicle_sim_step(a.ptr, &d3) == VESICLE_OK);

  Sim b;
  REQUIRE(vesicle_sim_create(cfg.ptr, &b.ptr) == VESICLE_OK);
  REQUIRE(vesicle_sim_load_checkpoint(b.ptr, ckpt.c_str()) == VESICLE_OK);
  CHECK(vesicle_sim_step_index(b.ptr) == 2);
  vesicle_diag d3b{};
  REQUIRE(vesicle_sim_step(b.ptr, &d3b) == VESICLE_OK);
  CHECK(d3b.volume == d3.volume);
  CHECK(d3b.angle_deg == d3.angle_deg);
  CHECK(d3b.e_c == d3.e_c);

  CHECK(vesicle_sim_load_checkpoint(b.ptr, "/no/such/file.ckpt") == VESICLE_ERR_IO);
  fs::remove_all(dir);
}

TEST_CASE("full run through the C interface writes the documented outputs") {
  const fs::path dir = fs::temp_directory_path() / "vesicle_capi_run";
  fs::remove_all(dir);
  Config cfg = small_config();
  REQUIRE(vesicle_run(cfg.ptr, dir.string().c_str(), /*snapshot_stride=*/0,
                      /*progress_every=*/0) == VESICLE_OK);
  CHECK(count_lines((dir / "diagnostics.csv").string()) == 1 + 5);
  CHECK(fs::exists(dir / "config_effective.toml"));
  fs::remove_all(dir);
}

TEST_CASE("sweep through the C interface") {
  const fs::path dir = fs::temp_directory_path() / "vesicle_capi_sweep";
  fs::remove_all(dir);
  Config cfg = small_config();
  set(cfg.ptr, "model", "\"B\"");
  const double eps[3] = {0.5, 0.4, 0.3};
  double slope = 0.0;
  REQUIRE(vesicle_sweep(cfg.ptr, eps, 3, /*observable=*/0, /*t_measure=*/2e-3,
                        dir.string().c_str(), &slope) == VESICLE_OK);
  CHECK(std::isfinite(slope));
  CHECK(fs::exists(dir / "sweep.csv"));
  CHECK(count_lines((dir / "sweep.csv").string()) >= 1 + 3 + 2);

  // Two epsilons cannot fix a slope.
  CHECK(vesicle_sweep(cfg.ptr, eps, 2, 0, 2e-3, nullptr, &slope) == VESICLE_ERR_VALIDATION);
  fs::remove_all(dir);
}
