#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "vlcee/channel.hpp"
#include "vlcee/rsma.hpp"
#include "vlcee/semantics.hpp"

namespace vlcee {

struct SolverOptions {
  double outer_tol = 1e-4;
  int outer_max_iters = 30;
  double sca_tol = 1e-4;
  int sca_max_iters = 50;
  double dinkelbach_tol = 1e-4;
  int dinkelbach_max_iters = 100;
  int dca_max_iters = 100;
  double barrier_tol = 1e-8;
  std::uint64_t seed = 20240901;  // RNG seed surfaced for reproducibility
  int workers = 1;                // sweep-level parallelism
};

// Full scenario description. Constructed from a hierarchical JSON config with
// defaults for every omitted field; units are converted at load time
// (pd_area cm^2 -> m^2, angles degrees -> radians, noise dBm -> watts).
struct NetworkConfig {
  Scene scene;
  OpticalParams optical;
  QosParams qos;
  std::vector<CompressionProfile> profiles;  // one per user
  double eta = 1.0;
  std::string scheme = "pscom-rsma";
  bool conventional_keep_knowledge = false;
  SolverOptions solver;
  nlohmann::json raw;  // normalized snapshot with defaults applied

  int num_users() const { return scene.num_users(); }
  int num_leds() const { return scene.num_leds(); }
};

// Main-system-parameter defaults of the studied scenario: 4 LEDs, 2 users in
// a 5x5x3 m room, 1 cm^2 PD, 60/75 degree optics, 10 W budget, -100 dBm noise.
nlohmann::json default_config_json();

NetworkConfig config_from_json(const nlohmann::json& j);
NetworkConfig load_config(const std::filesystem::path& path);

// Sets a scalar field addressed by a dotted path (e.g. "optical.semi_angle")
// in a raw config object. Unknown paths are rejected at the next parse.
void set_config_value(nlohmann::json& j, const std::string& dotted_path, double value);

}  // namespace vlcee
