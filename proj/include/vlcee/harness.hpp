#pragma once

#include <iosfwd>

#include "vlcee/schemes.hpp"

namespace vlcee {

// One parameter sweep: set `param_path` (dotted raw-config path, e.g.
// "optical.semi_angle") to each value and solve the listed schemes.
struct SweepSpec {
  std::string param_path;
  std::vector<double> values;
  std::vector<std::string> schemes = {"pscom-rsma", "pscom-sdma", "pscom-noma",
                                      "conventional-rsma"};
};

struct SweepRow {
  std::string param;
  double value = 0.0;
  std::string scheme;
  double ee = 0.0;
  double sum_eff_rate = 0.0;
  double p_total = 0.0;
  double p_comp = 0.0;
  double p_ac = 0.0;
  double p_dc = 0.0;
  double b_dc = 0.0;
  int outer_iters = 0;
  std::string status;  // "ok", "infeasible", or "error: ..."
  Design design;       // stored artifact, valid when status == "ok"
  bool has_design = false;
};

// Runs every (value, scheme) pair; failed points are recorded with their
// status instead of being dropped. Points run concurrently up to `workers`,
// results are merged in spec order.
std::vector<SweepRow> run_sweep(const NetworkConfig& base, const SweepSpec& spec,
                                int workers = 1);

// CSV columns:
// param,value,scheme,ee,sum_eff_rate,p_total,p_comp,p_ac,p_dc,b_dc,outer_iters,status
void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& os);

// The three user-placement scenarios: the baseline pair, a well-separated
// centered pair, and a corner pair at the baseline's inter-user distance.
struct ScenarioDef {
  std::string name;
  std::vector<Eigen::Vector3d> users;
};
std::vector<ScenarioDef> scenario_definitions();

// Solves pscom-rsma for each scenario over an LED forward-voltage sweep.
// Row params are "scenario<i>.led_voltage".
std::vector<SweepRow> run_scenarios(const NetworkConfig& base,
                                    const std::vector<double>& voltages, int workers = 1);

// Exhaustive grid search over beam magnitudes, the common-rate split and the
// compression ratio on tiny instances (N <= 2, K = 1), with the DC bias at
// its closed-form optimum per point. Extra candidate designs join the grid.
struct OracleResult {
  double ee = 0.0;
  Design design;
};
OracleResult oracle_solve(const NetworkConfig& cfg,
                          std::span<const Design> extra_candidates = {});

// Line chart of a sweep CSV (`value` on x, `ee` on y, one series per scheme).
// Deterministic bytes for fixed input.
void emit_plot(std::istream& csv, std::ostream& svg);

// Content hash of a config used as the output directory name.
std::string run_id(const nlohmann::json& config);

nlohmann::json design_to_json(const Design& design, const std::string& scheme_tag);
Design design_from_json(const nlohmann::json& j);

}  // namespace vlcee
