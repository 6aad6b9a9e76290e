#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "vlcee/harness.hpp"

namespace fs = std::filesystem;
using namespace vlcee;

namespace {

NetworkConfig load_or_default(const std::string& path) {
  if (path.empty()) return config_from_json(nlohmann::json::object());
  return load_config(path);
}

fs::path make_run_dir(const fs::path& base, const nlohmann::json& raw) {
  const fs::path dir = base / run_id(raw);
  fs::create_directories(dir / "trace");
  fs::create_directories(dir / "plots");
  std::ofstream snap(dir / "config.snapshot");
  snap << raw.dump(2) << "\n";
  return dir;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream os(p);
  os << content;
}

int run_solve(const std::string& config_path, const fs::path& out_base) {
  const NetworkConfig cfg = load_or_default(config_path);
  const fs::path dir = make_run_dir(out_base, cfg.raw);
  const Scheme scheme = parse_scheme(cfg.scheme);
  const SolveOutput out = solve_scheme(cfg, scheme);

  {
    std::ofstream os(dir / "trace" / "outer.csv");
    write_outer_trace_csv(out.trace.outer, os);
    for (const auto& row : out.trace.outer) {
      std::ofstream sca_os(dir / "trace" / ("sca_" + std::to_string(row.iter) + ".csv"));
      write_sca_trace_csv(row.sca, sca_os);
      if (!row.dinkelbach.empty()) {
        std::ofstream dk_os(dir / "trace" /
                            ("dinkelbach_" + std::to_string(row.iter) + ".csv"));
        write_dinkelbach_trace_csv(row.dinkelbach, dk_os);
      }
    }
  }
  write_file(dir / "design.json", design_to_json(out.design, cfg.scheme).dump(2) + "\n");

  SweepRow row;
  row.param = "none";
  row.value = 0.0;
  row.scheme = cfg.scheme;
  row.ee = out.report.energy_efficiency;
  row.sum_eff_rate = out.report.sum_effective_rate();
  row.p_total = out.report.power.total();
  row.p_comp = out.report.power.comp;
  row.p_ac = out.report.power.ac;
  row.p_dc = out.report.power.dc;
  row.b_dc = out.design.dc_bias;
  row.outer_iters = static_cast<int>(out.trace.outer.size());
  row.status = out.trace.status == "converged" ? "ok" : out.trace.status;
  {
    std::ofstream os(dir / "solve.csv");
    write_sweep_csv(std::vector<SweepRow>{row}, os);
  }

  std::cout << "scheme            " << cfg.scheme << "\n";
  std::cout << "energy efficiency " << out.report.energy_efficiency << " (bps/Hz)/W\n";
  std::cout << "sum effective rate " << out.report.sum_effective_rate() << " bps/Hz\n";
  std::cout << "power (comp/ac/dc) " << out.report.power.comp << " / " << out.report.power.ac
            << " / " << out.report.power.dc << " W\n";
  std::cout << "dc bias           " << out.design.dc_bias << " A\n";
  std::cout << "outer iterations  " << out.trace.outer.size() << " (" << out.trace.status
            << ")\n";
  std::cout << "outputs in        " << dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-efficiency optimizer for RSMA-aided semantic VLC networks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";

  auto* solve_cmd = app.add_subcommand("solve", "Solve one scenario");
  solve_cmd->add_option("config", config_path, "Config JSON (omit for defaults)");
  solve_cmd->add_option("--out", out_dir, "Output directory root");

  std::string sweep_param;
  std::vector<double> sweep_values;
  std::vector<std::string> sweep_schemes = {"pscom-rsma", "pscom-sdma", "pscom-noma",
                                            "conventional-rsma"};
  auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweep across schemes");
  sweep_cmd->add_option("config", config_path, "Config JSON (omit for defaults)");
  sweep_cmd->add_option("--param", sweep_param, "Dotted config path, e.g. optical.semi_angle")
      ->required();
  sweep_cmd->add_option("--values", sweep_values, "Values to sweep")->required();
  sweep_cmd->add_option("--schemes", sweep_schemes, "Scheme tags to run");
  sweep_cmd->add_option("--out", out_dir, "Output directory root");

  double map_resolution = 0.1;
  auto* map_cmd = app.add_subcommand("channel-map", "Export the floor channel map");
  map_cmd->add_option("config", config_path, "Config JSON (omit for defaults)");
  map_cmd->add_option("--resolution", map_resolution, "Grid step in meters");
  map_cmd->add_option("--out", out_dir, "Output directory root");

  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force oracle (tiny instances)");
  oracle_cmd->add_option("config", config_path, "Config JSON")->required();
  oracle_cmd->add_option("--out", out_dir, "Output directory root");

  std::vector<double> voltages;
  auto* scen_cmd = app.add_subcommand("scenarios", "User-placement scenarios over U_LED");
  scen_cmd->add_option("config", config_path, "Config JSON (omit for defaults)");
  scen_cmd->add_option("--voltages", voltages, "LED forward voltages (default 2..4 by 0.25)");
  scen_cmd->add_option("--out", out_dir, "Output directory root");

  std::string plot_csv, plot_out;
  auto* plot_cmd = app.add_subcommand("plot", "Render a sweep CSV as SVG");
  plot_cmd->add_option("csv", plot_csv, "Sweep CSV path")->required();
  plot_cmd->add_option("-o,--output", plot_out, "Output SVG path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) return run_solve(config_path, out_dir);

    if (*sweep_cmd) {
      const NetworkConfig cfg = load_or_default(config_path);
      const fs::path dir = make_run_dir(out_dir, cfg.raw);
      SweepSpec spec{sweep_param, sweep_values, sweep_schemes};
      const auto rows = run_sweep(cfg, spec, cfg.solver.workers);
      {
        std::ofstream os(dir / "sweep.csv");
        write_sweep_csv(rows, os);
      }
      fs::create_directories(dir / "trace");
      for (size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].has_design) continue;
        write_file(dir / "trace" / ("design_" + std::to_string(i) + ".csv.json"),
                   design_to_json(rows[i].design, rows[i].scheme).dump(2) + "\n");
      }
      {
        std::ifstream csv(dir / "sweep.csv");
        std::ofstream svg(dir / "plots" / "sweep.svg");
        emit_plot(csv, svg);
      }
      std::cout << "wrote " << (dir / "sweep.csv").string() << " (" << rows.size()
                << " rows)\n";
      return 0;
    }

    if (*map_cmd) {
      const NetworkConfig cfg = load_or_default(config_path);
      const fs::path dir = make_run_dir(out_dir, cfg.raw);
      const FloorMap map = floor_channel_map(cfg.scene, cfg.optical, map_resolution);
      {
        std::ofstream os(dir / "channel_map.csv");
        write_channel_map_csv(map, os);
      }
      nlohmann::json meta = {{"quantity", "sum of per-LED LoS gains"},
                             {"resolution_m", map_resolution},
                             {"height_m", 0.0}};
      write_file(dir / "channel_map.meta.json", meta.dump(2) + "\n");
      double mx = map.gain.maxCoeff(), mn = map.gain.minCoeff();
      std::cout << "wrote " << (dir / "channel_map.csv").string() << "\n";
      std::cout << "max/min aggregate gain ratio: " << (mx / mn) << "\n";
      return 0;
    }

    if (*oracle_cmd) {
      const NetworkConfig cfg = load_or_default(config_path);
      const fs::path dir = make_run_dir(out_dir, cfg.raw);
      const OracleResult res = oracle_solve(cfg);
      write_file(dir / "oracle.json", design_to_json(res.design, "oracle").dump(2) + "\n");
      std::cout << "oracle best energy efficiency: " << res.ee << " (bps/Hz)/W\n";
      std::cout << "design written to " << (dir / "oracle.json").string() << "\n";
      return 0;
    }

    if (*scen_cmd) {
      const NetworkConfig cfg = load_or_default(config_path);
      const fs::path dir = make_run_dir(out_dir, cfg.raw);
      if (voltages.empty())
        for (double v = 2.0; v <= 4.0 + 1e-9; v += 0.25) voltages.push_back(v);
      const auto rows = run_scenarios(cfg, voltages, cfg.solver.workers);
      std::ofstream os(dir / "scenarios.csv");
      write_sweep_csv(rows, os);
      std::cout << "wrote " << (dir / "scenarios.csv").string() << " (" << rows.size()
                << " rows)\n";
      return 0;
    }

    if (*plot_cmd) {
      std::ifstream csv(plot_csv);
      if (!csv) throw ValidationError("cannot open CSV: " + plot_csv);
      if (plot_out.empty()) plot_out = plot_csv + ".svg";
      std::ofstream svg(plot_out);
      emit_plot(csv, svg);
      std::cout << "wrote " << plot_out << "\n";
      return 0;
    }
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
