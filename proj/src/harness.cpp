#include "vlcee/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace vlcee {
namespace {

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

SweepRow solve_point(const NetworkConfig& base, const std::string& param, double value,
                     const std::string& scheme_tag) {
  SweepRow row;
  row.param = param;
  row.value = value;
  row.scheme = scheme_tag;
  try {
    nlohmann::json j = base.raw;
    if (!param.empty() && param.rfind("scenario", 0) != 0) set_config_value(j, param, value);
    j["scheme"] = scheme_tag;
    const NetworkConfig cfg = config_from_json(j);
    const SolveOutput out = solve_scheme(cfg, parse_scheme(scheme_tag));
    row.ee = out.report.energy_efficiency;
    row.sum_eff_rate = out.report.sum_effective_rate();
    row.p_total = out.report.power.total();
    row.p_comp = out.report.power.comp;
    row.p_ac = out.report.power.ac;
    row.p_dc = out.report.power.dc;
    row.b_dc = out.design.dc_bias;
    row.outer_iters = static_cast<int>(out.trace.outer.size());
    row.status = "ok";
    row.design = out.design;
    row.has_design = true;
  } catch (const InfeasibleError&) {
    row.status = "infeasible";
  } catch (const ValidationError&) {
    row.status = "infeasible";
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
  }
  return row;
}

void run_points(std::vector<SweepRow>& rows,
                const std::vector<std::function<SweepRow()>>& jobs, int workers) {
  rows.resize(jobs.size());
  workers = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
  if (workers == 1) {
    for (size_t i = 0; i < jobs.size(); ++i) rows[i] = jobs[i]();
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const size_t i = next.fetch_add(1);
        if (i >= jobs.size()) return;
        rows[i] = jobs[i]();
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

std::vector<SweepRow> run_sweep(const NetworkConfig& base, const SweepSpec& spec,
                                int workers) {
  // Reject unknown paths up front so a typo fails fast instead of per point.
  {
    nlohmann::json probe = base.raw;
    set_config_value(probe, spec.param_path, spec.values.empty() ? 0.0 : spec.values.front());
  }
  std::vector<std::function<SweepRow()>> jobs;
  for (double v : spec.values)
    for (const auto& scheme : spec.schemes)
      jobs.push_back([&base, &spec, v, scheme] {
        return solve_point(base, spec.param_path, v, scheme);
      });
  std::vector<SweepRow> rows;
  run_points(rows, jobs, workers);
  return rows;
}

void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& os) {
  os << "param,value,scheme,ee,sum_eff_rate,p_total,p_comp,p_ac,p_dc,b_dc,outer_iters,"
        "status\n";
  for (const auto& r : rows) {
    std::string status = r.status;
    for (char& c : status)
      if (c == ',' || c == '\n') c = ';';
    os << r.param << ',' << fmt9(r.value) << ',' << r.scheme << ',' << fmt9(r.ee) << ','
       << fmt9(r.sum_eff_rate) << ',' << fmt9(r.p_total) << ',' << fmt9(r.p_comp) << ','
       << fmt9(r.p_ac) << ',' << fmt9(r.p_dc) << ',' << fmt9(r.b_dc) << ',' << r.outer_iters
       << ',' << status << '\n';
  }
}

std::vector<ScenarioDef> scenario_definitions() {
  return {
      {"scenario1", {{1.5, 4.0, 0.0}, {2.5, 4.5, 0.0}}},
      {"scenario2", {{1.0, 2.5, 0.0}, {4.0, 2.5, 0.0}}},
      {"scenario3", {{0.2, 0.6, 0.0}, {1.2, 1.1, 0.0}}},
  };
}

std::vector<SweepRow> run_scenarios(const NetworkConfig& base,
                                    const std::vector<double>& voltages, int workers) {
  std::vector<std::function<SweepRow()>> jobs;
  for (const auto& scenario : scenario_definitions()) {
    for (double v : voltages) {
      jobs.push_back([&base, scenario, v] {
        nlohmann::json j = base.raw;
        j["scene"]["users"] = nlohmann::json::array();
        for (const auto& u : scenario.users)
          j["scene"]["users"].push_back({u.x(), u.y(), u.z()});
        j["qos"]["led_voltage"] = v;
        j["scheme"] = "pscom-rsma";
        SweepRow row;
        row.param = scenario.name + ".led_voltage";
        row.value = v;
        row.scheme = "pscom-rsma";
        try {
          const NetworkConfig cfg = config_from_json(j);
          const SolveOutput out = solve_scheme(cfg, Scheme::pscom_rsma);
          row.ee = out.report.energy_efficiency;
          row.sum_eff_rate = out.report.sum_effective_rate();
          row.p_total = out.report.power.total();
          row.p_comp = out.report.power.comp;
          row.p_ac = out.report.power.ac;
          row.p_dc = out.report.power.dc;
          row.b_dc = out.design.dc_bias;
          row.outer_iters = static_cast<int>(out.trace.outer.size());
          row.status = "ok";
          row.design = out.design;
          row.has_design = true;
        } catch (const InfeasibleError&) {
          row.status = "infeasible";
        } catch (const std::exception& e) {
          row.status = std::string("error: ") + e.what();
        }
        return row;
      });
    }
  }
  std::vector<SweepRow> rows;
  run_points(rows, jobs, workers);
  return rows;
}

OracleResult oracle_solve(const NetworkConfig& cfg, std::span<const Design> extra) {
  const int K = cfg.num_users();
  const int N = cfg.num_leds();
  if (K != 1 || N > 2)
    throw ValidationError("oracle restricted to tiny instances (K = 1, N <= 2)");

  const ChannelMatrix H = build_channel_matrix(cfg.scene, cfg.optical);
  const QosParams& qos = cfg.qos;
  const double r0 = qos.knowledge_rate_min;
  const double rho_min = cfg.profiles[0].rho_min;
  const double half_range = 0.5 * (qos.drive_max - qos.drive_min);

  const int beam_pts = (N == 1) ? 40 : 12;
  const int a_pts = 20;
  const int rho_pts = 50;

  OracleResult best;
  best.ee = -1.0;

  const auto consider = [&](Design& d) {
    const auto viols = check_feasibility(d, H, qos, cfg.profiles, cfg.eta, 1e-9);
    if (!viols.empty()) return;
    const double ee = energy_efficiency(d, H, qos, cfg.profiles, cfg.eta);
    if (ee > best.ee) {
      best.ee = ee;
      best.design = d;
    }
  };

  // Nonnegative grids cover the optimum: the channel is entrywise
  // nonnegative, so aligned signs maximize every desired term while the
  // clipping budget only sees magnitudes.
  std::vector<double> grid(beam_pts);
  for (int i = 0; i < beam_pts; ++i) grid[i] = half_range * i / (beam_pts - 1);

  std::vector<int> idx(2 * N, 0);
  while (true) {
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(2, N);
    for (int i = 0; i < N; ++i) {
      W(0, i) = grid[idx[i]];
      W(1, i) = grid[idx[N + i]];
    }
    double colsum = 0.0;
    for (int i = 0; i < N; ++i) colsum = std::max(colsum, W.col(i).sum());
    if (colsum <= half_range + 1e-12) {
      Design d = make_design(W, colsum + qos.drive_min, Eigen::Vector2d(r0, 0.0),
                             Eigen::VectorXd::Ones(1));
      const double c1 = common_rate(H.row(0).transpose(), d, qos.noise_power[0]);
      const double resid = c1 - r0;
      if (resid >= 0) {
        for (int ia = 0; ia < a_pts; ++ia) {
          d.common_rates[1] = resid * ia / (a_pts - 1);
          for (int ir = 0; ir < rho_pts; ++ir) {
            d.rho[0] = rho_min + (1.0 - rho_min) * ir / (rho_pts - 1);
            consider(d);
          }
        }
      }
    }
    int p = 0;
    while (p < 2 * N && ++idx[p] == beam_pts) idx[p++] = 0;
    if (p == 2 * N) break;
  }

  for (const Design& d : extra) {
    Design copy = d;
    consider(copy);
  }
  if (best.ee < 0) throw InfeasibleError("oracle found no feasible grid point");
  return best;
}

void emit_plot(std::istream& csv, std::ostream& svg) {
  std::string header;
  if (!std::getline(csv, header)) throw ValidationError("plot: empty CSV");
  std::vector<std::string> cols;
  {
    std::stringstream ss(header);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  const auto col_of = [&](const std::string& name) {
    for (size_t i = 0; i < cols.size(); ++i)
      if (cols[i] == name) return static_cast<int>(i);
    throw ValidationError("plot: missing CSV column '" + name + "'");
  };
  const int c_value = col_of("value");
  const int c_scheme = col_of("scheme");
  const int c_ee = col_of("ee");
  const int c_param = col_of("param");
  const int c_status = col_of("status");

  std::map<std::string, std::vector<std::pair<double, double>>> series;
  std::vector<std::string> series_order;
  std::string param_label = "value";
  std::string line;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) f.push_back(c);
    if (static_cast<int>(f.size()) <= std::max({c_value, c_scheme, c_ee, c_status})) continue;
    if (f[c_status] != "ok") continue;
    param_label = f[c_param];
    if (!series.count(f[c_scheme])) series_order.push_back(f[c_scheme]);
    series[f[c_scheme]].push_back({std::stod(f[c_value]), std::stod(f[c_ee])});
  }
  if (series.empty()) throw ValidationError("plot: no usable rows in CSV");

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (auto& [_, pts] : series) {
    std::sort(pts.begin(), pts.end());
    for (auto& [x, y] : pts) {
      xmin = std::min(xmin, x); xmax = std::max(xmax, x);
      ymin = std::min(ymin, y); ymax = std::max(ymax, y);
    }
  }
  if (xmax == xmin) { xmin -= 0.5; xmax += 0.5; }
  if (ymax == ymin) { ymin -= 0.5; ymax += 0.5; }
  const double pad_y = 0.05 * (ymax - ymin);
  ymin -= pad_y; ymax += pad_y;

  const double W = 640, H = 480, ml = 70, mr = 20, mt = 20, mb = 50;
  const auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  const auto Y = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"};

  char buf[256];
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n";
  svg << "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
                ml, H - mb, W - mr, H - mb);
  svg << buf;
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
                ml, mt, ml, H - mb);
  svg << buf;
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4;
    const double yv = ymin + (ymax - ymin) * i / 4;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" text-anchor=\"middle\">%s"
                  "</text>\n",
                  X(xv), H - mb + 16, fmt9(xv).c_str());
    svg << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" text-anchor=\"end\">%s"
                  "</text>\n",
                  ml - 6, Y(yv) + 4, fmt9(yv).c_str());
    svg << buf;
  }
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.2f\" y=\"%.2f\" font-size=\"13\" text-anchor=\"middle\">%s"
                "</text>\n",
                (ml + W - mr) / 2, H - 12, param_label.c_str());
  svg << buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"16\" y=\"%.2f\" font-size=\"13\" text-anchor=\"middle\" "
                "transform=\"rotate(-90 16 %.2f)\">energy efficiency [(bps/Hz)/W]</text>\n",
                (mt + H - mb) / 2, (mt + H - mb) / 2);
  svg << buf;

  int si = 0;
  for (const auto& name : series_order) {
    const auto& pts = series[name];
    const char* color = palette[si % 6];
    if (pts.size() > 1) {
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : pts) {
        std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", X(x), Y(y));
        svg << buf;
      }
      svg << "\"/>\n";
    }
    for (const auto& [x, y] : pts) {
      std::snprintf(buf, sizeof(buf),
                    "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\"/>\n", X(x), Y(y),
                    color);
      svg << buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" fill=\"%s\">%s</text>\n",
                  W - mr - 150.0, mt + 16.0 + 16.0 * si, color, name.c_str());
    svg << buf;
    ++si;
  }
  svg << "</svg>\n";
}

std::string run_id(const nlohmann::json& config) {
  const std::string s = config.dump();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json design_to_json(const Design& d, const std::string& scheme_tag) {
  nlohmann::json j;
  j["scheme"] = scheme_tag;
  j["dc_bias"] = d.dc_bias;
  j["w_common"] = std::vector<double>(d.w_common.data(), d.w_common.data() + d.w_common.size());
  j["w_private"] = nlohmann::json::array();
  for (int k = 0; k < d.w_private.rows(); ++k) {
    std::vector<double> row(d.w_private.cols());
    for (int i = 0; i < d.w_private.cols(); ++i) row[i] = d.w_private(k, i);
    j["w_private"].push_back(row);
  }
  j["common_rates"] =
      std::vector<double>(d.common_rates.data(), d.common_rates.data() + d.common_rates.size());
  j["rho"] = std::vector<double>(d.rho.data(), d.rho.data() + d.rho.size());
  return j;
}

Design design_from_json(const nlohmann::json& j) {
  Design d;
  const auto vec = [](const nlohmann::json& a) {
    Eigen::VectorXd v(a.size());
    for (size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    return v;
  };
  d.w_common = vec(j.at("w_common"));
  const auto& wp = j.at("w_private");
  d.w_private.resize(wp.size(), d.w_common.size());
  for (size_t k = 0; k < wp.size(); ++k)
    d.w_private.row(static_cast<Eigen::Index>(k)) = vec(wp[k]).transpose();
  d.dc_bias = j.at("dc_bias").get<double>();
  d.common_rates = vec(j.at("common_rates"));
  d.rho = vec(j.at("rho"));
  return d;
}

}  // namespace vlcee
