#include "vlcee/alternating.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

namespace vlcee {
namespace {

// Starting DC bias: centered in the drive range, pulled down when the power
// budget cannot support it, always leaving AC headroom.
double initial_dc_bias(const NetworkConfig& cfg, double p_comp) {
  const QosParams& q = cfg.qos;
  const double cap =
      (q.power_max - q.circuit_power - p_comp) / (cfg.num_leds() * q.led_voltage);
  if (!(cap > q.drive_min))
    throw InfeasibleError("power budget below the DC floor (15b): cap " +
                          std::to_string(cap) + " <= I_L");
  const double mid = 0.5 * (q.drive_min + q.drive_max);
  return std::min(mid, q.drive_min + 0.8 * (cap - q.drive_min));
}

struct InitResult {
  Eigen::MatrixXd beams;
  Eigen::VectorXd a;
  double dc_bias;
  Eigen::VectorXd rho;
};

InitResult initialize_model(const NetworkConfig& cfg, const RateModel& model,
                            const ChannelMatrix& H) {
  const int K = cfg.num_users();
  Eigen::VectorXd rho = Eigen::VectorXd::Ones(K);
  double dc = initial_dc_bias(cfg, 0.0);

  Eigen::MatrixXd W;
  Eigen::VectorXd a;
  if (model.knowledge_unicast) {
    // Per-stream QoS may require compression from the start.
    StartDesign start =
        init_unicast_start(model, H, cfg.qos, cfg.profiles, cfg.eta, dc);
    W = std::move(start.beams);
    a = std::move(start.a);
    rho = std::move(start.rho);
  } else {
    auto [eps1, eps2] =
        subproblem_constants(rho, dc, cfg.qos, cfg.profiles, cfg.eta, cfg.num_leds());
    std::tie(W, a) =
        init_point(model, H, cfg.qos, cfg.profiles, cfg.eta, eps1, eps2, rho, dc);
  }
  // Drop the bias to the closed-form lower endpoint; this only frees power.
  const double p_comp = computation_power(cfg.profiles, rho, cfg.eta);
  dc = optimal_dc_bias(W, cfg.qos, p_comp);
  return {W, a, dc, rho};
}

}  // namespace

Design initialize(const NetworkConfig& cfg) {
  const ChannelMatrix H = build_channel_matrix(cfg.scene, cfg.optical);
  const RateModel model = rsma_rate_model(cfg.num_users(), cfg.num_leds());
  const InitResult init = initialize_model(cfg, model, H);
  Design d = make_design(init.beams, init.dc_bias, init.a, init.rho);
  const auto viols = check_feasibility(d, H, cfg.qos, cfg.profiles, cfg.eta, 1e-9);
  if (!viols.empty())
    throw InfeasibleError("no feasible start: " + viols.front().constraint);
  return d;
}

SolveOutput solve(const NetworkConfig& cfg) {
  return solve_model(cfg, rsma_rate_model(cfg.num_users(), cfg.num_leds()), true);
}

SolveOutput solve_model(const NetworkConfig& cfg, const RateModel& model, bool optimize_rho,
                        const std::optional<Design>& warm) {
  using clock = std::chrono::steady_clock;
  const ChannelMatrix H = build_channel_matrix(cfg.scene, cfg.optical);
  const QosParams& qos = cfg.qos;

  InitResult cur = warm ? InitResult{warm->stacked_beams(), warm->common_rates,
                                     warm->dc_bias, warm->rho}
                        : initialize_model(cfg, model, H);
  Design design = make_design(cur.beams, cur.dc_bias, cur.a, cur.rho);
  EvalReport rep = evaluate_model(model, design, H, qos, cfg.profiles, cfg.eta);
  if (!rep.feasible())
    throw InfeasibleError("no feasible start: " + rep.violations.front().constraint);

  double v_obj = rep.energy_efficiency;
  Design best = design;
  double best_ee = v_obj;

  ScaOptions sca_opts{cfg.solver.sca_tol, cfg.solver.sca_max_iters, cfg.solver.barrier_tol};
  DinkelbachOptions dk_opts{cfg.solver.dinkelbach_tol, cfg.solver.dinkelbach_max_iters,
                            cfg.solver.dca_max_iters};

  SolveOutput out;
  out.trace.status = "max-iterations";
  for (int outer = 1; outer <= cfg.solver.outer_max_iters; ++outer) {
    const auto t_start = clock::now();
    OuterTraceRow row;
    row.iter = outer;

    ScaRun sca = run_sca(model, H, qos, cur.rho, cur.dc_bias, cfg.profiles, cfg.eta,
                         sca_opts, std::make_pair(cur.beams, cur.a));
    cur.beams = sca.beams;
    cur.a = sca.a;
    row.sca = std::move(sca.trace);
    row.sca_iters = static_cast<int>(row.sca.size()) - 1;

    design = make_design(cur.beams, cur.dc_bias, cur.a, cur.rho);
    row.v_s1 = evaluate_model(model, design, H, qos, cfg.profiles, cfg.eta)
                   .energy_efficiency;

    if (optimize_rho) {
      const auto rates = evaluate_rates(model, H, cur.beams, qos.noise_power);
      const Eigen::VectorXd u = numerator_rates(model, cur.a, rates, qos);
      DinkelbachRun dk =
          run_dinkelbach(cur.beams, u, cur.rho, qos, cfg.profiles, cfg.eta, dk_opts);
      cur.rho = dk.rho;
      cur.dc_bias = dk.dc_bias;
      row.dinkelbach = std::move(dk.trace);
      row.dinkelbach_iters = static_cast<int>(row.dinkelbach.size()) - 1;
    } else {
      const double p_comp = computation_power(cfg.profiles, cur.rho, cfg.eta);
      cur.dc_bias = optimal_dc_bias(cur.beams, qos, p_comp);
    }

    design = make_design(cur.beams, cur.dc_bias, cur.a, cur.rho);
    row.v_s2 = evaluate_model(model, design, H, qos, cfg.profiles, cfg.eta)
                   .energy_efficiency;
    row.v_obj = row.v_s2;
    row.wall_ms =
        std::chrono::duration<double, std::milli>(clock::now() - t_start).count();

    if (row.v_obj > best_ee) {
      best_ee = row.v_obj;
      best = design;
    }
    const double rel_change = std::abs(row.v_obj - v_obj) / std::max(v_obj, 1e-12);
    v_obj = row.v_obj;
    out.trace.outer.push_back(std::move(row));
    if (rel_change < cfg.solver.outer_tol) {
      out.trace.status = "converged";
      break;
    }
  }

  out.design = best;
  out.report = evaluate_model(model, best, H, qos, cfg.profiles, cfg.eta, 1e-6);
  if (!out.report.feasible())
    throw std::logic_error("final design infeasible: " +
                           out.report.violations.front().constraint);
  return out;
}

void write_outer_trace_csv(std::span<const OuterTraceRow> rows, std::ostream& os) {
  os << "iter,v_s1,v_s2,v_obj,sca_iters,dinkelbach_iters,wall_ms\n";
  char buf[192];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g,%d,%d,%.3f\n", r.iter, r.v_s1, r.v_s2,
                  r.v_obj, r.sca_iters, r.dinkelbach_iters, r.wall_ms);
    os << buf;
  }
}

}  // namespace vlcee
