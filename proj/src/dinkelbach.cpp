#include "vlcee/dinkelbach.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "vlcee/solver/lp.hpp"

namespace vlcee {

double optimal_dc_bias(const Eigen::MatrixXd& W, const QosParams& qos, double p_comp) {
  double colsum_max = 0.0;
  for (int i = 0; i < W.cols(); ++i)
    colsum_max = std::max(colsum_max, W.col(i).cwiseAbs().sum());
  const double b_star = colsum_max + qos.drive_min;

  const double eps3 = W.squaredNorm() + qos.circuit_power;
  const double drive_cap = qos.drive_max - colsum_max;
  const double power_cap =
      (qos.power_max - eps3 - p_comp) / (W.cols() * qos.led_voltage);
  if (b_star > drive_cap + 1e-12)
    throw InfeasibleError("DC bias interval empty: drive-range bound I_U binds (" +
                          std::to_string(b_star) + " > " + std::to_string(drive_cap) + ")");
  if (b_star > power_cap + 1e-12)
    throw InfeasibleError("DC bias interval empty: power budget binds (" +
                          std::to_string(b_star) + " > " + std::to_string(power_cap) + ")");
  return b_star;
}

double f_value(const Eigen::VectorXd& rho, const Eigen::VectorXd& u) {
  return (u.array() / rho.array()).sum();
}

double g_value(const Eigen::VectorXd& rho, std::span<const CompressionProfile> profiles,
               double eta, double eps4) {
  return eps4 + computation_power(profiles, rho, eta);
}

Eigen::VectorXd grad_f(const Eigen::VectorXd& rho, const Eigen::VectorXd& u) {
  return -(u.array() / (rho.array() * rho.array())).matrix();
}

Eigen::VectorXd dca_step(double lambda, const Eigen::VectorXd& rho_j,
                         const Eigen::VectorXd& u,
                         std::span<const CompressionProfile> profiles, double eta,
                         double eps5, const Eigen::VectorXd& caps) {
  const int K = static_cast<int>(rho_j.size());
  // Variables: [rho (K), q (K)] with q_k the epigraph of Q_k.
  auto lp = solver::LinearProgram::make(2 * K);
  const Eigen::VectorXd grad = grad_f(rho_j, u);
  for (int k = 0; k < K; ++k) {
    lp.c[k] = -grad[k];
    lp.c[K + k] = lambda * eta;
    lp.lower[k] = profiles[k].rho_min;
    lp.upper[k] = std::min(1.0, caps[k]);
    lp.lower[K + k] = 0.0;
  }

  Eigen::VectorXd budget = Eigen::VectorXd::Zero(2 * K);
  budget.tail(K).setConstant(eta);
  lp.rows.push_back({budget, eps5});

  for (int k = 0; k < K; ++k) {
    for (const auto& seg : profiles[k].segments) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(2 * K);
      row[k] = seg.slope;
      row[K + k] = -1.0;
      lp.rows.push_back({row, -seg.intercept});
    }
  }

  const auto res = solver::solve_lp(lp);
  if (res.status != solver::Status::optimal)
    throw InfeasibleError(std::string("compression-ratio step failed: ") +
                          solver::to_string(res.status));
  // Strip simplex round-off so downstream overhead evaluations stay in range.
  Eigen::VectorXd rho = res.x.head(K);
  for (int k = 0; k < K; ++k)
    rho[k] = std::clamp(rho[k], profiles[k].rho_min, std::min(1.0, caps[k]));
  return rho;
}

DcaRun run_dca(double lambda, const Eigen::VectorXd& rho0, const Eigen::VectorXd& u,
               std::span<const CompressionProfile> profiles, double eta, double eps4,
               double eps5, const Eigen::VectorXd& caps, double tol, int max_iters) {
  DcaRun run;
  run.rho = rho0;
  const auto true_obj = [&](const Eigen::VectorXd& rho) {
    return lambda * g_value(rho, profiles, eta, eps4) - f_value(rho, u);
  };
  run.true_objective.push_back(true_obj(rho0));
  run.lin_objective.push_back(run.true_objective.front());

  run.converged = false;
  for (int j = 1; j <= max_iters; ++j) {
    const Eigen::VectorXd next = dca_step(lambda, run.rho, u, profiles, eta, eps5, caps);
    const double lin =
        lambda * g_value(next, profiles, eta, eps4) -
        (f_value(run.rho, u) + grad_f(run.rho, u).dot(next - run.rho));
    const double tv = true_obj(next);
    if (tv > run.true_objective.back() + 1e-10 * (1.0 + std::abs(tv))) break;

    const double prev_lin = run.lin_objective.back();
    run.rho = next;
    run.true_objective.push_back(tv);
    run.lin_objective.push_back(lin);
    if (std::abs(lin - prev_lin) <= tol * std::max(std::abs(prev_lin), 1e-12)) {
      run.converged = true;
      break;
    }
  }
  return run;
}

DinkelbachRun run_dinkelbach(const Eigen::MatrixXd& W, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& rho_init, const QosParams& qos,
                             std::span<const CompressionProfile> profiles, double eta,
                             const DinkelbachOptions& opts) {
  const int K = static_cast<int>(rho_init.size());
  DinkelbachRun run;

  const double p_comp_in = computation_power(profiles, rho_init, eta);
  run.dc_bias = optimal_dc_bias(W, qos, p_comp_in);
  const double eps3 = W.squaredNorm() + qos.circuit_power;
  const double eps4 = W.cols() * qos.led_voltage * run.dc_bias + eps3;
  const double eps5 = qos.power_max - eps4;

  Eigen::VectorXd caps(K);
  for (int k = 0; k < K; ++k) {
    caps[k] = qos.user_rate_min[k] > 0 ? std::min(1.0, u[k] / qos.user_rate_min[k]) : 1.0;
    if (caps[k] < profiles[k].rho_min - 1e-12)
      throw InfeasibleError("rate cap below rho_min for user " + std::to_string(k) +
                            " (15f binding)");
  }
  if (computation_power(profiles, rho_init, eta) > eps5 + 1e-9)
    throw InfeasibleError("computation power exceeds the residual budget (15b)");

  Eigen::VectorXd rho = rho_init;
  for (int k = 0; k < K; ++k) rho[k] = std::clamp(rho[k], profiles[k].rho_min, caps[k]);

  double fv = f_value(rho, u);
  double gv = g_value(rho, profiles, eta, eps4);
  double lambda = fv / gv;
  run.trace.push_back({0, lambda, fv, gv});

  run.converged = false;
  for (int i = 1; i <= opts.max_outer; ++i) {
    const DcaRun dca =
        run_dca(lambda, rho, u, profiles, eta, eps4, eps5, caps, opts.tol, opts.max_dca);
    rho = dca.rho;
    run.total_dca_iters += static_cast<int>(dca.lin_objective.size()) - 1;

    fv = f_value(rho, u);
    gv = g_value(rho, profiles, eta, eps4);
    const double lambda_new = fv / gv;
    run.trace.push_back({i, lambda_new, fv, gv});
    const bool stable = std::abs(lambda_new - lambda) <= opts.tol * std::max(lambda, 1e-12);
    lambda = lambda_new;
    if (stable) {
      run.converged = true;
      break;
    }
  }
  run.rho = rho;
  return run;
}

DinkelbachRun run_dinkelbach(const Design& incoming, const ChannelMatrix& H,
                             const QosParams& qos,
                             std::span<const CompressionProfile> profiles, double eta,
                             const DinkelbachOptions& opts) {
  const int K = incoming.num_users();
  Eigen::VectorXd u(K);
  for (int k = 0; k < K; ++k) {
    const double r_k = private_rate(H.row(k).transpose(), incoming, k, qos.noise_power[k]);
    u[k] = incoming.common_rates[k + 1] + r_k;
  }
  return run_dinkelbach(incoming.stacked_beams(), u, incoming.rho, qos, profiles, eta, opts);
}

void write_dinkelbach_trace_csv(std::span<const DinkelbachTraceRow> rows, std::ostream& os) {
  os << "outer_iter,lambda,f,g\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g\n", r.outer_iter, r.lambda, r.f, r.g);
    os << buf;
  }
}

}  // namespace vlcee
