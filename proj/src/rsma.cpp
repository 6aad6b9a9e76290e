#include "vlcee/rsma.hpp"

#include <cmath>

namespace vlcee {
namespace {

double snr_rate(double desired_power, double denom) {
  return std::log2(1.0 + kVlcSnrCoef * desired_power / denom);
}

}  // namespace

Eigen::MatrixXd Design::stacked_beams() const {
  Eigen::MatrixXd w(num_users() + 1, num_leds());
  w.row(0) = w_common.transpose();
  w.bottomRows(num_users()) = w_private;
  return w;
}

Design make_design(const Eigen::MatrixXd& stacked_beams, double dc_bias,
                   const Eigen::VectorXd& common_rates, const Eigen::VectorXd& rho) {
  Design d;
  d.w_common = stacked_beams.row(0).transpose();
  d.w_private = stacked_beams.bottomRows(stacked_beams.rows() - 1);
  d.dc_bias = dc_bias;
  d.common_rates = common_rates;
  d.rho = rho;
  return d;
}

std::vector<std::string> validate_qos(const QosParams& q, int num_users) {
  std::vector<std::string> v;
  if (!(q.knowledge_rate_min >= 0)) v.push_back("knowledge_rate_min must be >= 0");
  if (q.user_rate_min.size() != num_users) v.push_back("user_rate_min must have K entries");
  if ((q.user_rate_min.array() < 0).any()) v.push_back("user_rate_min entries must be >= 0");
  if (!(q.drive_min >= 0 && q.drive_min < q.drive_max))
    v.push_back("drive currents must satisfy 0 <= I_L < I_U");
  if (!(q.circuit_power > 0)) v.push_back("circuit_power must be > 0");
  if (!(q.power_max > q.circuit_power)) v.push_back("power_max must exceed circuit_power");
  if (!(q.led_voltage > 0)) v.push_back("led_voltage must be > 0");
  if (q.noise_power.size() != num_users) v.push_back("noise_power must have K entries");
  if ((q.noise_power.array() <= 0).any()) v.push_back("noise_power entries must be > 0");
  return v;
}

double common_rate(const Eigen::VectorXd& h, const Design& d, double sigma2) {
  const double desired = std::pow(h.dot(d.w_common), 2);
  double denom = sigma2;
  for (int l = 0; l < d.num_users(); ++l)
    denom += std::pow(h.dot(d.w_private.row(l).transpose()), 2);
  return snr_rate(desired, denom);
}

double private_rate(const Eigen::VectorXd& h, const Design& d, int user, double sigma2) {
  const double desired = std::pow(h.dot(d.w_private.row(user).transpose()), 2);
  double denom = sigma2;
  for (int l = 0; l < d.num_users(); ++l) {
    if (l == user) continue;
    denom += std::pow(h.dot(d.w_private.row(l).transpose()), 2);
  }
  return snr_rate(desired, denom);
}

double effective_rate(double a_k, double r_k, double rho_k) {
  if (!(rho_k > 0)) throw std::domain_error("effective_rate: rho must be positive");
  return (a_k + r_k) / rho_k;
}

PowerBreakdown power_breakdown(const Design& d, const QosParams& qos,
                               std::span<const CompressionProfile> profiles, double eta,
                               int num_leds) {
  PowerBreakdown p;
  p.comp = computation_power(profiles, d.rho, eta);
  p.ac = d.w_common.squaredNorm() + d.w_private.squaredNorm();
  p.dc = num_leds * qos.led_voltage * d.dc_bias + qos.circuit_power;
  return p;
}

double energy_efficiency(const Design& d, const ChannelMatrix& H, const QosParams& qos,
                         std::span<const CompressionProfile> profiles, double eta) {
  const auto power = power_breakdown(d, qos, profiles, eta, static_cast<int>(H.cols()));
  double sum = 0.0;
  for (int k = 0; k < d.num_users(); ++k) {
    const double r_k = private_rate(H.row(k).transpose(), d, k, qos.noise_power[k]);
    sum += effective_rate(d.common_rates[k + 1], r_k, d.rho[k]);
  }
  return sum / power.total();
}

std::vector<Violation> check_feasibility(const Design& d, const ChannelMatrix& H,
                                         const QosParams& qos,
                                         std::span<const CompressionProfile> profiles,
                                         double eta, double tol) {
  std::vector<Violation> out;
  const auto push = [&](const std::string& id, double margin) {
    if (margin < -tol) out.push_back({id, margin});
  };
  const int K = d.num_users();
  const int N = static_cast<int>(H.cols());

  const auto power = power_breakdown(d, qos, profiles, eta, N);
  push("15b", qos.power_max - power.total());

  const double clip = std::min(d.dc_bias - qos.drive_min, qos.drive_max - d.dc_bias);
  const Eigen::MatrixXd W = d.stacked_beams();
  for (int i = 0; i < N; ++i) push("15c[" + std::to_string(i) + "]", clip - W.col(i).cwiseAbs().sum());

  const double a_total = d.common_rates.sum();
  for (int k = 0; k < K; ++k) {
    const double c_k = common_rate(H.row(k).transpose(), d, qos.noise_power[k]);
    push("15d[" + std::to_string(k) + "]", c_k - a_total);
  }

  push("15e", d.common_rates[0] - qos.knowledge_rate_min);

  for (int k = 0; k < K; ++k) {
    const double r_k = private_rate(H.row(k).transpose(), d, k, qos.noise_power[k]);
    const double r_eff = effective_rate(d.common_rates[k + 1], r_k, d.rho[k]);
    push("15f[" + std::to_string(k) + "]", r_eff - qos.user_rate_min[k]);
  }

  for (int k = 0; k <= K; ++k) push("15g[" + std::to_string(k) + "]", d.common_rates[k]);

  for (int k = 0; k < K; ++k) {
    push("15h[" + std::to_string(k) + "].lo", d.rho[k] - profiles[k].rho_min);
    push("15h[" + std::to_string(k) + "].hi", 1.0 - d.rho[k]);
  }
  return out;
}

EvalReport evaluate(const Design& d, const ChannelMatrix& H, const QosParams& qos,
                    std::span<const CompressionProfile> profiles, double eta, double tol) {
  EvalReport rep;
  const int K = d.num_users();
  rep.common_rate.resize(K);
  rep.private_rate.resize(K);
  rep.effective_rate.resize(K);
  for (int k = 0; k < K; ++k) {
    rep.common_rate[k] = common_rate(H.row(k).transpose(), d, qos.noise_power[k]);
    rep.private_rate[k] = private_rate(H.row(k).transpose(), d, k, qos.noise_power[k]);
    rep.effective_rate[k] =
        effective_rate(d.common_rates[k + 1], rep.private_rate[k], d.rho[k]);
  }
  rep.power = power_breakdown(d, qos, profiles, eta, static_cast<int>(H.cols()));
  rep.energy_efficiency = rep.effective_rate.sum() / rep.power.total();
  rep.violations = check_feasibility(d, H, qos, profiles, eta, tol);
  return rep;
}

}  // namespace vlcee
