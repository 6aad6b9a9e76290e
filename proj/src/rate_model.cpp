#include "vlcee/rate_model.hpp"

#include <cmath>

namespace vlcee {

RateModel rsma_rate_model(int num_users, int num_leds) {
  RateModel m;
  m.num_users = num_users;
  m.num_leds = num_leds;
  m.active_beams.resize(num_users + 1);
  for (int b = 0; b <= num_users; ++b) m.active_beams[b] = b;
  m.common.resize(num_users);
  m.privates.resize(num_users);
  for (int k = 0; k < num_users; ++k) {
    SinrCert c;
    c.beam = 0;
    c.observer = k;
    for (int l = 1; l <= num_users; ++l) c.interferers.push_back(l);
    m.common[k].certs = {c};

    SinrCert p;
    p.beam = k + 1;
    p.observer = k;
    for (int l = 1; l <= num_users; ++l)
      if (l != k + 1) p.interferers.push_back(l);
    m.privates[k].certs = {p};
  }
  return m;
}

int total_certs(const RateModel& model) {
  int n = 0;
  for (const auto& s : model.common) n += static_cast<int>(s.certs.size());
  for (const auto& s : model.privates) n += static_cast<int>(s.certs.size());
  return n;
}

void for_each_cert(const RateModel& model,
                   const std::function<void(int, bool, int, const SinrCert&)>& fn) {
  int idx = 0;
  for (size_t k = 0; k < model.common.size(); ++k)
    for (const auto& c : model.common[k].certs) fn(idx++, true, static_cast<int>(k), c);
  for (size_t k = 0; k < model.privates.size(); ++k)
    for (const auto& c : model.privates[k].certs) fn(idx++, false, static_cast<int>(k), c);
}

namespace {

double cert_rate(const SinrCert& c, const ChannelMatrix& H, const Eigen::MatrixXd& beams,
                 const Eigen::VectorXd& noise) {
  const Eigen::VectorXd h = H.row(c.observer).transpose();
  const double desired = std::pow(h.dot(beams.row(c.beam).transpose()), 2);
  double denom = noise[c.observer];
  for (int l : c.interferers) denom += std::pow(h.dot(beams.row(l).transpose()), 2);
  return std::log2(1.0 + kVlcSnrCoef * desired / denom);
}

double stream_rate(const StreamRate& s, const ChannelMatrix& H, const Eigen::MatrixXd& beams,
                   const Eigen::VectorXd& noise) {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& c : s.certs) r = std::min(r, cert_rate(c, H, beams, noise));
  return std::isfinite(r) ? r : 0.0;
}

}  // namespace

ModelRates evaluate_rates(const RateModel& model, const ChannelMatrix& H,
                          const Eigen::MatrixXd& beams, const Eigen::VectorXd& noise) {
  ModelRates out;
  out.common.resize(static_cast<Eigen::Index>(model.common.size()));
  for (size_t k = 0; k < model.common.size(); ++k)
    out.common[static_cast<Eigen::Index>(k)] = stream_rate(model.common[k], H, beams, noise);
  out.privates.resize(model.num_users);
  for (int k = 0; k < model.num_users; ++k)
    out.privates[k] = stream_rate(model.privates[k], H, beams, noise);
  return out;
}

Eigen::VectorXd numerator_rates(const RateModel& model, const Eigen::VectorXd& common_rates,
                                const ModelRates& rates, const QosParams& qos) {
  Eigen::VectorXd u(model.num_users);
  for (int k = 0; k < model.num_users; ++k) {
    if (model.knowledge_unicast)
      u[k] = rates.privates[k] - qos.knowledge_rate_min;
    else
      u[k] = common_rates[k + 1] + rates.privates[k];
  }
  return u;
}

std::vector<Violation> check_feasibility_model(const RateModel& model, const Design& d,
                                               const ChannelMatrix& H, const QosParams& qos,
                                               std::span<const CompressionProfile> profiles,
                                               double eta, double tol) {
  std::vector<Violation> out;
  const auto push = [&](const std::string& id, double margin) {
    if (margin < -tol) out.push_back({id, margin});
  };
  const int K = model.num_users;
  const int N = model.num_leds;
  const Eigen::MatrixXd W = d.stacked_beams();
  const auto rates = evaluate_rates(model, H, W, qos.noise_power);

  const auto power = power_breakdown(d, qos, profiles, eta, N);
  push("15b", qos.power_max - power.total());

  const double clip = std::min(d.dc_bias - qos.drive_min, qos.drive_max - d.dc_bias);
  for (int i = 0; i < N; ++i)
    push("15c[" + std::to_string(i) + "]", clip - W.col(i).cwiseAbs().sum());

  if (model.has_common) {
    const double a_total = d.common_rates.sum();
    for (int k = 0; k < K; ++k)
      push("15d[" + std::to_string(k) + "]", rates.common[k] - a_total);
    if (model.has_knowledge_stream)
      push("15e", d.common_rates[0] - qos.knowledge_rate_min);
    for (int k = 0; k <= K; ++k)
      push("15g[" + std::to_string(k) + "]", d.common_rates[k]);
  }

  for (int k = 0; k < K; ++k) {
    double margin;
    if (model.knowledge_unicast) {
      // r_k >= R0 + rho_k R_k, i.e. data rate (r_k - R0)/rho_k >= R_k.
      margin = rates.privates[k] - qos.knowledge_rate_min - d.rho[k] * qos.user_rate_min[k];
    } else {
      margin = (d.common_rates[k + 1] + rates.privates[k]) / d.rho[k] - qos.user_rate_min[k];
    }
    push("15f[" + std::to_string(k) + "]", margin);
  }

  for (int k = 0; k < K; ++k) {
    push("15h[" + std::to_string(k) + "].lo", d.rho[k] - profiles[k].rho_min);
    push("15h[" + std::to_string(k) + "].hi", 1.0 - d.rho[k]);
  }
  return out;
}

EvalReport evaluate_model(const RateModel& model, const Design& d, const ChannelMatrix& H,
                          const QosParams& qos, std::span<const CompressionProfile> profiles,
                          double eta, double tol) {
  EvalReport rep;
  const int K = model.num_users;
  const Eigen::MatrixXd W = d.stacked_beams();
  const auto rates = evaluate_rates(model, H, W, qos.noise_power);
  rep.common_rate = model.has_common ? rates.common : Eigen::VectorXd::Zero(K);
  rep.private_rate = rates.privates;
  const Eigen::VectorXd u = numerator_rates(model, d.common_rates, rates, qos);
  rep.effective_rate.resize(K);
  for (int k = 0; k < K; ++k) rep.effective_rate[k] = u[k] / d.rho[k];
  rep.power = power_breakdown(d, qos, profiles, eta, model.num_leds);
  rep.energy_efficiency = rep.effective_rate.sum() / rep.power.total();
  rep.violations = check_feasibility_model(model, d, H, qos, profiles, eta, tol);
  return rep;
}

}  // namespace vlcee
