#include "vlcee/sca.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <ostream>

namespace vlcee {
namespace {

constexpr double kPiEHalf = 1.0 / kVlcSnrCoef;  // pi*e/2

double max_violation(const std::vector<Violation>& v) {
  double worst = 0.0;
  for (const auto& item : v) worst = std::max(worst, -item.residual);
  return worst;
}

}  // namespace

std::pair<double, double> subproblem_constants(const Eigen::VectorXd& rho, double dc_bias,
                                               const QosParams& qos,
                                               std::span<const CompressionProfile> profiles,
                                               double eta, int num_leds) {
  const double eps1 = computation_power(profiles, rho, eta) +
                      num_leds * qos.led_voltage * dc_bias + qos.circuit_power;
  const double eps2 = std::min(dc_bias - qos.drive_min, qos.drive_max - dc_bias);
  if (!(eps2 > 0))
    throw InfeasibleError("DC bias leaves no drive-range headroom (15c): eps2 = " +
                          std::to_string(eps2));
  return {eps1, eps2};
}

QolMinorant taylor_quad_over_lin(double x0, double y0) {
  if (!(y0 > 0)) throw std::domain_error("taylor_quad_over_lin: denominator must be positive");
  const double ratio = x0 / y0;
  return {2.0 * ratio, -ratio * ratio};
}

QolMinorantVec taylor_quad_over_lin(const Eigen::VectorXd& h, const Eigen::VectorXd& w0,
                                    double mu0) {
  if (!(mu0 > 0)) throw std::domain_error("taylor_quad_over_lin: denominator must be positive");
  const double x0 = h.dot(w0);
  QolMinorantVec m;
  m.w_coef = (2.0 * x0 / mu0) * h;
  m.mu_coef = -(x0 / mu0) * (x0 / mu0);
  return m;
}

ScaState make_state(const RateModel& model, const ChannelMatrix& H, const QosParams& qos,
                    const Eigen::MatrixXd& beams, const Eigen::VectorXd& a,
                    const Eigen::VectorXd& rho, double eps1) {
  ScaState s;
  s.beams = beams;
  s.a = a;
  const auto rates = evaluate_rates(model, H, beams, qos.noise_power);
  s.delta_common = rates.common;
  s.delta_private = rates.privates;

  const int certs = total_certs(model);
  s.zeta.resize(certs);
  s.mu.resize(certs);
  for_each_cert(model, [&](int idx, bool, int, const SinrCert& c) {
    const Eigen::VectorXd h = H.row(c.observer).transpose();
    double mu = qos.noise_power[c.observer];
    for (int l : c.interferers) mu += std::pow(h.dot(beams.row(l).transpose()), 2);
    const double desired = std::pow(h.dot(beams.row(c.beam).transpose()), 2);
    s.mu[idx] = mu;
    s.zeta[idx] = 1.0 + kVlcSnrCoef * desired / mu;
  });

  const Eigen::VectorXd u = numerator_rates(model, a, rates, qos);
  double num = 0.0;
  for (int k = 0; k < model.num_users; ++k) num += u[k] / rho[k];
  s.alpha = std::sqrt(std::max(num, 0.0));
  s.beta = beams.squaredNorm() + eps1;
  s.gamma = s.alpha * s.alpha / s.beta;
  return s;
}

VarLayout make_layout(const RateModel& model) {
  VarLayout L;
  L.num_beams = static_cast<int>(model.active_beams.size());
  L.num_leds = model.num_leds;
  L.num_common_streams = static_cast<int>(model.common.size());
  L.num_private_streams = static_cast<int>(model.privates.size());
  L.num_certs = total_certs(model);
  L.a_has_knowledge = model.has_common && model.has_knowledge_stream;
  L.num_a = model.has_common ? (model.num_users + (L.a_has_knowledge ? 1 : 0)) : 0;
  L.beam_pos.assign(model.num_users + 1, -1);
  for (size_t p = 0; p < model.active_beams.size(); ++p)
    L.beam_pos[model.active_beams[p]] = static_cast<int>(p);

  int at = 0;
  L.w_plus0 = at;
  at += L.num_beams * L.num_leds;
  L.w_minus0 = at;
  at += L.num_beams * L.num_leds;
  L.a0 = at;
  at += L.num_a;
  L.alpha = at++;
  L.beta = at++;
  L.gamma = at++;
  L.delta0 = at;
  at += L.num_common_streams + L.num_private_streams;
  L.zeta0 = at;
  at += L.num_certs;
  L.mu0 = at;
  at += L.num_certs;
  L.num_vars = at;
  return L;
}

Eigen::VectorXd state_to_vector(const ScaState& s, const VarLayout& L, double scale) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(L.num_vars);
  for (int b = 0; b < static_cast<int>(L.beam_pos.size()); ++b) {
    if (L.beam_pos[b] < 0) continue;
    for (int i = 0; i < L.num_leds; ++i) {
      const double w = s.beams(b, i);
      x[L.wp(b, i)] = std::max(w, 0.0);
      x[L.wm(b, i)] = std::max(-w, 0.0);
    }
  }
  if (L.num_a > 0)
    for (int k = L.a_has_knowledge ? 0 : 1; k < s.a.size(); ++k) x[L.a_index(k)] = s.a[k];
  x[L.alpha] = s.alpha;
  x[L.beta] = s.beta;
  x[L.gamma] = s.gamma;
  for (int k = 0; k < L.num_common_streams; ++k)
    x[L.delta_common_index(k)] = s.delta_common[k];
  for (int k = 0; k < L.num_private_streams; ++k)
    x[L.delta_private_index(k)] = s.delta_private[k];
  for (int c = 0; c < L.num_certs; ++c) {
    x[L.zeta_index(c)] = s.zeta[c];
    x[L.mu_index(c)] = s.mu[c] / (scale * scale);
  }
  return x;
}

ApproxProblem build_approx_problem(const ScaState& state, const RateModel& model,
                                   const ChannelMatrix& H, const QosParams& qos, double eps1,
                                   double eps2, const Eigen::VectorXd& rho) {
  const int K = model.num_users;
  const int N = model.num_leds;
  const VarLayout L = make_layout(model);
  const int n = L.num_vars;

  const double scale = H.cwiseAbs().maxCoeff();
  if (!(scale > 0)) throw ValidationError("channel matrix is identically zero");
  const ChannelMatrix Hs = H / scale;
  const Eigen::VectorXd noise_s = qos.noise_power / (scale * scale);

  const double p_ac_max = qos.power_max - eps1;
  if (!(p_ac_max > 0))
    throw InfeasibleError("power budget exhausted by DC and computation terms (15b)");

  // Compactness boxes derived from the instance.
  double hmax2 = 0.0;
  for (int k = 0; k < K; ++k) hmax2 = std::max(hmax2, Hs.row(k).squaredNorm());
  const double snr_max = kVlcSnrCoef * hmax2 * p_ac_max / noise_s.minCoeff();
  const double delta_max = std::min(30.0, std::log2(1.0 + snr_max) + 2.0);
  const double delta_lo = -32.0;
  const double zeta_max = std::exp2(delta_max) * 1.01 + 1.0;
  const double mu_max = 2.0 * (hmax2 * p_ac_max + noise_s.maxCoeff()) + 1.0;
  double num_max = 0.0;
  for (int k = 0; k < K; ++k) num_max += 2.0 * delta_max / rho[k];
  const double alpha_max = std::sqrt(num_max) + 1.0;
  const double gamma_max = alpha_max * alpha_max / std::max(eps1, 1e-9) + 1.0;

  ApproxProblem out{solver::SmoothConvexProgram(n), L, scale};
  auto& prog = out.prog;

  Eigen::VectorXd obj = Eigen::VectorXd::Zero(n);
  obj[L.gamma] = -1.0;  // maximize gamma
  prog.set_objective(obj);

  // Linearized fractional objective: gamma <= minorant of alpha^2/beta.
  {
    const QolMinorant m = taylor_quad_over_lin(std::max(state.alpha, 1e-9), state.beta);
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
    row[L.gamma] = 1.0;
    row[L.alpha] = -m.x_coef;
    row[L.beta] = -m.y_coef;
    prog.add_affine(row, 0.0);
  }

  // Per-certificate constraints: linearized SINR lower bound, exponential
  // link zeta >= 2^delta, and the exact interference bound on mu.
  for_each_cert(model, [&](int idx, bool is_common, int user, const SinrCert& c) {
    const Eigen::VectorXd h = Hs.row(c.observer).transpose();
    const Eigen::VectorXd w0 = state.beams.row(c.beam).transpose();
    // Defensive floor keeps the expansion denominator off zero.
    const double mu0 = std::max(state.mu[idx] / (scale * scale), noise_s[c.observer]);
    const QolMinorantVec m = taylor_quad_over_lin(h, w0, mu0);

    Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < N; ++i) {
      row[L.wp(c.beam, i)] -= m.w_coef[i];
      row[L.wm(c.beam, i)] += m.w_coef[i];
    }
    row[L.mu_index(idx)] = -m.mu_coef;
    row[L.zeta_index(idx)] = kPiEHalf;
    prog.add_affine(row, kPiEHalf);

    const int delta_idx =
        is_common ? L.delta_common_index(user) : L.delta_private_index(user);
    prog.add_exponential(delta_idx, L.zeta_index(idx));

    if (c.interferers.empty()) {
      Eigen::VectorXd mrow = Eigen::VectorXd::Zero(n);
      mrow[L.mu_index(idx)] = -1.0;
      prog.add_affine(mrow, -noise_s[c.observer]);
    } else {
      Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
      for (int l : c.interferers) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < N; ++i) {
          v[L.wp(l, i)] = h[i];
          v[L.wm(l, i)] = -h[i];
        }
        P.noalias() += v * v.transpose();
      }
      Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
      q[L.mu_index(idx)] = -1.0;
      prog.add_convex_quadratic(P, q, noise_s[c.observer]);
    }
  });

  // AC power quadratic, shared by the budget and the beta definition.
  Eigen::MatrixXd Pac = Eigen::MatrixXd::Zero(n, n);
  for (int b : model.active_beams) {
    for (int i = 0; i < N; ++i) {
      const int p = L.wp(b, i);
      const int q = L.wm(b, i);
      Pac(p, p) += 1.0;
      Pac(q, q) += 1.0;
      Pac(p, q) -= 1.0;
      Pac(q, p) -= 1.0;
    }
  }
  prog.add_convex_quadratic(Pac, Eigen::VectorXd::Zero(n), -p_ac_max);
  {
    Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
    q[L.beta] = -1.0;
    prog.add_convex_quadratic(Pac, q, eps1);
  }

  // Per-LED clipping budget on the split magnitudes.
  for (int i = 0; i < N; ++i) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
    for (int b : model.active_beams) {
      row[L.wp(b, i)] = 1.0;
      row[L.wm(b, i)] = 1.0;
    }
    prog.add_affine(row, eps2);
  }

  // alpha^2 <= sum of per-user numerator terms (kept exact, convex as written).
  {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
    P(L.alpha, L.alpha) = 1.0;
    Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
    double r = 0.0;
    for (int k = 0; k < K; ++k) {
      q[L.delta_private_index(k)] -= 1.0 / rho[k];
      if (model.knowledge_unicast) {
        r += qos.knowledge_rate_min / rho[k];
      } else {
        q[L.a_index(k + 1)] -= 1.0 / rho[k];
      }
    }
    prog.add_convex_quadratic(P, q, r);
  }

  // Per-user QoS through the private-rate slack.
  for (int k = 0; k < K; ++k) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
    double rhs;
    if (model.knowledge_unicast) {
      row[L.delta_private_index(k)] = -1.0;
      rhs = -(qos.knowledge_rate_min + rho[k] * qos.user_rate_min[k]);
    } else {
      row[L.a_index(k + 1)] = -1.0 / rho[k];
      row[L.delta_private_index(k)] = -1.0 / rho[k];
      rhs = -qos.user_rate_min[k];
    }
    prog.add_affine(row, rhs);
  }

  // Common-message decodability and rate-allocation sign constraints.
  if (model.has_common) {
    for (int k = 0; k < K; ++k) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
      if (L.a_has_knowledge) row[L.a_index(0)] = 1.0;
      for (int l = 1; l <= K; ++l) row[L.a_index(l)] = 1.0;
      row[L.delta_common_index(k)] = -1.0;
      prog.add_affine(row, 0.0);
    }
    if (L.a_has_knowledge) prog.add_lower_bound(L.a_index(0), qos.knowledge_rate_min);
    for (int k = L.a_has_knowledge ? 0 : 1; k <= K; ++k)
      prog.add_lower_bound(L.a_index(k), 0.0);
  }

  // Nonnegative split variables.
  for (int b : model.active_beams) {
    for (int i = 0; i < N; ++i) {
      prog.add_lower_bound(L.wp(b, i), 0.0);
      prog.add_lower_bound(L.wm(b, i), 0.0);
    }
  }

  // Compactness boxes on the auxiliaries.
  prog.add_lower_bound(L.alpha, 0.0);
  prog.add_upper_bound(L.alpha, alpha_max);
  prog.add_upper_bound(L.beta, qos.power_max + 1.0);
  prog.add_lower_bound(L.gamma, 0.0);
  prog.add_upper_bound(L.gamma, gamma_max);
  for (int d = 0; d < L.num_common_streams + L.num_private_streams; ++d) {
    prog.add_lower_bound(L.delta0 + d, delta_lo);
    prog.add_upper_bound(L.delta0 + d, delta_max);
  }
  for (int c = 0; c < L.num_certs; ++c) {
    prog.add_upper_bound(L.zeta_index(c), zeta_max);
    prog.add_upper_bound(L.mu_index(c), mu_max);
  }
  return out;
}

namespace {

Eigen::MatrixXd mrt_directions(const RateModel& model, const ChannelMatrix& H) {
  const int K = model.num_users;
  Eigen::MatrixXd mrt = Eigen::MatrixXd::Zero(K + 1, model.num_leds);
  Eigen::VectorXd u0 = Eigen::VectorXd::Zero(model.num_leds);
  for (int k = 0; k < K; ++k) {
    const Eigen::VectorXd dir = H.row(k).transpose().normalized();
    mrt.row(k + 1) = dir.transpose();
    u0 += dir;
  }
  if (model.has_common)
    mrt.row(0) = (u0.norm() > 0 ? u0.normalized() : H.row(0).transpose().normalized());
  return mrt;
}

// Interference-suppressing directions (normalized pseudo-inverse rows).
std::optional<Eigen::MatrixXd> zf_directions(const RateModel& model, const ChannelMatrix& H) {
  const int K = model.num_users;
  if (K < 2 || K > model.num_leds) return std::nullopt;
  const Eigen::MatrixXd gram = H * H.transpose();
  if (std::abs(gram.determinant()) < 1e-300) return std::nullopt;
  const Eigen::MatrixXd pinv = H.transpose() * gram.inverse();  // N x K
  Eigen::MatrixXd zf = Eigen::MatrixXd::Zero(K + 1, model.num_leds);
  for (int k = 0; k < K; ++k) {
    const double norm = pinv.col(k).norm();
    if (!(norm > 0)) return std::nullopt;
    zf.row(k + 1) = (pinv.col(k) / norm).transpose();
  }
  return zf;
}

struct StartAttempt {
  Eigen::MatrixXd dirs;
  double budget_frac;
};

std::pair<Eigen::MatrixXd, Eigen::VectorXd> scaled_start(const RateModel& model,
                                                         const ChannelMatrix& H,
                                                         const QosParams& qos,
                                                         const StartAttempt& at, double eps2,
                                                         double p_ac_budget) {
  double colsum_max = 0.0;
  for (int i = 0; i < model.num_leds; ++i)
    colsum_max = std::max(colsum_max, at.dirs.col(i).cwiseAbs().sum());
  const double t1 = at.budget_frac * eps2 / colsum_max;
  const double t2 = std::sqrt(at.budget_frac * p_ac_budget / at.dirs.squaredNorm());
  const Eigen::MatrixXd W = std::min(t1, t2) * at.dirs;

  const int K = model.num_users;
  Eigen::VectorXd a = Eigen::VectorXd::Zero(K + 1);
  if (model.has_common) {
    const auto rates = evaluate_rates(model, H, W, qos.noise_power);
    const double a0 = model.has_knowledge_stream ? qos.knowledge_rate_min : 0.0;
    const double resid = rates.common.minCoeff() - a0;
    a[0] = a0;
    for (int k = 1; k <= K; ++k) a[k] = std::max(resid, 0.0) / K;
    if (resid < -1e-12) a[0] = a0;  // checker reports the shortfall
  }
  return {W, a};
}

}  // namespace

std::pair<Eigen::MatrixXd, Eigen::VectorXd> init_point(
    const RateModel& model, const ChannelMatrix& H, const QosParams& qos,
    std::span<const CompressionProfile> profiles, double eta, double eps1, double eps2,
    const Eigen::VectorXd& rho, double dc_bias) {
  const int K = model.num_users;
  for (int k = 0; k < K; ++k)
    if (!(H.row(k).norm() > 0))
      throw ValidationError("zero channel row for user " + std::to_string(k));

  const double p_ac_budget = qos.power_max - eps1;
  if (!(p_ac_budget > 0))
    throw InfeasibleError("no feasible start: AC power budget empty (15b binding)");

  // Maximum-ratio directions; the common beam takes a progressively larger
  // share until the knowledge broadcast and rate splits become supportable
  // (the proportionality of each row is preserved).
  std::vector<StartAttempt> attempts;
  const Eigen::MatrixXd mrt = mrt_directions(model, H);
  if (model.has_common) {
    for (double omega : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
      Eigen::MatrixXd dirs = mrt;
      dirs.row(0) *= omega;
      attempts.push_back({dirs, 0.9});
    }
  } else {
    attempts.push_back({mrt, 0.9});
    if (const auto zf = zf_directions(model, H)) {
      attempts.push_back({*zf, 0.9});
      Eigen::MatrixXd blend = 0.5 * (mrt + *zf);
      for (int k = 1; k <= K; ++k) {
        const double norm = blend.row(k).norm();
        if (norm > 0) blend.row(k) /= norm;
      }
      attempts.push_back({blend, 0.9});
    }
  }

  std::string last_reason = "no candidate directions";
  for (const StartAttempt& at : attempts) {
    const auto [W, a] = scaled_start(model, H, qos, at, eps2, p_ac_budget);
    const Design d = make_design(W, dc_bias, a, rho);
    const auto viols = check_feasibility_model(model, d, H, qos, profiles, eta, 1e-9);
    if (viols.empty()) return {W, a};
    last_reason = viols.front().constraint + " (residual " +
                  std::to_string(viols.front().residual) + ")";
  }
  throw InfeasibleError("no feasible start: " + last_reason);
}

StartDesign init_unicast_start(const RateModel& model, const ChannelMatrix& H,
                               const QosParams& qos,
                               std::span<const CompressionProfile> profiles, double eta,
                               double dc_bias) {
  const int K = model.num_users;
  const auto [eps1_base, eps2] = subproblem_constants(Eigen::VectorXd::Ones(K), dc_bias, qos,
                                                      profiles, eta, model.num_leds);
  (void)eps1_base;
  const double eps1_dc = model.num_leds * qos.led_voltage * dc_bias + qos.circuit_power;

  std::vector<StartAttempt> attempts;
  const Eigen::MatrixXd mrt = mrt_directions(model, H);
  const auto zf = zf_directions(model, H);
  // Decode-order tilts matter for layered decoding: the first-decoded stream
  // may need extra power so every observer can strip it.
  std::vector<double> tilts = {1.0, 2.0, 4.0, 8.0, 16.0};
  std::vector<Eigen::MatrixXd> dir_sets = {mrt};
  if (zf) {
    dir_sets.push_back(*zf);
    Eigen::MatrixXd blend = 0.5 * (mrt + *zf);
    for (int k = 1; k <= K; ++k) {
      const double norm = blend.row(k).norm();
      if (norm > 0) blend.row(k) /= norm;
    }
    dir_sets.push_back(blend);
  }
  int first_stream = -1;  // beam whose certs span every observer (decoded first)
  for (int k = 0; k < K; ++k)
    if (static_cast<int>(model.privates[k].certs.size()) == K) first_stream = k + 1;

  for (const auto& dirs : dir_sets) {
    for (double tilt : tilts) {
      if (tilt != 1.0 && first_stream < 0) continue;
      Eigen::MatrixXd d = dirs;
      if (tilt != 1.0) d.row(first_stream) *= tilt;
      for (double frac : {0.9, 0.97, 0.7, 0.5}) attempts.push_back({d, frac});
    }
  }

  std::string last_reason = "no candidate directions";
  for (const StartAttempt& at : attempts) {
    for (double tau : {1.0, 0.8, 0.6, 0.5, 0.4, 0.3, 0.0}) {
      Eigen::VectorXd rho(K);
      for (int k = 0; k < K; ++k)
        rho[k] = profiles[k].rho_min + tau * (1.0 - profiles[k].rho_min);
      const double p_comp = computation_power(profiles, rho, eta);
      const double p_ac_budget = qos.power_max - (eps1_dc + p_comp);
      if (!(p_ac_budget > 0)) continue;
      const auto [W, a] = scaled_start(model, H, qos, at, eps2, p_ac_budget);
      const Design d = make_design(W, dc_bias, a, rho);
      const auto viols = check_feasibility_model(model, d, H, qos, profiles, eta, 1e-9);
      if (viols.empty()) return {W, a, rho};
      last_reason = viols.front().constraint;
    }
  }
  throw InfeasibleError("no feasible start: " + last_reason);
}

namespace {

std::pair<Eigen::MatrixXd, Eigen::VectorXd> extract_solution(const Eigen::VectorXd& x,
                                                             const VarLayout& L,
                                                             const RateModel& model) {
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(model.num_users + 1, model.num_leds);
  for (int b : model.active_beams)
    for (int i = 0; i < model.num_leds; ++i) W(b, i) = x[L.wp(b, i)] - x[L.wm(b, i)];
  Eigen::VectorXd a = Eigen::VectorXd::Zero(model.num_users + 1);
  if (L.num_a > 0)
    for (int k = L.a_has_knowledge ? 0 : 1; k <= model.num_users; ++k)
      a[k] = std::max(x[L.a_index(k)], 0.0);
  return {W, a};
}

}  // namespace

ScaRun run_sca(const RateModel& model, const ChannelMatrix& H, const QosParams& qos,
               const Eigen::VectorXd& rho, double dc_bias,
               std::span<const CompressionProfile> profiles, double eta,
               const ScaOptions& opts,
               const std::optional<std::pair<Eigen::MatrixXd, Eigen::VectorXd>>& warm) {
  const auto [eps1, eps2] = subproblem_constants(rho, dc_bias, qos, profiles, eta,
                                                 model.num_leds);
  Eigen::MatrixXd W;
  Eigen::VectorXd a;
  if (warm) {
    W = warm->first;
    a = warm->second;
  } else {
    std::tie(W, a) = init_point(model, H, qos, profiles, eta, eps1, eps2, rho, dc_bias);
  }

  ScaRun run;
  ScaState state = make_state(model, H, qos, W, a, rho, eps1);
  state.objective_history.push_back(state.gamma);

  const auto trace_row = [&](int iter, const ScaState& s) {
    const Design d = make_design(s.beams, dc_bias, s.a, rho);
    const auto viols = check_feasibility_model(model, d, H, qos, profiles, eta, 1e-9);
    run.trace.push_back({iter, s.gamma, s.beams.squaredNorm(), max_violation(viols)});
  };
  trace_row(0, state);

  run.converged = false;
  solver::BarrierOptions bopts;
  bopts.tol = opts.barrier_tol;
  for (int it = 1; it <= opts.max_iters; ++it) {
    ApproxProblem ap = build_approx_problem(state, model, H, qos, eps1, eps2, rho);
    const Eigen::VectorXd hint = state_to_vector(state, ap.layout, ap.channel_scale);
    const auto res = solver::solve_smooth_convex(ap.prog, hint, opts.barrier_tol, bopts);
    if (res.status == solver::Status::infeasible || res.status == solver::Status::unbounded)
      throw std::logic_error("approximate subproblem lost feasibility at iteration " +
                             std::to_string(it));

    const auto [W2, a2] = extract_solution(res.x, ap.layout, model);
    ScaState cand = make_state(model, H, qos, W2, a2, rho, eps1);
    if (cand.gamma < state.gamma) {
      // Solver tolerance stall: keep the better iterate and stop.
      run.converged = true;
      break;
    }
    const double rel = (cand.gamma - state.gamma) / std::max(state.gamma, 1e-12);
    cand.iter = it;
    cand.objective_history = state.objective_history;
    cand.objective_history.push_back(cand.gamma);
    state = std::move(cand);
    trace_row(it, state);
    if (rel < opts.tol) {
      run.converged = true;
      break;
    }
  }

  run.beams = state.beams;
  run.a = state.a;

  const Design final_design = make_design(state.beams, dc_bias, state.a, rho);
  const auto viols = check_feasibility_model(model, final_design, H, qos, profiles, eta, 1e-6);
  if (!viols.empty())
    throw std::logic_error("beamforming stage returned an infeasible point: " +
                           viols.front().constraint);
  run.state = std::move(state);
  return run;
}

void write_sca_trace_csv(std::span<const ScaTraceRow> rows, std::ostream& os) {
  os << "iter,objective,ac_power,max_residual\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g\n", r.iter, r.objective, r.ac_power,
                  r.max_residual);
    os << buf;
  }
}

}  // namespace vlcee
