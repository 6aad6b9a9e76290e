#include <doctest.h>

#include <random>

#include "vlcee/rsma.hpp"

using namespace vlcee;

namespace {

Design zero_design(int K, int N) {
  Design d;
  d.w_common = Eigen::VectorXd::Zero(N);
  d.w_private = Eigen::MatrixXd::Zero(K, N);
  d.dc_bias = 0.5;
  d.common_rates = Eigen::VectorXd::Zero(K + 1);
  d.rho = Eigen::VectorXd::Ones(K);
  return d;
}

QosParams basic_qos(int K) {
  QosParams q;
  q.user_rate_min = Eigen::VectorXd::Ones(K);
  q.noise_power = Eigen::VectorXd::Constant(K, 1e-13);
  return q;
}

}  // namespace

TEST_CASE("common rate") {
  const double sigma2 = 1e-13;

  Design d = zero_design(1, 1);
  Eigen::VectorXd h = Eigen::VectorXd::Ones(1);
  CHECK(common_rate(h, d, sigma2) == doctest::Approx(0.0));

  // scaled SINR of exactly one: |h'w0|^2 = (pi e / 2) sigma^2, no interference
  d.w_common[0] = std::sqrt(sigma2 / kVlcSnrCoef);
  CHECK(common_rate(h, d, sigma2) == doctest::Approx(1.0).epsilon(1e-12));

  // desired 4e-12, private interference 1e-12, noise 1e-13;
  // frozen from an independent evaluation of the rate formula
  Design d2 = zero_design(1, 1);
  Eigen::VectorXd h2 = Eigen::VectorXd::Constant(1, 2e-6);
  d2.w_common[0] = 1.0;                  // (2e-6)^2 = 4e-12
  d2.w_private(0, 0) = 0.5;              // (1e-6)^2 = 1e-12
  CHECK(common_rate(h2, d2, sigma2) ==
        doctest::Approx(0.888798891260339).epsilon(1e-12));
}

TEST_CASE("private rate") {
  const double sigma2 = 1e-13;
  Design d = zero_design(1, 1);
  Eigen::VectorXd h = Eigen::VectorXd::Ones(1);
  CHECK(private_rate(h, d, 0, sigma2) == doctest::Approx(0.0));

  d.w_private(0, 0) = std::sqrt(sigma2 / kVlcSnrCoef);
  d.w_common[0] = 100.0;  // the common beam never interferes after SIC
  CHECK(private_rate(h, d, 0, sigma2) == doctest::Approx(1.0).epsilon(1e-12));

  // symmetric two-user case
  Design d2 = zero_design(2, 2);
  d2.w_private << 1.0, 0.5, 0.5, 1.0;
  Eigen::VectorXd ha(2), hb(2);
  ha << 1e-6, 2e-6;
  hb << 2e-6, 1e-6;
  CHECK(private_rate(ha, d2, 0, sigma2) ==
        doctest::Approx(private_rate(hb, d2, 1, sigma2)).epsilon(1e-12));
}

TEST_CASE("effective rate") {
  CHECK(effective_rate(1.0, 1.0, 0.5) == doctest::Approx(4.0));
  CHECK(effective_rate(0.0, 2.0, 1.0) == doctest::Approx(2.0));
  CHECK(effective_rate(0.5, 1.5, 0.25) == doctest::Approx(8.0));
  CHECK_THROWS_AS(effective_rate(1.0, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(effective_rate(1.0, 1.0, -0.5), std::domain_error);
}

TEST_CASE("power breakdown") {
  QosParams q = basic_qos(2);
  std::vector<CompressionProfile> ps(2, default_compression_profile());

  Design d = zero_design(2, 4);
  d.dc_bias = 0.5;
  auto p = power_breakdown(d, q, ps, 1.0, 4);
  CHECK(p.dc == doctest::Approx(8.0));
  CHECK(p.ac == doctest::Approx(0.0));
  CHECK(p.comp == doctest::Approx(0.0));

  d.w_common = Eigen::VectorXd::Constant(4, 0.1);
  d.w_private = Eigen::MatrixXd::Constant(2, 4, 0.1);
  p = power_breakdown(d, q, ps, 1.0, 4);
  CHECK(p.ac == doctest::Approx(0.12).epsilon(1e-12));
}

TEST_CASE("energy efficiency of a constructed design") {
  // two users with a_k + r_k = 2 each, rho = 1, powers 1 (ac) + 8 (dc)
  QosParams q = basic_qos(2);
  q.led_voltage = 3.0;
  q.circuit_power = 2.0;
  std::vector<CompressionProfile> ps(2, default_compression_profile());

  Design d = zero_design(2, 2);
  d.dc_bias = 1.0;  // dc = 2 * 3 * 1 + 2 = 8
  Eigen::MatrixXd H(2, 2);
  H << 1e-6, 0.0, 0.0, 1e-6;
  // orthogonal channels, r_k = 2: SINR_eff = 3 -> |h w|^2 = 3 sigma^2 / coef
  const double w = std::sqrt(3.0 * 1e-13 / kVlcSnrCoef) / 1e-6;
  d.w_private(0, 0) = w;
  d.w_private(1, 1) = w;
  const double ac = d.w_private.squaredNorm();

  const double ee = energy_efficiency(d, H, q, ps, 1.0);
  CHECK(ee == doctest::Approx(4.0 / (ac + 8.0)).epsilon(1e-12));

  // halving rho doubles the numerator at fixed power (eta = 0 keeps p_comp 0)
  Design d2 = d;
  d2.rho.setConstant(0.5);
  CHECK(energy_efficiency(d2, H, q, ps, 0.0) ==
        doctest::Approx(2.0 * energy_efficiency(d, H, q, ps, 0.0)).epsilon(1e-12));
}

TEST_CASE("feasibility checker flags the documented cases") {
  QosParams q = basic_qos(1);
  q.knowledge_rate_min = 0.5;
  std::vector<CompressionProfile> ps(1, default_compression_profile());
  Eigen::MatrixXd H = Eigen::MatrixXd::Constant(1, 1, 1e-5);

  SUBCASE("zero beams cannot carry the knowledge stream") {
    Design d = zero_design(1, 1);
    d.common_rates[0] = 0.5;
    d.common_rates[1] = 1.0;
    const auto v = check_feasibility(d, H, q, ps, 1.0);
    bool found = false;
    for (const auto& item : v) found = found || item.constraint.rfind("15d", 0) == 0;
    CHECK(found);
  }

  SUBCASE("dc bias at the lower drive limit leaves no beam headroom") {
    Design d = zero_design(1, 1);
    d.dc_bias = q.drive_min;
    d.w_common[0] = 0.01;
    const auto v = check_feasibility(d, H, q, ps, 1.0);
    bool found = false;
    for (const auto& item : v) found = found || item.constraint.rfind("15c", 0) == 0;
    CHECK(found);
  }

  SUBCASE("knowledge rate shortfall is reported with its signed residual") {
    Design d = zero_design(1, 1);
    d.common_rates[0] = 0.0;
    const auto v = check_feasibility(d, H, q, ps, 1.0);
    bool found = false;
    for (const auto& item : v)
      if (item.constraint == "15e") {
        found = true;
        CHECK(item.residual == doctest::Approx(-0.5));
      }
    CHECK(found);
  }
}

TEST_CASE("rate monotonicity and sign-flip invariance") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double sigma2 = 1e-13;
  for (int trial = 0; trial < 100; ++trial) {
    Design d = zero_design(2, 3);
    Eigen::VectorXd h(3);
    for (int i = 0; i < 3; ++i) {
      h[i] = std::abs(u(rng)) * 1e-5;
      d.w_common[i] = u(rng);
      d.w_private(0, i) = u(rng);
      d.w_private(1, i) = u(rng);
    }
    const double c = common_rate(h, d, sigma2);
    const double r = private_rate(h, d, 0, sigma2);

    Design up = d;
    up.w_common *= 1.7;
    CHECK(common_rate(h, up, sigma2) >= c - 1e-12);
    Design up2 = d;
    up2.w_private.row(0) *= 1.7;
    CHECK(private_rate(h, up2, 0, sigma2) >= r - 1e-12);

    Design flip = d;
    flip.w_common *= -1.0;
    flip.w_private.row(1) *= -1.0;
    CHECK(common_rate(h, flip, sigma2) == doctest::Approx(c).epsilon(1e-12));
    CHECK(private_rate(h, flip, 0, sigma2) == doctest::Approx(r).epsilon(1e-12));
  }
}

TEST_CASE("evaluator is self-consistent on random designs") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  QosParams q = basic_qos(2);
  std::vector<CompressionProfile> ps(2, default_compression_profile());
  for (int trial = 0; trial < 1000; ++trial) {
    Design d = zero_design(2, 3);
    Eigen::MatrixXd H(2, 3);
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 3; ++i) H(k, i) = u(rng) * 1e-5;
    d.w_common = Eigen::VectorXd::NullaryExpr(3, [&](Eigen::Index) { return u(rng) - 0.5; });
    d.w_private = Eigen::MatrixXd::NullaryExpr(
        2, 3, [&](Eigen::Index, Eigen::Index) { return u(rng) - 0.5; });
    d.dc_bias = 0.1 + 0.8 * u(rng);
    d.common_rates << 0.1, u(rng), u(rng);
    d.rho << 0.2 + 0.8 * u(rng), 0.2 + 0.8 * u(rng);

    const EvalReport rep = evaluate(d, H, q, ps, 1.0);

    // recompute from the raw pieces
    double num = 0.0;
    for (int k = 0; k < 2; ++k) {
      const double r_k = private_rate(H.row(k).transpose(), d, k, q.noise_power[k]);
      num += (d.common_rates[k + 1] + r_k) / d.rho[k];
    }
    const double power = computation_power(ps, d.rho, 1.0) +
                         d.w_common.squaredNorm() + d.w_private.squaredNorm() +
                         3 * q.led_voltage * d.dc_bias + q.circuit_power;
    CHECK(rep.energy_efficiency == doctest::Approx(num / power).epsilon(1e-14));
    CHECK(rep.energy_efficiency ==
          doctest::Approx(energy_efficiency(d, H, q, ps, 1.0)).epsilon(1e-14));

    // checker completeness: empty violations iff every margin clears -tol
    const auto v = check_feasibility(d, H, q, ps, 1.0);
    bool all_ok = true;
    {
      const auto power_b = power_breakdown(d, q, ps, 1.0, 3);
      all_ok &= q.power_max - power_b.total() >= -1e-9;
      const double clip = std::min(d.dc_bias - q.drive_min, q.drive_max - d.dc_bias);
      const Eigen::MatrixXd W = d.stacked_beams();
      for (int i = 0; i < 3; ++i) all_ok &= clip - W.col(i).cwiseAbs().sum() >= -1e-9;
      const double a_total = d.common_rates.sum();
      for (int k = 0; k < 2; ++k) {
        all_ok &=
            common_rate(H.row(k).transpose(), d, q.noise_power[k]) - a_total >= -1e-9;
        const double r_k = private_rate(H.row(k).transpose(), d, k, q.noise_power[k]);
        all_ok &= effective_rate(d.common_rates[k + 1], r_k, d.rho[k]) -
                      q.user_rate_min[k] >=
                  -1e-9;
        all_ok &= d.rho[k] - ps[k].rho_min >= -1e-9;
        all_ok &= 1.0 - d.rho[k] >= -1e-9;
      }
      all_ok &= d.common_rates[0] - q.knowledge_rate_min >= -1e-9;
      for (int k = 0; k <= 2; ++k) all_ok &= d.common_rates[k] >= -1e-9;
    }
    CHECK(v.empty() == all_ok);
  }
}
