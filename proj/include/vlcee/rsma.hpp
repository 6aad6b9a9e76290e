#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

#include "vlcee/channel.hpp"
#include "vlcee/semantics.hpp"

namespace vlcee {

// Candidate solution of the joint design problem.
struct Design {
  Eigen::VectorXd w_common;      // N, amperes
  Eigen::MatrixXd w_private;     // K x N, amperes
  double dc_bias = 0.0;          // amperes
  Eigen::VectorXd common_rates;  // K+1: [a0, a1, ..., aK], bps/Hz
  Eigen::VectorXd rho;           // K, semantic compression ratios

  int num_users() const { return static_cast<int>(w_private.rows()); }
  int num_leds() const { return static_cast<int>(w_common.size()); }

  // Rows: common beam first, then one private beam per user.
  Eigen::MatrixXd stacked_beams() const;
};

Design make_design(const Eigen::MatrixXd& stacked_beams, double dc_bias,
                   const Eigen::VectorXd& common_rates, const Eigen::VectorXd& rho);

// QoS and power-budget parameters of the scenario.
struct QosParams {
  double knowledge_rate_min = 0.1;   // R0, bps/Hz
  Eigen::VectorXd user_rate_min;     // R_k, bps/Hz
  double power_max = 10.0;           // watts
  double drive_min = 0.1;            // I_L, amperes
  double drive_max = 1.0;            // I_U, amperes
  double led_voltage = 3.0;          // U_LED, volts
  double circuit_power = 2.0;        // watts
  Eigen::VectorXd noise_power;       // sigma^2_k, watts
};

std::vector<std::string> validate_qos(const QosParams& qos, int num_users);

struct Violation {
  std::string constraint;  // e.g. "15c[2]"
  double residual;         // negative satisfaction margin
};

struct PowerBreakdown {
  double comp = 0.0;
  double ac = 0.0;
  double dc = 0.0;
  double total() const { return comp + ac + dc; }
};

struct EvalReport {
  Eigen::VectorXd common_rate;     // c_k
  Eigen::VectorXd private_rate;    // r_k
  Eigen::VectorXd effective_rate;  // r_k^eff
  PowerBreakdown power;
  double energy_efficiency = 0.0;  // (bps/Hz) / W
  std::vector<Violation> violations;

  double sum_effective_rate() const { return effective_rate.sum(); }
  bool feasible() const { return violations.empty(); }
};

// Rate for decoding the common message at a user with channel row h,
// all private beams treated as interference.
double common_rate(const Eigen::VectorXd& h, const Design& design, double sigma2);

// Rate for decoding user k's private message after the common message has
// been subtracted; other private beams interfere.
double private_rate(const Eigen::VectorXd& h, const Design& design, int user, double sigma2);

// Semantic-equivalent throughput (a_k + r_k) / rho_k.
double effective_rate(double a_k, double r_k, double rho_k);

PowerBreakdown power_breakdown(const Design& design, const QosParams& qos,
                               std::span<const CompressionProfile> profiles, double eta,
                               int num_leds);

double energy_efficiency(const Design& design, const ChannelMatrix& H, const QosParams& qos,
                         std::span<const CompressionProfile> profiles, double eta);

// Signed residual checks of the full constraint set (power budget, per-LED
// clipping, common decoding, knowledge rate, per-user effective rate, rate
// nonnegativity, compression bounds). Empty result means feasible.
std::vector<Violation> check_feasibility(const Design& design, const ChannelMatrix& H,
                                         const QosParams& qos,
                                         std::span<const CompressionProfile> profiles,
                                         double eta, double tol = 1e-9);

EvalReport evaluate(const Design& design, const ChannelMatrix& H, const QosParams& qos,
                    std::span<const CompressionProfile> profiles, double eta,
                    double tol = 1e-9);

}  // namespace vlcee
