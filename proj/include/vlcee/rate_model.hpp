#pragma once

#include <Eigen/Core>
#include <functional>
#include <span>
#include <vector>

#include "vlcee/rsma.hpp"

namespace vlcee {

// One SINR expression certifying a stream's decodable rate: the observer's
// channel row against the stream's beam, with the listed beams interfering.
struct SinrCert {
  int beam;                      // row of the stacked beam matrix (0 = common)
  int observer;                  // user index whose channel and noise apply
  std::vector<int> interferers;  // beam rows in the denominator
};

// A decodable-rate quantity: the minimum over its certificates.
struct StreamRate {
  std::vector<SinrCert> certs;
};

// Structure of the rate side of a multiple-access scheme. RSMA uses a common
// stream plus one private stream per user; the benchmark schemes drop the
// common machinery and/or embed the knowledge stream into private rates.
struct RateModel {
  int num_users = 0;
  int num_leds = 0;
  std::vector<int> active_beams;     // beam rows that exist as variables
  bool has_common = true;            // common beam and rate vector present
  bool has_knowledge_stream = true;  // a0 exists and must cover R0
  bool knowledge_unicast = false;    // R0 embedded in every private stream
  std::vector<StreamRate> common;    // per user: common-message rate (may be empty)
  std::vector<StreamRate> privates;  // per user: private/data stream rate
};

RateModel rsma_rate_model(int num_users, int num_leds);

int total_certs(const RateModel& model);

// Visits certificates in the canonical order: common streams first (users
// ascending), then private streams; within a stream, declaration order.
// fn(cert_index, is_common, user, cert).
void for_each_cert(const RateModel& model,
                   const std::function<void(int, bool, int, const SinrCert&)>& fn);

struct ModelRates {
  Eigen::VectorXd common;    // per user; zero-sized when the model has none
  Eigen::VectorXd privates;  // per user
};

// True min-over-certificate rates at a stacked beam matrix.
ModelRates evaluate_rates(const RateModel& model, const ChannelMatrix& H,
                          const Eigen::MatrixXd& beams, const Eigen::VectorXd& noise);

// Per-user energy-efficiency numerator rates: a_k + r_k, or r_k - R0 when the
// knowledge stream is unicast inside the private streams.
Eigen::VectorXd numerator_rates(const RateModel& model, const Eigen::VectorXd& common_rates,
                                const ModelRates& rates, const QosParams& qos);

// Scheme-aware counterparts of the RSMA evaluator: same report layout, with
// the scheme's own constraint set and effective-rate definition.
std::vector<Violation> check_feasibility_model(const RateModel& model, const Design& design,
                                               const ChannelMatrix& H, const QosParams& qos,
                                               std::span<const CompressionProfile> profiles,
                                               double eta, double tol = 1e-9);

EvalReport evaluate_model(const RateModel& model, const Design& design,
                          const ChannelMatrix& H, const QosParams& qos,
                          std::span<const CompressionProfile> profiles, double eta,
                          double tol = 1e-9);

}  // namespace vlcee
