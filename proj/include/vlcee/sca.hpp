#pragma once

#include <iosfwd>
#include <optional>
#include <utility>

#include "vlcee/rate_model.hpp"
#include "vlcee/solver/convex.hpp"

namespace vlcee {

// Constants of the beamforming subproblem at fixed compression ratios and DC
// bias: eps1 = P_comp + N*U_LED*B_DC + P_cir (watts) and
// eps2 = min(B_DC - I_L, I_U - B_DC) (amperes). Throws InfeasibleError when
// the DC bias leaves no drive-range headroom.
std::pair<double, double> subproblem_constants(const Eigen::VectorXd& rho, double dc_bias,
                                               const QosParams& qos,
                                               std::span<const CompressionProfile> profiles,
                                               double eta, int num_leds);

// Affine global under-estimator of x^2/y around (x0, y0 > 0):
//   x^2/y >= (2 x0/y0) x - (x0/y0)^2 y,  with equality at (x0, y0).
struct QolMinorant {
  double x_coef = 0.0;
  double y_coef = 0.0;
  double eval(double x, double y) const { return x_coef * x + y_coef * y; }
};
QolMinorant taylor_quad_over_lin(double x0, double y0);

// Vector analogue for (h'w)^2 / mu expanded at (w0, mu0).
struct QolMinorantVec {
  Eigen::VectorXd w_coef;
  double mu_coef = 0.0;
  double eval(const Eigen::VectorXd& w, double mu) const { return w_coef.dot(w) + mu_coef * mu; }
};
QolMinorantVec taylor_quad_over_lin(const Eigen::VectorXd& h, const Eigen::VectorXd& w0,
                                    double mu0);

// SCA iterate. Auxiliaries are kept tight against their defining expressions:
// delta = true stream rates, mu = interference + noise, zeta = 2^delta per
// certificate, alpha^2 = numerator, beta = AC power + eps1.
struct ScaState {
  int iter = 0;
  Eigen::MatrixXd beams;  // (K+1) x N, inactive rows zero
  Eigen::VectorXd a;      // K+1, zero entries where the scheme has none
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;             // subproblem objective alpha^2 / beta
  Eigen::VectorXd delta_common;   // per user (empty without a common stream)
  Eigen::VectorXd delta_private;  // per user
  Eigen::VectorXd zeta;           // per certificate
  Eigen::VectorXd mu;             // per certificate, watts
  std::vector<double> objective_history;
};

ScaState make_state(const RateModel& model, const ChannelMatrix& H, const QosParams& qos,
                    const Eigen::MatrixXd& beams, const Eigen::VectorXd& a,
                    const Eigen::VectorXd& rho, double eps1);

// Variable layout of the approximate problem, in order:
//   [w+ (B x N, beam-major), w- (B x N), a (A entries), alpha, beta, gamma,
//    delta (common streams then private), zeta (per cert), mu (per cert)]
// for a total of 2*B*N + A + 3 + D + 2*C variables, where B = active beams,
// A = common-rate entries (K+1 with a knowledge stream, K without one, 0 when
// the scheme has no common stream), D = streams, C = certificates.
struct VarLayout {
  int num_vars = 0;
  int num_beams = 0;
  int num_leds = 0;
  int num_a = 0;
  int num_common_streams = 0;
  int num_private_streams = 0;
  int num_certs = 0;
  bool a_has_knowledge = false;
  int w_plus0 = 0, w_minus0 = 0, a0 = 0, alpha = 0, beta = 0, gamma = 0;
  int delta0 = 0, zeta0 = 0, mu0 = 0;
  std::vector<int> beam_pos;  // beam row -> position among active beams (-1 if absent)

  int wp(int beam, int led) const { return w_plus0 + beam_pos[beam] * num_leds + led; }
  int wm(int beam, int led) const { return w_minus0 + beam_pos[beam] * num_leds + led; }
  // k = 0 addresses a0 and is valid only when the knowledge stream exists.
  int a_index(int k) const { return a0 + (a_has_knowledge ? k : k - 1); }
  int delta_common_index(int k) const { return delta0 + k; }
  int delta_private_index(int k) const { return delta0 + num_common_streams + k; }
  int zeta_index(int cert) const { return zeta0 + cert; }
  int mu_index(int cert) const { return mu0 + cert; }
};

VarLayout make_layout(const RateModel& model);

struct ApproxProblem {
  solver::SmoothConvexProgram prog;
  VarLayout layout;
  double channel_scale = 1.0;  // H rows divided by this, mu by its square
};

// Convexified subproblem at the given expansion state: maximize gamma under
// the linearized fractional/SINR constraints, the exact power, clipping,
// rate-allocation and QoS constraints, and compactness boxes on the
// auxiliaries. Absolute values are handled by the w = w+ - w- split.
ApproxProblem build_approx_problem(const ScaState& state, const RateModel& model,
                                   const ChannelMatrix& H, const QosParams& qos, double eps1,
                                   double eps2, const Eigen::VectorXd& rho);

// Packs a state into the layout's variable vector (canonical beam split).
Eigen::VectorXd state_to_vector(const ScaState& state, const VarLayout& layout,
                                double channel_scale);

// Feasible start from maximum-ratio transmission, scaled to 90% of the
// per-LED and AC power budgets; common rates cover the knowledge demand and
// split the residual common capacity equally. Schemes without a common
// stream fall back to interference-suppressing directions when plain MRT
// violates their per-stream QoS.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> init_point(
    const RateModel& model, const ChannelMatrix& H, const QosParams& qos,
    std::span<const CompressionProfile> profiles, double eta, double eps1, double eps2,
    const Eigen::VectorXd& rho, double dc_bias);

// Feasible start for schemes that unicast the knowledge stream: their QoS may
// be unsatisfiable without compression, so the search spans beam candidates,
// decode-order power tilts, budget fractions, and starting compression
// levels. Deterministic; first feasible combination wins.
struct StartDesign {
  Eigen::MatrixXd beams;
  Eigen::VectorXd a;
  Eigen::VectorXd rho;
};
StartDesign init_unicast_start(const RateModel& model, const ChannelMatrix& H,
                               const QosParams& qos,
                               std::span<const CompressionProfile> profiles, double eta,
                               double dc_bias);

struct ScaTraceRow {
  int iter = 0;
  double objective = 0.0;  // subproblem energy efficiency alpha^2 / beta
  double ac_power = 0.0;
  double max_residual = 0.0;
};

struct ScaOptions {
  double tol = 1e-4;
  int max_iters = 50;
  double barrier_tol = 1e-8;
};

struct ScaRun {
  Eigen::MatrixXd beams;
  Eigen::VectorXd a;
  ScaState state;
  std::vector<ScaTraceRow> trace;
  bool converged = true;
};

// Algorithm: iterate convexified solves, re-expanding at each solution, until
// the fractional objective change drops below tol or the iteration cap. The
// returned point satisfies the original subproblem constraints.
ScaRun run_sca(const RateModel& model, const ChannelMatrix& H, const QosParams& qos,
               const Eigen::VectorXd& rho, double dc_bias,
               std::span<const CompressionProfile> profiles, double eta,
               const ScaOptions& opts,
               const std::optional<std::pair<Eigen::MatrixXd, Eigen::VectorXd>>& warm);

void write_sca_trace_csv(std::span<const ScaTraceRow> rows, std::ostream& os);

}  // namespace vlcee
