#pragma once

#include <iosfwd>

#include "vlcee/rate_model.hpp"

namespace vlcee {

// Closed-form optimal DC bias at fixed beams: the largest per-LED absolute
// column sum plus the lower drive limit. Verifies the result against the
// upper end of the feasible interval (drive range and power budget) and
// throws InfeasibleError naming the binding bound otherwise.
double optimal_dc_bias(const Eigen::MatrixXd& stacked_beams, const QosParams& qos,
                       double p_comp);

// Fractional objective pieces at fixed per-user numerator rates u_k
// (a_k + r_k, or r_k - R0 under unicast knowledge).
double f_value(const Eigen::VectorXd& rho, const Eigen::VectorXd& u);
double g_value(const Eigen::VectorXd& rho, std::span<const CompressionProfile> profiles,
               double eta, double eps4);
Eigen::VectorXd grad_f(const Eigen::VectorXd& rho, const Eigen::VectorXd& u);

// One DCA step: minimize lambda*g - linearized f over the compression box,
// the computation-power budget eta*sum Q_k <= eps5 and the per-user rate caps
// rho_k <= caps_k, via an LP after epigraph reformulation of each Q_k.
Eigen::VectorXd dca_step(double lambda, const Eigen::VectorXd& rho_j,
                         const Eigen::VectorXd& u,
                         std::span<const CompressionProfile> profiles, double eta,
                         double eps5, const Eigen::VectorXd& caps);

struct DcaRun {
  Eigen::VectorXd rho;
  std::vector<double> true_objective;  // lambda*g - f per accepted iterate
  std::vector<double> lin_objective;   // optimal value of each linearized solve
  bool converged = true;
};

DcaRun run_dca(double lambda, const Eigen::VectorXd& rho0, const Eigen::VectorXd& u,
               std::span<const CompressionProfile> profiles, double eta, double eps4,
               double eps5, const Eigen::VectorXd& caps, double tol, int max_iters);

struct DinkelbachTraceRow {
  int outer_iter = 0;
  double lambda = 0.0;
  double f = 0.0;
  double g = 0.0;
};

struct DinkelbachOptions {
  double tol = 1e-4;
  int max_outer = 100;
  int max_dca = 100;
};

struct DinkelbachRun {
  Eigen::VectorXd rho;
  double dc_bias = 0.0;
  std::vector<DinkelbachTraceRow> trace;
  bool converged = true;
  int total_dca_iters = 0;
};

// Fractional program over the compression ratios at fixed beams and rates:
// computes the optimal DC bias once, then alternates DCA solves with the
// lambda = f/g update until lambda stabilizes. Each DCA warm-starts from the
// previous outer iterate.
DinkelbachRun run_dinkelbach(const Eigen::MatrixXd& stacked_beams, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& rho_init, const QosParams& qos,
                             std::span<const CompressionProfile> profiles, double eta,
                             const DinkelbachOptions& opts = {});

// Convenience wrapper for the plain RSMA scheme: derives the numerator rates
// a_k + r_k from the design and channel.
DinkelbachRun run_dinkelbach(const Design& incoming, const ChannelMatrix& H,
                             const QosParams& qos,
                             std::span<const CompressionProfile> profiles, double eta,
                             const DinkelbachOptions& opts = {});

void write_dinkelbach_trace_csv(std::span<const DinkelbachTraceRow> rows, std::ostream& os);

}  // namespace vlcee
