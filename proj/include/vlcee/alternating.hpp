#pragma once

#include "vlcee/config.hpp"
#include "vlcee/dinkelbach.hpp"
#include "vlcee/sca.hpp"

namespace vlcee {

struct OuterTraceRow {
  int iter = 0;
  double v_s1 = 0.0;   // energy efficiency after the beamforming stage
  double v_s2 = 0.0;   // energy efficiency after the compression/DC stage
  double v_obj = 0.0;  // = v_s2
  int sca_iters = 0;
  int dinkelbach_iters = 0;
  double wall_ms = 0.0;
  std::vector<ScaTraceRow> sca;
  std::vector<DinkelbachTraceRow> dinkelbach;
};

struct SolveTrace {
  std::vector<OuterTraceRow> outer;
  std::string status;  // "converged" or "max-iterations"
};

struct SolveOutput {
  Design design;
  EvalReport report;
  SolveTrace trace;
};

// Feasible starting design: rho = 1 (no compression), maximum-ratio beams
// scaled into the budgets, and the DC bias at its closed-form lower endpoint.
Design initialize(const NetworkConfig& cfg);

// Alternating optimization over the two subproblems for the plain RSMA
// scheme: beamforming/rate allocation, then compression ratios/DC bias, until
// the energy efficiency stabilizes.
SolveOutput solve(const NetworkConfig& cfg);

// Same engine for an arbitrary rate model. optimize_rho = false skips the
// fractional stage and only refreshes the DC bias (no-compression schemes).
// A warm design replaces the built-in initialization.
SolveOutput solve_model(const NetworkConfig& cfg, const RateModel& model, bool optimize_rho,
                        const std::optional<Design>& warm = std::nullopt);

void write_outer_trace_csv(std::span<const OuterTraceRow> rows, std::ostream& os);

}  // namespace vlcee
