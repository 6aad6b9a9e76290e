#pragma once

#include "vlcee/alternating.hpp"

namespace vlcee {

// Multiple-access / compression scheme selector. pscom-rsma is the full
// design; the other three are comparison schemes sharing the same engine.
enum class Scheme { pscom_rsma, pscom_sdma, pscom_noma, conventional_rsma };

std::string to_string(Scheme scheme);
Scheme parse_scheme(const std::string& tag);

// Stream decoding order for NOMA: positions sorted by ascending channel norm
// (weakest user's stream decoded first by everyone), ties by user index.
std::vector<int> noma_decode_order(const ChannelMatrix& H);

RateModel make_rate_model(Scheme scheme, const ChannelMatrix& H,
                          bool conventional_keep_knowledge = false);

SolveOutput solve_scheme(const NetworkConfig& cfg, Scheme scheme);

// Scheme-aware design evaluation (rates, power, EE, constraint residuals).
EvalReport evaluate_scheme(const NetworkConfig& cfg, Scheme scheme, const Design& design);

}  // namespace vlcee
