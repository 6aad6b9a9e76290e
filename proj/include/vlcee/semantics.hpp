#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

#include "vlcee/common.hpp"

namespace vlcee {

// One affine piece of the computation-overhead curve.
struct CompressionSegment {
  double slope;      // < 0
  double intercept;  // > 0
};

// Piecewise-linear compression cost of one user: the overhead at ratio rho is
// the max over segments of slope*rho + intercept. Zero overhead at rho = 1.
struct CompressionProfile {
  std::vector<CompressionSegment> segments;
  double rho_min = 0.2;
};

// Three-segment curve with the steepening shape of deeper inference levels.
CompressionProfile default_compression_profile();

// Reports every violated profile invariant; an empty list means valid.
std::vector<std::string> validate_profile(const CompressionProfile& profile);

// Computation overhead Q(rho) in abstract overhead units.
double overhead(const CompressionProfile& profile, double rho);

// Total compression power eta * sum_k Q_k(rho_k), watts.
double computation_power(std::span<const CompressionProfile> profiles,
                         const Eigen::VectorXd& rho, double eta);

}  // namespace vlcee
