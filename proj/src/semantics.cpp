#include "vlcee/semantics.hpp"

#include <algorithm>
#include <cmath>

namespace vlcee {

CompressionProfile default_compression_profile() {
  return CompressionProfile{{{-1.0, 1.0}, {-3.0, 2.2}, {-8.0, 5.0}}, 0.2};
}

std::vector<std::string> validate_profile(const CompressionProfile& p) {
  std::vector<std::string> v;
  if (p.segments.empty()) {
    v.push_back("profile needs at least one segment");
    return v;
  }
  double q1 = -std::numeric_limits<double>::infinity();
  for (size_t m = 0; m < p.segments.size(); ++m) {
    if (!(p.segments[m].slope < 0))
      v.push_back("segment " + std::to_string(m) + " slope must be negative");
    if (!(p.segments[m].intercept > 0))
      v.push_back("segment " + std::to_string(m) + " intercept must be positive");
    q1 = std::max(q1, p.segments[m].slope + p.segments[m].intercept);
  }
  if (std::abs(q1) > 1e-9)
    v.push_back("overhead at rho = 1 must be 0, got " + std::to_string(q1));
  if (!(p.rho_min > 0 && p.rho_min <= 1)) v.push_back("rho_min must lie in (0, 1]");
  return v;
}

double overhead(const CompressionProfile& p, double rho) {
  if (!(rho >= p.rho_min - 1e-12 && rho <= 1.0 + 1e-12))
    throw std::domain_error("overhead: rho outside [rho_min, 1]");
  double q = -std::numeric_limits<double>::infinity();
  for (const auto& s : p.segments) q = std::max(q, s.slope * rho + s.intercept);
  return std::max(q, 0.0);
}

double computation_power(std::span<const CompressionProfile> profiles,
                         const Eigen::VectorXd& rho, double eta) {
  if (static_cast<Eigen::Index>(profiles.size()) != rho.size())
    throw std::invalid_argument("computation_power: profiles/rho size mismatch");
  double total = 0.0;
  for (Eigen::Index k = 0; k < rho.size(); ++k) total += overhead(profiles[k], rho[k]);
  return eta * total;
}

}  // namespace vlcee
