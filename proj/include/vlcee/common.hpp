#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace vlcee {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEuler = 2.71828182845904523536;

// SNR scaling of the VLC achievable-rate expression, 2/(pi*e).
inline constexpr double kVlcSnrCoef = 2.0 / (kPi * kEuler);

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double cm2_to_m2(double cm2) { return cm2 * 1e-4; }

// A scenario (or a subproblem derived from it) admits no feasible point.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input data violates a documented invariant.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string join_violations(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

}  // namespace vlcee
