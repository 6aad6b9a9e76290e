#include <doctest.h>

#include <random>

#include "vlcee/semantics.hpp"

using namespace vlcee;

namespace {

CompressionProfile random_valid_profile(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> slope_d(-9.0, -0.1);
  std::uniform_int_distribution<int> count_d(1, 4);
  std::uniform_real_distribution<double> off_d(-3.0, 0.0);
  const int m = count_d(rng);
  CompressionProfile p;
  p.rho_min = std::uniform_real_distribution<double>(0.05, 0.5)(rng);
  for (int i = 0; i < m; ++i) {
    const double slope = slope_d(rng);
    // value at rho = 1 is `off`, at most 0; one segment is pinned to 0
    const double off = (i == 0) ? 0.0 : off_d(rng);
    p.segments.push_back({slope, off - slope});
  }
  return p;
}

}  // namespace

TEST_CASE("overhead of simple profiles") {
  CompressionProfile one{{{-2.0, 2.0}}, 0.2};
  CHECK(overhead(one, 0.5) == doctest::Approx(1.0));
  CHECK(overhead(one, 1.0) == doctest::Approx(0.0));

  CompressionProfile two{{{-1.0, 1.0}, {-4.0, 2.5}}, 0.2};
  CHECK(overhead(two, 1.0) == doctest::Approx(0.0));
  CHECK(overhead(two, 0.3) == doctest::Approx(1.3));

  CHECK_THROWS_AS(overhead(one, 0.1), std::domain_error);
  CHECK_THROWS_AS(overhead(one, 1.1), std::domain_error);
}

TEST_CASE("computation power is additive and linear in eta") {
  std::vector<CompressionProfile> ps(2, CompressionProfile{{{-2.0, 2.0}}, 0.2});
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(2);
  CHECK(computation_power(ps, ones, 1.0) == doctest::Approx(0.0));
  Eigen::VectorXd half = Eigen::VectorXd::Constant(2, 0.5);
  CHECK(computation_power(ps, half, 1.0) == doctest::Approx(2.0));
  CHECK(computation_power(ps, half, 3.0) == doctest::Approx(6.0));
  Eigen::VectorXd wrong = Eigen::VectorXd::Ones(3);
  CHECK_THROWS_AS(computation_power(ps, wrong, 1.0), std::invalid_argument);
}

TEST_CASE("profile validation") {
  CHECK(validate_profile(CompressionProfile{{{-2.0, 2.0}}, 0.2}).empty());

  const auto bad_slope = validate_profile(CompressionProfile{{{+1.0, 1.0}}, 0.2});
  REQUIRE(!bad_slope.empty());
  CHECK(bad_slope.front().find("slope") != std::string::npos);

  const auto bad_q1 = validate_profile(CompressionProfile{{{-2.0, 3.0}}, 0.2});
  REQUIRE(!bad_q1.empty());
  CHECK(bad_q1.front().find("rho = 1") != std::string::npos);

  CHECK(!validate_profile(CompressionProfile{{{-2.0, 2.0}}, 1.5}).empty());
  CHECK(!validate_profile(CompressionProfile{{}, 0.2}).empty());
  CHECK(validate_profile(default_compression_profile()).empty());
}

TEST_CASE("overhead is convex and non-increasing on random profiles") {
  std::mt19937_64 rng(20240901);
  std::uniform_real_distribution<double> t_d(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const CompressionProfile p = random_valid_profile(rng);
    REQUIRE(validate_profile(p).empty());
    std::uniform_real_distribution<double> rho_d(p.rho_min, 1.0);
    const double r1 = rho_d(rng), r2 = rho_d(rng), t = t_d(rng);
    const double mid = t * r1 + (1 - t) * r2;
    CHECK(overhead(p, mid) <=
          t * overhead(p, r1) + (1 - t) * overhead(p, r2) + 1e-12);
    const double lo = std::min(r1, r2), hi = std::max(r1, r2);
    CHECK(overhead(p, hi) <= overhead(p, lo) + 1e-12);
    CHECK(overhead(p, lo) >= -1e-12);
  }
}
