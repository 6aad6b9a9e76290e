#include <doctest.h>

#include <functional>
#include <random>
#include <sstream>

#include "vlcee/solver/convex.hpp"
#include "vlcee/solver/lp.hpp"

using namespace vlcee::solver;

namespace {

// Zooming grid minimizer over a box; accuracy improves geometrically per pass.
double grid_oracle(const SmoothConvexProgram& prog, Eigen::VectorXd lo, Eigen::VectorXd hi,
                   int pts = 15, int passes = 4) {
  const int n = prog.num_vars();
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x = 0.5 * (lo + hi);
  for (int pass = 0; pass < passes; ++pass) {
    std::vector<int> idx(n, 0);
    while (true) {
      Eigen::VectorXd x(n);
      for (int d = 0; d < n; ++d)
        x[d] = lo[d] + (hi[d] - lo[d]) * idx[d] / (pts - 1);
      if (prog.max_residual(x) <= 1e-9) {
        const double v = prog.objective().dot(x);
        if (v < best) {
          best = v;
          best_x = x;
        }
      }
      int d = 0;
      while (d < n && ++idx[d] == pts) idx[d++] = 0;
      if (d == n) break;
    }
    const Eigen::VectorXd span = 0.35 * (hi - lo);
    lo = best_x - span;
    hi = best_x + span;
  }
  return best;
}

// Exact LP oracle: enumerate all n-subsets of constraint boundaries.
double vertex_oracle(const LinearProgram& lp) {
  const int n = static_cast<int>(lp.c.size());
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (const auto& r : lp.rows) {
    rows.push_back(r.a);
    rhs.push_back(r.b);
  }
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(lp.lower[j])) {
      Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
      a[j] = -1;
      rows.push_back(a);
      rhs.push_back(-lp.lower[j]);
    }
    if (std::isfinite(lp.upper[j])) {
      Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
      a[j] = 1;
      rows.push_back(a);
      rhs.push_back(lp.upper[j]);
    }
  }
  const int m = static_cast<int>(rows.size());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(n);
  const std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      Eigen::MatrixXd A(n, n);
      Eigen::VectorXd b(n);
      for (int i = 0; i < n; ++i) {
        A.row(i) = rows[pick[i]].transpose();
        b[i] = rhs[pick[i]];
      }
      const Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
      if (!lu.isInvertible()) return;
      const Eigen::VectorXd x = lu.solve(b);
      for (int i = 0; i < m; ++i)
        if (rows[i].dot(x) > rhs[i] + 1e-7) return;
      best = std::min(best, lp.c.dot(x));
      return;
    }
    for (int i = start; i < m; ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST_CASE("barrier solves a one-sided linear program") {
  SmoothConvexProgram p(1);
  Eigen::VectorXd c(1);
  c << -1.0;  // maximize x
  p.set_objective(c);
  p.add_upper_bound(0, 3.0);
  const auto res = solve_smooth_convex(p, std::nullopt, 1e-8);
  REQUIRE(res.status == Status::optimal);
  CHECK(res.x[0] == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("barrier handles the exponential cone link") {
  // maximize delta s.t. zeta >= 2^delta, zeta <= 8
  SmoothConvexProgram p(2);
  Eigen::VectorXd c(2);
  c << -1.0, 0.0;
  p.set_objective(c);
  p.add_exponential(0, 1);
  p.add_upper_bound(1, 8.0);
  const auto res = solve_smooth_convex(p, std::nullopt, 1e-8);
  REQUIRE(res.status == Status::optimal);
  CHECK(res.x[0] == doctest::Approx(3.0).epsilon(1e-5));
}

TEST_CASE("barrier solves a quadratic projection") {
  // minimize x^2 + y^2 s.t. x + y >= 2
  SmoothConvexProgram p(3);  // x, y, t with t >= x^2 + y^2
  Eigen::VectorXd c(3);
  c << 0, 0, 1;
  p.set_objective(c);
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(3, 3);
  P(0, 0) = P(1, 1) = 1.0;
  Eigen::VectorXd q(3);
  q << 0, 0, -1;
  p.add_convex_quadratic(P, q, 0.0);
  Eigen::VectorXd row(3);
  row << -1, -1, 0;
  p.add_affine(row, -2.0);
  p.add_upper_bound(2, 100.0);
  const auto res = solve_smooth_convex(p, std::nullopt, 1e-8);
  REQUIRE(res.status == Status::optimal);
  CHECK(res.objective == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(res.x[1] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("indefinite quadratic forms are rejected at construction") {
  SmoothConvexProgram p(2);
  Eigen::MatrixXd P(2, 2);
  P << 0, 1, 1, 0;
  CHECK_THROWS_AS(p.add_convex_quadratic(P, Eigen::VectorXd::Zero(2), 0.0),
                  std::invalid_argument);
  // PSD but singular forms pass
  Eigen::MatrixXd S(2, 2);
  S << 1, -1, -1, 1;
  CHECK_NOTHROW(p.add_convex_quadratic(S, Eigen::VectorXd::Zero(2), -1.0));
}

TEST_CASE("phase-I certifies infeasibility") {
  SmoothConvexProgram p(1);
  p.add_upper_bound(0, -1.0);
  p.add_lower_bound(0, 1.0);
  const auto res = solve_smooth_convex(p, std::nullopt, 1e-8);
  CHECK(res.status == Status::infeasible);
}

TEST_CASE("central path objectives are monotone and residuals small") {
  SmoothConvexProgram p(2);
  Eigen::VectorXd c(2);
  c << -1.0, -0.5;
  p.set_objective(c);
  Eigen::VectorXd row(2);
  row << 1, 1;
  p.add_affine(row, 4.0);
  p.add_lower_bound(0, 0);
  p.add_lower_bound(1, 0);
  p.add_upper_bound(0, 3);
  p.add_upper_bound(1, 3);
  const auto res = solve_smooth_convex(p, std::nullopt, 1e-8);
  REQUIRE(res.status == Status::optimal);
  for (size_t i = 1; i < res.central_objectives.size(); ++i)
    CHECK(res.central_objectives[i] <= res.central_objectives[i - 1] + 1e-7);
  CHECK(p.max_residual(res.x) <= 1e-7);
  CHECK(res.gap <= 1e-8);
}

TEST_CASE("random programs match the zooming grid oracle") {
  std::mt19937_64 rng(20240901);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 2);  // 2 or 3 vars
    SmoothConvexProgram p(n);
    Eigen::VectorXd c(n);
    for (int i = 0; i < n; ++i) c[i] = u(rng);
    p.set_objective(c);
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(n, -2.0);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(n, 2.0);
    for (int i = 0; i < n; ++i) {
      p.add_lower_bound(i, lo[i]);
      p.add_upper_bound(i, hi[i]);
    }
    // a few affine cuts through the origin's vicinity (origin stays interior)
    for (int k = 0; k < 2; ++k) {
      Eigen::VectorXd row(n);
      for (int i = 0; i < n; ++i) row[i] = u(rng);
      p.add_affine(row, 0.5 + std::abs(u(rng)));
    }
    // one random PSD quadratic centered away from the origin
    Eigen::MatrixXd B(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) B(i, j) = u(rng);
    const Eigen::MatrixXd P = B.transpose() * B + 0.1 * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd q(n);
    for (int i = 0; i < n; ++i) q[i] = 0.3 * u(rng);
    p.add_convex_quadratic(P, q, -3.0);  // f(0) = -3 < 0 keeps the origin interior

    const auto res = solve_smooth_convex(p, std::nullopt, 1e-9);
    REQUIRE(res.status == Status::optimal);
    const double oracle = grid_oracle(p, lo, hi);
    CHECK(res.objective <=
          oracle + 1e-3 * (1.0 + std::abs(oracle)));  // never worse than the grid
    CHECK(res.objective >= oracle - 1e-3 * (1.0 + std::abs(oracle)));
  }
}

TEST_CASE("lp reference cases") {
  SUBCASE("bound-driven maximum") {
    auto lp = LinearProgram::make(1);
    lp.c[0] = -1.0;
    lp.lower[0] = 0.2;
    lp.upper[0] = 1.0;
    const auto res = solve_lp(lp);
    REQUIRE(res.status == Status::optimal);
    CHECK(res.x[0] == doctest::Approx(1.0));
  }
  SUBCASE("epigraph of two affine pieces at a fixed point") {
    auto lp = LinearProgram::make(2);  // [rho, q]
    lp.c << 0.0, 1.0;
    lp.lower << 0.25, -std::numeric_limits<double>::infinity();
    lp.upper << 0.25, std::numeric_limits<double>::infinity();
    Eigen::VectorXd r1(2), r2(2);
    r1 << -2.0, -1.0;
    r2 << -4.0, -1.0;
    lp.rows.push_back({r1, -2.0});
    lp.rows.push_back({r2, -2.5});
    const auto res = solve_lp(lp);
    REQUIRE(res.status == Status::optimal);
    CHECK(res.x[1] == doctest::Approx(1.5));
  }
  SUBCASE("two variables, three constraints, vertex cross-check") {
    auto lp = LinearProgram::make(2);
    lp.c << -3.0, -5.0;
    lp.lower << 0.0, 0.0;
    Eigen::VectorXd r1(2), r2(2), r3(2);
    r1 << 1.0, 0.0;
    r2 << 0.0, 2.0;
    r3 << 3.0, 2.0;
    lp.rows.push_back({r1, 4.0});
    lp.rows.push_back({r2, 12.0});
    lp.rows.push_back({r3, 18.0});
    const auto res = solve_lp(lp);
    REQUIRE(res.status == Status::optimal);
    CHECK(res.objective == doctest::Approx(vertex_oracle(lp)).epsilon(1e-9));
    CHECK(res.objective == doctest::Approx(-36.0));
  }
  SUBCASE("unbounded and infeasible detection") {
    auto lp = LinearProgram::make(1);
    lp.c[0] = -1.0;
    lp.lower[0] = 0.0;
    CHECK(solve_lp(lp).status == Status::unbounded);

    auto lp2 = LinearProgram::make(1);
    lp2.lower[0] = 2.0;
    lp2.upper[0] = 1.0;
    CHECK(solve_lp(lp2).status == Status::infeasible);
  }
}

TEST_CASE("random lps match vertex enumeration") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto lp = LinearProgram::make(2);
    lp.c << u(rng), u(rng);
    lp.lower << -2.0, -2.0;
    lp.upper << 2.0, 2.0;
    for (int k = 0; k < 3; ++k) {
      Eigen::VectorXd row(2);
      row << u(rng), u(rng);
      lp.rows.push_back({row, u(rng) + 1.5});
    }
    const auto res = solve_lp(lp);
    const double oracle = vertex_oracle(lp);
    if (res.status == Status::infeasible) {
      CHECK(!std::isfinite(oracle));
      continue;
    }
    REQUIRE(res.status == Status::optimal);
    CHECK(res.objective == doctest::Approx(oracle).epsilon(1e-7));
    ++solved;
  }
  CHECK(solved > 40);  // the generator rarely produces infeasible boxes
}

TEST_CASE("program dump lists one constraint per line") {
  SmoothConvexProgram p(2);
  p.add_lower_bound(0, 0.0);
  p.add_exponential(0, 1);
  std::ostringstream os;
  p.dump(os);
  int lines = 0;
  std::string line;
  std::istringstream is(os.str());
  while (std::getline(is, line)) ++lines;
  CHECK(lines == 3);  // objective + two constraints
}
