#pragma once

#include <Eigen/Core>
#include <vector>

#include "vlcee/solver/convex.hpp"

namespace vlcee::solver {

struct AffineConstraint {
  Eigen::VectorXd a;  // a'x <= b
  double b = 0.0;
};

// min c'x  s.t.  a_i'x <= b_i,  lower <= x <= upper.
// Bound entries may be +-infinity; variables without a finite lower bound are
// split internally.
struct LinearProgram {
  Eigen::VectorXd c;
  std::vector<AffineConstraint> rows;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  static LinearProgram make(int num_vars);
};

// Dense two-phase primal simplex with Bland's anti-cycling rule. Returns a
// vertex solution; statuses: optimal, infeasible, unbounded, max-iterations.
SolveResult solve_lp(const LinearProgram& lp);

}  // namespace vlcee::solver
