#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

namespace vlcee::solver {

enum class Status { optimal, infeasible, unbounded, max_iterations };
const char* to_string(Status status);

struct SolveResult {
  Status status = Status::max_iterations;
  Eigen::VectorXd x;
  double objective = 0.0;
  int barrier_rounds = 0;
  // Final duality measure m/t of the barrier (0 for LP solves).
  double gap = std::numeric_limits<double>::infinity();
  // Objective value of each central-path iterate, monotone non-increasing.
  std::vector<double> central_objectives;
};

struct BarrierOptions {
  double tol = 1e-8;   // target duality measure m/t
  double t0 = 1.0;     // initial barrier parameter
  double mu = 10.0;    // barrier multiplier per round
  double alpha = 0.1;  // Armijo fraction of the backtracking line search
  double beta = 0.5;   // backtracking shrink factor
  int max_newton = 200;
  int max_rounds = 80;
};

// Smooth convex program: minimize c'x subject to a list of constraints, each
// one of
//   Affine            row'x <= rhs
//   ConvexQuadratic   x'P x + q'x + r <= 0   with P symmetric PSD
//   Exponential       2^{x[delta]} - x[zeta] <= 0
class SmoothConvexProgram {
 public:
  // Internal normalized form f(x) = x'Px + q'x + r + exp_coef * 2^{x[exp_var]}.
  struct Constraint {
    Eigen::MatrixXd P;  // empty when purely affine/exponential
    Eigen::VectorXd q;
    double r = 0.0;
    int exp_var = -1;
    double exp_coef = 0.0;
    double scale = 1.0;  // normalization divisor applied to the raw data
  };

  explicit SmoothConvexProgram(int num_vars);

  void set_objective(Eigen::VectorXd c);  // minimize c'x
  void add_affine(const Eigen::VectorXd& row, double rhs);
  // Rejects quadratic forms that fail a Cholesky-style PSD factorization.
  void add_convex_quadratic(const Eigen::MatrixXd& P, const Eigen::VectorXd& q, double r);
  void add_exponential(int delta_index, int zeta_index);
  void add_lower_bound(int index, double lo);
  void add_upper_bound(int index, double hi);

  int num_vars() const { return n_; }
  int num_constraints() const { return static_cast<int>(cons_.size()); }
  const Eigen::VectorXd& objective() const { return c_; }
  const std::vector<Constraint>& constraints() const { return cons_; }

  // Normalized residual f_i(x) of one constraint (<= 0 when satisfied).
  double constraint_value(int i, const Eigen::VectorXd& x) const;
  double max_residual(const Eigen::VectorXd& x) const;
  bool strictly_feasible(const Eigen::VectorXd& x, double margin = 0.0) const;

  // Canonical plain-text form, one constraint per line.
  void dump(std::ostream& os) const;

 private:
  void push_normalized(Constraint con);

  int n_;
  Eigen::VectorXd c_;
  std::vector<Constraint> cons_;
};

// Log-barrier interior-point solve. `warm` seeds phase-I (and is used
// directly when already strictly feasible). On optimal the returned point
// satisfies every constraint and lies within tol*(1+|objective|) of the true
// optimum, certified by the barrier bound m/t <= tol. Infeasibility is
// reported when phase-I cannot reach a strictly feasible point.
SolveResult solve_smooth_convex(const SmoothConvexProgram& prog,
                                const std::optional<Eigen::VectorXd>& warm, double tol,
                                const BarrierOptions& opts = {});

}  // namespace vlcee::solver
