#include "vlcee/solver/convex.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace vlcee::solver {
namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kExpArgCap = 500.0;  // 2^x overflows well before this

double exp2_safe(double x) { return std::exp2(std::min(x, kExpArgCap)); }

// Shared Newton machinery for the main barrier and phase-I. When `phase1` is
// set the last coordinate is a slack subtracted from every constraint.
struct BarrierView {
  const SmoothConvexProgram& prog;
  bool phase1;
  int n;

  double con_value(int i, const Eigen::VectorXd& x) const {
    double f = prog.constraint_value(i, x.head(prog.num_vars()));
    if (phase1) f -= x[n - 1];
    return f;
  }

  bool strictly_feasible(const Eigen::VectorXd& x, double margin = 0.0) const {
    for (int i = 0; i < prog.num_constraints(); ++i) {
      const double f = con_value(i, x);
      if (!std::isfinite(f) || f >= -margin) return false;
    }
    return true;
  }

  double phi(const Eigen::VectorXd& obj, double t, const Eigen::VectorXd& x) const {
    double value = t * obj.dot(x);
    for (int i = 0; i < prog.num_constraints(); ++i) {
      const double f = con_value(i, x);
      if (!(f < 0)) return std::numeric_limits<double>::infinity();
      value -= std::log(-f);
    }
    return value;
  }

  void grad_hess(const Eigen::VectorXd& obj, double t, const Eigen::VectorXd& x,
                 Eigen::VectorXd& g, Eigen::MatrixXd& H) const {
    const int nb = prog.num_vars();
    const Eigen::VectorXd xb = x.head(nb);
    g = t * obj;
    H.setZero(n, n);
    Eigen::VectorXd gf(n);
    for (const auto& con : prog.constraints()) {
      double f = con.q.dot(xb) + con.r;
      gf.setZero();
      gf.head(nb) = con.q;
      double expv = 0.0;
      if (con.P.size() > 0) {
        const Eigen::VectorXd Px = con.P * xb;
        f += xb.dot(Px);
        gf.head(nb) += 2.0 * Px;
      }
      if (con.exp_var >= 0) {
        expv = con.exp_coef * exp2_safe(xb[con.exp_var]);
        f += expv;
        gf[con.exp_var] += kLn2 * expv;
      }
      if (phase1) {
        f -= x[n - 1];
        gf[n - 1] = -1.0;
      }
      const double inv = 1.0 / (-f);
      g += inv * gf;
      H.noalias() += (inv * inv) * (gf * gf.transpose());
      if (con.P.size() > 0) H.topLeftCorner(nb, nb).noalias() += (2.0 * inv) * con.P;
      if (con.exp_var >= 0) H(con.exp_var, con.exp_var) += inv * kLn2 * kLn2 * expv;
    }
  }

  // Damped Newton centering of t*obj'x + barrier. Returns false only when the
  // iteration cap is exhausted before the decrement test passes.
  bool center(const Eigen::VectorXd& obj, double t, Eigen::VectorXd& x,
              const BarrierOptions& o) const {
    Eigen::VectorXd g(n);
    Eigen::MatrixXd H(n, n);
    for (int it = 0; it < o.max_newton; ++it) {
      grad_hess(obj, t, x, g, H);
      Eigen::VectorXd dx = Eigen::VectorXd::Zero(n);
      double ridge = 0.0;
      for (int attempt = 0; attempt < 8; ++attempt) {
        Eigen::MatrixXd Hr = H;
        if (ridge > 0) Hr.diagonal().array() += ridge;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(Hr);
        const Eigen::VectorXd cand = -ldlt.solve(g);
        if (cand.allFinite() && g.dot(cand) < 0) {
          dx = cand;
          break;
        }
        ridge = (ridge == 0) ? 1e-10 * std::max(1.0, H.diagonal().maxCoeff()) : ridge * 100;
      }
      const double slope = g.dot(dx);
      if (!(slope < 0)) return true;  // stationary within numerics

      const double phi0 = phi(obj, t, x);
      if (-slope / 2 <= 1e-9 * (1.0 + std::abs(phi0))) return true;

      double s = 1.0;
      while (s > 1e-16 && !strictly_feasible(x + s * dx)) s *= o.beta;
      while (s > 1e-16 && phi(obj, t, x + s * dx) > phi0 + o.alpha * s * slope) s *= o.beta;
      if (s <= 1e-16) return true;  // stalled; keep current point
      x += s * dx;
    }
    return false;
  }
};

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::max_iterations: return "max-iterations";
  }
  return "?";
}

SmoothConvexProgram::SmoothConvexProgram(int num_vars) : n_(num_vars) {
  if (num_vars <= 0) throw std::invalid_argument("program needs at least one variable");
  c_ = Eigen::VectorXd::Zero(n_);
}

void SmoothConvexProgram::set_objective(Eigen::VectorXd c) {
  if (c.size() != n_) throw std::invalid_argument("objective size mismatch");
  c_ = std::move(c);
}

void SmoothConvexProgram::push_normalized(Constraint con) {
  double scale = std::abs(con.r);
  if (con.q.size() > 0) scale = std::max(scale, con.q.cwiseAbs().maxCoeff());
  if (con.P.size() > 0) scale = std::max(scale, con.P.cwiseAbs().maxCoeff());
  scale = std::max(scale, std::abs(con.exp_coef));
  if (scale <= 0) throw std::invalid_argument("empty constraint");
  con.P /= scale;
  con.q /= scale;
  con.r /= scale;
  con.exp_coef /= scale;
  con.scale = scale;
  cons_.push_back(std::move(con));
}

void SmoothConvexProgram::add_affine(const Eigen::VectorXd& row, double rhs) {
  if (row.size() != n_) throw std::invalid_argument("affine row size mismatch");
  Constraint con;
  con.q = row;
  con.r = -rhs;
  push_normalized(std::move(con));
}

void SmoothConvexProgram::add_convex_quadratic(const Eigen::MatrixXd& P,
                                               const Eigen::VectorXd& q, double r) {
  if (P.rows() != n_ || P.cols() != n_ || q.size() != n_)
    throw std::invalid_argument("quadratic dimensions mismatch");
  const Eigen::MatrixXd sym = 0.5 * (P + P.transpose());
  const double mag = std::max(1.0, sym.cwiseAbs().maxCoeff());
  Eigen::MatrixXd shifted = sym;
  shifted.diagonal().array() += 1e-10 * mag;
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("quadratic form is not positive semidefinite");
  Constraint con;
  con.P = sym;
  con.q = q;
  con.r = r;
  push_normalized(std::move(con));
}

void SmoothConvexProgram::add_exponential(int delta_index, int zeta_index) {
  if (delta_index < 0 || delta_index >= n_ || zeta_index < 0 || zeta_index >= n_)
    throw std::invalid_argument("exponential constraint index out of range");
  Constraint con;
  con.q = Eigen::VectorXd::Zero(n_);
  con.q[zeta_index] = -1.0;
  con.exp_var = delta_index;
  con.exp_coef = 1.0;
  push_normalized(std::move(con));
}

void SmoothConvexProgram::add_lower_bound(int index, double lo) {
  Eigen::VectorXd row = Eigen::VectorXd::Zero(n_);
  row[index] = -1.0;
  add_affine(row, -lo);
}

void SmoothConvexProgram::add_upper_bound(int index, double hi) {
  Eigen::VectorXd row = Eigen::VectorXd::Zero(n_);
  row[index] = 1.0;
  add_affine(row, hi);
}

double SmoothConvexProgram::constraint_value(int i, const Eigen::VectorXd& x) const {
  const Constraint& c = cons_[i];
  double f = c.q.dot(x) + c.r;
  if (c.P.size() > 0) f += x.dot(c.P * x);
  if (c.exp_var >= 0) f += c.exp_coef * exp2_safe(x[c.exp_var]);
  return f;
}

double SmoothConvexProgram::max_residual(const Eigen::VectorXd& x) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < num_constraints(); ++i) worst = std::max(worst, constraint_value(i, x));
  return worst;
}

bool SmoothConvexProgram::strictly_feasible(const Eigen::VectorXd& x, double margin) const {
  for (int i = 0; i < num_constraints(); ++i) {
    const double f = constraint_value(i, x);
    if (!std::isfinite(f) || f >= -margin) return false;
  }
  return true;
}

void SmoothConvexProgram::dump(std::ostream& os) const {
  os << "min c'x, c = [" << c_.transpose() << "]\n";
  for (size_t i = 0; i < cons_.size(); ++i) {
    const Constraint& c = cons_[i];
    os << "c" << i << ":";
    if (c.P.size() > 0) os << " quad(scale=" << c.scale << ")";
    os << " q=[" << c.q.transpose() << "]";
    if (c.exp_var >= 0) os << " + " << c.exp_coef << "*2^x[" << c.exp_var << "]";
    os << " <= " << -c.r << "\n";
  }
}

SolveResult solve_smooth_convex(const SmoothConvexProgram& prog,
                                const std::optional<Eigen::VectorXd>& warm, double tol,
                                const BarrierOptions& opts) {
  const int n = prog.num_vars();
  const int m = prog.num_constraints();
  SolveResult res;
  if (m == 0) throw std::invalid_argument("solve_smooth_convex: unconstrained program");

  BarrierView main{prog, false, n};

  Eigen::VectorXd x;
  bool have_start = false;
  if (warm && warm->size() == n && prog.strictly_feasible(*warm, 1e-9)) {
    x = *warm;
    have_start = true;
  }

  if (!have_start) {
    Eigen::VectorXd hint = (warm && warm->size() == n) ? *warm : Eigen::VectorXd::Zero(n);
    if (!hint.allFinite() || !std::isfinite(prog.max_residual(hint)))
      hint = Eigen::VectorXd::Zero(n);

    BarrierView p1{prog, true, n + 1};
    const double s0 = std::max(prog.max_residual(hint), 0.0) + 1.0;
    Eigen::VectorXd xs(n + 1);
    xs.head(n) = hint;
    xs[n] = s0;
    const double s_floor = -(std::abs(s0) + 2.0);

    Eigen::VectorXd obj1 = Eigen::VectorXd::Zero(n + 1);
    obj1[n] = 1.0;

    double t = opts.t0;
    bool found = false;
    for (int round = 0; round < opts.max_rounds; ++round) {
      p1.center(obj1, t, xs, opts);
      if (prog.strictly_feasible(xs.head(n), 1e-8)) {
        found = true;
        break;
      }
      if (xs[n] < s_floor) break;
      if ((m + 1) / t < 1e-6) break;
      t *= opts.mu;
    }
    if (!found && prog.strictly_feasible(xs.head(n))) found = true;
    if (!found) {
      res.status = Status::infeasible;
      res.x = xs.head(n);
      res.objective = prog.objective().dot(res.x);
      return res;
    }
    x = xs.head(n);
  }

  double t = opts.t0;
  res.status = Status::max_iterations;
  for (int round = 0; round < opts.max_rounds; ++round) {
    main.center(prog.objective(), t, x, opts);
    res.central_objectives.push_back(prog.objective().dot(x));
    res.barrier_rounds = round + 1;
    res.gap = static_cast<double>(m) / t;
    if (res.gap <= tol) {
      res.status = Status::optimal;
      break;
    }
    t *= opts.mu;
  }
  res.x = x;
  res.objective = prog.objective().dot(x);
  return res;
}

}  // namespace vlcee::solver
