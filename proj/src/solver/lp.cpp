#include "vlcee/solver/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vlcee::solver {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr int kMaxPivots = 20000;

struct Tableau {
  Eigen::MatrixXd A;  // m x ncols, equality form A u = b with u >= 0
  Eigen::VectorXd b;  // >= 0 after setup
  std::vector<int> basis;

  void pivot(int row, int col) {
    const double piv = A(row, col);  // copy: the row division mutates it
    A.row(row) /= piv;
    b[row] /= piv;
    for (int i = 0; i < A.rows(); ++i) {
      if (i == row) continue;
      const double f = A(i, col);
      if (std::abs(f) > 0) {
        A.row(i) -= f * A.row(row);
        b[i] -= f * b[row];
      }
    }
    basis[row] = col;
  }
};

// Bland's rule simplex on min cost'u. `allowed` masks columns that may enter.
// Returns optimal/unbounded/max-iterations.
Status run_simplex(Tableau& t, const Eigen::VectorXd& cost, const std::vector<bool>& allowed) {
  const int m = static_cast<int>(t.A.rows());
  const int ncols = static_cast<int>(t.A.cols());
  for (int iter = 0; iter < kMaxPivots; ++iter) {
    // reduced costs: c_j - c_B' B^{-1} A_j; with the tableau kept in
    // canonical form this is c_j - sum_i cost[basis_i] * A(i, j)
    int enter = -1;
    for (int j = 0; j < ncols; ++j) {
      if (!allowed[j]) continue;
      bool basic = false;
      for (int i = 0; i < m; ++i)
        if (t.basis[i] == j) {
          basic = true;
          break;
        }
      if (basic) continue;
      double rc = cost[j];
      for (int i = 0; i < m; ++i) rc -= cost[t.basis[i]] * t.A(i, j);
      if (rc < -kPivotTol) {
        enter = j;
        break;  // Bland: smallest index
      }
    }
    if (enter < 0) return Status::optimal;

    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      if (t.A(i, enter) > kPivotTol) {
        const double ratio = t.b[i] / t.A(i, enter);
        if (leave < 0 || ratio < best_ratio - kPivotTol ||
            (ratio < best_ratio + kPivotTol && t.basis[i] < t.basis[leave]))
          best_ratio = ratio, leave = i;
      }
    }
    if (leave < 0) return Status::unbounded;
    t.pivot(leave, enter);
  }
  return Status::max_iterations;
}

}  // namespace

LinearProgram LinearProgram::make(int num_vars) {
  LinearProgram lp;
  lp.c = Eigen::VectorXd::Zero(num_vars);
  lp.lower = Eigen::VectorXd::Constant(num_vars, -std::numeric_limits<double>::infinity());
  lp.upper = Eigen::VectorXd::Constant(num_vars, std::numeric_limits<double>::infinity());
  return lp;
}

SolveResult solve_lp(const LinearProgram& lp) {
  const int n = static_cast<int>(lp.c.size());
  const double inf = std::numeric_limits<double>::infinity();

  // Column layout of each original variable in the nonnegative formulation.
  struct VarMap {
    int col_pos;       // u+ column
    int col_neg = -1;  // u- column for split (free) variables
    double offset = 0.0;
  };
  std::vector<VarMap> vmap(n);
  int nu = 0;
  for (int j = 0; j < n; ++j) {
    if (lp.lower[j] > -inf) {
      vmap[j] = {nu, -1, lp.lower[j]};
      nu += 1;
    } else {
      vmap[j] = {nu, nu + 1, 0.0};
      nu += 2;
    }
  }

  // Gather rows: user rows plus finite upper bounds.
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  const auto add_row = [&](const Eigen::VectorXd& a, double b) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(nu);
    double shift = 0.0;
    for (int j = 0; j < n; ++j) {
      if (a[j] == 0.0) continue;
      r[vmap[j].col_pos] += a[j];
      if (vmap[j].col_neg >= 0) r[vmap[j].col_neg] -= a[j];
      shift += a[j] * vmap[j].offset;
    }
    rows.push_back(std::move(r));
    rhs.push_back(b - shift);
  };
  for (const auto& row : lp.rows) {
    if (row.a.size() != n) throw std::invalid_argument("solve_lp: row size mismatch");
    add_row(row.a, row.b);
  }
  for (int j = 0; j < n; ++j) {
    if (lp.upper[j] < inf) {
      Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
      a[j] = 1.0;
      add_row(a, lp.upper[j]);
    }
  }

  const int m = static_cast<int>(rows.size());
  // Columns: structural, slacks, artificials.
  int n_art = 0;
  for (int i = 0; i < m; ++i)
    if (rhs[i] < 0) ++n_art;
  const int ncols = nu + m + n_art;

  Tableau t;
  t.A = Eigen::MatrixXd::Zero(m, ncols);
  t.b = Eigen::VectorXd::Zero(m);
  t.basis.assign(m, -1);

  int art = nu + m;
  for (int i = 0; i < m; ++i) {
    if (rhs[i] >= 0) {
      t.A.row(i).head(nu) = rows[i].transpose();
      t.A(i, nu + i) = 1.0;
      t.b[i] = rhs[i];
      t.basis[i] = nu + i;
    } else {
      t.A.row(i).head(nu) = -rows[i].transpose();
      t.A(i, nu + i) = -1.0;
      t.A(i, art) = 1.0;
      t.b[i] = -rhs[i];
      t.basis[i] = art;
      ++art;
    }
  }

  SolveResult res;
  res.gap = 0.0;

  if (n_art > 0) {
    Eigen::VectorXd cost1 = Eigen::VectorXd::Zero(ncols);
    cost1.tail(n_art).setOnes();
    std::vector<bool> all(ncols, true);
    const Status s1 = run_simplex(t, cost1, all);
    if (s1 == Status::max_iterations) {
      res.status = s1;
      return res;
    }
    double art_sum = 0.0;
    for (int i = 0; i < m; ++i)
      if (t.basis[i] >= nu + m) art_sum += t.b[i];
    const double scale = std::max(1.0, t.b.cwiseAbs().maxCoeff());
    if (art_sum > 1e-7 * scale) {
      res.status = Status::infeasible;
      return res;
    }
    // Pivot remaining zero-valued artificials out of the basis; rows whose
    // non-artificial part vanished are redundant and stay inert.
    for (int i = 0; i < m; ++i) {
      if (t.basis[i] < nu + m) continue;
      for (int j = 0; j < nu + m; ++j) {
        if (std::abs(t.A(i, j)) > kPivotTol) {
          t.pivot(i, j);
          break;
        }
      }
    }
  }

  Eigen::VectorXd cost2 = Eigen::VectorXd::Zero(ncols);
  for (int j = 0; j < n; ++j) {
    cost2[vmap[j].col_pos] += lp.c[j];
    if (vmap[j].col_neg >= 0) cost2[vmap[j].col_neg] -= lp.c[j];
  }
  std::vector<bool> allowed(ncols, true);
  for (int j = nu + m; j < ncols; ++j) allowed[j] = false;  // artificials stay out
  const Status s2 = run_simplex(t, cost2, allowed);
  if (s2 != Status::optimal) {
    res.status = s2;
    return res;
  }

  Eigen::VectorXd u = Eigen::VectorXd::Zero(ncols);
  for (int i = 0; i < m; ++i) u[t.basis[i]] = t.b[i];
  res.x.resize(n);
  for (int j = 0; j < n; ++j) {
    double v = vmap[j].offset + u[vmap[j].col_pos];
    if (vmap[j].col_neg >= 0) v -= u[vmap[j].col_neg];
    res.x[j] = v;
  }
  res.objective = lp.c.dot(res.x);
  res.status = Status::optimal;
  return res;
}

}  // namespace vlcee::solver
