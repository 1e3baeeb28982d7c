#include "weakkam/lp.hpp"

#include <cmath>
#include <limits>

namespace weakkam {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;

struct Tableau {
  const Eigen::MatrixXd& A;
  Eigen::VectorXd b;
  int m, n;
  std::vector<int> basis;          // column index per row; >= n means artificial
  Eigen::MatrixXd Binv;            // explicit inverse of the basis matrix
  Eigen::VectorXd xB;

  Tableau(const Eigen::MatrixXd& A_, const Eigen::VectorXd& b_)
      : A(A_), b(b_), m(static_cast<int>(A_.rows())), n(static_cast<int>(A_.cols())) {}

  Eigen::VectorXd column(int j) const {
    if (j < n) return A.col(j);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
    e[j - n] = 1.0;
    return e;
  }

  void refactor() {
    Eigen::MatrixXd B(m, m);
    for (int i = 0; i < m; ++i) B.col(i) = column(basis[i]);
    Binv = B.partialPivLu().inverse();
    xB = Binv * b;
  }
};

}  // namespace

LpSolution solve_standard_lp(const Eigen::MatrixXd& A_in, const Eigen::VectorXd& b_in,
                             const Eigen::VectorXd& c_in, int max_iterations) {
  const int m = static_cast<int>(A_in.rows());
  const int n = static_cast<int>(A_in.cols());

  // Normalize to b >= 0 so the artificial basis is feasible.
  Eigen::MatrixXd A = A_in;
  Eigen::VectorXd b = b_in;
  for (int i = 0; i < m; ++i) {
    if (b[i] < 0.0) {
      b[i] = -b[i];
      A.row(i) = -A.row(i);
    }
  }

  Tableau t(A, b);
  t.basis.resize(m);
  for (int i = 0; i < m; ++i) t.basis[i] = n + i;
  t.refactor();

  LpSolution result;
  std::vector<bool> banned(n + m, false);
  for (int j = n; j < n + m; ++j) banned[j] = false;  // artificials allowed in phase 1

  auto cost_of = [&](int phase, int j) -> double {
    if (phase == 1) return j >= n ? 1.0 : 0.0;
    return j >= n ? 0.0 : c_in[j];
  };

  int total_iters = 0;
  for (int phase = 1; phase <= 2; ++phase) {
    if (phase == 2) {
      for (int j = n; j < n + m; ++j) banned[j] = true;  // no artificial may re-enter
    }
    int stall = 0;
    bool bland = false;
    double last_obj = std::numeric_limits<double>::infinity();
    while (true) {
      if (++total_iters > max_iterations) {
        result.status = LpStatus::iteration_limit;
        result.iterations = total_iters;
        return result;
      }
      Eigen::VectorXd cB(m);
      for (int i = 0; i < m; ++i) cB[i] = cost_of(phase, t.basis[i]);
      Eigen::VectorXd y = t.Binv.transpose() * cB;
      // Pricing.
      int enter = -1;
      double best = -kCostTol;
      if (!bland) {
        Eigen::VectorXd d = -(A.transpose() * y);
        for (int j = 0; j < n; ++j) {
          double red = cost_of(phase, j) + d[j];
          if (!banned[j] && red < best) {
            best = red;
            enter = j;
          }
        }
      } else {
        for (int j = 0; j < n; ++j) {
          if (banned[j]) continue;
          double red = cost_of(phase, j) - y.dot(A.col(j));
          if (red < -kCostTol) {
            enter = j;
            break;
          }
        }
      }
      double obj = cB.dot(t.xB);
      if (enter < 0) {
        // Optimal for this phase.
        if (phase == 1 && obj > 1e-7) {
          result.status = LpStatus::infeasible;
          result.iterations = total_iters;
          return result;
        }
        break;
      }
      Eigen::VectorXd u = t.Binv * t.column(enter);
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (u[i] > kPivotTol) {
          double ratio = t.xB[i] / u[i];
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 && leave >= 0 && t.basis[i] < t.basis[leave])) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      // Prefer kicking artificials out on degenerate ratios in phase 1.
      if (phase == 1 && best_ratio < 1e-12) {
        for (int i = 0; i < m; ++i) {
          if (u[i] > kPivotTol && t.xB[i] / u[i] < 1e-12 && t.basis[i] >= n) {
            leave = i;
            break;
          }
        }
      }
      if (leave < 0) {
        result.status = LpStatus::unbounded;
        result.iterations = total_iters;
        return result;
      }
      t.basis[leave] = enter;
      t.refactor();
      if (obj >= last_obj - 1e-13) {
        if (++stall > 2 * m + 50) bland = true;  // anti-cycling fallback
      } else {
        stall = 0;
      }
      last_obj = obj;
    }
    if (phase == 1) {
      // Drive residual artificials out of the basis where possible.
      for (int i = 0; i < m; ++i) {
        if (t.basis[i] < n) continue;
        Eigen::VectorXd row = t.Binv.row(i) * A;
        int replacement = -1;
        for (int j = 0; j < n; ++j) {
          if (std::abs(row[j]) > 1e-7) {
            bool in_basis = false;
            for (int k = 0; k < m; ++k) in_basis |= (t.basis[k] == j);
            if (!in_basis) {
              replacement = j;
              break;
            }
          }
        }
        if (replacement >= 0) {
          t.basis[i] = replacement;
          t.refactor();
        }
      }
    }
  }

  result.status = LpStatus::optimal;
  result.iterations = total_iters;
  Eigen::VectorXd cB(m);
  for (int i = 0; i < m; ++i) cB[i] = cost_of(2, t.basis[i]);
  result.objective = cB.dot(t.xB);
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] < n && std::abs(t.xB[i]) > 1e-12) {
      result.support.emplace_back(t.basis[i], t.xB[i]);
    }
  }
  return result;
}

}  // namespace weakkam
