#pragma once

#include <Eigen/Dense>
#include <vector>

namespace weakkam {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpSolution {
  LpStatus status = LpStatus::optimal;
  double objective = 0.0;
  // Nonzero components of the optimal vertex.
  std::vector<std::pair<int, double>> support;
  int iterations = 0;
};

// Solves   min c^T w   s.t.  A w = b,  w >= 0
// by a two-phase dense revised simplex (Dantzig pricing with a Bland
// fallback once stalling is detected). Sized for small row counts.
LpSolution solve_standard_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                             const Eigen::VectorXd& c, int max_iterations = 200000);

}  // namespace weakkam
