#pragma once

#include <Eigen/Dense>

namespace sgl {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
   LpStatus status = LpStatus::infeasible;
   Eigen::VectorXd x;
   double objective = 0.0;
};

/// Dense linear program
///
///    maximize   c^T x
///    subject to A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0
///
/// solved by the two-phase tableau simplex method with Bland's pivoting rule.
/// Either constraint block may have zero rows. Meant for the small programs that
/// arise from matrix games; it is neither sparse nor warm-startable.
LpResult solve_lp(
   const Eigen::VectorXd& c,
   const Eigen::MatrixXd& a_ub,
   const Eigen::VectorXd& b_ub,
   const Eigen::MatrixXd& a_eq,
   const Eigen::VectorXd& b_eq);

}  // namespace sgl
