#include "sgl/lp.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

namespace sgl {

namespace {

constexpr double kPivotTol = 1e-11;

class Tableau {
  public:
   // rows: constraints, last row = objective (reduced profits, c_j - z_j).
   Eigen::MatrixXd t;
   std::vector< Eigen::Index > basis;

   Eigen::Index rows() const { return t.rows() - 1; }
   Eigen::Index rhs_col() const { return t.cols() - 1; }

   void pivot(Eigen::Index r, Eigen::Index c)
   {
      t.row(r) /= t(r, c);
      for(Eigen::Index i = 0; i < t.rows(); ++i) {
         if(i != r and t(i, c) != 0.0) {
            t.row(i) -= t(i, c) * t.row(r);
         }
      }
      basis[std::size_t(r)] = c;
   }

   /// Runs Bland's rule over columns [0, usable). Returns false if unbounded.
   bool optimize(Eigen::Index usable)
   {
      const auto obj = t.rows() - 1;
      for(;;) {
         Eigen::Index enter = -1;
         for(Eigen::Index j = 0; j < usable; ++j) {
            if(t(obj, j) > kPivotTol) {
               enter = j;
               break;
            }
         }
         if(enter < 0) {
            return true;
         }
         Eigen::Index leave = -1;
         double best = std::numeric_limits< double >::infinity();
         for(Eigen::Index i = 0; i < rows(); ++i) {
            if(t(i, enter) > kPivotTol) {
               double ratio = t(i, rhs_col()) / t(i, enter);
               if(leave < 0 or ratio < best - 1e-14) {
                  best = ratio;
                  leave = i;
               } else if(ratio <= best + 1e-14 and basis[std::size_t(i)] < basis[std::size_t(leave)]) {
                  leave = i;
               }
            }
         }
         if(leave < 0) {
            return false;
         }
         pivot(leave, enter);
      }
   }

   void set_objective(const Eigen::VectorXd& profit)
   {
      const auto obj = t.rows() - 1;
      t.row(obj).setZero();
      t.row(obj).head(profit.size()) = profit.transpose();
      for(Eigen::Index i = 0; i < rows(); ++i) {
         auto b = basis[std::size_t(i)];
         if(t(obj, b) != 0.0) {
            t.row(obj) -= t(obj, b) * t.row(i);
         }
      }
   }
};

}  // namespace

LpResult solve_lp(
   const Eigen::VectorXd& c,
   const Eigen::MatrixXd& a_ub,
   const Eigen::VectorXd& b_ub,
   const Eigen::MatrixXd& a_eq,
   const Eigen::VectorXd& b_eq)
{
   const Eigen::Index n = c.size();
   const Eigen::Index m_ub = a_ub.rows();
   const Eigen::Index m_eq = a_eq.rows();
   if((m_ub > 0 and a_ub.cols() != n) or (m_eq > 0 and a_eq.cols() != n) or b_ub.size() != m_ub
      or b_eq.size() != m_eq) {
      throw std::invalid_argument("solve_lp: inconsistent dimensions");
   }
   const Eigen::Index m = m_ub + m_eq;
   // Columns: original n | slacks m_ub | artificials m | rhs.
   const Eigen::Index art0 = n + m_ub;
   const Eigen::Index cols = art0 + m + 1;

   Tableau tab;
   tab.t = Eigen::MatrixXd::Zero(m + 1, cols);
   tab.basis.resize(std::size_t(m));
   for(Eigen::Index i = 0; i < m; ++i) {
      const bool ub = i < m_ub;
      Eigen::RowVectorXd row = ub ? Eigen::RowVectorXd(a_ub.row(i)) : Eigen::RowVectorXd(a_eq.row(i - m_ub));
      double rhs = ub ? b_ub[i] : b_eq[i - m_ub];
      double sign = rhs < 0.0 ? -1.0 : 1.0;
      tab.t.block(i, 0, 1, n) = sign * row;
      if(ub) {
         tab.t(i, n + i) = sign;
      }
      tab.t(i, art0 + i) = 1.0;
      tab.t(i, cols - 1) = sign * rhs;
      tab.basis[std::size_t(i)] = art0 + i;
   }

   // Phase one: maximize -sum(artificials).
   Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(cols - 1);
   phase1.tail(m).setConstant(-1.0);
   tab.set_objective(phase1);
   tab.optimize(cols - 1);

   double infeasibility = 0.0;
   for(Eigen::Index i = 0; i < m; ++i) {
      if(tab.basis[std::size_t(i)] >= art0) {
         infeasibility += tab.t(i, cols - 1);
      }
   }
   LpResult result;
   if(infeasibility > 1e-9) {
      result.status = LpStatus::infeasible;
      return result;
   }

   // Drive remaining (zero-level) artificials out of the basis; drop redundant rows.
   for(Eigen::Index i = 0; i < tab.rows(); ++i) {
      if(tab.basis[std::size_t(i)] < art0) {
         continue;
      }
      Eigen::Index col = -1;
      for(Eigen::Index j = 0; j < art0; ++j) {
         if(std::abs(tab.t(i, j)) > kPivotTol) {
            col = j;
            break;
         }
      }
      if(col >= 0) {
         tab.pivot(i, col);
      } else {
         Eigen::MatrixXd reduced(tab.t.rows() - 1, tab.t.cols());
         reduced << tab.t.topRows(i), tab.t.bottomRows(tab.t.rows() - i - 1);
         tab.t = std::move(reduced);
         tab.basis.erase(tab.basis.begin() + i);
         --i;
      }
   }

   Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(cols - 1);
   phase2.head(n) = c;
   tab.set_objective(phase2);
   if(not tab.optimize(art0)) {
      result.status = LpStatus::unbounded;
      return result;
   }

   result.status = LpStatus::optimal;
   result.x = Eigen::VectorXd::Zero(n);
   for(Eigen::Index i = 0; i < tab.rows(); ++i) {
      auto b = tab.basis[std::size_t(i)];
      if(b < n) {
         result.x[b] = tab.t(i, cols - 1);
      }
   }
   result.objective = c.dot(result.x);
   return result;
}

}  // namespace sgl
