#include "sgl/builders.hpp"

#include <cmath>
#include <stdexcept>

namespace sgl {

namespace {

std::vector< std::string > default_names(std::size_t count, const char* prefix)
{
   std::vector< std::string > names;
   for(std::size_t k = 0; k < count; ++k) {
      names.push_back(prefix + std::to_string(k));
   }
   return names;
}

bool rows_equal(const Eigen::MatrixXd& t, Eigen::Index a, Eigen::Index b, double tol)
{
   return (t.row(a) - t.row(b)).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

StochasticGame matrix_game(
   const Eigen::MatrixXd& row_payoff,
   const Eigen::MatrixXd& col_payoff,
   std::vector< std::string > row_actions,
   std::vector< std::string > col_actions,
   RewardFormulation formulation)
{
   if(row_payoff.rows() == 0 or row_payoff.cols() == 0 or row_payoff.rows() != col_payoff.rows()
      or row_payoff.cols() != col_payoff.cols()) {
      throw std::invalid_argument("payoff matrices must be non-empty and of equal shape");
   }
   const auto m = std::size_t(row_payoff.rows());
   const auto n = std::size_t(row_payoff.cols());
   if(row_actions.empty()) {
      row_actions = default_names(m, "r");
   }
   if(col_actions.empty()) {
      col_actions = default_names(n, "c");
   }
   if(row_actions.size() != m or col_actions.size() != n) {
      throw std::invalid_argument("action names do not match the payoff shape");
   }
   StochasticGame game;
   game.states = {"s0"};
   game.actions = {std::move(row_actions), std::move(col_actions)};
   game.transition = {Eigen::MatrixXd::Ones(Eigen::Index(m * n), 1)};
   Eigen::VectorXd r(static_cast< Eigen::Index >(m * n));
   Eigen::VectorXd c(static_cast< Eigen::Index >(m * n));
   for(std::size_t a = 0; a < m; ++a) {
      for(std::size_t b = 0; b < n; ++b) {
         r[Eigen::Index(a * n + b)] = row_payoff(Eigen::Index(a), Eigen::Index(b));
         c[Eigen::Index(a * n + b)] = col_payoff(Eigen::Index(a), Eigen::Index(b));
      }
   }
   game.rewards = {{r}, {c}};
   game.formulation = formulation;
   return game;
}

StochasticGame zero_sum_matrix_game(
   const Eigen::MatrixXd& row_payoff,
   std::vector< std::string > row_actions,
   std::vector< std::string > col_actions,
   RewardFormulation formulation)
{
   return matrix_game(row_payoff, -row_payoff, std::move(row_actions), std::move(col_actions), formulation);
}

Eigen::MatrixXd rps_row_payoff()
{
   Eigen::MatrixXd m(3, 3);
   m << 0, -1, 1,  //
      1, 0, -1,    //
      -1, 1, 0;
   return m;
}

Eigen::MatrixXd blotto_row_payoff()
{
   Eigen::MatrixXd m(5, 4);
   m << 4, 2, 1, 0,  //
      1, 3, 0, -1,   //
      -2, 2, 2, -2,  //
      -1, 0, 3, 1,   //
      0, 1, 2, 4;
   return m;
}

StochasticGame rps(RewardFormulation formulation)
{
   return zero_sum_matrix_game(
      rps_row_payoff(), {"rock", "paper", "scissors"}, {"rock", "paper", "scissors"}, formulation);
}

StochasticGame bach_stravinsky(RewardFormulation formulation)
{
   Eigen::MatrixXd row(2, 2);
   row << 2, 0, 0, 1;
   Eigen::MatrixXd col(2, 2);
   col << 1, 0, 0, 2;
   return matrix_game(row, col, {"bach", "stravinsky"}, {"bach", "stravinsky"}, formulation);
}

StochasticGame blotto_4_3(RewardFormulation formulation)
{
   return zero_sum_matrix_game(
      blotto_row_payoff(), {"4-0", "3-1", "2-2", "1-3", "0-4"}, {"3-0", "2-1", "1-2", "0-3"}, formulation);
}

Eigen::Matrix2d fact5_default_left()
{
   Eigen::Matrix2d m;
   m << 1, 1, 0, 1;
   return m;
}

Eigen::Matrix2d fact5_default_right()
{
   Eigen::Matrix2d m;
   m << 1, 0, 1, 1;
   return m;
}

namespace {

StochasticGame fact5_structure(
   const Eigen::Matrix2d& left,
   const Eigen::Matrix2d& right,
   double eps,
   RewardFormulation formulation)
{
   if(not(eps > 0.0 and eps < 1.0)) {
      throw std::invalid_argument("eps must lie in (0, 1)");
   }
   if(not left.allFinite() or not right.allFinite()) {
      throw std::invalid_argument("state payoff matrices must be finite");
   }
   StochasticGame game;
   game.states = {"s0", "left", "right"};
   game.actions = {{"U", "D"}, {"L", "R"}};
   game.initial_state = 0;
   game.formulation = formulation;

   // Joint index = row * 2 + col.
   Eigen::MatrixXd from_start(4, 3);
   Eigen::MatrixXd back(4, 3);
   for(Eigen::Index a = 0; a < 2; ++a) {
      from_start.row(a * 2 + 0) << 0.0, 1.0 - eps, eps;
      from_start.row(a * 2 + 1) << 0.0, eps, 1.0 - eps;
   }
   back.setZero();
   back.col(0).setOnes();
   game.transition = {from_start, back, back};

   Eigen::VectorXd zero = Eigen::VectorXd::Zero(4);
   Eigen::VectorXd l(4);
   Eigen::VectorXd r(4);
   l << left(0, 0), left(0, 1), left(1, 0), left(1, 1);
   r << right(0, 0), right(0, 1), right(1, 0), right(1, 1);
   game.rewards = {{zero, l, r}, {zero, -l, -r}};
   return game;
}

}  // namespace

StochasticGame fact5_game(
   const Eigen::Matrix2d& left,
   const Eigen::Matrix2d& right,
   double eps,
   double gamma)
{
   if(not(gamma > 0.0 and gamma < 1.0)) {
      throw std::invalid_argument("gamma must lie in (0, 1)");
   }
   return fact5_structure(left, right, eps, Discounted{gamma});
}

StochasticGame fact5_game()
{
   return fact5_game(fact5_default_left(), fact5_default_right(), kFact5DefaultEps, kFact5DefaultGamma);
}

StochasticGame fact5_game_average(const Eigen::Matrix2d& left, const Eigen::Matrix2d& right, double eps)
{
   return fact5_structure(left, right, eps, Average{});
}

GameClass classify(const StochasticGame& game, double tol)
{
   GameClass out;
   const auto n = game.num_players();
   const auto nj = game.num_joint_actions();

   out.zero_sum = true;
   out.team = true;
   for(std::size_t s = 0; s < game.num_states(); ++s) {
      Eigen::VectorXd total = Eigen::VectorXd::Zero(Eigen::Index(nj));
      for(std::size_t i = 0; i < n; ++i) {
         total += game.rewards[i][s];
         if((game.rewards[i][s] - game.rewards[0][s]).cwiseAbs().maxCoeff() > tol) {
            out.team = false;
         }
      }
      if(total.cwiseAbs().maxCoeff() > tol) {
         out.zero_sum = false;
      }
   }
   // A one-player game is trivially a team game but never interesting as zero-sum.
   if(n < 2) {
      out.zero_sum = false;
   }

   out.no_control = true;
   for(std::size_t s = 0; s < game.num_states(); ++s) {
      for(std::size_t j = 1; j < nj; ++j) {
         if(not rows_equal(game.transition[s], 0, Eigen::Index(j), tol)) {
            out.no_control = false;
         }
      }
   }

   out.single_controller.assign(n, true);
   for(std::size_t i = 0; i < n; ++i) {
      for(std::size_t s = 0; s < game.num_states() and out.single_controller[i]; ++s) {
         for(std::size_t j = 0; j < nj and out.single_controller[i]; ++j) {
            // Compare with the joint action where everybody else plays action 0.
            auto profile = game.joint_profile(j);
            std::vector< std::size_t > base(n, 0);
            base[i] = profile[i];
            if(not rows_equal(game.transition[s], Eigen::Index(j), Eigen::Index(game.joint_index(base)), tol)) {
               out.single_controller[i] = false;
            }
         }
      }
   }
   return out;
}

}  // namespace sgl
