#pragma once

#include "sgl/game.hpp"

#include <optional>
#include <vector>

namespace sgl {

/// Two-player single-state game from row/column payoff matrices (rows index the
/// row player's actions).
StochasticGame matrix_game(
   const Eigen::MatrixXd& row_payoff,
   const Eigen::MatrixXd& col_payoff,
   std::vector< std::string > row_actions = {},
   std::vector< std::string > col_actions = {},
   RewardFormulation formulation = Average{});

/// Zero-sum game: the column player receives the negation of `row_payoff`.
StochasticGame zero_sum_matrix_game(
   const Eigen::MatrixXd& row_payoff,
   std::vector< std::string > row_actions = {},
   std::vector< std::string > col_actions = {},
   RewardFormulation formulation = Average{});

StochasticGame rps(RewardFormulation formulation = Average{});
StochasticGame bach_stravinsky(RewardFormulation formulation = Average{});
/// Colonel Blotto with four regiments for the row player and three for the column player.
StochasticGame blotto_4_3(RewardFormulation formulation = Average{});

Eigen::MatrixXd rps_row_payoff();
Eigen::MatrixXd blotto_row_payoff();

/// Default row-payoff matrices of the left and right states of the
/// convexity counterexample (rows U, D; columns L, R).
Eigen::Matrix2d fact5_default_left();
Eigen::Matrix2d fact5_default_right();
inline constexpr double kFact5DefaultEps = 0.1;
inline constexpr double kFact5DefaultGamma = 0.9;

/// Three-state zero-sum game {s0, left, right}. At s0 nobody is rewarded and the
/// column action picks the matching state with probability 1 - eps (the other
/// with eps). Both matrix states return to s0 deterministically.
StochasticGame fact5_game(
   const Eigen::Matrix2d& left,
   const Eigen::Matrix2d& right,
   double eps,
   double gamma);
StochasticGame fact5_game();

/// Same transitions as fact5_game under the average-reward formulation.
StochasticGame fact5_game_average(const Eigen::Matrix2d& left, const Eigen::Matrix2d& right, double eps);

struct GameClass {
   bool zero_sum = false;
   bool no_control = false;
   /// single_controller[i]: transitions depend only on player i's action.
   std::vector< bool > single_controller;
   bool team = false;
};

GameClass classify(const StochasticGame& game, double tol = kStructuralTol);

}  // namespace sgl
