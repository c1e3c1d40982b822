#pragma once

#include "sgl/game.hpp"
#include "sgl/implicit_game.hpp"
#include "sgl/policy_space.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace sgl {

/// Restricted-equilibrium certificate. gaps[i] is player i's restricted
/// best-response value minus its current value, both at the initial state.
struct EquilibriumCertificate {
   JointPolicy policy;
   std::vector< double > gaps;
   double epsilon = 0.0;
   bool verdict = false;

   double max_gap() const;
};

struct BestResponseResult {
   Policy policy;
   double value = 0.0;
   /// Distinct optimal policies found alongside the representative (the optimal
   /// face's vertices for matrix games, tie alternatives or near-optimal grid
   /// points otherwise). Always contains the representative first.
   std::vector< Policy > optimal_set;
   /// Zero when the optimum is exact; otherwise an empirical bound on how much
   /// the weight grid may have missed.
   double tolerance = 0.0;
};

struct BestResponseOptions {
   /// Weight step of the grid used for global-hull spaces in multi-state games.
   double grid_step = 0.01;
   /// Cap on grid points; the step is coarsened until the grid fits.
   std::size_t max_grid_points = 200000;
   bool polish = true;
};

struct MinimaxResult {
   double value = 0.0;
   Strategy row;
   Strategy col;
};

/// Row payoff matrix of player `player` in a two-player single-state game
/// (rows: row player's actions, columns: column player's actions).
Eigen::MatrixXd payoff_matrix(const StochasticGame& game, std::size_t player);

/// Maximin strategies of a zero-sum matrix (row maximizes). Among optimal
/// strategies the lexicographically least one is returned for each side.
MinimaxResult solve_minimax(const Eigen::MatrixXd& row_payoff);

/// Minimax solution of a two-player zero-sum single-state game. The value is
/// scaled like matrix_value.
MinimaxResult minimax_zero_sum_matrix(const StochasticGame& game);

struct BimatrixEquilibrium {
   Strategy row;
   Strategy col;
   double row_value = 0.0;
   double col_value = 0.0;
};

struct SupportEnumerationResult {
   std::vector< BimatrixEquilibrium > equilibria;
   /// Set when a support system was singular or an equilibrium had a best
   /// response outside its support; equal-size enumeration may then miss some.
   bool degenerate = false;
};

SupportEnumerationResult support_enumeration_bimatrix(const StochasticGame& game, std::size_t max_actions = 5);

/// Best response of player `player` within `space` when the others play `others`.
BestResponseResult restricted_best_response(
   const StochasticGame& game,
   std::size_t player,
   std::span< const Policy > others,
   const RestrictedPolicySpace& space,
   const BestResponseOptions& options = {});

class PreconditionError: public std::invalid_argument {
  public:
   using std::invalid_argument::invalid_argument;
};

std::vector< RestrictedPolicySpace > full_spaces(const StochasticGame& game);

EquilibriumCertificate check_equilibrium(
   const StochasticGame& game,
   const JointPolicy& joint,
   const std::vector< RestrictedPolicySpace >& spaces,
   double epsilon,
   const BestResponseOptions& options = {});

/// One certificate (against full-space deviations) per pure joint policy.
std::vector< EquilibriumCertificate > enumerate_deterministic(const StochasticGame& game, double epsilon);

struct ImplicitEquilibrium {
   JointPolicy explicit_joint;
   JointPolicy implicit_joint;
   /// Value to the row player.
   double value = 0.0;
   EquilibriumCertificate certificate;
   ImplicitGame implicit;
};

/// Restricted equilibrium of a zero-sum matrix game whose players are limited to
/// convex hulls (or the full space), via the implicit game over generators.
ImplicitEquilibrium restricted_equilibrium_via_implicit(
   const StochasticGame& game,
   const std::vector< RestrictedPolicySpace >& spaces,
   double epsilon = kCrossOracleTol);

struct SweepRow {
   std::vector< double > params;
   double max_gap = 0.0;
};

struct SweepResult {
   double min_max_gap = 0.0;
   JointPolicy argmin;
   std::vector< double > argmin_params;
   /// Largest change of the max gap between neighbouring grid points.
   double refinement_bound = 0.0;
   /// min_max_gap - refinement_bound; positive margin beyond epsilon is numeric
   /// evidence (not a proof) that no epsilon-equilibrium exists.
   double margin = 0.0;
   double epsilon = 0.0;
   double resolution = 0.0;
   bool no_equilibrium_found = false;
   std::vector< SweepRow > rows;
};

SweepResult sweep_existence(
   const StochasticGame& game,
   const std::vector< RestrictedPolicySpace >& spaces,
   double resolution,
   double epsilon,
   const BestResponseOptions& options = {});

/// Checks that random convex combinations of distinct optimal policies remain
/// optimal (within 1e-8). True when the optimal set found is a single policy.
bool best_response_convexity_test(
   const StochasticGame& game,
   std::size_t player,
   std::span< const Policy > others,
   const RestrictedPolicySpace& space,
   std::size_t trials,
   std::uint64_t seed);

}  // namespace sgl
