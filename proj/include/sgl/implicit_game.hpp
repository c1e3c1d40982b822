#pragma once

#include "sgl/game.hpp"
#include "sgl/policy_space.hpp"

#include <optional>
#include <vector>

namespace sgl {

/// tau[i][s] is an (implicit actions x explicit actions) row-stochastic matrix:
/// implicit action k of player i at state s executes explicit action a with
/// probability tau[i][s](k, a).
struct TauMapping {
   std::vector< std::vector< Eigen::MatrixXd > > per_player;
};

/// rewards[i][s] indexed by implicit joint action.
using RewardTable = std::vector< std::vector< Eigen::VectorXd > >;

struct ImplicitGame {
   StochasticGame game;
   TauMapping tau;
   StochasticGame explicit_game;
};

std::vector< std::string > validate_tau(const StochasticGame& explicit_game, const TauMapping& tau);

TauMapping identity_tau(const StochasticGame& game);

/// Implicit transitions are the tau-expectation of explicit ones. Rewards are
/// the tau-expectation of explicit rewards unless `reward_override` is given.
ImplicitGame build_implicit(
   const StochasticGame& explicit_game,
   TauMapping tau,
   std::optional< RewardTable > reward_override = std::nullopt);

/// Player `player`'s `broken_action` behaves like `null_action`.
ImplicitGame broken_actuator(
   const StochasticGame& explicit_game,
   std::size_t player,
   std::size_t broken_action,
   std::size_t null_action);

/// Each player i picks a uniformly random action with probability eps[i].
ImplicitGame epsilon_exploration(const StochasticGame& explicit_game, const std::vector< double >& eps);

/// Explicit policy equivalent to an implicit joint policy.
JointPolicy map_policy(const ImplicitGame& ig, const JointPolicy& implicit_joint);

/// Largest deviation of the implicit transitions from the tau-expectation of the explicit ones.
double implicit_transition_error(const ImplicitGame& ig);

/// Tau rows for a space with global generators (hulls, full space, state-uniform):
/// implicit action k plays generator k.
std::vector< Eigen::MatrixXd > generator_tau(const RestrictedPolicySpace& space);

/// Implicit game whose players choose among the generators of their spaces.
ImplicitGame implicit_from_spaces(
   const StochasticGame& explicit_game,
   const std::vector< RestrictedPolicySpace >& spaces);

}  // namespace sgl
