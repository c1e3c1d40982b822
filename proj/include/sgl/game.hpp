#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace sgl {

// Numerical tolerances shared by the whole library.
inline constexpr double kStructuralTol = 1e-12;
inline constexpr double kValueTol = 1e-10;
inline constexpr double kCrossOracleTol = 1e-8;

struct Discounted {
   double gamma;
};
struct Average {};

using RewardFormulation = std::variant< Discounted, Average >;

inline bool is_discounted(const RewardFormulation& f)
{
   return std::holds_alternative< Discounted >(f);
}

/// A probability vector over one player's actions.
using Strategy = Eigen::VectorXd;
/// One strategy per state.
using Policy = std::vector< Strategy >;
/// One policy per player.
using JointPolicy = std::vector< Policy >;

class FormulationError: public std::runtime_error {
  public:
   using std::runtime_error::runtime_error;
};
class ErgodicityError: public std::runtime_error {
  public:
   using std::runtime_error::runtime_error;
};
class DimensionError: public std::invalid_argument {
  public:
   using std::invalid_argument::invalid_argument;
};
class UnsupportedError: public std::runtime_error {
  public:
   using std::runtime_error::runtime_error;
};

/// Finite stochastic game (n, S, A_1..n, T, R_1..n, s0) with a reward formulation.
///
/// Joint actions are indexed row-major over per-player action indices, so for
/// three players the joint action (a0, a1, a2) has index (a0 * |A1| + a1) * |A2| + a2.
/// transition[s] is a (joint actions x states) row-stochastic matrix and
/// rewards[i][s] holds player i's reward for every joint action at s.
struct StochasticGame {
   std::vector< std::string > states;
   std::vector< std::vector< std::string > > actions;
   std::vector< Eigen::MatrixXd > transition;
   std::vector< std::vector< Eigen::VectorXd > > rewards;
   std::size_t initial_state = 0;
   RewardFormulation formulation = Average{};

   std::size_t num_players() const { return actions.size(); }
   std::size_t num_states() const { return states.size(); }
   std::size_t num_actions(std::size_t player) const { return actions[player].size(); }
   std::size_t num_joint_actions() const;

   std::size_t joint_index(std::span< const std::size_t > profile) const;
   std::vector< std::size_t > joint_profile(std::size_t joint) const;

   std::optional< std::size_t > state_index(const std::string& name) const;
};

/// Human-readable violations of the game tuple constraints; empty means valid.
std::vector< std::string > validate(const StochasticGame& game);

/// Throws std::invalid_argument with the first violation if the game is invalid.
void require_valid(const StochasticGame& game);

/// Violations of the policy shape/simplex constraints for `player`.
std::vector< std::string > validate_policy(
   const StochasticGame& game,
   std::size_t player,
   const Policy& policy,
   double tol = kStructuralTol);

void require_joint_shape(const StochasticGame& game, const JointPolicy& joint);

/// Probability of every joint action at state s under the product of the players' strategies.
Eigen::VectorXd joint_action_distribution(
   const StochasticGame& game,
   const JointPolicy& joint,
   std::size_t state);

/// State-to-state transition matrix induced by a joint policy.
Eigen::MatrixXd policy_transition(const StochasticGame& game, const JointPolicy& joint);

/// (players x states) matrix of expected one-step rewards under a joint policy.
Eigen::MatrixXd policy_rewards(const StochasticGame& game, const JointPolicy& joint);

/// Discounted value V_i(s) for every player (rows) and state (columns), by a
/// direct solve of (I - gamma P) V = r.
Eigen::MatrixXd policy_value_discounted(const StochasticGame& game, const JointPolicy& joint);

/// Largest absolute Bellman residual of `values` for the given joint policy.
double bellman_residual(
   const StochasticGame& game,
   const JointPolicy& joint,
   const Eigen::MatrixXd& values);

/// Stationary distribution of a unichain transition matrix (solves d(P - I) = 0, sum d = 1).
/// Throws ErgodicityError when the chain has more than one closed class.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& transition);

/// Long-run average reward per player. Requires the Average formulation, a game
/// passing check_ergodic and a unichain chain under the joint policy.
Eigen::VectorXd policy_value_average(const StochasticGame& game, const JointPolicy& joint);

/// V_i(s0) for every player under the game's own formulation.
Eigen::VectorXd player_values(const StochasticGame& game, const JointPolicy& joint);

/// Conservative ergodicity test: the graph whose edges are the supports of all
/// joint actions' transitions is strongly connected. Necessary for, but weaker
/// than, reachability under every joint policy.
bool check_ergodic(const StochasticGame& game);

/// Expected payoff of a single-state game under a joint policy, multiplied by
/// 1/(1-gamma) for the discounted formulation.
Eigen::VectorXd matrix_value(const StochasticGame& game, const JointPolicy& joint);

/// Single-agent MDP faced by one player when everybody else is fixed.
struct InducedMDP {
   std::size_t player = 0;
   std::size_t num_states = 0;
   std::size_t num_actions = 0;
   /// transition[s] is (actions x states).
   std::vector< Eigen::MatrixXd > transition;
   /// reward[s] is indexed by action.
   std::vector< Eigen::VectorXd > reward;
   std::size_t initial_state = 0;
   RewardFormulation formulation = Average{};

   /// The MDP as a one-player stochastic game.
   StochasticGame as_game() const;
};

/// `others` holds the policies of every player except `player`, in player order.
InducedMDP induce_mdp(
   const StochasticGame& game,
   std::size_t player,
   std::span< const Policy > others);

/// Copy of `joint` without entry `player`.
std::vector< Policy > others_of(const JointPolicy& joint, std::size_t player);

/// `others` with `own` inserted at position `player`.
JointPolicy with_player(std::span< const Policy > others, std::size_t player, Policy own);

/// Per-state value of a policy in the MDP (average: constant vector of the gain).
Eigen::VectorXd mdp_policy_value(const InducedMDP& mdp, const Policy& policy);

/// Expected transition matrix and reward vector of a policy in the MDP.
Eigen::MatrixXd mdp_policy_transition(const InducedMDP& mdp, const Policy& policy);
Eigen::VectorXd mdp_policy_reward(const InducedMDP& mdp, const Policy& policy);

// Policy helpers.
Strategy uniform_strategy(std::size_t actions);
Strategy pure_strategy(std::size_t actions, std::size_t action);
Policy uniform_policy(const StochasticGame& game, std::size_t player);
Policy pure_policy(const StochasticGame& game, std::size_t player, std::span< const std::size_t > choice);
JointPolicy uniform_joint(const StochasticGame& game);
bool is_distribution(const Eigen::VectorXd& v, double tol = kStructuralTol);
double max_abs_diff(const Policy& a, const Policy& b);

}  // namespace sgl
