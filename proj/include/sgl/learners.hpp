#pragma once

#include "sgl/game.hpp"
#include "sgl/policy_space.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace sgl {

/// value(t) = numerator / (offset + t / divisor).
struct Schedule {
   double numerator = 1.0;
   double offset = 1.0;
   double divisor = 1.0;

   double operator()(std::uint64_t t) const { return numerator / (offset + double(t) / divisor); }
};

struct WolfPhcConfig {
   Schedule alpha{1.0, 10.0, 10000.0};
   Schedule delta_win{1.0, 2000.0, 1.0};
   /// delta_lose(t) = delta_lose_ratio * delta_win(t).
   double delta_lose_ratio = 4.0;
   Schedule explore{0.2, 1.0, 10000.0};
   double gamma = 0.0;

   double delta_lose(std::uint64_t t) const { return delta_lose_ratio * delta_win(t); }
   /// Throws std::invalid_argument when a rate leaves (0, 1], the lose step is
   /// not larger than the win step, or exploration does not decay.
   void validate() const;
};

struct LearnerState {
   /// q[s][k]: value of choice k (an action, or a generator for the restricted variant).
   std::vector< Eigen::VectorXd > q;
   /// Rows over choices. The restricted variant keeps a single weight row
   /// shared by every state, so its explicit policy stays in the global hull.
   Policy policy;
   Policy avg_policy;
   std::vector< std::uint64_t > counts;
   std::uint64_t steps = 0;
   double last_delta = 0.0;
   bool last_was_lose = false;
   WolfPhcConfig config;
   std::vector< Policy > generators;

   bool restricted() const { return not generators.empty(); }
   std::size_t num_choices() const { return std::size_t(q.front().size()); }
   std::size_t policy_row(std::size_t state) const { return restricted() ? 0 : state; }
   /// Policy over primitive actions at every state.
   Policy explicit_policy() const;
};

LearnerState make_learner(std::size_t num_states, std::size_t num_actions, const WolfPhcConfig& config);

/// Learner over the generators of a ConvexHullGlobal (or other finitely
/// generated) space; starts from uniform weights.
LearnerState make_restricted_learner(const RestrictedPolicySpace& space, const WolfPhcConfig& config);

/// One WoLF-PHC update after playing choice `a` at `s`, receiving `r`, and moving to `next`.
void wolf_phc_step(LearnerState& state, std::size_t s, std::size_t a, double r, std::size_t next);

/// Same update with a generator index in place of the action.
void restricted_wolf_phc_step(LearnerState& state, std::size_t s, std::size_t g, double r, std::size_t next);

/// Q-learning update; the policy row at `s` becomes the greedy pure strategy.
void q_learner_step(LearnerState& state, std::size_t s, std::size_t a, double r, std::size_t next);

enum class Algorithm { wolf_phc, q_learning };

struct PlayerSetup {
   Algorithm algorithm = Algorithm::wolf_phc;
   WolfPhcConfig config;
   /// When set, the player runs restricted WoLF-PHC over this space's generators.
   std::optional< RestrictedPolicySpace > space;
};

struct TrajectoryRow {
   std::uint64_t iteration = 0;
   std::size_t player = 0;
   std::string state;
   std::vector< double > choice_probs;
   std::vector< double > explicit_probs;
   double inst_reward = 0.0;
   double avg_reward = 0.0;
};

struct TrajectoryLog {
   std::vector< TrajectoryRow > rows;
   std::uint64_t checkpoint_every = 1;
   std::size_t players = 0;

   /// Rows of one player in checkpoint order.
   std::vector< TrajectoryRow > for_player(std::size_t player) const;
};

struct SelfPlayOptions {
   /// Steps per episode in multi-state games; every episode starts at the initial state.
   std::uint64_t episode_length = 100;
};

struct SelfPlayResult {
   TrajectoryLog log;
   std::vector< LearnerState > learners;
   /// Sum of rewards per player over the whole run.
   std::vector< double > total_reward;
};

/// Runs the players against each other. Identical inputs give identical logs.
SelfPlayResult self_play(
   const StochasticGame& game,
   const std::vector< PlayerSetup >& players,
   std::uint64_t iterations,
   std::uint64_t seed,
   const SelfPlayOptions& options = {});

/// Average reward of `player` over iterations (from, to], recovered from the
/// running averages at two checkpoints.
double window_average_reward(const std::vector< TrajectoryRow >& rows, std::size_t from_row, std::size_t to_row);

}  // namespace sgl
