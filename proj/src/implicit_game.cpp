#include "sgl/implicit_game.hpp"

#include <cmath>
#include <stdexcept>

namespace sgl {

namespace {

/// Distribution over explicit joint actions when each player i draws its
/// explicit action from tau[i][s].row(implicit[i]).
Eigen::VectorXd explicit_joint_distribution(
   const TauMapping& tau,
   std::size_t state,
   const std::vector< std::size_t >& implicit_profile)
{
   Eigen::VectorXd dist = Eigen::VectorXd::Ones(1);
   for(std::size_t i = 0; i < implicit_profile.size(); ++i) {
      Eigen::VectorXd row = tau.per_player[i][state].row(Eigen::Index(implicit_profile[i])).transpose();
      Eigen::VectorXd next(dist.size() * row.size());
      for(Eigen::Index j = 0; j < dist.size(); ++j) {
         next.segment(j * row.size(), row.size()) = dist[j] * row;
      }
      dist = std::move(next);
   }
   return dist;
}

}  // namespace

std::vector< std::string > validate_tau(const StochasticGame& explicit_game, const TauMapping& tau)
{
   std::vector< std::string > report;
   if(tau.per_player.size() != explicit_game.num_players()) {
      report.emplace_back("tau mapping does not cover every player");
      return report;
   }
   for(std::size_t i = 0; i < tau.per_player.size(); ++i) {
      const auto& rows = tau.per_player[i];
      if(rows.size() != explicit_game.num_states()) {
         report.push_back("tau of player " + std::to_string(i) + " does not cover every state");
         continue;
      }
      for(std::size_t s = 0; s < rows.size(); ++s) {
         const auto& m = rows[s];
         if(std::size_t(m.cols()) != explicit_game.num_actions(i) or m.rows() == 0
            or m.rows() != rows.front().rows()) {
            report.push_back("tau of player " + std::to_string(i) + " has the wrong shape at a state");
            continue;
         }
         for(Eigen::Index k = 0; k < m.rows(); ++k) {
            if(not is_distribution(m.row(k).transpose(), kStructuralTol)) {
               report.push_back(
                  "tau row of player " + std::to_string(i) + " at state '" + explicit_game.states[s]
                  + "', implicit action " + std::to_string(k) + " does not sum to one");
            }
         }
      }
   }
   return report;
}

TauMapping identity_tau(const StochasticGame& game)
{
   TauMapping tau;
   for(std::size_t i = 0; i < game.num_players(); ++i) {
      const auto n = Eigen::Index(game.num_actions(i));
      tau.per_player.emplace_back(game.num_states(), Eigen::MatrixXd::Identity(n, n));
   }
   return tau;
}

ImplicitGame build_implicit(
   const StochasticGame& explicit_game,
   TauMapping tau,
   std::optional< RewardTable > reward_override)
{
   require_valid(explicit_game);
   auto report = validate_tau(explicit_game, tau);
   if(not report.empty()) {
      throw std::invalid_argument("invalid tau mapping: " + report.front());
   }
   const auto n = explicit_game.num_players();
   const auto ns = explicit_game.num_states();

   StochasticGame game;
   game.states = explicit_game.states;
   game.initial_state = explicit_game.initial_state;
   game.formulation = explicit_game.formulation;
   for(std::size_t i = 0; i < n; ++i) {
      const auto count = std::size_t(tau.per_player[i].front().rows());
      const bool same = count == explicit_game.num_actions(i)
                        and tau.per_player[i].front().isIdentity(kStructuralTol);
      std::vector< std::string > names;
      for(std::size_t k = 0; k < count; ++k) {
         names.push_back(same ? explicit_game.actions[i][k] : "g" + std::to_string(k));
      }
      game.actions.push_back(std::move(names));
   }
   const auto nj = game.num_joint_actions();

   game.transition.assign(ns, Eigen::MatrixXd());
   game.rewards.assign(n, std::vector< Eigen::VectorXd >(ns));
   for(std::size_t s = 0; s < ns; ++s) {
      Eigen::MatrixXd t(static_cast< Eigen::Index >(nj), Eigen::Index(ns));
      std::vector< Eigen::VectorXd > r(n, Eigen::VectorXd(Eigen::Index(nj)));
      for(std::size_t j = 0; j < nj; ++j) {
         auto dist = explicit_joint_distribution(tau, s, game.joint_profile(j));
         t.row(Eigen::Index(j)) = dist.transpose() * explicit_game.transition[s];
         for(std::size_t i = 0; i < n; ++i) {
            r[i][Eigen::Index(j)] = dist.dot(explicit_game.rewards[i][s]);
         }
      }
      game.transition[s] = std::move(t);
      for(std::size_t i = 0; i < n; ++i) {
         game.rewards[i][s] = std::move(r[i]);
      }
   }
   if(reward_override) {
      if(reward_override->size() != n) {
         throw std::invalid_argument("reward override does not cover every player");
      }
      for(std::size_t i = 0; i < n; ++i) {
         if((*reward_override)[i].size() != ns) {
            throw std::invalid_argument("reward override does not cover every state");
         }
         for(std::size_t s = 0; s < ns; ++s) {
            if(std::size_t((*reward_override)[i][s].size()) != nj) {
               throw std::invalid_argument("reward override does not cover every implicit joint action");
            }
         }
      }
      game.rewards = std::move(*reward_override);
   }
   require_valid(game);
   return ImplicitGame{std::move(game), std::move(tau), explicit_game};
}

ImplicitGame broken_actuator(
   const StochasticGame& explicit_game,
   std::size_t player,
   std::size_t broken_action,
   std::size_t null_action)
{
   if(player >= explicit_game.num_players() or broken_action >= explicit_game.num_actions(player)
      or null_action >= explicit_game.num_actions(player)) {
      throw std::out_of_range("broken_actuator: player or action out of range");
   }
   auto tau = identity_tau(explicit_game);
   for(auto& m : tau.per_player[player]) {
      m.row(Eigen::Index(broken_action)).setZero();
      m(Eigen::Index(broken_action), Eigen::Index(null_action)) = 1.0;
   }
   auto ig = build_implicit(explicit_game, std::move(tau));
   ig.game.actions[player] = explicit_game.actions[player];
   return ig;
}

ImplicitGame epsilon_exploration(const StochasticGame& explicit_game, const std::vector< double >& eps)
{
   if(eps.size() != explicit_game.num_players()) {
      throw std::invalid_argument("epsilon_exploration needs one epsilon per player");
   }
   TauMapping tau;
   for(std::size_t i = 0; i < eps.size(); ++i) {
      if(not(eps[i] >= 0.0 and eps[i] < 1.0)) {
         throw std::out_of_range("exploration rate must lie in [0, 1)");
      }
      const auto n = Eigen::Index(explicit_game.num_actions(i));
      Eigen::MatrixXd m = (1.0 - eps[i]) * Eigen::MatrixXd::Identity(n, n)
                          + Eigen::MatrixXd::Constant(n, n, eps[i] / double(n));
      tau.per_player.emplace_back(explicit_game.num_states(), m);
   }
   auto ig = build_implicit(explicit_game, std::move(tau));
   ig.game.actions = explicit_game.actions;
   return ig;
}

JointPolicy map_policy(const ImplicitGame& ig, const JointPolicy& implicit_joint)
{
   require_joint_shape(ig.game, implicit_joint);
   JointPolicy out;
   for(std::size_t i = 0; i < implicit_joint.size(); ++i) {
      Policy p;
      for(std::size_t s = 0; s < implicit_joint[i].size(); ++s) {
         p.push_back(ig.tau.per_player[i][s].transpose() * implicit_joint[i][s]);
      }
      out.push_back(std::move(p));
   }
   return out;
}

double implicit_transition_error(const ImplicitGame& ig)
{
   double err = 0.0;
   for(std::size_t s = 0; s < ig.game.num_states(); ++s) {
      for(std::size_t j = 0; j < ig.game.num_joint_actions(); ++j) {
         auto dist = explicit_joint_distribution(ig.tau, s, ig.game.joint_profile(j));
         Eigen::RowVectorXd expected = dist.transpose() * ig.explicit_game.transition[s];
         err = std::max(err, (ig.game.transition[s].row(Eigen::Index(j)) - expected).cwiseAbs().maxCoeff());
      }
   }
   return err;
}

std::vector< Eigen::MatrixXd > generator_tau(const RestrictedPolicySpace& space)
{
   auto gens = space.global_generators();
   std::vector< Eigen::MatrixXd > rows;
   for(std::size_t s = 0; s < space.num_states(); ++s) {
      Eigen::MatrixXd m(static_cast< Eigen::Index >(gens.size()), Eigen::Index(space.num_actions()));
      for(std::size_t k = 0; k < gens.size(); ++k) {
         m.row(Eigen::Index(k)) = gens[k][s].transpose();
      }
      rows.push_back(std::move(m));
   }
   return rows;
}

ImplicitGame implicit_from_spaces(
   const StochasticGame& explicit_game,
   const std::vector< RestrictedPolicySpace >& spaces)
{
   if(spaces.size() != explicit_game.num_players()) {
      throw std::invalid_argument("need one space per player");
   }
   TauMapping tau;
   for(const auto& space : spaces) {
      tau.per_player.push_back(generator_tau(space));
   }
   return build_implicit(explicit_game, std::move(tau));
}

}  // namespace sgl
