#include "sgl/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sgl {

namespace {

std::string joint_label(const StochasticGame& game, std::size_t joint)
{
   std::ostringstream out;
   auto profile = game.joint_profile(joint);
   for(std::size_t i = 0; i < profile.size(); ++i) {
      out << (i ? "," : "") << profile[i];
   }
   return out.str();
}

/// reach[u][v] == true iff v is reachable from u (reflexive).
std::vector< std::vector< bool > > reachability(const std::vector< std::vector< bool > >& edges)
{
   const auto n = edges.size();
   std::vector< std::vector< bool > > reach(n, std::vector< bool >(n, false));
   for(std::size_t start = 0; start < n; ++start) {
      std::vector< std::size_t > stack{start};
      reach[start][start] = true;
      while(not stack.empty()) {
         auto u = stack.back();
         stack.pop_back();
         for(std::size_t v = 0; v < n; ++v) {
            if(edges[u][v] and not reach[start][v]) {
               reach[start][v] = true;
               stack.push_back(v);
            }
         }
      }
   }
   return reach;
}

std::size_t closed_class_count(const Eigen::MatrixXd& transition)
{
   const auto n = static_cast< std::size_t >(transition.rows());
   std::vector< std::vector< bool > > edges(n, std::vector< bool >(n, false));
   for(std::size_t u = 0; u < n; ++u) {
      for(std::size_t v = 0; v < n; ++v) {
         edges[u][v] = transition(Eigen::Index(u), Eigen::Index(v)) > 0.0;
      }
   }
   auto reach = reachability(edges);
   // A state is recurrent iff every state it reaches can reach it back.
   std::vector< bool > counted(n, false);
   std::size_t classes = 0;
   for(std::size_t u = 0; u < n; ++u) {
      bool recurrent = true;
      for(std::size_t v = 0; v < n; ++v) {
         if(reach[u][v] and not reach[v][u]) {
            recurrent = false;
            break;
         }
      }
      if(not recurrent or counted[u]) {
         continue;
      }
      ++classes;
      for(std::size_t v = 0; v < n; ++v) {
         if(reach[u][v]) {
            counted[v] = true;
         }
      }
   }
   return classes;
}

void require_single_state(const StochasticGame& game)
{
   if(game.num_states() != 1) {
      throw UnsupportedError("operation requires a single-state (matrix) game");
   }
}

}  // namespace

std::size_t StochasticGame::num_joint_actions() const
{
   std::size_t count = 1;
   for(const auto& a : actions) {
      count *= a.size();
   }
   return count;
}

std::size_t StochasticGame::joint_index(std::span< const std::size_t > profile) const
{
   if(profile.size() != num_players()) {
      throw DimensionError("joint action profile has the wrong number of players");
   }
   std::size_t index = 0;
   for(std::size_t i = 0; i < profile.size(); ++i) {
      if(profile[i] >= num_actions(i)) {
         throw DimensionError("action index out of range");
      }
      index = index * num_actions(i) + profile[i];
   }
   return index;
}

std::vector< std::size_t > StochasticGame::joint_profile(std::size_t joint) const
{
   std::vector< std::size_t > profile(num_players());
   for(std::size_t i = num_players(); i-- > 0;) {
      profile[i] = joint % num_actions(i);
      joint /= num_actions(i);
   }
   return profile;
}

std::optional< std::size_t > StochasticGame::state_index(const std::string& name) const
{
   auto it = std::find(states.begin(), states.end(), name);
   if(it == states.end()) {
      return std::nullopt;
   }
   return static_cast< std::size_t >(it - states.begin());
}

std::vector< std::string > validate(const StochasticGame& game)
{
   std::vector< std::string > report;
   const auto n = game.num_players();
   const auto ns = game.num_states();
   if(n == 0) {
      report.emplace_back("game has no players");
      return report;
   }
   if(ns == 0) {
      report.emplace_back("game has no states");
      return report;
   }
   for(std::size_t i = 0; i < n; ++i) {
      if(game.actions[i].empty()) {
         report.push_back("player " + std::to_string(i) + " has no actions");
      }
   }
   if(not report.empty()) {
      return report;
   }
   if(game.initial_state >= ns) {
      report.emplace_back("initial state is not a member of states");
   }
   if(auto* d = std::get_if< Discounted >(&game.formulation);
      d and not(d->gamma > 0.0 and d->gamma < 1.0)) {
      report.emplace_back("discount factor must lie in (0, 1)");
   }
   const auto nj = game.num_joint_actions();
   if(game.transition.size() != ns) {
      report.emplace_back("transition table does not cover every state");
   } else {
      for(std::size_t s = 0; s < ns; ++s) {
         const auto& t = game.transition[s];
         if(std::size_t(t.rows()) != nj or std::size_t(t.cols()) != ns) {
            report.push_back("transition at state '" + game.states[s] + "' has the wrong shape");
            continue;
         }
         for(std::size_t j = 0; j < nj; ++j) {
            auto row = t.row(Eigen::Index(j));
            if(not row.allFinite() or (row.array() < 0.0).any()
               or std::abs(row.sum() - 1.0) > kStructuralTol) {
               report.push_back(
                  "transition at state '" + game.states[s] + "', joint action (" + joint_label(game, j)
                  + ") is not a probability vector");
            }
         }
      }
   }
   if(game.rewards.size() != n) {
      report.emplace_back("reward table does not cover every player");
   } else {
      for(std::size_t i = 0; i < n; ++i) {
         if(game.rewards[i].size() != ns) {
            report.push_back("rewards of player " + std::to_string(i) + " do not cover every state");
            continue;
         }
         for(std::size_t s = 0; s < ns; ++s) {
            const auto& r = game.rewards[i][s];
            if(std::size_t(r.size()) != nj) {
               report.push_back(
                  "rewards of player " + std::to_string(i) + " at state '" + game.states[s]
                  + "' do not cover every joint action");
            } else if(not r.allFinite()) {
               report.push_back(
                  "rewards of player " + std::to_string(i) + " at state '" + game.states[s]
                  + "' are not finite");
            }
         }
      }
   }
   return report;
}

void require_valid(const StochasticGame& game)
{
   auto report = validate(game);
   if(not report.empty()) {
      throw std::invalid_argument("invalid game: " + report.front());
   }
}

std::vector< std::string > validate_policy(
   const StochasticGame& game,
   std::size_t player,
   const Policy& policy,
   double tol)
{
   std::vector< std::string > report;
   if(policy.size() != game.num_states()) {
      report.push_back("policy of player " + std::to_string(player) + " does not cover every state");
      return report;
   }
   for(std::size_t s = 0; s < policy.size(); ++s) {
      if(std::size_t(policy[s].size()) != game.num_actions(player)) {
         report.push_back("strategy at state '" + game.states[s] + "' has the wrong length");
      } else if(not is_distribution(policy[s], tol)) {
         report.push_back("strategy at state '" + game.states[s] + "' is not a probability vector");
      }
   }
   return report;
}

void require_joint_shape(const StochasticGame& game, const JointPolicy& joint)
{
   if(joint.size() != game.num_players()) {
      throw DimensionError("joint policy has the wrong number of players");
   }
   for(std::size_t i = 0; i < joint.size(); ++i) {
      auto report = validate_policy(game, i, joint[i], 1e-9);
      if(not report.empty()) {
         throw DimensionError(report.front());
      }
   }
}

Eigen::VectorXd joint_action_distribution(
   const StochasticGame& game,
   const JointPolicy& joint,
   std::size_t state)
{
   Eigen::VectorXd dist = Eigen::VectorXd::Ones(1);
   for(std::size_t i = 0; i < game.num_players(); ++i) {
      const auto& strat = joint[i][state];
      Eigen::VectorXd next(dist.size() * strat.size());
      for(Eigen::Index j = 0; j < dist.size(); ++j) {
         next.segment(j * strat.size(), strat.size()) = dist[j] * strat;
      }
      dist = std::move(next);
   }
   return dist;
}

Eigen::MatrixXd policy_transition(const StochasticGame& game, const JointPolicy& joint)
{
   const auto ns = Eigen::Index(game.num_states());
   Eigen::MatrixXd p(ns, ns);
   for(Eigen::Index s = 0; s < ns; ++s) {
      auto dist = joint_action_distribution(game, joint, std::size_t(s));
      p.row(s) = dist.transpose() * game.transition[std::size_t(s)];
   }
   return p;
}

Eigen::MatrixXd policy_rewards(const StochasticGame& game, const JointPolicy& joint)
{
   const auto ns = game.num_states();
   Eigen::MatrixXd r(static_cast< Eigen::Index >(game.num_players()), Eigen::Index(ns));
   for(std::size_t s = 0; s < ns; ++s) {
      auto dist = joint_action_distribution(game, joint, s);
      for(std::size_t i = 0; i < game.num_players(); ++i) {
         r(Eigen::Index(i), Eigen::Index(s)) = dist.dot(game.rewards[i][s]);
      }
   }
   return r;
}

Eigen::MatrixXd policy_value_discounted(const StochasticGame& game, const JointPolicy& joint)
{
   const auto* disc = std::get_if< Discounted >(&game.formulation);
   if(not disc) {
      throw FormulationError("discounted value requested for a non-discounted game");
   }
   require_joint_shape(game, joint);
   const auto ns = Eigen::Index(game.num_states());
   Eigen::MatrixXd system = Eigen::MatrixXd::Identity(ns, ns) - disc->gamma * policy_transition(game, joint);
   Eigen::MatrixXd rewards = policy_rewards(game, joint);
   Eigen::PartialPivLU< Eigen::MatrixXd > lu(system);
   return lu.solve(rewards.transpose()).transpose();
}

double bellman_residual(
   const StochasticGame& game,
   const JointPolicy& joint,
   const Eigen::MatrixXd& values)
{
   const auto& disc = std::get< Discounted >(game.formulation);
   Eigen::MatrixXd p = policy_transition(game, joint);
   Eigen::MatrixXd r = policy_rewards(game, joint);
   Eigen::MatrixXd backup = r + disc.gamma * values * p.transpose();
   return (values - backup).cwiseAbs().maxCoeff();
}

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& transition)
{
   if(closed_class_count(transition) != 1) {
      throw ErgodicityError("chain has more than one closed class under this policy");
   }
   const auto n = transition.rows();
   Eigen::MatrixXd system(n + 1, n);
   system.topRows(n) = transition.transpose() - Eigen::MatrixXd::Identity(n, n);
   system.row(n).setOnes();
   Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
   rhs[n] = 1.0;
   Eigen::VectorXd d = system.colPivHouseholderQr().solve(rhs);
   return d.cwiseMax(0.0) / d.cwiseMax(0.0).sum();
}

Eigen::VectorXd policy_value_average(const StochasticGame& game, const JointPolicy& joint)
{
   if(not std::holds_alternative< Average >(game.formulation)) {
      throw FormulationError("average value requested for a non-average game");
   }
   require_joint_shape(game, joint);
   if(not check_ergodic(game)) {
      throw ErgodicityError("game fails the ergodicity check");
   }
   Eigen::VectorXd d = stationary_distribution(policy_transition(game, joint));
   return policy_rewards(game, joint) * d;
}

Eigen::VectorXd player_values(const StochasticGame& game, const JointPolicy& joint)
{
   if(is_discounted(game.formulation)) {
      return policy_value_discounted(game, joint).col(Eigen::Index(game.initial_state));
   }
   return policy_value_average(game, joint);
}

bool check_ergodic(const StochasticGame& game)
{
   const auto ns = game.num_states();
   std::vector< std::vector< bool > > edges(ns, std::vector< bool >(ns, false));
   for(std::size_t s = 0; s < ns; ++s) {
      const auto& t = game.transition[s];
      for(Eigen::Index j = 0; j < t.rows(); ++j) {
         for(std::size_t v = 0; v < ns; ++v) {
            if(t(j, Eigen::Index(v)) > 0.0) {
               edges[s][v] = true;
            }
         }
      }
   }
   auto reach = reachability(edges);
   for(std::size_t u = 0; u < ns; ++u) {
      for(std::size_t v = 0; v < ns; ++v) {
         if(not reach[u][v]) {
            return false;
         }
      }
   }
   return true;
}

Eigen::VectorXd matrix_value(const StochasticGame& game, const JointPolicy& joint)
{
   require_single_state(game);
   require_joint_shape(game, joint);
   auto dist = joint_action_distribution(game, joint, 0);
   Eigen::VectorXd v(static_cast< Eigen::Index >(game.num_players()));
   for(std::size_t i = 0; i < game.num_players(); ++i) {
      v[Eigen::Index(i)] = dist.dot(game.rewards[i][0]);
   }
   if(const auto* disc = std::get_if< Discounted >(&game.formulation)) {
      v /= (1.0 - disc->gamma);
   }
   return v;
}

StochasticGame InducedMDP::as_game() const
{
   StochasticGame game;
   for(std::size_t s = 0; s < num_states; ++s) {
      game.states.push_back("s" + std::to_string(s));
   }
   game.actions.emplace_back();
   for(std::size_t a = 0; a < num_actions; ++a) {
      game.actions[0].push_back("a" + std::to_string(a));
   }
   game.transition = transition;
   game.rewards = {reward};
   game.initial_state = initial_state;
   game.formulation = formulation;
   return game;
}

std::vector< Policy > others_of(const JointPolicy& joint, std::size_t player)
{
   std::vector< Policy > others;
   for(std::size_t j = 0; j < joint.size(); ++j) {
      if(j != player) {
         others.push_back(joint[j]);
      }
   }
   return others;
}

JointPolicy with_player(std::span< const Policy > others, std::size_t player, Policy own)
{
   JointPolicy joint(others.begin(), others.end());
   joint.insert(joint.begin() + std::ptrdiff_t(player), std::move(own));
   return joint;
}

InducedMDP induce_mdp(
   const StochasticGame& game,
   std::size_t player,
   std::span< const Policy > others)
{
   if(player >= game.num_players() or others.size() + 1 != game.num_players()) {
      throw DimensionError("induce_mdp needs the policies of every other player");
   }
   const auto ns = game.num_states();
   const auto na = game.num_actions(player);
   for(std::size_t j = 0, k = 0; j < game.num_players(); ++j) {
      if(j == player) {
         continue;
      }
      auto report = validate_policy(game, j, others[k++], 1e-9);
      if(not report.empty()) {
         throw DimensionError(report.front());
      }
   }

   InducedMDP mdp;
   mdp.player = player;
   mdp.num_states = ns;
   mdp.num_actions = na;
   mdp.initial_state = game.initial_state;
   mdp.formulation = game.formulation;
   // Fill the player's own slot with each pure action in turn.
   for(std::size_t s = 0; s < ns; ++s) {
      Eigen::MatrixXd t(static_cast< Eigen::Index >(na), Eigen::Index(ns));
      Eigen::VectorXd r(static_cast< Eigen::Index >(na));
      for(std::size_t a = 0; a < na; ++a) {
         JointPolicy joint;
         for(std::size_t j = 0, k = 0; j < game.num_players(); ++j) {
            if(j == player) {
               joint.push_back(Policy(ns, pure_strategy(na, a)));
            } else {
               joint.push_back(others[k++]);
            }
         }
         auto dist = joint_action_distribution(game, joint, s);
         t.row(Eigen::Index(a)) = dist.transpose() * game.transition[s];
         r[Eigen::Index(a)] = dist.dot(game.rewards[player][s]);
      }
      mdp.transition.push_back(std::move(t));
      mdp.reward.push_back(std::move(r));
   }
   return mdp;
}

Eigen::MatrixXd mdp_policy_transition(const InducedMDP& mdp, const Policy& policy)
{
   const auto ns = Eigen::Index(mdp.num_states);
   Eigen::MatrixXd p(ns, ns);
   for(Eigen::Index s = 0; s < ns; ++s) {
      p.row(s) = policy[std::size_t(s)].transpose() * mdp.transition[std::size_t(s)];
   }
   return p;
}

Eigen::VectorXd mdp_policy_reward(const InducedMDP& mdp, const Policy& policy)
{
   Eigen::VectorXd r(static_cast< Eigen::Index >(mdp.num_states));
   for(std::size_t s = 0; s < mdp.num_states; ++s) {
      r[Eigen::Index(s)] = policy[s].dot(mdp.reward[s]);
   }
   return r;
}

Eigen::VectorXd mdp_policy_value(const InducedMDP& mdp, const Policy& policy)
{
   if(policy.size() != mdp.num_states) {
      throw DimensionError("policy does not cover every MDP state");
   }
   Eigen::MatrixXd p = mdp_policy_transition(mdp, policy);
   Eigen::VectorXd r = mdp_policy_reward(mdp, policy);
   const auto ns = p.rows();
   if(const auto* disc = std::get_if< Discounted >(&mdp.formulation)) {
      Eigen::MatrixXd system = Eigen::MatrixXd::Identity(ns, ns) - disc->gamma * p;
      return system.partialPivLu().solve(r);
   }
   double gain = stationary_distribution(p).dot(r);
   return Eigen::VectorXd::Constant(ns, gain);
}

Strategy uniform_strategy(std::size_t actions)
{
   return Strategy::Constant(Eigen::Index(actions), 1.0 / double(actions));
}

Strategy pure_strategy(std::size_t actions, std::size_t action)
{
   Strategy s = Strategy::Zero(Eigen::Index(actions));
   s[Eigen::Index(action)] = 1.0;
   return s;
}

Policy uniform_policy(const StochasticGame& game, std::size_t player)
{
   return Policy(game.num_states(), uniform_strategy(game.num_actions(player)));
}

Policy pure_policy(const StochasticGame& game, std::size_t player, std::span< const std::size_t > choice)
{
   Policy p;
   for(std::size_t s = 0; s < game.num_states(); ++s) {
      p.push_back(pure_strategy(game.num_actions(player), choice[s]));
   }
   return p;
}

JointPolicy uniform_joint(const StochasticGame& game)
{
   JointPolicy joint;
   for(std::size_t i = 0; i < game.num_players(); ++i) {
      joint.push_back(uniform_policy(game, i));
   }
   return joint;
}

bool is_distribution(const Eigen::VectorXd& v, double tol)
{
   return v.size() > 0 and v.allFinite() and v.minCoeff() >= -tol and std::abs(v.sum() - 1.0) <= tol;
}

double max_abs_diff(const Policy& a, const Policy& b)
{
   if(a.size() != b.size()) {
      throw DimensionError("policies cover different numbers of states");
   }
   double diff = 0.0;
   for(std::size_t s = 0; s < a.size(); ++s) {
      if(a[s].size() != b[s].size()) {
         throw DimensionError("strategies have different lengths");
      }
      diff = std::max(diff, (a[s] - b[s]).cwiseAbs().maxCoeff());
   }
   return diff;
}

}  // namespace sgl
