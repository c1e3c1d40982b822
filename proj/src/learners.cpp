#include "sgl/learners.hpp"

#include <algorithm>
#include <stdexcept>

namespace sgl {

namespace {

void check_schedule(const Schedule& s, const char* name)
{
   if(not(s.numerator > 0.0 and s.offset > 0.0 and s.divisor > 0.0)) {
      throw std::invalid_argument(std::string(name) + " schedule needs positive constants");
   }
   if(s(0) > 1.0) {
      throw std::invalid_argument(std::string(name) + " schedule starts above 1");
   }
}

std::size_t greedy(const Eigen::VectorXd& q)
{
   Eigen::Index best = 0;
   for(Eigen::Index k = 1; k < q.size(); ++k) {
      if(q[k] > q[best]) {
         best = k;
      }
   }
   return std::size_t(best);
}

void td_update(LearnerState& st, std::size_t s, std::size_t a, double r, std::size_t next)
{
   if(s >= st.q.size() or next >= st.q.size()) {
      throw std::out_of_range("state index out of range");
   }
   if(a >= st.num_choices()) {
      throw std::out_of_range("action index out of range");
   }
   const double alpha = st.config.alpha(st.steps);
   double& qsa = st.q[s][Eigen::Index(a)];
   qsa = (1.0 - alpha) * qsa + alpha * (r + st.config.gamma * st.q[next].maxCoeff());
}

void hill_climb(LearnerState& st, std::size_t s)
{
   const auto row = st.policy_row(s);
   ++st.counts[row];
   Strategy& pi = st.policy[row];
   Strategy& avg = st.avg_policy[row];
   avg += (pi - avg) / double(st.counts[row]);

   const auto& q = st.q[s];
   const bool winning = pi.dot(q) > avg.dot(q);
   const double delta = winning ? st.config.delta_win(st.steps) : st.config.delta_lose(st.steps);
   st.last_delta = delta;
   st.last_was_lose = not winning;

   const auto n = pi.size();
   if(n > 1) {
      const auto best = Eigen::Index(greedy(q));
      for(Eigen::Index k = 0; k < n; ++k) {
         pi[k] += k == best ? delta : -delta / double(n - 1);
      }
      pi = pi.cwiseMax(0.0).cwiseMin(1.0);
      pi /= pi.sum();
   }
   ++st.steps;
}

}  // namespace

void WolfPhcConfig::validate() const
{
   check_schedule(alpha, "alpha");
   check_schedule(delta_win, "delta_win");
   check_schedule(explore, "explore");
   if(not(delta_lose_ratio > 1.0) or delta_lose(0) > 1.0) {
      throw std::invalid_argument("delta_lose must exceed delta_win and stay within (0, 1]");
   }
   if(not(gamma >= 0.0 and gamma < 1.0)) {
      throw std::invalid_argument("gamma must lie in [0, 1)");
   }
}

Policy LearnerState::explicit_policy() const
{
   if(not restricted()) {
      return policy;
   }
   return mix_policies(generators, policy.front());
}

std::vector< TrajectoryRow > TrajectoryLog::for_player(std::size_t player) const
{
   std::vector< TrajectoryRow > out;
   for(const auto& row : rows) {
      if(row.player == player) {
         out.push_back(row);
      }
   }
   return out;
}

LearnerState make_learner(std::size_t num_states, std::size_t num_actions, const WolfPhcConfig& config)
{
   config.validate();
   if(num_states == 0 or num_actions == 0) {
      throw DimensionError("learner needs at least one state and one action");
   }
   LearnerState st;
   st.config = config;
   st.q.assign(num_states, Eigen::VectorXd::Zero(Eigen::Index(num_actions)));
   st.policy = Policy(num_states, uniform_strategy(num_actions));
   st.avg_policy = st.policy;
   st.counts.assign(num_states, 0);
   return st;
}

LearnerState make_restricted_learner(const RestrictedPolicySpace& space, const WolfPhcConfig& config)
{
   auto generators = space.global_generators();
   auto st = make_learner(space.num_states(), generators.size(), config);
   st.generators = std::move(generators);
   st.policy = Policy{uniform_strategy(st.generators.size())};
   st.avg_policy = st.policy;
   st.counts.assign(1, 0);
   return st;
}

void wolf_phc_step(LearnerState& state, std::size_t s, std::size_t a, double r, std::size_t next)
{
   td_update(state, s, a, r, next);
   hill_climb(state, s);
}

void restricted_wolf_phc_step(LearnerState& state, std::size_t s, std::size_t g, double r, std::size_t next)
{
   if(not state.restricted()) {
      throw std::invalid_argument("learner has no generators");
   }
   td_update(state, s, g, r, next);
   hill_climb(state, s);
}

void q_learner_step(LearnerState& state, std::size_t s, std::size_t a, double r, std::size_t next)
{
   td_update(state, s, a, r, next);
   const auto row = state.policy_row(s);
   ++state.counts[row];
   Strategy& pi = state.policy[row];
   pi = pure_strategy(std::size_t(pi.size()), greedy(state.q[s]));
   state.avg_policy[row] += (pi - state.avg_policy[row]) / double(state.counts[row]);
   ++state.steps;
}

SelfPlayResult self_play(
   const StochasticGame& game,
   const std::vector< PlayerSetup >& players,
   std::uint64_t iterations,
   std::uint64_t seed,
   const SelfPlayOptions& options)
{
   require_valid(game);
   const auto n = game.num_players();
   if(players.size() != n) {
      throw DimensionError("need one learner setup per player");
   }
   SelfPlayResult result;
   std::vector< std::mt19937_64 > rngs;
   for(std::size_t i = 0; i < n; ++i) {
      const auto& p = players[i];
      if(p.space) {
         if(p.algorithm != Algorithm::wolf_phc) {
            throw UnsupportedError("restricted play is only defined for WoLF-PHC");
         }
         if(p.space->num_states() != game.num_states() or p.space->num_actions() != game.num_actions(i)) {
            throw DimensionError("restricted space does not match the player's policy shape");
         }
         result.learners.push_back(make_restricted_learner(*p.space, p.config));
      } else {
         result.learners.push_back(make_learner(game.num_states(), game.num_actions(i), p.config));
      }
      std::seed_seq seq{seed, std::uint64_t(i)};
      rngs.emplace_back(seq);
   }
   std::seed_seq env_seq{seed, std::uint64_t(n)};
   std::mt19937_64 env(env_seq);
   std::uniform_real_distribution< double > unit(0.0, 1.0);

   auto draw = [&](std::mt19937_64& rng, const Strategy& p) {
      double u = unit(rng);
      double acc = 0.0;
      for(Eigen::Index k = 0; k < p.size(); ++k) {
         acc += p[k];
         if(u < acc) {
            return std::size_t(k);
         }
      }
      // Rounding left u above the cumulative sum; take the last supported entry.
      Eigen::Index last = p.size() - 1;
      while(last > 0 and p[last] <= 0.0) {
         --last;
      }
      return std::size_t(last);
   };

   const std::uint64_t every = std::max< std::uint64_t >(1, iterations / 2000);
   result.log.checkpoint_every = every;
   result.log.players = n;
   result.total_reward.assign(n, 0.0);

   std::size_t s = game.initial_state;
   std::vector< std::size_t > choice(n);
   std::vector< std::size_t > action(n);
   for(std::uint64_t t = 1; t <= iterations; ++t) {
      for(std::size_t i = 0; i < n; ++i) {
         auto& st = result.learners[i];
         const Strategy& row = st.policy[st.policy_row(s)];
         const double eps = st.config.explore(st.steps);
         if(unit(rngs[i]) < eps) {
            choice[i] = std::min(st.num_choices() - 1, std::size_t(unit(rngs[i]) * double(st.num_choices())));
         } else {
            choice[i] = draw(rngs[i], row);
         }
         action[i] = st.restricted() ? draw(rngs[i], st.generators[choice[i]][s]) : choice[i];
      }
      const auto joint = game.joint_index(action);
      std::size_t next = draw(env, game.transition[s].row(Eigen::Index(joint)).transpose());
      for(std::size_t i = 0; i < n; ++i) {
         const double r = game.rewards[i][s][Eigen::Index(joint)];
         result.total_reward[i] += r;
         auto& st = result.learners[i];
         switch(players[i].algorithm) {
            case Algorithm::wolf_phc:
               if(st.restricted()) {
                  restricted_wolf_phc_step(st, s, choice[i], r, next);
               } else {
                  wolf_phc_step(st, s, choice[i], r, next);
               }
               break;
            case Algorithm::q_learning:
               q_learner_step(st, s, choice[i], r, next);
               break;
         }
      }
      if(t % every == 0) {
         for(std::size_t i = 0; i < n; ++i) {
            const auto& st = result.learners[i];
            TrajectoryRow row;
            row.iteration = t;
            row.player = i;
            row.state = game.states[s];
            const Strategy& w = st.policy[st.policy_row(s)];
            row.choice_probs.assign(w.data(), w.data() + w.size());
            const Strategy e = st.explicit_policy()[s];
            row.explicit_probs.assign(e.data(), e.data() + e.size());
            row.inst_reward = game.rewards[i][s][Eigen::Index(joint)];
            row.avg_reward = result.total_reward[i] / double(t);
            result.log.rows.push_back(std::move(row));
         }
      }
      s = (game.num_states() > 1 and t % options.episode_length == 0) ? game.initial_state : next;
   }
   return result;
}

double window_average_reward(const std::vector< TrajectoryRow >& rows, std::size_t from_row, std::size_t to_row)
{
   if(from_row >= to_row or to_row >= rows.size()) {
      throw std::out_of_range("invalid checkpoint window");
   }
   const auto& a = rows[from_row];
   const auto& b = rows[to_row];
   const double total = b.avg_reward * double(b.iteration) - a.avg_reward * double(a.iteration);
   return total / double(b.iteration - a.iteration);
}

}  // namespace sgl
