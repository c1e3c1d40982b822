// Acceptance gate: runs AC1-AC10 and prints one PASS/FAIL line per criterion.

#include "sgl/builders.hpp"
#include "sgl/experiments.hpp"
#include "sgl/implicit_game.hpp"
#include "sgl/solvers.hpp"
#include "support/oracles.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace sgl;

namespace {

constexpr std::uint64_t kSeeds = 10;
constexpr std::uint64_t kIterations = 1000000;

/// Collects failure reasons for one criterion.
struct Report {
   std::vector< std::string > failures;
   std::vector< std::string > notes;

   void require(bool ok, const std::string& what)
   {
      if(not ok) {
         failures.push_back(what);
      }
   }
   void note(const std::string& what) { notes.push_back(what); }
};

std::string fmt(double x)
{
   std::ostringstream ss;
   ss.precision(12);
   ss << x;
   return ss.str();
}

Strategy vec(std::initializer_list< double > xs)
{
   Strategy s(static_cast< Eigen::Index >(xs.size()));
   Eigen::Index k = 0;
   for(double x : xs) {
      s[k++] = x;
   }
   return s;
}

double dist(const Strategy& a, const Strategy& b)
{
   return (a - b).cwiseAbs().maxCoeff();
}

double l1(const Strategy& a, const Strategy& b)
{
   return (a - b).cwiseAbs().sum();
}

nlohmann::json fixture()
{
   std::ifstream in(std::string(SGL_FIXTURE_DIR) + "/restricted_oracle.json");
   return nlohmann::json::parse(in);
}

Strategy from_json(const nlohmann::json& xs)
{
   auto v = xs.get< std::vector< double > >();
   return Eigen::Map< Strategy >(v.data(), static_cast< Eigen::Index >(v.size()));
}

void ac1(Report& r)
{
   auto mm = minimax_zero_sum_matrix(rps());
   r.require(std::abs(mm.value) <= 1e-9, "RPS value " + fmt(mm.value));
   r.require(dist(mm.row, uniform_strategy(3)) <= 1e-9, "RPS row not uniform");
   r.require(dist(mm.col, uniform_strategy(3)) <= 1e-9, "RPS column not uniform");
   auto blotto = minimax_zero_sum_matrix(blotto_4_3());
   r.require(std::abs(blotto.value - 14.0 / 9.0) <= 1e-9, "Blotto value " + fmt(blotto.value));
   r.note("blotto value " + fmt(blotto.value));
}

void ac2(Report& r)
{
   auto se = support_enumeration_bimatrix(bach_stravinsky());
   r.require(se.equilibria.size() == 3, "found " + std::to_string(se.equilibria.size()) + " equilibria");
   int pure = 0;
   int mixed = 0;
   for(const auto& e : se.equilibria) {
      if(e.row.maxCoeff() == 1.0 and e.col.maxCoeff() == 1.0) {
         ++pure;
      } else {
         ++mixed;
         // Each player puts 2/3 on its own preferred action (row: Bach, column: Stravinsky).
         r.require(std::abs(e.row[0] - 2.0 / 3.0) <= 1e-9, "mixed row " + fmt(e.row[0]));
         r.require(std::abs(e.col[1] - 2.0 / 3.0) <= 1e-9, "mixed column " + fmt(e.col[1]));
      }
   }
   r.require(pure == 2 and mixed == 1, "expected two pure and one mixed");
}

void ac3(Report& r)
{
   auto game = rps();
   std::vector< RestrictedPolicySpace > spaces{RestrictedPolicySpace::full(1, 3), rps_column_hull()};
   auto eq = restricted_equilibrium_via_implicit(game, spaces);
   r.require(dist(eq.explicit_joint[0][0], vec({0.0, 1.0 / 3, 2.0 / 3})) <= 1e-9, "row strategy");
   r.require(dist(eq.explicit_joint[1][0], vec({1.0 / 3, 0.5, 1.0 / 6})) <= 1e-9, "column strategy");
   r.require(std::abs(eq.value - 1.0 / 6.0) <= 1e-9, "value " + fmt(eq.value));
   auto cert = check_equilibrium(game, eq.explicit_joint, spaces, 1e-8);
   r.require(cert.verdict, "certificate max gap " + fmt(cert.max_gap()));
   const auto ref = fixture()["rps_restricted"];
   r.require(dist(eq.explicit_joint[0][0], from_json(ref["row"])) <= 1e-9, "row differs from LP oracle");
   r.note("value " + fmt(eq.value));
}

void ac4(Report& r)
{
   const auto ref = fixture()["blotto_restricted_independent_uniform"];
   auto eq = restricted_equilibrium_via_implicit(blotto_4_3(), {blotto_row_hull(), RestrictedPolicySpace::full(1, 4)});
   r.require(std::abs(eq.value) <= 1e-9, "value " + fmt(eq.value));
   r.require(std::abs(eq.value - ref["value"].get< double >()) <= 1e-9, "differs from LP oracle");
   r.require(eq.certificate.verdict, "certificate failed");
   r.note("value " + fmt(eq.value));
}

void ac5(Report& r)
{
   auto certs = enumerate_deterministic(rps(), 0.5);
   r.require(certs.size() == 9, "expected 9 pure profiles");
   double min_gap = INFINITY;
   for(const auto& c : certs) {
      r.require(not c.verdict, "a pure profile passed");
      min_gap = std::min(min_gap, c.max_gap());
   }
   r.require(std::abs(min_gap - 1.0) <= 1e-9, "min gap " + fmt(min_gap));
}

void ac6(Report& r)
{
   auto game = fact5_game();
   auto su = RestrictedPolicySpace::state_uniform(3, 2);
   std::vector< RestrictedPolicySpace > spaces{su, su};
   for(std::size_t a = 0; a < 2; ++a) {
      for(std::size_t b = 0; b < 2; ++b) {
         JointPolicy joint{Policy(3, pure_strategy(2, a)), Policy(3, pure_strategy(2, b))};
         auto cert = check_equilibrium(game, joint, spaces, 1e-6);
         r.require(not cert.verdict, "pure profile (" + game.actions[0][a] + "," + game.actions[1][b] + ") passed");
      }
   }
   auto br = [&](double u) {
      std::vector< Policy > others{Policy(3, vec({u, 1.0 - u}))};
      return restricted_best_response(game, 1, others, su);
   };
   for(double u : {0.1, 0.3, 0.49}) {
      auto res = br(u);
      r.require(res.optimal_set.size() == 1 and dist(res.policy[0], pure_strategy(2, 0)) <= 1e-12, "u<1/2 not unique L");
   }
   for(double u : {0.51, 0.7, 0.9}) {
      auto res = br(u);
      r.require(res.optimal_set.size() == 1 and dist(res.policy[0], pure_strategy(2, 1)) <= 1e-12, "u>1/2 not unique R");
   }
   auto tie = br(0.5);
   bool both_pure = tie.optimal_set.size() == 2;
   for(const auto& p : tie.optimal_set) {
      both_pure = both_pure and std::abs(p[0].maxCoeff() - 1.0) <= 1e-12;
   }
   r.require(both_pure, "u=1/2 optimal set is not exactly the two pure policies");
   std::vector< Policy > half{Policy(3, vec({0.5, 0.5}))};
   r.require(not best_response_convexity_test(game, 1, half, su, 200, 7), "u=1/2 mixtures stayed optimal");

   auto sweep = sweep_existence(game, spaces, 0.005, 1e-6);
   r.require(sweep.min_max_gap > 0.0, "sweep minimum " + fmt(sweep.min_max_gap));
   r.note(
      "sweep min max-gap " + fmt(sweep.min_max_gap) + ", refinement bound " + fmt(sweep.refinement_bound) + ", margin " +
      fmt(sweep.margin));
}

void ac7(Report& r)
{
   double worst = 0.0;
   for(std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
      auto run = run_learning_experiment("rps", seed, kIterations);
      for(std::size_t i = 0; i < 2; ++i) {
         const double d = l1(tail_mean_policy(run.log.for_player(i), 0.1), uniform_strategy(3));
         worst = std::max(worst, d);
         r.require(d <= 0.1, "seed " + std::to_string(seed) + " player " + std::to_string(i) + " L1 " + fmt(d));
      }
   }
   r.note("worst L1 to uniform " + fmt(worst));
}

void ac8(Report& r)
{
   double lo = INFINITY;
   double hi = -INFINITY;
   double wlo = INFINITY;
   double whi = -INFINITY;
   for(std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
      auto run = run_learning_experiment("rps-restricted", seed, kIterations);
      const double reward = tail_average_reward(run.log.for_player(0), 0.1);
      const double weight = tail_mean_policy(run.log.for_player(1), 0.1, false)[0];
      lo = std::min(lo, reward);
      hi = std::max(hi, reward);
      wlo = std::min(wlo, weight);
      whi = std::max(whi, weight);
      r.require(std::abs(reward - 1.0 / 6.0) <= 0.03, "seed " + std::to_string(seed) + " reward " + fmt(reward));
      r.require(std::abs(weight - 2.0 / 3.0) <= 0.1, "seed " + std::to_string(seed) + " weight " + fmt(weight));
   }
   r.note("row reward in [" + fmt(lo) + ", " + fmt(hi) + "], weight on first generator in [" + fmt(wlo) + ", " + fmt(whi) + "]");
}

void ac9(Report& r)
{
   int faster = 0;
   double worst = 0.0;
   for(std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
      auto restricted = run_learning_experiment("blotto-restricted", seed, kIterations);
      const double reward = tail_average_reward(restricted.log.for_player(1), 0.1);
      worst = std::max(worst, std::abs(reward));
      r.require(std::abs(reward) <= 0.05, "seed " + std::to_string(seed) + " column reward " + fmt(reward));
      auto plain = run_learning_experiment("blotto", seed, kIterations);
      auto sr = stabilization_iteration(restricted.log);
      auto su = stabilization_iteration(plain.log);
      // A run that never settles counts as slower than any run that does.
      if(sr and (not su or *sr < *su)) {
         ++faster;
      }
   }
   r.require(faster >= 8, "restricted stabilized first in only " + std::to_string(faster) + " of 10 seeds");
   r.note("worst |column reward| " + fmt(worst) + ", restricted faster in " + std::to_string(faster) + "/10 seeds");
}

// AC10 property suites.

void flatten_own_rewards(StochasticGame& g, std::size_t player)
{
   for(std::size_t s = 0; s < g.num_states(); ++s) {
      for(std::size_t j = 0; j < g.num_joint_actions(); ++j) {
         auto profile = g.joint_profile(j);
         profile[player] = 0;
         g.rewards[player][s][long(j)] = g.rewards[player][s][long(g.joint_index(profile))];
      }
   }
}

RestrictedPolicySpace global_hull(std::size_t states, std::size_t actions, std::size_t k, std::mt19937_64& rng)
{
   std::vector< Policy > gens;
   for(std::size_t g = 0; g < k; ++g) {
      gens.push_back(oracle::random_policy(states, actions, rng));
   }
   return RestrictedPolicySpace::hull_global(gens);
}

RestrictedPolicySpace statewise_hull(std::size_t states, std::size_t actions, std::size_t k, std::mt19937_64& rng)
{
   std::vector< std::vector< Strategy > > per_state(states);
   for(auto& list : per_state) {
      for(std::size_t g = 0; g < k; ++g) {
         list.push_back(oracle::random_distribution(actions, rng));
      }
   }
   return RestrictedPolicySpace::hull_statewise(per_state);
}

void ac10(Report& r)
{
   std::mt19937_64 rng(2024);

   double residual = 0.0;
   for(int t = 0; t < 100; ++t) {
      oracle::GameShape shape;
      shape.states = 1 + std::size_t(t % 5);
      shape.actions = {std::size_t(1 + t % 3), 3, std::size_t(1 + t % 2)};
      auto g = oracle::random_game(shape, rng);
      auto joint = oracle::random_joint(g, rng);
      residual = std::max(residual, bellman_residual(g, joint, policy_value_discounted(g, joint)));
   }
   r.require(residual <= 1e-10, "Bellman residual " + fmt(residual));

   double preservation = 0.0;
   for(int t = 0; t < 100; ++t) {
      oracle::GameShape shape;
      shape.states = 1 + std::size_t(t % 4);
      shape.actions = {2, 3};
      shape.formulation = t % 2 ? RewardFormulation{Average{}} : RewardFormulation{Discounted{0.9}};
      auto g = oracle::random_game(shape, rng);
      TauMapping tau;
      for(std::size_t i = 0; i < 2; ++i) {
         std::vector< Eigen::MatrixXd > per_state;
         for(std::size_t s = 0; s < g.num_states(); ++s) {
            Eigen::MatrixXd m(long(2 + (t + i) % 3), long(g.num_actions(i)));
            for(Eigen::Index k = 0; k < m.rows(); ++k) {
               m.row(k) = oracle::random_distribution(g.num_actions(i), rng).transpose();
            }
            per_state.push_back(m);
         }
         tau.per_player.push_back(per_state);
      }
      auto ig = build_implicit(g, tau);
      auto implicit_joint = oracle::random_joint(ig.game, rng);
      const Eigen::VectorXd diff = player_values(ig.game, implicit_joint) - player_values(g, map_policy(ig, implicit_joint));
      preservation = std::max(preservation, diff.cwiseAbs().maxCoeff());
   }
   r.require(preservation <= 1e-10, "implicit value preservation " + fmt(preservation));

   int convex_fail = 0;
   for(int t = 0; t < 50; ++t) {
      oracle::GameShape shape;
      shape.states = 2 + std::size_t(t % 3);
      shape.actions = {3, 2};
      shape.no_control = true;
      auto g = oracle::random_game(shape, rng);
      if(t % 2 == 0) {
         flatten_own_rewards(g, 0);
      }
      std::vector< Policy > others{oracle::random_policy(shape.states, 2, rng)};
      auto space = global_hull(shape.states, 3, 3, rng);
      convex_fail += best_response_convexity_test(g, 0, others, space, 50, std::uint64_t(t)) ? 0 : 1;
   }
   for(int t = 0; t < 50; ++t) {
      oracle::GameShape shape;
      shape.states = 1;
      shape.actions = {4, 3};
      auto g = oracle::random_game(shape, rng);
      if(t % 2 == 0) {
         flatten_own_rewards(g, 0);
      }
      std::vector< Policy > others{oracle::random_policy(1, 3, rng)};
      auto space = global_hull(1, 4, 3, rng);
      convex_fail += best_response_convexity_test(g, 0, others, space, 50, std::uint64_t(t)) ? 0 : 1;
   }
   r.require(convex_fail == 0, std::to_string(convex_fail) + " convexity tests failed");
   {
      auto g = fact5_game();
      std::vector< Policy > half{Policy(3, vec({0.5, 0.5}))};
      r.require(
         not best_response_convexity_test(g, 1, half, RestrictedPolicySpace::state_uniform(3, 2), 200, 7),
         "convexity test passed on the state-uniform counterexample");
   }

   int team_fail = 0;
   for(int t = 0; t < 20; ++t) {
      oracle::GameShape shape;
      shape.states = 1 + std::size_t(t % 3);
      shape.actions = {2, 3};
      shape.team = true;
      shape.formulation = t % 2 ? RewardFormulation{Average{}} : RewardFormulation{Discounted{0.8}};
      auto g = oracle::random_game(shape, rng);
      std::vector< RestrictedPolicySpace > spaces{global_hull(shape.states, 2, 2, rng), global_hull(shape.states, 3, 2, rng)};
      constexpr int steps = 100;
      auto at = [&](std::size_t i, int k) {
         const auto& gens = std::get< ConvexHullGlobal >(spaces[i].variant()).generators;
         return mix_policies(gens, vec({double(k) / steps, 1.0 - double(k) / steps}));
      };
      Eigen::MatrixXd value(steps + 1, steps + 1);
      for(int a = 0; a <= steps; ++a) {
         for(int b = 0; b <= steps; ++b) {
            value(a, b) = player_values(g, {at(0, a), at(1, b)})[0];
         }
      }
      double bound = 0.0;
      bound = std::max(bound, (value.topRows(steps) - value.bottomRows(steps)).cwiseAbs().maxCoeff());
      bound = std::max(bound, (value.leftCols(steps) - value.rightCols(steps)).cwiseAbs().maxCoeff());
      Eigen::Index ba = 0;
      Eigen::Index bb = 0;
      value.maxCoeff(&ba, &bb);
      team_fail += check_equilibrium(g, {at(0, int(ba)), at(1, int(bb))}, spaces, bound + 1e-9).verdict ? 0 : 1;
   }
   r.require(team_fail == 0, std::to_string(team_fail) + " team-game grid checks failed");

   int dominance_fail = 0;
   for(int t = 0; t < 20; ++t) {
      oracle::GameShape shape;
      shape.states = 2 + std::size_t(t % 3);
      shape.actions = {3, 2};
      shape.formulation = Discounted{0.85};
      auto g = oracle::random_game(shape, rng);
      auto space = statewise_hull(shape.states, 3, 2 + std::size_t(t % 2), rng);
      std::vector< Policy > others{oracle::random_policy(shape.states, 2, rng)};
      auto br = restricted_best_response(g, 0, others, space);
      auto mdp = induce_mdp(g, 0, others);
      Eigen::VectorXd best = mdp_policy_value(mdp, br.policy);
      for(int k = 0; k < 100; ++k) {
         if((mdp_policy_value(mdp, space.sample(rng)) - best).maxCoeff() > 1e-10) {
            ++dominance_fail;
            break;
         }
      }
   }
   r.require(dominance_fail == 0, std::to_string(dominance_fail) + " dominance checks failed");

   double oracle_gap = 0.0;
   std::uniform_int_distribution< Eigen::Index > size(2, 4);
   std::uniform_real_distribution< double > unit(-1.0, 1.0);
   for(int t = 0; t < 20; ++t) {
      Eigen::MatrixXd a(size(rng), size(rng));
      for(auto& x : a.reshaped()) {
         x = unit(rng);
      }
      auto mm = solve_minimax(a);
      auto bounds = oracle::grid_minimax(a, 1000);
      oracle_gap = std::max({oracle_gap, std::abs(mm.value - bounds.lower), std::abs(mm.value - bounds.upper)});
   }
   r.require(oracle_gap <= 2e-3, "grid oracle gap " + fmt(oracle_gap));
   r.note(
      "Bellman " + fmt(residual) + ", preservation " + fmt(preservation) + ", grid oracle gap " + fmt(oracle_gap));
}

}  // namespace

int main()
{
   const std::vector< std::pair< const char*, std::function< void(Report&) > > > criteria{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}};
   int failed = 0;
   for(const auto& [name, run] : criteria) {
      Report report;
      try {
         run(report);
      } catch(const std::exception& e) {
         report.failures.push_back(std::string("exception: ") + e.what());
      }
      const bool ok = report.failures.empty();
      failed += ok ? 0 : 1;
      std::cout << name << (ok ? " PASS" : " FAIL");
      for(const auto& n : report.notes) {
         std::cout << " | " << n;
      }
      for(const auto& f : report.failures) {
         std::cout << " | " << f;
      }
      std::cout << std::endl;
   }
   return failed == 0 ? 0 : 1;
}
