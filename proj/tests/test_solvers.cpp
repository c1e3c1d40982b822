#include "sgl/builders.hpp"
#include "sgl/experiments.hpp"
#include "sgl/solvers.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <fstream>

using namespace sgl;

namespace {

Strategy vec(std::initializer_list< double > xs)
{
   Strategy s(static_cast< Eigen::Index >(xs.size()));
   Eigen::Index k = 0;
   for(double x : xs) {
      s[k++] = x;
   }
   return s;
}

Strategy vec(const nlohmann::json& xs)
{
   auto v = xs.get< std::vector< double > >();
   return Eigen::Map< Strategy >(v.data(), static_cast< Eigen::Index >(v.size()));
}

const nlohmann::json& fixture()
{
   static const nlohmann::json doc = [] {
      std::ifstream in(std::string(SGL_FIXTURE_DIR) + "/restricted_oracle.json");
      return nlohmann::json::parse(in);
   }();
   return doc;
}

double dist(const Strategy& a, const Strategy& b)
{
   return (a - b).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng)
{
   std::uniform_real_distribution< double > unit(-1.0, 1.0);
   Eigen::MatrixXd m(rows, cols);
   for(auto& x : m.reshaped()) {
      x = unit(rng);
   }
   return m;
}

/// Player's rewards no longer depend on its own action (every policy becomes a best response).
void flatten_own_rewards(StochasticGame& g, std::size_t player)
{
   for(std::size_t s = 0; s < g.num_states(); ++s) {
      auto& r = g.rewards[player][s];
      for(std::size_t j = 0; j < g.num_joint_actions(); ++j) {
         auto profile = g.joint_profile(j);
         profile[player] = 0;
         r[long(j)] = r[long(g.joint_index(profile))];
      }
   }
}

RestrictedPolicySpace random_global_hull(std::size_t states, std::size_t actions, std::size_t k, std::mt19937_64& rng)
{
   std::vector< Policy > gens;
   for(std::size_t g = 0; g < k; ++g) {
      gens.push_back(oracle::random_policy(states, actions, rng));
   }
   return RestrictedPolicySpace::hull_global(gens);
}

RestrictedPolicySpace random_statewise_hull(std::size_t states, std::size_t actions, std::size_t k, std::mt19937_64& rng)
{
   std::vector< std::vector< Strategy > > per_state(states);
   for(auto& list : per_state) {
      for(std::size_t g = 0; g < k; ++g) {
         list.push_back(oracle::random_distribution(actions, rng));
      }
   }
   return RestrictedPolicySpace::hull_statewise(per_state);
}

}  // namespace

// Minimax.

TEST(Minimax, RockPaperScissors)
{
   auto mm = minimax_zero_sum_matrix(rps());
   EXPECT_NEAR(mm.value, 0.0, 1e-12);
   EXPECT_LE(dist(mm.row, uniform_strategy(3)), 1e-12);
   EXPECT_LE(dist(mm.col, uniform_strategy(3)), 1e-12);
}

TEST(Minimax, BlottoMatchesLpOracle)
{
   const auto& ref = fixture()["blotto_nash"];
   ASSERT_EQ(ref["value_rational"], "14/9");
   auto mm = minimax_zero_sum_matrix(blotto_4_3());
   EXPECT_NEAR(mm.value, 14.0 / 9.0, 1e-12);
   EXPECT_LE(dist(mm.row, vec(ref["row"])), 1e-9);
   EXPECT_LE(dist(mm.col, vec(ref["col"])), 1e-9);
}

TEST(Minimax, OneByOne)
{
   Eigen::MatrixXd m(1, 1);
   m << 2.5;
   auto mm = minimax_zero_sum_matrix(zero_sum_matrix_game(m));
   EXPECT_EQ(mm.value, 2.5);
   EXPECT_EQ(mm.row[0], 1.0);
   EXPECT_EQ(mm.col[0], 1.0);
}

TEST(Minimax, DiscountedValueIsScaled)
{
   auto mm = minimax_zero_sum_matrix(blotto_4_3(Discounted{0.5}));
   EXPECT_NEAR(mm.value, 28.0 / 9.0, 1e-12);
}

TEST(Minimax, Errors)
{
   EXPECT_THROW(minimax_zero_sum_matrix(bach_stravinsky()), UnsupportedError);
   EXPECT_THROW(minimax_zero_sum_matrix(fact5_game()), UnsupportedError);
}

// Support enumeration.

TEST(SupportEnumeration, BachOrStravinskyHasThreeEquilibria)
{
   auto game = bach_stravinsky();
   auto se = support_enumeration_bimatrix(game);
   ASSERT_EQ(se.equilibria.size(), 3u);
   EXPECT_FALSE(se.degenerate);
   int pure = 0;
   int mixed = 0;
   for(const auto& e : se.equilibria) {
      const bool is_pure = e.row.maxCoeff() == 1.0 and e.col.maxCoeff() == 1.0;
      if(is_pure) {
         ++pure;
         EXPECT_EQ(e.row, e.col);
      } else {
         ++mixed;
         EXPECT_NEAR(e.row[0], 2.0 / 3.0, 1e-12);
         EXPECT_NEAR(e.col[1], 2.0 / 3.0, 1e-12);
      }
      auto cert = check_equilibrium(game, {Policy{e.row}, Policy{e.col}}, full_spaces(game), 1e-9);
      EXPECT_TRUE(cert.verdict);
   }
   EXPECT_EQ(pure, 2);
   EXPECT_EQ(mixed, 1);
}

TEST(SupportEnumeration, RockPaperScissorsHasOnlyUniform)
{
   auto se = support_enumeration_bimatrix(rps());
   ASSERT_EQ(se.equilibria.size(), 1u);
   EXPECT_LE(dist(se.equilibria[0].row, uniform_strategy(3)), 1e-12);
   EXPECT_LE(dist(se.equilibria[0].col, uniform_strategy(3)), 1e-12);
}

TEST(SupportEnumeration, DominantActions)
{
   Eigen::MatrixXd row(2, 2);
   row << 3, 0, 5, 1;
   auto se = support_enumeration_bimatrix(matrix_game(row, row.transpose()));
   ASSERT_EQ(se.equilibria.size(), 1u);
   EXPECT_EQ(se.equilibria[0].row, pure_strategy(2, 1));
   EXPECT_EQ(se.equilibria[0].col, pure_strategy(2, 1));
}

TEST(SupportEnumeration, SizeBound)
{
   EXPECT_THROW(support_enumeration_bimatrix(blotto_4_3(), 4), UnsupportedError);
}

// Best responses.

TEST(BestResponse, UniformOpponentInRps)
{
   auto game = rps();
   std::vector< Policy > others{Policy{uniform_strategy(3)}};
   auto br = restricted_best_response(game, 0, others, RestrictedPolicySpace::full(1, 3));
   EXPECT_NEAR(br.value, 0.0, 1e-12);
   EXPECT_EQ(br.optimal_set.size(), 3u);
}

TEST(BestResponse, OptimalFaceIsPaperAndScissors)
{
   auto game = rps();
   std::vector< Policy > others{Policy{vec({1.0 / 3, 0.5, 1.0 / 6})}};
   auto br = restricted_best_response(game, 0, others, RestrictedPolicySpace::full(1, 3));
   EXPECT_NEAR(br.value, 1.0 / 6.0, 1e-12);
   ASSERT_EQ(br.optimal_set.size(), 2u);
   EXPECT_EQ(br.optimal_set[0].front(), pure_strategy(3, 1));
   EXPECT_EQ(br.optimal_set[1].front(), pure_strategy(3, 2));
   EXPECT_EQ(br.tolerance, 0.0);
}

TEST(BestResponse, SingletonReturnsItsPolicy)
{
   auto game = fact5_game();
   Policy own(3, vec({0.3, 0.7}));
   std::vector< Policy > others{uniform_policy(game, 1)};
   auto br = restricted_best_response(game, 0, others, RestrictedPolicySpace::singleton(own));
   EXPECT_LE(max_abs_diff(br.policy, own), 1e-15);
   EXPECT_NEAR(br.value, player_values(game, {own, others[0]})[0], 1e-12);
}

TEST(BestResponse, DeterministicSpaceTooLarge)
{
   oracle::GameShape shape;
   shape.states = 21;
   shape.actions = {2, 1};
   std::mt19937_64 rng(1);
   auto game = oracle::random_game(shape, rng);
   std::vector< Policy > others{uniform_policy(game, 1)};
   EXPECT_THROW(
      restricted_best_response(game, 0, others, RestrictedPolicySpace::deterministic(21, 2)),
      UnsupportedError);
}

TEST(BestResponse, RepresentativeIsFeasibleAndValueMatches)
{
   std::mt19937_64 rng(61);
   for(int trial = 0; trial < 40; ++trial) {
      oracle::GameShape shape;
      shape.states = 1 + std::size_t(trial % 3);
      shape.actions = {3, 2};
      shape.formulation = trial % 2 ? RewardFormulation{Average{}} : RewardFormulation{Discounted{0.9}};
      auto game = oracle::random_game(shape, rng);
      std::vector< Policy > others{oracle::random_policy(shape.states, 2, rng)};
      std::vector< RestrictedPolicySpace > spaces{
         RestrictedPolicySpace::full(shape.states, 3),
         random_statewise_hull(shape.states, 3, 2, rng),
         random_global_hull(shape.states, 3, 3, rng),
         RestrictedPolicySpace::state_uniform(shape.states, 3),
         RestrictedPolicySpace::fixed_coordinates(shape.states, 3, {Pin{0, 1, 0.4}}),
         RestrictedPolicySpace::deterministic(shape.states, 3)};
      for(const auto& space : spaces) {
         auto br = restricted_best_response(game, 0, others, space);
         EXPECT_TRUE(space.contains(br.policy, 1e-9)) << space.kind();
         auto actual = player_values(game, with_player(others, 0, br.policy))[0];
         EXPECT_NEAR(br.value, actual, 1e-10) << space.kind();
         // No sampled member beats the reported optimum by more than its tolerance.
         if(space.is_convex()) {
            for(int k = 0; k < 30; ++k) {
               auto v = player_values(game, with_player(others, 0, space.sample(rng)))[0];
               EXPECT_LE(v, br.value + br.tolerance + 1e-10) << space.kind();
            }
         }
      }
   }
}

// Certificates.

TEST(CheckEquilibrium, Examples)
{
   auto game = rps();
   auto cert = check_equilibrium(game, uniform_joint(game), full_spaces(game), 1e-9);
   EXPECT_TRUE(cert.verdict);
   EXPECT_NEAR(cert.gaps[0], 0.0, 1e-12);
   EXPECT_NEAR(cert.gaps[1], 0.0, 1e-12);

   JointPolicy rock{Policy{pure_strategy(3, 0)}, Policy{pure_strategy(3, 0)}};
   cert = check_equilibrium(game, rock, full_spaces(game), 1e-9);
   EXPECT_FALSE(cert.verdict);
   EXPECT_NEAR(cert.gaps[0], 1.0, 1e-12);
   EXPECT_NEAR(cert.gaps[1], 1.0, 1e-12);

   std::mt19937_64 rng(7);
   for(int trial = 0; trial < 10; ++trial) {
      auto joint = oracle::random_joint(game, rng);
      std::vector< RestrictedPolicySpace > singletons{
         RestrictedPolicySpace::singleton(joint[0]), RestrictedPolicySpace::singleton(joint[1])};
      EXPECT_TRUE(check_equilibrium(game, joint, singletons, 0.0).verdict);
   }
}

TEST(CheckEquilibrium, PolicyOutsideSpace)
{
   auto game = rps();
   std::vector< RestrictedPolicySpace > spaces{RestrictedPolicySpace::full(1, 3), rps_column_hull()};
   EXPECT_THROW(check_equilibrium(game, uniform_joint(game), spaces, 1e-9), PreconditionError);
}

TEST(EnumerateDeterministic, Examples)
{
   auto certs = enumerate_deterministic(rps(), 0.5);
   ASSERT_EQ(certs.size(), 9u);
   double min_gap = INFINITY;
   for(const auto& c : certs) {
      EXPECT_FALSE(c.verdict);
      min_gap = std::min(min_gap, c.max_gap());
   }
   EXPECT_NEAR(min_gap, 1.0, 1e-12);

   certs = enumerate_deterministic(bach_stravinsky(), 1e-9);
   ASSERT_EQ(certs.size(), 4u);
   EXPECT_EQ(std::count_if(certs.begin(), certs.end(), [](const auto& c) { return c.verdict; }), 2);

   Eigen::MatrixXd one(1, 1);
   one << 0.0;
   certs = enumerate_deterministic(zero_sum_matrix_game(one), 1e-9);
   ASSERT_EQ(certs.size(), 1u);
   EXPECT_TRUE(certs[0].verdict);
}

// Restricted equilibria through implicit games.

TEST(ImplicitEquilibrium, RestrictedRps)
{
   const auto& ref = fixture()["rps_restricted"];
   auto game = rps();
   std::vector< RestrictedPolicySpace > spaces{RestrictedPolicySpace::full(1, 3), rps_column_hull()};
   auto eq = restricted_equilibrium_via_implicit(game, spaces);
   EXPECT_NEAR(eq.value, 1.0 / 6.0, 1e-9);
   EXPECT_NEAR(eq.value, ref["value"].get< double >(), 1e-9);
   EXPECT_LE(dist(eq.explicit_joint[0].front(), vec(ref["row"])), 1e-9);
   EXPECT_LE(dist(eq.implicit_joint[1].front(), vec(ref["col"])), 1e-9);
   EXPECT_LE(dist(eq.explicit_joint[1].front(), vec(ref["explicit_col"])), 1e-9);
   EXPECT_LE(dist(eq.explicit_joint[0].front(), vec({0, 1.0 / 3, 2.0 / 3})), 1e-9);
   EXPECT_LE(dist(eq.explicit_joint[1].front(), vec({1.0 / 3, 0.5, 1.0 / 6})), 1e-9);
   EXPECT_TRUE(check_equilibrium(game, eq.explicit_joint, spaces, 1e-8).verdict);
}

TEST(ImplicitEquilibrium, RestrictedBlotto)
{
   const auto& ref = fixture()["blotto_restricted_independent_uniform"];
   auto game = blotto_4_3();
   auto hull = blotto_row_hull();
   // The built-in hull is the one the oracle solved.
   const auto gens = std::get< ConvexHullGlobal >(hull.variant()).generators;
   for(std::size_t k = 0; k < 3; ++k) {
      EXPECT_LE(dist(gens[k].front(), vec(ref["generators"][k])), 1e-15);
   }
   std::vector< RestrictedPolicySpace > spaces{hull, RestrictedPolicySpace::full(1, 4)};
   auto eq = restricted_equilibrium_via_implicit(game, spaces);
   EXPECT_NEAR(eq.value, 0.0, 1e-9);
   EXPECT_LE(dist(eq.implicit_joint[0].front(), vec(ref["row"])), 1e-9);
   EXPECT_LE(dist(eq.implicit_joint[1].front(), vec(ref["col"])), 1e-9);
   EXPECT_LE(dist(eq.explicit_joint[0].front(), vec(ref["explicit_row"])), 1e-9);
   EXPECT_TRUE(eq.certificate.verdict);
   // The other reading of the extra armies gives the same value.
   EXPECT_NEAR(fixture()["blotto_restricted_uniform_over_splits"]["value"].get< double >(), 0.0, 1e-9);
}

TEST(ImplicitEquilibrium, FullSpacesReduceToMinimax)
{
   for(const auto& game : {rps(), blotto_4_3()}) {
      auto eq = restricted_equilibrium_via_implicit(game, full_spaces(game));
      auto mm = minimax_zero_sum_matrix(game);
      EXPECT_NEAR(eq.value, mm.value, 1e-12);
      EXPECT_LE(dist(eq.explicit_joint[0].front(), mm.row), 1e-12);
      EXPECT_LE(dist(eq.explicit_joint[1].front(), mm.col), 1e-12);
   }
}

TEST(ImplicitEquilibrium, RejectsGeneralSum)
{
   auto game = bach_stravinsky();
   EXPECT_THROW(restricted_equilibrium_via_implicit(game, full_spaces(game)), UnsupportedError);
}

// Sweeps.

TEST(Sweep, DeterministicRps)
{
   auto game = rps();
   std::vector< RestrictedPolicySpace > spaces{
      RestrictedPolicySpace::deterministic(1, 3), RestrictedPolicySpace::deterministic(1, 3)};
   auto result = sweep_existence(game, spaces, 0.1, 0.5);
   EXPECT_EQ(result.rows.size(), 9u);
   EXPECT_NEAR(result.min_max_gap, 1.0, 1e-12);
   EXPECT_TRUE(result.no_equilibrium_found);
}

TEST(Sweep, RestrictedRpsFindsTheEquilibrium)
{
   auto game = rps();
   std::vector< RestrictedPolicySpace > spaces{RestrictedPolicySpace::full(1, 3), rps_column_hull()};
   auto result = sweep_existence(game, spaces, 1.0 / 30.0, 1e-6);
   EXPECT_LE(result.min_max_gap, 1e-6);
   EXPECT_FALSE(result.no_equilibrium_found);
   EXPECT_LE(dist(result.argmin[0].front(), vec({0, 1.0 / 3, 2.0 / 3})), 1e-9);
}

TEST(Sweep, CounterexampleHasNoStateUniformEquilibrium)
{
   auto game = fact5_game();
   auto su = RestrictedPolicySpace::state_uniform(3, 2);
   std::vector< RestrictedPolicySpace > spaces{su, su};
   for(std::size_t r = 0; r < 2; ++r) {
      for(std::size_t c = 0; c < 2; ++c) {
         JointPolicy joint{Policy(3, pure_strategy(2, r)), Policy(3, pure_strategy(2, c))};
         EXPECT_FALSE(check_equilibrium(game, joint, spaces, 1e-6).verdict) << r << c;
      }
   }
   auto result = sweep_existence(game, spaces, 0.005, 1e-6);
   EXPECT_GT(result.min_max_gap, 0.0);
   EXPECT_GT(result.margin, 0.0);
   EXPECT_TRUE(result.no_equilibrium_found);
   EXPECT_EQ(result.rows.size(), 201u * 201u);
}

TEST(Sweep, DimensionCap)
{
   auto four = zero_sum_matrix_game(Eigen::MatrixXd::Identity(4, 4));
   EXPECT_THROW(sweep_existence(four, full_spaces(four), 0.5, 1e-6), UnsupportedError);
}

// Best-response structure of the state-uniform counterexample.

TEST(Counterexample, BestResponseTrichotomy)
{
   auto game = fact5_game();
   auto su = RestrictedPolicySpace::state_uniform(3, 2);
   auto br_against = [&](double u) {
      std::vector< Policy > others{Policy(3, vec({u, 1.0 - u}))};
      return restricted_best_response(game, 1, others, su);
   };
   for(double u : {0.0, 0.2, 0.45, 0.499}) {
      auto br = br_against(u);
      ASSERT_EQ(br.optimal_set.size(), 1u) << u;
      EXPECT_LE(dist(br.policy.front(), pure_strategy(2, 0)), 1e-12) << u;
   }
   for(double u : {0.501, 0.55, 0.8, 1.0}) {
      auto br = br_against(u);
      ASSERT_EQ(br.optimal_set.size(), 1u) << u;
      EXPECT_LE(dist(br.policy.front(), pure_strategy(2, 1)), 1e-12) << u;
   }
   auto tie = br_against(0.5);
   ASSERT_EQ(tie.optimal_set.size(), 2u);
   for(const auto& p : tie.optimal_set) {
      EXPECT_NEAR(p.front().maxCoeff(), 1.0, 1e-12);
   }
   EXPECT_NE(tie.optimal_set[0].front(), tie.optimal_set[1].front());
   // Every strict mixture is worse than both pure responses.
   std::vector< Policy > others{Policy(3, vec({0.5, 0.5}))};
   for(double q : {0.1, 0.5, 0.9}) {
      auto v = player_values(game, with_player(others, 1, Policy(3, vec({q, 1.0 - q}))))[1];
      EXPECT_LT(v, tie.value - 1e-6) << q;
   }
   EXPECT_FALSE(best_response_convexity_test(game, 1, others, su, 200, 7));
}

TEST(Counterexample, ColumnValueIsStrictlyConvexInItsMixture)
{
   // Independent check that the column player's state-uniform value is not linear in q.
   auto game = fact5_game();
   std::vector< Policy > others{Policy(3, vec({0.5, 0.5}))};
   auto value = [&](double q) {
      return player_values(game, with_player(others, 1, Policy(3, vec({q, 1.0 - q}))))[1];
   };
   EXPECT_LT(value(0.5), 0.5 * (value(0.0) + value(1.0)) - 1e-3);
}

// Property suites.

TEST(Properties, MinimaxLpOptimality)
{
   std::mt19937_64 rng(71);
   std::uniform_int_distribution< Eigen::Index > size(1, 6);
   for(int trial = 0; trial < 100; ++trial) {
      Eigen::MatrixXd a = random_matrix(size(rng), size(rng), rng);
      if(trial % 5 == 0) {
         a = a.array().round();  // integer matrices are often degenerate
      }
      auto mm = minimax_zero_sum_matrix(zero_sum_matrix_game(a));
      EXPECT_TRUE(is_distribution(mm.row, 1e-12));
      EXPECT_TRUE(is_distribution(mm.col, 1e-12));
      EXPECT_GE((mm.row.transpose() * a).minCoeff(), mm.value - 1e-9);
      EXPECT_LE((a * mm.col).maxCoeff(), mm.value + 1e-9);
      auto cert = check_equilibrium(
         zero_sum_matrix_game(a), {Policy{mm.row}, Policy{mm.col}}, full_spaces(zero_sum_matrix_game(a)), 1e-9);
      EXPECT_TRUE(cert.verdict);
      EXPECT_NEAR(matrix_value(zero_sum_matrix_game(a), {Policy{mm.row}, Policy{mm.col}}).sum(), 0.0, 1e-12);
   }
}

TEST(Properties, MinimaxAgreesWithGridOracle)
{
   std::mt19937_64 rng(72);
   std::uniform_int_distribution< Eigen::Index > size(2, 4);
   for(int trial = 0; trial < 20; ++trial) {
      Eigen::MatrixXd a = random_matrix(size(rng), size(rng), rng);
      auto mm = solve_minimax(a);
      auto bounds = oracle::grid_minimax(a, 1000);
      EXPECT_LE(bounds.lower, mm.value + 1e-12);
      EXPECT_GE(bounds.upper, mm.value - 1e-12);
      EXPECT_NEAR(mm.value, bounds.lower, 2e-3);
      EXPECT_NEAR(mm.value, bounds.upper, 2e-3);
   }
}

TEST(Properties, NashInsideTheSpaceIsRestrictedEquilibrium)
{
   std::mt19937_64 rng(73);
   struct Case {
      StochasticGame game;
      JointPolicy nash;
   };
   std::vector< Case > cases;
   for(const auto& game : {rps(), blotto_4_3()}) {
      auto mm = minimax_zero_sum_matrix(game);
      cases.push_back({game, {Policy{mm.row}, Policy{mm.col}}});
   }
   auto bos = bach_stravinsky();
   for(const auto& e : support_enumeration_bimatrix(bos).equilibria) {
      cases.push_back({bos, {Policy{e.row}, Policy{e.col}}});
   }
   for(const auto& c : cases) {
      for(int trial = 0; trial < 5; ++trial) {
         std::vector< RestrictedPolicySpace > spaces;
         for(std::size_t i = 0; i < 2; ++i) {
            const auto n = c.game.num_actions(i);
            switch(trial) {
            case 0:
               spaces.push_back(RestrictedPolicySpace::singleton(c.nash[i]));
               break;
            case 1:
               spaces.push_back(RestrictedPolicySpace::hull_global({c.nash[i], oracle::random_policy(1, n, rng)}));
               break;
            case 2:
               spaces.push_back(RestrictedPolicySpace::fixed_coordinates(1, n, {Pin{0, 0, c.nash[i][0][0]}}));
               break;
            case 3:
               spaces.push_back(RestrictedPolicySpace::hull_statewise(
                  {{oracle::random_distribution(n, rng), c.nash[i][0], oracle::random_distribution(n, rng)}}));
               break;
            default:
               spaces.push_back(RestrictedPolicySpace::state_uniform(1, n));
            }
         }
         EXPECT_TRUE(check_equilibrium(c.game, c.nash, spaces, 1e-8).verdict) << "trial " << trial;
      }
   }
}

TEST(Properties, StatewiseBestResponseDominatesEveryState)
{
   std::mt19937_64 rng(74);
   for(int trial = 0; trial < 20; ++trial) {
      oracle::GameShape shape;
      shape.states = 2 + std::size_t(trial % 3);
      shape.actions = {3, 2};
      shape.formulation = Discounted{0.85};
      auto game = oracle::random_game(shape, rng);
      auto space = random_statewise_hull(shape.states, 3, 2 + std::size_t(trial % 2), rng);
      std::vector< Policy > others{oracle::random_policy(shape.states, 2, rng)};
      auto br = restricted_best_response(game, 0, others, space);
      EXPECT_EQ(br.tolerance, 0.0);
      auto mdp = induce_mdp(game, 0, others);
      Eigen::VectorXd best = mdp_policy_value(mdp, br.policy);
      for(int k = 0; k < 100; ++k) {
         Eigen::VectorXd v = mdp_policy_value(mdp, space.sample(rng));
         EXPECT_LE((v - best).maxCoeff(), 1e-10);
      }
   }
}

TEST(Properties, AlternatingBestResponsesInSingleControllerTeamGames)
{
   std::mt19937_64 rng(75);
   for(int trial = 0; trial < 5; ++trial) {
      oracle::GameShape shape;
      shape.states = 3;
      shape.actions = {2, 3};
      shape.controller = 0;
      shape.team = true;
      shape.formulation = Discounted{0.9};
      auto game = oracle::random_game(shape, rng);
      ASSERT_TRUE(classify(game).single_controller[0]);
      std::vector< RestrictedPolicySpace > spaces{
         random_statewise_hull(3, 2, 2, rng), random_statewise_hull(3, 3, 3, rng)};
      for(int start = 0; start < 10; ++start) {
         JointPolicy joint{spaces[0].sample(rng), spaces[1].sample(rng)};
         for(int round = 0; round < 100; ++round) {
            bool improved = false;
            for(std::size_t i = 0; i < 2; ++i) {
               auto others = others_of(joint, i);
               auto br = restricted_best_response(game, i, others, spaces[i]);
               if(br.value > player_values(game, joint)[long(i)] + 1e-12) {
                  joint[i] = br.policy;
                  improved = true;
               }
            }
            if(not improved) {
               break;
            }
         }
         EXPECT_TRUE(check_equilibrium(game, joint, spaces, 1e-6).verdict) << trial << "/" << start;
      }
   }
}

TEST(Properties, TeamOptimumIsRestrictedEquilibrium)
{
   std::mt19937_64 rng(76);
   constexpr int steps = 100;
   for(int trial = 0; trial < 20; ++trial) {
      oracle::GameShape shape;
      shape.states = 1 + std::size_t(trial % 3);
      shape.actions = {2, 3};
      shape.team = true;
      shape.formulation = trial % 2 ? RewardFormulation{Average{}} : RewardFormulation{Discounted{0.8}};
      auto game = oracle::random_game(shape, rng);
      ASSERT_TRUE(classify(game).team);
      std::vector< RestrictedPolicySpace > spaces{
         random_global_hull(shape.states, 2, 2, rng), random_global_hull(shape.states, 3, 2, rng)};
      std::vector< std::vector< Policy > > gens;
      for(const auto& s : spaces) {
         gens.push_back(std::get< ConvexHullGlobal >(s.variant()).generators);
      }
      auto policy_at = [&](std::size_t i, int k) {
         return mix_policies(gens[i], vec({double(k) / steps, 1.0 - double(k) / steps}));
      };
      Eigen::MatrixXd value(steps + 1, steps + 1);
      for(int a = 0; a <= steps; ++a) {
         for(int b = 0; b <= steps; ++b) {
            value(a, b) = player_values(game, {policy_at(0, a), policy_at(1, b)})[0];
         }
      }
      Eigen::Index ba = 0;
      Eigen::Index bb = 0;
      value.maxCoeff(&ba, &bb);
      // Largest change between grid neighbours bounds how far the grid maximum can sit below the true one.
      double bound = 0.0;
      for(Eigen::Index a = 0; a <= steps; ++a) {
         for(Eigen::Index b = 0; b <= steps; ++b) {
            if(a < steps) {
               bound = std::max(bound, std::abs(value(a + 1, b) - value(a, b)));
            }
            if(b < steps) {
               bound = std::max(bound, std::abs(value(a, b + 1) - value(a, b)));
            }
         }
      }
      JointPolicy best{policy_at(0, int(ba)), policy_at(1, int(bb))};
      auto cert = check_equilibrium(game, best, spaces, bound + 1e-9);
      EXPECT_TRUE(cert.verdict) << "trial " << trial << " gap " << cert.max_gap() << " bound " << bound;
   }
}

TEST(Properties, NoControlBestResponsesAreConvex)
{
   std::mt19937_64 rng(77);
   for(int trial = 0; trial < 50; ++trial) {
      oracle::GameShape shape;
      shape.states = 2 + std::size_t(trial % 3);
      shape.actions = {3, 2};
      shape.no_control = true;
      shape.formulation = trial % 2 ? RewardFormulation{Average{}} : RewardFormulation{Discounted{0.9}};
      auto game = oracle::random_game(shape, rng);
      ASSERT_TRUE(classify(game).no_control);
      if(trial % 2 == 0) {
         flatten_own_rewards(game, 0);
      }
      std::vector< Policy > others{oracle::random_policy(shape.states, 2, rng)};
      auto space = trial % 3 == 0 ? random_statewise_hull(shape.states, 3, 3, rng)
                                  : random_global_hull(shape.states, 3, 3, rng);
      EXPECT_TRUE(best_response_convexity_test(game, 0, others, space, 50, std::uint64_t(trial))) << trial;
   }
}

TEST(Properties, MatrixBestResponsesAreConvex)
{
   std::mt19937_64 rng(78);
   std::size_t ties = 0;
   for(int trial = 0; trial < 50; ++trial) {
      oracle::GameShape shape;
      shape.states = 1;
      shape.actions = {4, 3};
      auto game = oracle::random_game(shape, rng);
      if(trial % 2 == 0) {
         flatten_own_rewards(game, 0);
      }
      std::vector< Policy > others{oracle::random_policy(1, 3, rng)};
      auto space = random_global_hull(1, 4, 3, rng);
      auto br = restricted_best_response(game, 0, others, space);
      ties += br.optimal_set.size() > 1 ? 1 : 0;
      EXPECT_TRUE(best_response_convexity_test(game, 0, others, space, 50, std::uint64_t(trial))) << trial;
   }
   // The tie-inducing half must actually exercise non-trivial optimal sets.
   EXPECT_GE(ties, 25u);
}

TEST(Properties, ConvexityTestRejectsNonConvexSpaces)
{
   auto game = rps();
   std::vector< Policy > others{Policy{uniform_strategy(3)}};
   EXPECT_THROW(
      best_response_convexity_test(game, 0, others, RestrictedPolicySpace::deterministic(1, 3), 10, 1),
      UnsupportedError);
}
