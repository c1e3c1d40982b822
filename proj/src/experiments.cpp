#include "sgl/experiments.hpp"

#include "sgl/builders.hpp"
#include "sgl/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace sgl {

namespace {

constexpr double kTail = 0.1;
constexpr double kFact5Resolution = 0.005;
constexpr double kFact5Epsilon = 1e-6;

std::vector< double > as_vector(const Strategy& s)
{
   return {s.data(), s.data() + s.size()};
}

Strategy column(double a, double b, double c)
{
   Strategy s(3);
   s << a, b, c;
   return s;
}

StochasticGame game_for(const std::string& name)
{
   if(name == "rps" or name == "rps-restricted" or name == "fact1") {
      return rps();
   }
   if(name == "blotto" or name == "blotto-restricted") {
      return blotto_4_3();
   }
   if(name == "bos-equilibria") {
      return bach_stravinsky();
   }
   if(name == "fact5") {
      return fact5_game();
   }
   throw std::invalid_argument("unknown experiment '" + name + "'");
}

std::vector< PlayerSetup > setups_for(const std::string& name)
{
   std::vector< PlayerSetup > setups(2);
   if(name == "rps-restricted") {
      setups[1].space = rps_column_hull();
   } else if(name == "blotto-restricted") {
      setups[0].space = blotto_row_hull();
   } else if(name == "fact1") {
      setups[0].algorithm = Algorithm::q_learning;
      setups[1].algorithm = Algorithm::q_learning;
   }
   return setups;
}

Json certificate_summary(const StochasticGame& game, const EquilibriumCertificate& cert)
{
   auto doc = certificate_to_json(game, cert);
   doc["max_gap"] = cert.max_gap();
   return doc;
}

/// Reference equilibrium lines for the plot: per player, per action.
using Reference = std::vector< std::vector< double > >;

Json reference_for(const std::string& name, const StochasticGame& game, Reference& lines)
{
   Json ref;
   if(name == "rps" or name == "blotto" or name == "fact1") {
      auto mm = minimax_zero_sum_matrix(game);
      ref = {{"value", mm.value}, {"row", as_vector(mm.row)}, {"col", as_vector(mm.col)}};
      lines = {as_vector(mm.row), as_vector(mm.col)};
   } else if(name == "rps-restricted" or name == "blotto-restricted") {
      std::vector< RestrictedPolicySpace > spaces = {
         RestrictedPolicySpace::full(1, game.num_actions(0)),
         RestrictedPolicySpace::full(1, game.num_actions(1))};
      std::size_t restricted = name == "rps-restricted" ? 1 : 0;
      spaces[restricted] = name == "rps-restricted" ? rps_column_hull() : blotto_row_hull();
      auto eq = restricted_equilibrium_via_implicit(game, spaces);
      auto nash = minimax_zero_sum_matrix(game);
      ref = {
         {"value", eq.value},
         {"row", as_vector(eq.explicit_joint[0][0])},
         {"col", as_vector(eq.explicit_joint[1][0])},
         {"restricted_player", restricted},
         {"restricted_weights", as_vector(eq.implicit_joint[restricted][0])},
         {"nash_value", nash.value},
         {"certificate", certificate_summary(game, eq.certificate)}};
      lines = {as_vector(eq.explicit_joint[0][0]), as_vector(eq.explicit_joint[1][0])};
   } else if(name == "bos-equilibria") {
      auto se = support_enumeration_bimatrix(game);
      Json list = Json::array();
      for(const auto& e : se.equilibria) {
         list.push_back(
            {{"row", as_vector(e.row)},
             {"col", as_vector(e.col)},
             {"row_value", e.row_value},
             {"col_value", e.col_value}});
      }
      ref = {{"equilibria", list}, {"degenerate", se.degenerate}};
      // The mixed equilibrium is the one worth drawing.
      const auto& mixed = se.equilibria.back();
      lines = {as_vector(mixed.row), as_vector(mixed.col)};
   }
   return ref;
}

void write_plot(
   const std::filesystem::path& dir,
   const StochasticGame& game,
   const TrajectoryLog& log,
   const Reference& lines)
{
   std::vector< std::vector< TrajectoryRow > > rows;
   for(std::size_t i = 0; i < log.players; ++i) {
      rows.push_back(log.for_player(i));
   }
   std::ofstream dat(dir / "trajectory.dat");
   dat << "# iteration";
   for(std::size_t i = 0; i < log.players; ++i) {
      for(const auto& a : game.actions[i]) {
         dat << " p" << i << ':' << a;
      }
   }
   dat << '\n';
   dat.precision(10);
   for(std::size_t k = 0; k < rows.front().size(); ++k) {
      dat << rows.front()[k].iteration;
      for(std::size_t i = 0; i < log.players; ++i) {
         for(double p : rows[i][k].explicit_probs) {
            dat << ' ' << p;
         }
      }
      dat << '\n';
   }

   std::ofstream gp(dir / "trajectory.gp");
   gp << "set xlabel 'iteration'\nset ylabel 'probability'\nset yrange [0:1]\nset key outside right\n";
   std::size_t col = 2;
   for(std::size_t i = 0; i < log.players; ++i) {
      gp << (i == 0 ? "set multiplot layout 2,1\n" : "") << "set title 'player " << i << "'\nplot ";
      for(std::size_t a = 0; a < game.actions[i].size(); ++a, ++col) {
         gp << "'trajectory.dat' using 1:" << col << " with lines title '" << game.actions[i][a] << "', ";
      }
      for(std::size_t a = 0; a < game.actions[i].size(); ++a) {
         double v = i < lines.size() ? lines[i][a] : 0.0;
         gp << v << " with lines dashtype 2 title '" << game.actions[i][a] << " equilibrium'"
            << (a + 1 < game.actions[i].size() ? ", " : "\n");
      }
   }
   gp << "unset multiplot\n";
}

Json learning_summary(const StochasticGame& game, const SelfPlayResult& run)
{
   Json players = Json::array();
   for(std::size_t i = 0; i < run.learners.size(); ++i) {
      const auto rows = run.log.for_player(i);
      const auto& st = run.learners[i];
      Json p = {
         {"restricted", st.restricted()},
         {"final_policy", as_vector(st.explicit_policy().front())},
         {"tail_mean_policy", as_vector(tail_mean_policy(rows, kTail))},
         {"tail_average_reward", tail_average_reward(rows, kTail)},
         {"average_reward", rows.empty() ? 0.0 : rows.back().avg_reward}};
      if(st.restricted()) {
         p["final_weights"] = as_vector(st.policy.front());
         p["tail_mean_weights"] = as_vector(tail_mean_policy(rows, kTail, false));
      }
      players.push_back(std::move(p));
   }
   auto stable = stabilization_iteration(run.log);
   return {
      {"players", players},
      {"checkpoint_every", run.log.checkpoint_every},
      {"stabilization_iteration", stable ? Json(*stable) : Json(nullptr)},
      {"actions", game.actions}};
}

Json fact5_summary(const std::filesystem::path& dir)
{
   const auto game = fact5_game();
   const auto su = RestrictedPolicySpace::state_uniform(game.num_states(), 2);
   const std::vector< RestrictedPolicySpace > spaces{su, su};

   Json pure = Json::array();
   for(std::size_t r = 0; r < 2; ++r) {
      for(std::size_t c = 0; c < 2; ++c) {
         JointPolicy joint{Policy(game.num_states(), pure_strategy(2, r)), Policy(game.num_states(), pure_strategy(2, c))};
         auto cert = check_equilibrium(game, joint, spaces, kFact5Epsilon);
         auto doc = certificate_summary(game, cert);
         doc["profile"] = game.actions[0][r] + "," + game.actions[1][c];
         pure.push_back(std::move(doc));
      }
   }

   Json trichotomy = Json::array();
   for(double u : {0.25, 0.5, 0.75}) {
      Strategy row(2);
      row << u, 1.0 - u;
      const std::vector< Policy > others{Policy(game.num_states(), row)};
      auto br = restricted_best_response(game, 1, others, su);
      Json optimal = Json::array();
      for(const auto& p : br.optimal_set) {
         optimal.push_back(as_vector(p.front()));
      }
      trichotomy.push_back(
         {{"row_u", u},
          {"best_response", as_vector(br.policy.front())},
          {"value", br.value},
          {"optimal_set", optimal},
          {"blends_stay_optimal", best_response_convexity_test(game, 1, others, su, 200, 7)}});
   }

   auto sweep = sweep_existence(game, spaces, kFact5Resolution, kFact5Epsilon);
   std::ofstream csv(dir / "sweep.csv");
   write_sweep_csv(csv, sweep);
   std::ofstream gp(dir / "sweep.gp");
   gp << "set datafile separator ','\nset xlabel 'row P(U)'\nset ylabel 'column P(L)'\nset zlabel 'max gap'\n"
      << "set view map\nsplot 'sweep.csv' every ::1 using 1:2:3 with points palette pointsize 0.5 title 'max gap'\n";

   return {
      {"pure_profiles", pure},
      {"trichotomy", trichotomy},
      {"sweep",
       {{"resolution", sweep.resolution},
        {"epsilon", sweep.epsilon},
        {"min_max_gap", sweep.min_max_gap},
        {"argmin_params", sweep.argmin_params},
        {"refinement_bound", sweep.refinement_bound},
        {"margin", sweep.margin},
        {"no_equilibrium_found", sweep.no_equilibrium_found},
        {"statement",
         "no " + std::to_string(sweep.epsilon) + "-equilibrium found at resolution "
            + std::to_string(sweep.resolution) + " with margin " + std::to_string(sweep.margin)}}}};
}

}  // namespace

RestrictedPolicySpace rps_column_hull()
{
   return RestrictedPolicySpace::hull_global({Policy{column(0.5, 0.5, 0.0)}, Policy{column(0.0, 0.5, 0.5)}});
}

RestrictedPolicySpace blotto_row_hull()
{
   std::vector< Policy > gens;
   for(Eigen::Index base = 0; base < 3; ++base) {
      Strategy g = Strategy::Zero(5);
      g[base] = 0.25;
      g[base + 1] = 0.5;
      g[base + 2] = 0.25;
      gens.push_back(Policy{g});
   }
   return RestrictedPolicySpace::hull_global(std::move(gens));
}

const std::vector< std::string >& experiment_names()
{
   static const std::vector< std::string > names{
      "rps", "rps-restricted", "blotto", "blotto-restricted", "fact1", "fact5", "bos-equilibria"};
   return names;
}

Strategy tail_mean_policy(const std::vector< TrajectoryRow >& rows, double fraction, bool explicit_form)
{
   if(rows.empty()) {
      throw std::invalid_argument("empty trajectory");
   }
   const auto count = std::max< std::size_t >(1, std::size_t(std::floor(double(rows.size()) * fraction)));
   const auto& first = explicit_form ? rows.front().explicit_probs : rows.front().choice_probs;
   Strategy mean = Strategy::Zero(Eigen::Index(first.size()));
   for(std::size_t k = rows.size() - count; k < rows.size(); ++k) {
      const auto& v = explicit_form ? rows[k].explicit_probs : rows[k].choice_probs;
      mean += Eigen::Map< const Eigen::VectorXd >(v.data(), Eigen::Index(v.size()));
   }
   return mean / double(count);
}

double tail_average_reward(const std::vector< TrajectoryRow >& rows, double fraction)
{
   if(rows.size() < 2) {
      throw std::invalid_argument("need at least two checkpoints");
   }
   const auto count = std::clamp< std::size_t >(std::size_t(std::floor(double(rows.size()) * fraction)), 1, rows.size() - 1);
   return window_average_reward(rows, rows.size() - 1 - count, rows.size() - 1);
}

std::optional< std::uint64_t > stabilization_iteration(const TrajectoryLog& log, std::uint64_t window, double threshold)
{
   std::vector< std::vector< TrajectoryRow > > rows;
   for(std::size_t i = 0; i < log.players; ++i) {
      rows.push_back(log.for_player(i));
   }
   const auto lag = std::size_t(std::max< std::uint64_t >(1, window / log.checkpoint_every));
   const auto n = rows.front().size();
   if(n <= lag) {
      return std::nullopt;
   }
   std::size_t stable = n;
   for(std::size_t k = n; k-- > lag;) {
      double movement = 0.0;
      for(const auto& r : rows) {
         double d = 0.0;
         for(std::size_t a = 0; a < r[k].explicit_probs.size(); ++a) {
            d += std::abs(r[k].explicit_probs[a] - r[k - lag].explicit_probs[a]);
         }
         movement = std::max(movement, d);
      }
      if(movement >= threshold) {
         break;
      }
      stable = k - lag;
   }
   if(stable >= n) {
      return std::nullopt;
   }
   return rows.front()[stable].iteration;
}

SelfPlayResult run_learning_experiment(const std::string& name, std::uint64_t seed, std::uint64_t iterations)
{
   if(name == "fact5") {
      throw std::invalid_argument("fact5 has no learning run");
   }
   return self_play(game_for(name), setups_for(name), iterations, seed);
}

Json reproduce(const ReproductionSpec& spec)
{
   const auto& names = experiment_names();
   if(std::find(names.begin(), names.end(), spec.name) == names.end()) {
      throw std::invalid_argument("unknown experiment '" + spec.name + "'");
   }
   std::filesystem::create_directories(spec.out_dir);
   Json summary = {{"experiment", spec.name}, {"seed", spec.seed}, {"iterations", spec.iterations}};

   if(spec.name == "fact5") {
      summary["iterations"] = 0;
      summary["certification"] = fact5_summary(spec.out_dir);
      write_json_file(spec.out_dir / "summary.json", summary);
      return summary;
   }

   const auto game = game_for(spec.name);
   Reference lines;
   summary["reference"] = reference_for(spec.name, game, lines);
   if(spec.name == "fact1") {
      auto certs = enumerate_deterministic(game, 0.5);
      Json list = Json::array();
      double min_gap = INFINITY;
      std::size_t equilibria = 0;
      for(const auto& c : certs) {
         list.push_back(certificate_summary(game, c));
         min_gap = std::min(min_gap, c.max_gap());
         equilibria += c.verdict ? 1 : 0;
      }
      summary["pure_profiles"] = certs.size();
      summary["equilibria"] = equilibria;
      summary["min_gap"] = min_gap;
      summary["certificates"] = list;
   }
   if(spec.name == "bos-equilibria") {
      auto certs = enumerate_deterministic(game, 1e-9);
      std::size_t pure_eq = 0;
      for(const auto& c : certs) {
         pure_eq += c.verdict ? 1 : 0;
      }
      summary["pure_equilibria"] = pure_eq;
   }

   auto run = run_learning_experiment(spec.name, spec.seed, spec.iterations);
   summary["learning"] = learning_summary(game, run);
   summary["config"] = config_to_json(WolfPhcConfig{});
   if(spec.name == "fact1") {
      // Greedy Q-learning profiles are pure, so none can be an equilibrium.
      std::size_t passing = 0;
      const auto spaces = full_spaces(game);
      const auto r0 = run.log.for_player(0);
      const auto r1 = run.log.for_player(1);
      for(std::size_t k = 0; k < r0.size(); ++k) {
         JointPolicy joint{
            Policy{Eigen::Map< const Eigen::VectorXd >(r0[k].explicit_probs.data(), 3)},
            Policy{Eigen::Map< const Eigen::VectorXd >(r1[k].explicit_probs.data(), 3)}};
         passing += check_equilibrium(game, joint, spaces, 0.5).verdict ? 1 : 0;
      }
      summary["learning"]["greedy_checkpoints_at_equilibrium"] = passing;
   }

   std::ofstream csv(spec.out_dir / "trajectory.csv");
   write_trajectory_csv(csv, run.log);
   write_plot(spec.out_dir, game, run.log, lines);
   write_json_file(spec.out_dir / "summary.json", summary);
   return summary;
}

}  // namespace sgl
