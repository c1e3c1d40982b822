#include "sgl/builders.hpp"
#include "sgl/experiments.hpp"
#include "sgl/io.hpp"
#include "sgl/solvers.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

using namespace sgl;

enum ExitCode { kOk = 0, kMalformed = 2, kUnsupported = 3, kErgodicity = 4 };

constexpr std::size_t kMaxSpaceOptions = 8;

void configure_logging()
{
   spdlog::set_level(spdlog::level::warn);
   if(const char* level = std::getenv("SGL_LOG_LEVEL")) {
      const std::string name = level;
      if(name == "error") {
         spdlog::set_level(spdlog::level::err);
      } else if(name == "info") {
         spdlog::set_level(spdlog::level::info);
      } else if(name == "debug") {
         spdlog::set_level(spdlog::level::debug);
      } else {
         spdlog::warn("ignoring unknown SGL_LOG_LEVEL '{}'", name);
      }
   }
}

void print(const Json& doc)
{
   std::cout << doc.dump(2) << '\n';
}

StochasticGame load_game(const std::string& path)
{
   spdlog::info("loading game {}", path);
   return game_from_json(read_json_file(path));
}

/// Spaces from files; players without a file get the full space.
std::vector< RestrictedPolicySpace > load_spaces(const StochasticGame& game, const std::vector< std::string >& files)
{
   if(files.size() > game.num_players()) {
      throw ParseError("more space files than players");
   }
   auto spaces = full_spaces(game);
   for(std::size_t i = 0; i < files.size(); ++i) {
      if(not files[i].empty() and files[i] != "full") {
         spaces[i] = space_from_json(read_json_file(files[i]), game, i);
      }
   }
   return spaces;
}

Json strategy_json(const Strategy& s)
{
   return std::vector< double >(s.data(), s.data() + s.size());
}

}  // namespace

int main(int argc, char** argv)
{
   configure_logging();
   CLI::App app{"Restricted equilibria of stochastic games: values, certificates, sweeps and learning runs"};
   app.require_subcommand(1);

   std::string game_file;
   auto* validate_cmd = app.add_subcommand("validate", "Check a game file and report its class");
   validate_cmd->add_option("game", game_file, "game JSON")->required();

   auto* solve_cmd = app.add_subcommand("solve", "Solve a matrix game");
   std::string method;
   solve_cmd->add_option("method", method, "minimax | support-enum | restricted")
      ->required()
      ->check(CLI::IsMember({"minimax", "support-enum", "restricted"}));
   solve_cmd->add_option("game", game_file, "game JSON")->required();
   std::vector< std::string > space_files(kMaxSpaceOptions);
   for(std::size_t i = 0; i < kMaxSpaceOptions; ++i) {
      solve_cmd->add_option("--space-" + std::to_string(i), space_files[i], "space JSON of player " + std::to_string(i));
   }

   auto* check_cmd = app.add_subcommand("check", "Certify a joint policy as a (restricted) equilibrium");
   std::string policy_file;
   std::vector< std::string > spaces_list;
   double eps = 1e-9;
   check_cmd->add_option("--game", game_file, "game JSON")->required();
   check_cmd->add_option("--policy", policy_file, "joint policy JSON")->required();
   check_cmd->add_option("--spaces", spaces_list, "one space JSON per player ('full' for the full space)");
   check_cmd->add_option("--eps", eps, "epsilon");

   auto* sweep_cmd = app.add_subcommand("sweep", "Grid search for restricted equilibria");
   double resolution = 0.01;
   std::string out_file;
   sweep_cmd->add_option("--game", game_file, "game JSON")->required();
   sweep_cmd->add_option("--spaces", spaces_list, "one space JSON per player ('full' for the full space)");
   sweep_cmd->add_option("--resolution", resolution, "grid step")->check(CLI::Range(1e-4, 1.0));
   sweep_cmd->add_option("--eps", eps, "epsilon");
   sweep_cmd->add_option("--out", out_file, "CSV with one row per grid point");

   auto* learn_cmd = app.add_subcommand("learn", "Self-play with WoLF-PHC or Q-learning");
   std::string algo = "wolf-phc";
   std::string config_file;
   std::uint64_t iters = 1000000;
   std::uint64_t seed = 1;
   learn_cmd->add_option("--game", game_file, "game JSON")->required();
   learn_cmd->add_option("--algo", algo, "wolf-phc | q")->check(CLI::IsMember({"wolf-phc", "q"}));
   learn_cmd->add_option("--config", config_file, "learner config JSON");
   learn_cmd->add_option("--spaces", spaces_list, "hull space per player ('full' for unrestricted)");
   learn_cmd->add_option("--iters", iters, "iterations");
   learn_cmd->add_option("--seed", seed, "random seed");
   learn_cmd->add_option("--out", out_file, "trajectory CSV");

   auto* repro_cmd = app.add_subcommand("reproduce", "Run a named experiment and write its report files");
   std::string name;
   std::string out_dir = "out";
   repro_cmd->add_option("name", name, "experiment name")->required()->check(CLI::IsMember(experiment_names()));
   repro_cmd->add_option("--seed", seed, "random seed");
   repro_cmd->add_option("--iters", iters, "iterations");
   repro_cmd->add_option("--out", out_dir, "output directory");

   try {
      app.parse(argc, argv);
   } catch(const CLI::ParseError& e) {
      int code = app.exit(e);
      return code == 0 ? kOk : kMalformed;
   }

   try {
      if(*validate_cmd) {
         auto doc = read_json_file(game_file);
         StochasticGame game;
         try {
            game = game_from_json(doc);
         } catch(const ParseError& e) {
            print({{"valid", false}, {"violations", {e.what()}}});
            return kMalformed;
         }
         auto cls = classify(game);
         print(
            {{"valid", true},
             {"violations", Json::array()},
             {"ergodic", check_ergodic(game)},
             {"zero_sum", cls.zero_sum},
             {"no_control", cls.no_control},
             {"single_controller", cls.single_controller},
             {"team", cls.team}});
         return kOk;
      }
      if(*solve_cmd) {
         auto game = load_game(game_file);
         if(method == "minimax") {
            auto mm = minimax_zero_sum_matrix(game);
            print({{"value", mm.value}, {"row", strategy_json(mm.row)}, {"col", strategy_json(mm.col)}});
         } else if(method == "support-enum") {
            auto se = support_enumeration_bimatrix(game);
            Json list = Json::array();
            for(const auto& e : se.equilibria) {
               list.push_back(
                  {{"row", strategy_json(e.row)},
                   {"col", strategy_json(e.col)},
                   {"row_value", e.row_value},
                   {"col_value", e.col_value}});
            }
            print({{"equilibria", list}, {"degenerate", se.degenerate}});
         } else {
            std::vector< std::string > files(space_files.begin(), space_files.begin() + long(game.num_players()));
            auto spaces = load_spaces(game, files);
            auto eq = restricted_equilibrium_via_implicit(game, spaces);
            print(
               {{"value", eq.value},
                {"policy", joint_policy_to_json(game, eq.explicit_joint)},
                {"certificate", certificate_to_json(game, eq.certificate)}});
         }
         return kOk;
      }
      if(*check_cmd) {
         auto game = load_game(game_file);
         auto joint = joint_policy_from_json(read_json_file(policy_file), game);
         auto cert = check_equilibrium(game, joint, load_spaces(game, spaces_list), eps);
         print(certificate_to_json(game, cert));
         return kOk;
      }
      if(*sweep_cmd) {
         auto game = load_game(game_file);
         auto result = sweep_existence(game, load_spaces(game, spaces_list), resolution, eps);
         if(not out_file.empty()) {
            std::ofstream out(out_file);
            write_sweep_csv(out, result);
         }
         print(
            {{"min_max_gap", result.min_max_gap},
             {"argmin_params", result.argmin_params},
             {"argmin", joint_policy_to_json(game, result.argmin)},
             {"refinement_bound", result.refinement_bound},
             {"margin", result.margin},
             {"epsilon", result.epsilon},
             {"resolution", result.resolution},
             {"no_equilibrium_found", result.no_equilibrium_found}});
         return kOk;
      }
      if(*learn_cmd) {
         auto game = load_game(game_file);
         WolfPhcConfig config;
         if(not config_file.empty()) {
            config = config_from_json(read_json_file(config_file));
         }
         auto spaces = load_spaces(game, spaces_list);
         std::vector< PlayerSetup > setups(game.num_players());
         for(std::size_t i = 0; i < setups.size(); ++i) {
            setups[i].config = config;
            setups[i].algorithm = algo == "q" ? Algorithm::q_learning : Algorithm::wolf_phc;
            if(i < spaces_list.size() and not std::holds_alternative< FullSpace >(spaces[i].variant())) {
               setups[i].space = spaces[i];
            }
         }
         auto run = self_play(game, setups, iters, seed);
         if(not out_file.empty()) {
            std::ofstream out(out_file);
            write_trajectory_csv(out, run.log);
         }
         Json players = Json::array();
         for(std::size_t i = 0; i < run.learners.size(); ++i) {
            players.push_back(
               {{"final_policy", policy_to_json(game, run.learners[i].explicit_policy())},
                {"average_reward", run.total_reward[i] / double(std::max< std::uint64_t >(iters, 1))}});
         }
         print({{"players", players}, {"config", config_to_json(config)}});
         return kOk;
      }
      if(*repro_cmd) {
         spdlog::info("reproducing {} (seed {}, {} iterations) into {}", name, seed, iters, out_dir);
         print(reproduce({name, seed, iters, out_dir}));
         return kOk;
      }
   } catch(const ErgodicityError& e) {
      spdlog::error("{}", e.what());
      return kErgodicity;
   } catch(const UnsupportedError& e) {
      spdlog::error("{}", e.what());
      return kUnsupported;
   } catch(const FormulationError& e) {
      spdlog::error("{}", e.what());
      return kUnsupported;
   } catch(const ParseError& e) {
      spdlog::error("{}", e.what());
      return kMalformed;
   } catch(const std::invalid_argument& e) {
      spdlog::error("{}", e.what());
      return kMalformed;
   } catch(const std::exception& e) {
      spdlog::error("{}", e.what());
      return 1;
   }
   return kOk;
}
