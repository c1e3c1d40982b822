#include "sgl/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace sgl {

namespace {

std::string joint_key(const std::vector< std::size_t >& profile)
{
   std::string key;
   for(std::size_t i = 0; i < profile.size(); ++i) {
      if(i) {
         key += ',';
      }
      key += std::to_string(profile[i]);
   }
   return key;
}

const Json& field(const Json& doc, const char* name)
{
   if(not doc.is_object() or not doc.contains(name)) {
      throw ParseError(std::string("missing field '") + name + "'");
   }
   return doc.at(name);
}

double number(const Json& v, const std::string& what)
{
   if(not v.is_number()) {
      throw ParseError(what + " must be a number");
   }
   double x = v.get< double >();
   if(not std::isfinite(x)) {
      throw ParseError(what + " must be finite");
   }
   return x;
}

std::size_t index_of(const std::vector< std::string >& names, const std::string& name, const std::string& what)
{
   for(std::size_t k = 0; k < names.size(); ++k) {
      if(names[k] == name) {
         return k;
      }
   }
   throw ParseError("unknown " + what + " '" + name + "'");
}

Strategy probability_row(const Json& v, std::size_t size, const std::string& what)
{
   if(not v.is_array() or v.size() != size) {
      throw ParseError(what + " must be an array of " + std::to_string(size) + " probabilities");
   }
   Strategy p(static_cast< Eigen::Index >(size));
   for(std::size_t k = 0; k < size; ++k) {
      p[Eigen::Index(k)] = number(v[k], what);
   }
   if(p.minCoeff() < -kLoadTol or std::abs(p.sum() - 1.0) > kLoadTol) {
      throw ParseError(what + " is not a probability vector");
   }
   p = p.cwiseMax(0.0);
   return p / p.sum();
}

Json strategy_json(const Strategy& p)
{
   Json out = Json::array();
   for(double x : p) {
      out.push_back(x);
   }
   return out;
}

Json schedule_json(const Schedule& s)
{
   return {{"numerator", s.numerator}, {"offset", s.offset}, {"divisor", s.divisor}};
}

Schedule schedule_from(const Json& doc, const char* name, Schedule fallback)
{
   if(not doc.contains(name)) {
      return fallback;
   }
   const auto& s = doc.at(name);
   Schedule out = fallback;
   out.numerator = number(field(s, "numerator"), std::string(name) + ".numerator");
   out.offset = number(field(s, "offset"), std::string(name) + ".offset");
   out.divisor = number(field(s, "divisor"), std::string(name) + ".divisor");
   return out;
}

std::string joined(const std::vector< double >& v)
{
   std::ostringstream out;
   out.precision(17);
   for(std::size_t k = 0; k < v.size(); ++k) {
      if(k) {
         out << ';';
      }
      out << v[k];
   }
   return out.str();
}

}  // namespace

Json game_to_json(const StochasticGame& game)
{
   Json doc;
   doc["players"] = game.num_players();
   doc["states"] = game.states;
   doc["actions"] = game.actions;
   doc["initial_state"] = game.states[game.initial_state];
   if(const auto* d = std::get_if< Discounted >(&game.formulation)) {
      doc["formulation"] = {{"discounted", d->gamma}};
   } else {
      doc["formulation"] = "average";
   }
   Json transitions = Json::object();
   Json rewards = Json::array();
   for(std::size_t i = 0; i < game.num_players(); ++i) {
      rewards.push_back(Json::object());
   }
   for(std::size_t s = 0; s < game.num_states(); ++s) {
      Json per_state = Json::object();
      for(std::size_t j = 0; j < game.num_joint_actions(); ++j) {
         const auto key = joint_key(game.joint_profile(j));
         Json row = Json::object();
         for(std::size_t t = 0; t < game.num_states(); ++t) {
            double p = game.transition[s](Eigen::Index(j), Eigen::Index(t));
            if(p != 0.0) {
               row[game.states[t]] = p;
            }
         }
         per_state[key] = row;
         for(std::size_t i = 0; i < game.num_players(); ++i) {
            rewards[i][game.states[s]][key] = game.rewards[i][s][Eigen::Index(j)];
         }
      }
      transitions[game.states[s]] = per_state;
   }
   doc["transitions"] = transitions;
   doc["rewards"] = rewards;
   return doc;
}

StochasticGame game_from_json(const Json& doc)
{
   try {
      StochasticGame game;
      const auto players = field(doc, "players").get< std::size_t >();
      game.states = field(doc, "states").get< std::vector< std::string > >();
      game.actions = field(doc, "actions").get< std::vector< std::vector< std::string > > >();
      if(players == 0 or game.actions.size() != players) {
         throw ParseError("'actions' must list one action set per player");
      }
      if(game.states.empty()) {
         throw ParseError("'states' must not be empty");
      }
      for(const auto& a : game.actions) {
         if(a.empty()) {
            throw ParseError("every player needs at least one action");
         }
      }
      game.initial_state = index_of(game.states, field(doc, "initial_state").get< std::string >(), "initial state");
      const auto& f = field(doc, "formulation");
      if(f.is_string() and f.get< std::string >() == "average") {
         game.formulation = Average{};
      } else if(f.is_object() and f.contains("discounted")) {
         double gamma = number(f.at("discounted"), "discount factor");
         if(not(gamma > 0.0 and gamma < 1.0)) {
            throw ParseError("discount factor must lie in (0, 1)");
         }
         game.formulation = Discounted{gamma};
      } else {
         throw ParseError("'formulation' must be \"average\" or {\"discounted\": gamma}");
      }

      const auto ns = game.num_states();
      const auto nj = game.num_joint_actions();
      const auto& transitions = field(doc, "transitions");
      const auto& rewards = field(doc, "rewards");
      if(not rewards.is_array() or rewards.size() != players) {
         throw ParseError("'rewards' must hold one table per player");
      }
      game.rewards.assign(players, std::vector< Eigen::VectorXd >(ns));
      for(std::size_t s = 0; s < ns; ++s) {
         const auto& name = game.states[s];
         if(not transitions.contains(name)) {
            throw ParseError("no transitions for state '" + name + "'");
         }
         Eigen::MatrixXd t = Eigen::MatrixXd::Zero(Eigen::Index(nj), Eigen::Index(ns));
         for(std::size_t j = 0; j < nj; ++j) {
            const auto key = joint_key(game.joint_profile(j));
            const std::string where = "state '" + name + "', joint action (" + key + ")";
            if(not transitions.at(name).contains(key)) {
               throw ParseError("no transition for " + where);
            }
            for(const auto& [next, p] : transitions.at(name).at(key).items()) {
               t(Eigen::Index(j), Eigen::Index(index_of(game.states, next, "state"))) =
                  number(p, "transition probability");
            }
            Eigen::VectorXd row = t.row(Eigen::Index(j)).transpose();
            if(row.minCoeff() < -kLoadTol or std::abs(row.sum() - 1.0) > kLoadTol) {
               throw ParseError("transition at " + where + " is not a probability vector");
            }
            row = row.cwiseMax(0.0);
            t.row(Eigen::Index(j)) = (row / row.sum()).transpose();
         }
         game.transition.push_back(std::move(t));
         for(std::size_t i = 0; i < players; ++i) {
            Eigen::VectorXd r(static_cast< Eigen::Index >(nj));
            for(std::size_t j = 0; j < nj; ++j) {
               const auto key = joint_key(game.joint_profile(j));
               if(not rewards[i].contains(name) or not rewards[i].at(name).contains(key)) {
                  throw ParseError(
                     "no reward for player " + std::to_string(i) + " at state '" + name + "', joint action (" + key
                     + ")");
               }
               r[Eigen::Index(j)] = number(rewards[i].at(name).at(key), "reward");
            }
            game.rewards[i][s] = std::move(r);
         }
      }
      auto report = validate(game);
      if(not report.empty()) {
         throw ParseError(report.front());
      }
      return game;
   } catch(const Json::exception& e) {
      throw ParseError(std::string("malformed game document: ") + e.what());
   }
}

Json policy_to_json(const StochasticGame& game, const Policy& policy)
{
   Json doc = Json::object();
   for(std::size_t s = 0; s < policy.size(); ++s) {
      doc[game.states[s]] = strategy_json(policy[s]);
   }
   return doc;
}

Policy policy_from_json(const Json& doc, const std::vector< std::string >& states, std::size_t num_actions)
{
   if(not doc.is_object()) {
      throw ParseError("a policy must be an object keyed by state");
   }
   for(const auto& [key, value] : doc.items()) {
      index_of(states, key, "state");
   }
   Policy p;
   for(const auto& s : states) {
      if(not doc.contains(s)) {
         throw ParseError("policy has no strategy for state '" + s + "'");
      }
      p.push_back(probability_row(doc.at(s), num_actions, "strategy at state '" + s + "'"));
   }
   return p;
}

Json joint_policy_to_json(const StochasticGame& game, const JointPolicy& joint)
{
   Json players = Json::array();
   for(const auto& p : joint) {
      players.push_back(policy_to_json(game, p));
   }
   return {{"players", players}};
}

JointPolicy joint_policy_from_json(const Json& doc, const StochasticGame& game)
{
   const auto& players = field(doc, "players");
   if(not players.is_array() or players.size() != game.num_players()) {
      throw ParseError("'players' must hold one policy per player");
   }
   JointPolicy joint;
   for(std::size_t i = 0; i < players.size(); ++i) {
      joint.push_back(policy_from_json(players[i], game.states, game.num_actions(i)));
   }
   return joint;
}

Json space_to_json(const StochasticGame& game, const RestrictedPolicySpace& space)
{
   return std::visit(
      [&](const auto& v) -> Json {
         using T = std::decay_t< decltype(v) >;
         if constexpr(std::is_same_v< T, FullSpace >) {
            return {{"variant", "full"}};
         } else if constexpr(std::is_same_v< T, SingletonSpace >) {
            return {{"variant", "singleton"}, {"policy", policy_to_json(game, v.policy)}};
         } else if constexpr(std::is_same_v< T, ConvexHullGlobal >) {
            Json gens = Json::array();
            for(const auto& g : v.generators) {
               gens.push_back(policy_to_json(game, g));
            }
            return {{"variant", "convex_hull_global"}, {"generators", gens}};
         } else if constexpr(std::is_same_v< T, ConvexHullStatewise >) {
            Json gens = Json::object();
            for(std::size_t s = 0; s < v.generators.size(); ++s) {
               Json list = Json::array();
               for(const auto& g : v.generators[s]) {
                  list.push_back(strategy_json(g));
               }
               gens[game.states[s]] = list;
            }
            return {{"variant", "convex_hull_statewise"}, {"generators", gens}};
         } else if constexpr(std::is_same_v< T, StateUniform >) {
            return {{"variant", "state_uniform"}};
         } else if constexpr(std::is_same_v< T, FixedCoordinates >) {
            Json pins = Json::array();
            for(const auto& pin : v.pins) {
               pins.push_back(Json::array({game.states[pin.state], pin.action, pin.probability}));
            }
            return {{"variant", "fixed_coordinates"}, {"pins", pins}};
         } else {
            return {{"variant", "deterministic"}};
         }
      },
      space.variant());
}

RestrictedPolicySpace space_from_json(const Json& doc, const StochasticGame& game, std::size_t player)
{
   if(player >= game.num_players()) {
      throw ParseError("space given for a player the game does not have");
   }
   try {
      const auto ns = game.num_states();
      const auto na = game.num_actions(player);
      const auto variant = field(doc, "variant").get< std::string >();
      if(variant == "full") {
         return RestrictedPolicySpace::full(ns, na);
      }
      if(variant == "singleton") {
         return RestrictedPolicySpace::singleton(policy_from_json(field(doc, "policy"), game.states, na));
      }
      if(variant == "convex_hull_global") {
         std::vector< Policy > gens;
         for(const auto& g : field(doc, "generators")) {
            gens.push_back(policy_from_json(g, game.states, na));
         }
         if(gens.empty()) {
            throw ParseError("a hull needs at least one generator");
         }
         return RestrictedPolicySpace::hull_global(std::move(gens));
      }
      if(variant == "convex_hull_statewise") {
         const auto& gens = field(doc, "generators");
         std::vector< std::vector< Strategy > > per_state;
         for(const auto& s : game.states) {
            if(not gens.contains(s) or not gens.at(s).is_array() or gens.at(s).empty()) {
               throw ParseError("statewise hull has no generators at state '" + s + "'");
            }
            std::vector< Strategy > list;
            for(const auto& g : gens.at(s)) {
               list.push_back(probability_row(g, na, "generator at state '" + s + "'"));
            }
            per_state.push_back(std::move(list));
         }
         return RestrictedPolicySpace::hull_statewise(std::move(per_state));
      }
      if(variant == "state_uniform") {
         return RestrictedPolicySpace::state_uniform(ns, na);
      }
      if(variant == "fixed_coordinates") {
         std::vector< Pin > pins;
         for(const auto& p : field(doc, "pins")) {
            if(not p.is_array() or p.size() != 3) {
               throw ParseError("a pin must be [state, action index, probability]");
            }
            Pin pin{
               index_of(game.states, p[0].get< std::string >(), "state"),
               p[1].get< std::size_t >(),
               number(p[2], "pin probability")};
            if(pin.action >= na) {
               throw ParseError("pin action index out of range");
            }
            pins.push_back(pin);
         }
         return RestrictedPolicySpace::fixed_coordinates(ns, na, std::move(pins));
      }
      if(variant == "deterministic") {
         return RestrictedPolicySpace::deterministic(ns, na);
      }
      throw ParseError("unknown space variant '" + variant + "'");
   } catch(const Json::exception& e) {
      throw ParseError(std::string("malformed space document: ") + e.what());
   } catch(const ParseError&) {
      throw;
   } catch(const std::invalid_argument& e) {
      throw ParseError(std::string("invalid space: ") + e.what());
   }
}

Json certificate_to_json(const StochasticGame& game, const EquilibriumCertificate& cert)
{
   return {
      {"gaps", cert.gaps},
      {"epsilon", cert.epsilon},
      {"verdict", cert.verdict},
      {"policy", joint_policy_to_json(game, cert.policy)}};
}

Json config_to_json(const WolfPhcConfig& config)
{
   return {
      {"alpha", schedule_json(config.alpha)},
      {"delta_win", schedule_json(config.delta_win)},
      {"delta_lose_ratio", config.delta_lose_ratio},
      {"explore", schedule_json(config.explore)},
      {"gamma", config.gamma}};
}

WolfPhcConfig config_from_json(const Json& doc)
{
   if(not doc.is_object()) {
      throw ParseError("learner config must be an object");
   }
   try {
      WolfPhcConfig c;
      c.alpha = schedule_from(doc, "alpha", c.alpha);
      c.delta_win = schedule_from(doc, "delta_win", c.delta_win);
      c.explore = schedule_from(doc, "explore", c.explore);
      if(doc.contains("delta_lose_ratio")) {
         c.delta_lose_ratio = number(doc.at("delta_lose_ratio"), "delta_lose_ratio");
      }
      if(doc.contains("gamma")) {
         c.gamma = number(doc.at("gamma"), "gamma");
      }
      c.validate();
      return c;
   } catch(const std::invalid_argument& e) {
      throw ParseError(std::string("invalid learner config: ") + e.what());
   }
}

void write_sweep_csv(std::ostream& out, const SweepResult& result)
{
   const auto dims = result.rows.empty() ? 0 : result.rows.front().params.size();
   for(std::size_t d = 0; d < dims; ++d) {
      out << 'p' << d << ',';
   }
   out << "max_gap\n";
   out.precision(17);
   for(const auto& row : result.rows) {
      for(double p : row.params) {
         out << p << ',';
      }
      out << row.max_gap << '\n';
   }
}

void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log)
{
   out << "iteration,player,state,action_or_generator_probs,explicit_policy_probs,inst_reward,avg_reward\n";
   out.precision(17);
   for(const auto& row : log.rows) {
      out << row.iteration << ',' << row.player << ',' << row.state << ',' << joined(row.choice_probs) << ','
          << joined(row.explicit_probs) << ',' << row.inst_reward << ',' << row.avg_reward << '\n';
   }
}

Json read_json_file(const std::filesystem::path& path)
{
   std::ifstream in(path);
   if(not in) {
      throw ParseError("cannot open '" + path.string() + "'");
   }
   try {
      return Json::parse(in);
   } catch(const Json::parse_error& e) {
      throw ParseError("'" + path.string() + "' is not valid JSON: " + e.what());
   }
}

void write_json_file(const std::filesystem::path& path, const Json& doc)
{
   std::ofstream out(path);
   if(not out) {
      throw std::runtime_error("cannot write '" + path.string() + "'");
   }
   out << doc.dump(2) << '\n';
}

}  // namespace sgl
