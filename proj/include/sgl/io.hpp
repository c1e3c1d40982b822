#pragma once

#include "sgl/game.hpp"
#include "sgl/learners.hpp"
#include "sgl/policy_space.hpp"
#include "sgl/solvers.hpp"

#include <filesystem>
#include <iosfwd>
#include <json.hpp>
#include <stdexcept>
#include <string>

namespace sgl {

using Json = nlohmann::json;

/// Malformed input file or document.
class ParseError: public std::runtime_error {
  public:
   using std::runtime_error::runtime_error;
};

/// Probability rows read from files must sum to one within this tolerance;
/// they are renormalized after the check.
inline constexpr double kLoadTol = 1e-9;

Json game_to_json(const StochasticGame& game);
StochasticGame game_from_json(const Json& doc);

/// {"<state>": [p0, p1, ...], ...}
Json policy_to_json(const StochasticGame& game, const Policy& policy);
Policy policy_from_json(const Json& doc, const std::vector< std::string >& states, std::size_t num_actions);

/// {"players": [policy, ...]}
Json joint_policy_to_json(const StochasticGame& game, const JointPolicy& joint);
JointPolicy joint_policy_from_json(const Json& doc, const StochasticGame& game);

Json space_to_json(const StochasticGame& game, const RestrictedPolicySpace& space);
RestrictedPolicySpace space_from_json(const Json& doc, const StochasticGame& game, std::size_t player);

/// {"gaps": [...], "epsilon": e, "verdict": b, "policy": {"players": [...]}}
Json certificate_to_json(const StochasticGame& game, const EquilibriumCertificate& cert);

Json config_to_json(const WolfPhcConfig& config);
WolfPhcConfig config_from_json(const Json& doc);

/// One row per grid point: parameter columns p0, p1, ... then max_gap.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

/// iteration, player, state, action_or_generator_probs, explicit_policy_probs, inst_reward, avg_reward.
void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& doc);

}  // namespace sgl
