#pragma once

#include "sgl/io.hpp"
#include "sgl/learners.hpp"
#include "sgl/policy_space.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sgl {

/// Column hull of restricted RPS: s1 = (1/2, 1/2, 0), s2 = (0, 1/2, 1/2).
RestrictedPolicySpace rps_column_hull();

/// Row hull of restricted Blotto: two armies placed by a base split of (2,0),
/// (1,1) or (0,2), the other two placed independently and uniformly.
RestrictedPolicySpace blotto_row_hull();

const std::vector< std::string >& experiment_names();

/// Mean of the logged policies over the final `fraction` of checkpoints.
/// `explicit_form` selects primitive-action probabilities over generator weights.
Strategy tail_mean_policy(const std::vector< TrajectoryRow >& rows, double fraction, bool explicit_form = true);

/// Average reward over the iterations covered by the final `fraction` of checkpoints.
double tail_average_reward(const std::vector< TrajectoryRow >& rows, double fraction);

/// First checkpoint after which the joint explicit policy never moves more
/// than `threshold` (max over players, L1) across any `window` iterations.
/// nullopt when the run never settles.
std::optional< std::uint64_t > stabilization_iteration(
   const TrajectoryLog& log,
   std::uint64_t window = 10000,
   double threshold = 0.01);

struct ReproductionSpec {
   std::string name;
   std::uint64_t seed = 1;
   std::uint64_t iterations = 1000000;
   std::filesystem::path out_dir;
};

/// Runs one named experiment, writes its files into spec.out_dir and returns
/// the summary document (also written as summary.json).
Json reproduce(const ReproductionSpec& spec);

/// The learning part of a named learning experiment, without writing files.
SelfPlayResult run_learning_experiment(const std::string& name, std::uint64_t seed, std::uint64_t iterations);

}  // namespace sgl
