#pragma once

#include "sgl/game.hpp"

#include <random>
#include <string_view>
#include <variant>
#include <vector>

namespace sgl {

inline constexpr double kMembershipTol = 1e-9;

struct FullSpace {};
struct SingletonSpace {
   Policy policy;
};
/// Mixtures of whole policies with one weight vector shared by every state.
struct ConvexHullGlobal {
   std::vector< Policy > generators;
};
/// Independent mixtures per state: generators[s] lists the strategies available at s.
struct ConvexHullStatewise {
   std::vector< std::vector< Strategy > > generators;
};
/// Every state plays the same strategy.
struct StateUniform {};
struct Pin {
   std::size_t state;
   std::size_t action;
   double probability;
};
/// Pinned action probabilities; the remaining mass at each state is free.
struct FixedCoordinates {
   std::vector< Pin > pins;
};
/// All pure policies; enumerated on demand.
struct DeterministicOnly {};

using SpaceVariant = std::variant<
   FullSpace,
   SingletonSpace,
   ConvexHullGlobal,
   ConvexHullStatewise,
   StateUniform,
   FixedCoordinates,
   DeterministicOnly >;

/// A policy together with the coordinates that produced it in a sweep grid.
struct GridPoint {
   std::vector< double > params;
   Policy policy;
};

/// Non-empty compact subset of one player's policies.
class RestrictedPolicySpace {
  public:
   RestrictedPolicySpace(std::size_t num_states, std::size_t num_actions, SpaceVariant variant);

   static RestrictedPolicySpace full(std::size_t num_states, std::size_t num_actions);
   static RestrictedPolicySpace singleton(Policy policy);
   static RestrictedPolicySpace hull_global(std::vector< Policy > generators);
   static RestrictedPolicySpace hull_statewise(std::vector< std::vector< Strategy > > generators);
   static RestrictedPolicySpace state_uniform(std::size_t num_states, std::size_t num_actions);
   static RestrictedPolicySpace fixed_coordinates(
      std::size_t num_states,
      std::size_t num_actions,
      std::vector< Pin > pins);
   static RestrictedPolicySpace deterministic(std::size_t num_states, std::size_t num_actions);

   std::size_t num_states() const { return num_states_; }
   std::size_t num_actions() const { return num_actions_; }
   const SpaceVariant& variant() const { return variant_; }
   std::string_view kind() const;

   bool contains(const Policy& policy, double tol = kMembershipTol) const;

   /// Euclidean (Frobenius over all states) projection. Throws UnsupportedError
   /// for DeterministicOnly.
   Policy project(const Policy& policy) const;

   bool is_convex() const;
   /// Cartesian product of per-state convex sets.
   bool is_statewise_convex() const;

   Policy witness() const;
   Policy sample(std::mt19937_64& rng) const;

   /// Per-state vertex strategies whose product of hulls is the space (or, for
   /// DeterministicOnly, whose product is the space's element set). Only
   /// meaningful when is_statewise_convex() or the space is DeterministicOnly.
   std::vector< std::vector< Strategy > > statewise_vertices() const;

   /// Policies whose single-weight mixtures span the space. Defined for
   /// ConvexHullGlobal, StateUniform, Singleton and any space over one state.
   std::vector< Policy > global_generators() const;
   bool has_global_generators() const;

   /// Number of scalar parameters of the sweep parameterization.
   std::size_t parameter_dimension() const;
   /// Exhaustive grid of members with weight step `resolution`.
   std::vector< GridPoint > grid(double resolution) const;

   /// Weights w on the simplex with sum_k w_k generators_k closest (in max norm)
   /// to `policy`, together with that residual.
   std::pair< Eigen::VectorXd, double > hull_weights(const Policy& policy) const;

   /// |A|^|S| for DeterministicOnly, as a double so that it never overflows.
   double pure_policy_count() const;

  private:
   std::size_t num_states_;
   std::size_t num_actions_;
   SpaceVariant variant_;
};

/// Euclidean projection of v onto { x >= 0, sum x = mass }.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v, double mass = 1.0);

/// argmin_{w in simplex} |G w - target|_2 by a primal active-set method.
Eigen::VectorXd simplex_least_squares(const Eigen::MatrixXd& generators, const Eigen::VectorXd& target);

/// All weight vectors with `parts` entries that are multiples of 1/steps and sum to one.
std::vector< Eigen::VectorXd > simplex_grid(std::size_t parts, std::size_t steps);

/// Mixture sum_k weights_k generators_k.
Policy mix_policies(const std::vector< Policy >& generators, const Eigen::VectorXd& weights);

/// Per-state blend alpha(s) x1(s) + (1 - alpha(s)) x2(s).
Policy statewise_blend(const Policy& x1, const Policy& x2, const std::vector< double >& alpha);

/// Samples midpoints of random member pairs; false on any midpoint outside the space.
bool convexity_probe(const RestrictedPolicySpace& space, std::size_t trials, std::uint64_t seed);

}  // namespace sgl
