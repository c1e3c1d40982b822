#include "sgl/policy_space.hpp"

#include "sgl/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sgl {

namespace {

template < class... Ts >
struct overloaded: Ts... {
   using Ts::operator()...;
};
template < class... Ts >
overloaded(Ts...) -> overloaded< Ts... >;

Eigen::VectorXd flatten(const Policy& policy)
{
   Eigen::Index total = 0;
   for(const auto& row : policy) {
      total += row.size();
   }
   Eigen::VectorXd out(total);
   Eigen::Index offset = 0;
   for(const auto& row : policy) {
      out.segment(offset, row.size()) = row;
      offset += row.size();
   }
   return out;
}

Eigen::MatrixXd generator_matrix(const std::vector< Policy >& generators)
{
   Eigen::MatrixXd g(flatten(generators.front()).size(), Eigen::Index(generators.size()));
   for(std::size_t k = 0; k < generators.size(); ++k) {
      g.col(Eigen::Index(k)) = flatten(generators[k]);
   }
   return g;
}

Eigen::MatrixXd strategy_matrix(const std::vector< Strategy >& strategies)
{
   Eigen::MatrixXd g(strategies.front().size(), Eigen::Index(strategies.size()));
   for(std::size_t k = 0; k < strategies.size(); ++k) {
      g.col(Eigen::Index(k)) = strategies[k];
   }
   return g;
}

/// min_w |G w - target|_inf over the simplex, as an LP.
std::pair< Eigen::VectorXd, double > max_norm_weights(const Eigen::MatrixXd& g, const Eigen::VectorXd& target)
{
   const auto d = g.rows();
   const auto k = g.cols();
   // Variables: w (k), t.
   Eigen::VectorXd c = Eigen::VectorXd::Zero(k + 1);
   c[k] = -1.0;
   Eigen::MatrixXd a_ub(2 * d, k + 1);
   Eigen::VectorXd b_ub(2 * d);
   a_ub.topLeftCorner(d, k) = g;
   a_ub.topRightCorner(d, 1).setConstant(-1.0);
   a_ub.bottomLeftCorner(d, k) = -g;
   a_ub.bottomRightCorner(d, 1).setConstant(-1.0);
   b_ub << target, -target;
   Eigen::MatrixXd a_eq = Eigen::MatrixXd::Zero(1, k + 1);
   a_eq.leftCols(k).setOnes();
   Eigen::VectorXd b_eq = Eigen::VectorXd::Ones(1);
   auto lp = solve_lp(c, a_ub, b_ub, a_eq, b_eq);
   if(lp.status != LpStatus::optimal) {
      throw std::logic_error("hull weight recovery LP failed");
   }
   Eigen::VectorXd w = lp.x.head(k);
   return {w, (g * w - target).cwiseAbs().maxCoeff()};
}

void enumerate_compositions(
   std::size_t parts,
   std::size_t remaining,
   std::vector< std::size_t >& current,
   std::vector< Eigen::VectorXd >& out,
   std::size_t steps)
{
   if(current.size() + 1 == parts) {
      current.push_back(remaining);
      Eigen::VectorXd w(static_cast< Eigen::Index >(parts));
      for(std::size_t k = 0; k < parts; ++k) {
         w[Eigen::Index(k)] = double(current[k]) / double(steps);
      }
      out.push_back(std::move(w));
      current.pop_back();
      return;
   }
   for(std::size_t take = remaining + 1; take-- > 0;) {
      current.push_back(take);
      enumerate_compositions(parts, remaining - take, current, out, steps);
      current.pop_back();
   }
}

Eigen::VectorXd dirichlet(std::size_t k, std::mt19937_64& rng)
{
   std::exponential_distribution< double > expo(1.0);
   Eigen::VectorXd w(static_cast< Eigen::Index >(k));
   for(auto& x : w) {
      x = expo(rng);
   }
   return w / w.sum();
}

void check_strategy(const Strategy& s, std::size_t actions, const char* what)
{
   if(std::size_t(s.size()) != actions or not is_distribution(s, 1e-9)) {
      throw std::invalid_argument(std::string(what) + " is not a probability vector over the actions");
   }
}

}  // namespace

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v, double mass)
{
   const auto n = v.size();
   if(n == 0) {
      return v;
   }
   std::vector< double > sorted(v.data(), v.data() + n);
   std::sort(sorted.begin(), sorted.end(), std::greater<>());
   double cumulative = 0.0;
   double theta = 0.0;
   for(Eigen::Index k = 0; k < n; ++k) {
      cumulative += sorted[std::size_t(k)];
      double candidate = (cumulative - mass) / double(k + 1);
      if(sorted[std::size_t(k)] - candidate > 0.0) {
         theta = candidate;
      }
   }
   return (v.array() - theta).cwiseMax(0.0).matrix();
}

Eigen::VectorXd simplex_least_squares(const Eigen::MatrixXd& generators, const Eigen::VectorXd& target)
{
   const auto k = generators.cols();
   const Eigen::MatrixXd h = generators.transpose() * generators;
   const Eigen::VectorXd lin = generators.transpose() * target;
   const double scale = 1.0 + h.cwiseAbs().maxCoeff() + lin.cwiseAbs().maxCoeff();

   // Start from the closest single generator.
   Eigen::Index best = 0;
   double best_dist = std::numeric_limits< double >::infinity();
   for(Eigen::Index j = 0; j < k; ++j) {
      double dist = (generators.col(j) - target).squaredNorm();
      if(dist < best_dist - 1e-15) {
         best_dist = dist;
         best = j;
      }
   }
   Eigen::VectorXd w = Eigen::VectorXd::Zero(k);
   w[best] = 1.0;
   std::vector< bool > free(std::size_t(k), false);
   free[std::size_t(best)] = true;

   for(int iter = 0; iter < 200 * int(k) + 50; ++iter) {
      std::vector< Eigen::Index > idx;
      for(Eigen::Index j = 0; j < k; ++j) {
         if(free[std::size_t(j)]) {
            idx.push_back(j);
         }
      }
      const auto f = Eigen::Index(idx.size());
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(f + 1, f + 1);
      Eigen::VectorXd rhs(f + 1);
      for(Eigen::Index a = 0; a < f; ++a) {
         for(Eigen::Index b = 0; b < f; ++b) {
            kkt(a, b) = h(idx[std::size_t(a)], idx[std::size_t(b)]);
         }
         kkt(a, f) = 1.0;
         kkt(f, a) = 1.0;
         rhs[a] = lin[idx[std::size_t(a)]];
      }
      rhs[f] = 1.0;
      Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
      Eigen::VectorXd candidate = Eigen::VectorXd::Zero(k);
      for(Eigen::Index a = 0; a < f; ++a) {
         candidate[idx[std::size_t(a)]] = sol[a];
      }

      if(candidate.minCoeff() >= -1e-14) {
         w = candidate.cwiseMax(0.0);
         w /= w.sum();
         Eigen::VectorXd grad = h * w - lin;
         double level = 0.0;
         for(auto j : idx) {
            level += grad[j];
         }
         level /= double(f);
         Eigen::Index enter = -1;
         double most = -1e-12 * scale;
         for(Eigen::Index j = 0; j < k; ++j) {
            if(not free[std::size_t(j)] and grad[j] - level < most) {
               most = grad[j] - level;
               enter = j;
            }
         }
         if(enter < 0) {
            return w;
         }
         free[std::size_t(enter)] = true;
         continue;
      }

      // Step toward the candidate until a free weight hits zero.
      double step = 1.0;
      Eigen::Index blocking = -1;
      for(auto j : idx) {
         if(candidate[j] < 0.0) {
            double ratio = w[j] / (w[j] - candidate[j]);
            if(ratio < step) {
               step = ratio;
               blocking = j;
            }
         }
      }
      w += step * (candidate - w);
      if(blocking >= 0) {
         w[blocking] = 0.0;
         free[std::size_t(blocking)] = false;
      }
      w = w.cwiseMax(0.0);
      w /= w.sum();
   }
   return w;
}

std::vector< Eigen::VectorXd > simplex_grid(std::size_t parts, std::size_t steps)
{
   std::vector< Eigen::VectorXd > out;
   if(parts == 0) {
      return out;
   }
   std::vector< std::size_t > current;
   enumerate_compositions(parts, steps, current, out, steps);
   return out;
}

Policy mix_policies(const std::vector< Policy >& generators, const Eigen::VectorXd& weights)
{
   Policy out = generators.front();
   for(auto& row : out) {
      row.setZero();
   }
   for(std::size_t k = 0; k < generators.size(); ++k) {
      for(std::size_t s = 0; s < out.size(); ++s) {
         out[s] += weights[Eigen::Index(k)] * generators[k][s];
      }
   }
   return out;
}

Policy statewise_blend(const Policy& x1, const Policy& x2, const std::vector< double >& alpha)
{
   Policy out;
   for(std::size_t s = 0; s < x1.size(); ++s) {
      out.push_back(alpha[s] * x1[s] + (1.0 - alpha[s]) * x2[s]);
   }
   return out;
}

RestrictedPolicySpace::RestrictedPolicySpace(std::size_t num_states, std::size_t num_actions, SpaceVariant variant)
    : num_states_(num_states), num_actions_(num_actions), variant_(std::move(variant))
{
   if(num_states_ == 0 or num_actions_ == 0) {
      throw std::invalid_argument("policy space needs at least one state and one action");
   }
   std::visit(
      overloaded{
         [](const FullSpace&) {},
         [](const StateUniform&) {},
         [](const DeterministicOnly&) {},
         [this](const SingletonSpace& v) {
            if(v.policy.size() != num_states_) {
               throw std::invalid_argument("singleton policy does not cover every state");
            }
            for(const auto& row : v.policy) {
               check_strategy(row, num_actions_, "singleton strategy");
            }
         },
         [this](const ConvexHullGlobal& v) {
            if(v.generators.empty()) {
               throw std::invalid_argument("convex hull needs at least one generator");
            }
            for(const auto& g : v.generators) {
               if(g.size() != num_states_) {
                  throw std::invalid_argument("hull generator does not cover every state");
               }
               for(const auto& row : g) {
                  check_strategy(row, num_actions_, "hull generator");
               }
            }
         },
         [this](const ConvexHullStatewise& v) {
            if(v.generators.size() != num_states_) {
               throw std::invalid_argument("statewise hull does not cover every state");
            }
            for(const auto& per_state : v.generators) {
               if(per_state.empty()) {
                  throw std::invalid_argument("statewise hull has a state without generators");
               }
               for(const auto& row : per_state) {
                  check_strategy(row, num_actions_, "statewise hull generator");
               }
            }
         },
         [this](const FixedCoordinates& v) {
            std::vector< double > mass(num_states_, 0.0);
            std::vector< std::size_t > pinned(num_states_, 0);
            std::vector< std::vector< bool > > seen(num_states_, std::vector< bool >(num_actions_, false));
            for(const auto& pin : v.pins) {
               if(pin.state >= num_states_ or pin.action >= num_actions_) {
                  throw std::invalid_argument("pin refers to a state or action out of range");
               }
               if(not(pin.probability >= 0.0 and pin.probability <= 1.0)) {
                  throw std::invalid_argument("pinned probability must lie in [0, 1]");
               }
               if(seen[pin.state][pin.action]) {
                  throw std::invalid_argument("coordinate pinned twice");
               }
               seen[pin.state][pin.action] = true;
               mass[pin.state] += pin.probability;
               ++pinned[pin.state];
            }
            for(std::size_t s = 0; s < num_states_; ++s) {
               if(mass[s] > 1.0 + kStructuralTol) {
                  throw std::invalid_argument("pins at a state sum to more than one");
               }
               if(pinned[s] == num_actions_ and std::abs(mass[s] - 1.0) > kStructuralTol) {
                  throw std::invalid_argument("every action pinned but pins do not sum to one");
               }
            }
         },
      },
      variant_);
}

RestrictedPolicySpace RestrictedPolicySpace::full(std::size_t num_states, std::size_t num_actions)
{
   return {num_states, num_actions, FullSpace{}};
}

RestrictedPolicySpace RestrictedPolicySpace::singleton(Policy policy)
{
   if(policy.empty()) {
      throw std::invalid_argument("singleton policy is empty");
   }
   auto states = policy.size();
   auto actions = std::size_t(policy.front().size());
   return {states, actions, SingletonSpace{std::move(policy)}};
}

RestrictedPolicySpace RestrictedPolicySpace::hull_global(std::vector< Policy > generators)
{
   if(generators.empty() or generators.front().empty()) {
      throw std::invalid_argument("convex hull needs at least one generator");
   }
   auto states = generators.front().size();
   auto actions = std::size_t(generators.front().front().size());
   return {states, actions, ConvexHullGlobal{std::move(generators)}};
}

RestrictedPolicySpace RestrictedPolicySpace::hull_statewise(std::vector< std::vector< Strategy > > generators)
{
   if(generators.empty() or generators.front().empty()) {
      throw std::invalid_argument("statewise hull needs generators at every state");
   }
   auto states = generators.size();
   auto actions = std::size_t(generators.front().front().size());
   return {states, actions, ConvexHullStatewise{std::move(generators)}};
}

RestrictedPolicySpace RestrictedPolicySpace::state_uniform(std::size_t num_states, std::size_t num_actions)
{
   return {num_states, num_actions, StateUniform{}};
}

RestrictedPolicySpace RestrictedPolicySpace::fixed_coordinates(
   std::size_t num_states,
   std::size_t num_actions,
   std::vector< Pin > pins)
{
   return {num_states, num_actions, FixedCoordinates{std::move(pins)}};
}

RestrictedPolicySpace RestrictedPolicySpace::deterministic(std::size_t num_states, std::size_t num_actions)
{
   return {num_states, num_actions, DeterministicOnly{}};
}

std::string_view RestrictedPolicySpace::kind() const
{
   return std::visit(
      overloaded{
         [](const FullSpace&) { return std::string_view("full"); },
         [](const SingletonSpace&) { return std::string_view("singleton"); },
         [](const ConvexHullGlobal&) { return std::string_view("convex_hull_global"); },
         [](const ConvexHullStatewise&) { return std::string_view("convex_hull_statewise"); },
         [](const StateUniform&) { return std::string_view("state_uniform"); },
         [](const FixedCoordinates&) { return std::string_view("fixed_coordinates"); },
         [](const DeterministicOnly&) { return std::string_view("deterministic_only"); },
      },
      variant_);
}

bool RestrictedPolicySpace::contains(const Policy& policy, double tol) const
{
   if(policy.size() != num_states_) {
      return false;
   }
   for(const auto& row : policy) {
      if(std::size_t(row.size()) != num_actions_ or not is_distribution(row, tol)) {
         return false;
      }
   }
   return std::visit(
      overloaded{
         [](const FullSpace&) { return true; },
         [&](const SingletonSpace& v) { return max_abs_diff(v.policy, policy) <= tol; },
         [&](const ConvexHullGlobal& v) {
            return max_norm_weights(generator_matrix(v.generators), flatten(policy)).second <= tol;
         },
         [&](const ConvexHullStatewise& v) {
            for(std::size_t s = 0; s < num_states_; ++s) {
               if(max_norm_weights(strategy_matrix(v.generators[s]), policy[s]).second > tol) {
                  return false;
               }
            }
            return true;
         },
         [&](const StateUniform&) {
            for(std::size_t s = 1; s < num_states_; ++s) {
               if((policy[s] - policy[0]).cwiseAbs().maxCoeff() > tol) {
                  return false;
               }
            }
            return true;
         },
         [&](const FixedCoordinates& v) {
            for(const auto& pin : v.pins) {
               if(std::abs(policy[pin.state][Eigen::Index(pin.action)] - pin.probability) > tol) {
                  return false;
               }
            }
            return true;
         },
         [&](const DeterministicOnly&) {
            for(const auto& row : policy) {
               if(std::abs(row.maxCoeff() - 1.0) > tol) {
                  return false;
               }
            }
            return true;
         },
      },
      variant_);
}

Policy RestrictedPolicySpace::project(const Policy& policy) const
{
   if(policy.size() != num_states_) {
      throw DimensionError("policy does not cover every state of the space");
   }
   for(const auto& row : policy) {
      if(std::size_t(row.size()) != num_actions_) {
         throw DimensionError("strategy length does not match the space");
      }
   }
   return std::visit(
      overloaded{
         [&](const FullSpace&) {
            Policy out;
            for(const auto& row : policy) {
               out.push_back(project_to_simplex(row));
            }
            return out;
         },
         [&](const SingletonSpace& v) { return v.policy; },
         [&](const ConvexHullGlobal& v) {
            auto w = simplex_least_squares(generator_matrix(v.generators), flatten(policy));
            return mix_policies(v.generators, w);
         },
         [&](const ConvexHullStatewise& v) {
            Policy out;
            for(std::size_t s = 0; s < num_states_; ++s) {
               auto g = strategy_matrix(v.generators[s]);
               out.push_back(g * simplex_least_squares(g, policy[s]));
            }
            return out;
         },
         [&](const StateUniform&) {
            Strategy mean = Strategy::Zero(Eigen::Index(num_actions_));
            for(const auto& row : policy) {
               mean += row;
            }
            mean /= double(num_states_);
            return Policy(num_states_, project_to_simplex(mean));
         },
         [&](const FixedCoordinates& v) {
            Policy out;
            for(std::size_t s = 0; s < num_states_; ++s) {
               std::vector< bool > pinned(num_actions_, false);
               Strategy row = Strategy::Zero(Eigen::Index(num_actions_));
               double mass = 1.0;
               for(const auto& pin : v.pins) {
                  if(pin.state == s) {
                     pinned[pin.action] = true;
                     row[Eigen::Index(pin.action)] = pin.probability;
                     mass -= pin.probability;
                  }
               }
               std::vector< Eigen::Index > free_idx;
               for(std::size_t a = 0; a < num_actions_; ++a) {
                  if(not pinned[a]) {
                     free_idx.push_back(Eigen::Index(a));
                  }
               }
               if(not free_idx.empty()) {
                  Eigen::VectorXd free_part(static_cast< Eigen::Index >(free_idx.size()));
                  for(std::size_t k = 0; k < free_idx.size(); ++k) {
                     free_part[Eigen::Index(k)] = policy[s][free_idx[k]];
                  }
                  free_part = project_to_simplex(free_part, std::max(mass, 0.0));
                  for(std::size_t k = 0; k < free_idx.size(); ++k) {
                     row[free_idx[k]] = free_part[Eigen::Index(k)];
                  }
               }
               out.push_back(std::move(row));
            }
            return out;
         },
         [&](const DeterministicOnly&) -> Policy {
            throw UnsupportedError("projection onto a non-convex space is not supported");
         },
      },
      variant_);
}

bool RestrictedPolicySpace::is_convex() const
{
   if(std::holds_alternative< DeterministicOnly >(variant_)) {
      return num_actions_ == 1;
   }
   return true;
}

bool RestrictedPolicySpace::is_statewise_convex() const
{
   return std::visit(
      overloaded{
         [](const FullSpace&) { return true; },
         [](const SingletonSpace&) { return true; },
         [this](const ConvexHullGlobal& v) {
            if(num_states_ == 1) {
               return true;
            }
            for(const auto& g : v.generators) {
               if(max_abs_diff(g, v.generators.front()) > kStructuralTol) {
                  return false;
               }
            }
            return true;
         },
         [](const ConvexHullStatewise&) { return true; },
         [this](const StateUniform&) { return num_states_ == 1 or num_actions_ == 1; },
         [](const FixedCoordinates&) { return true; },
         [this](const DeterministicOnly&) { return num_actions_ == 1; },
      },
      variant_);
}

Policy RestrictedPolicySpace::witness() const
{
   std::mt19937_64 rng(0);
   return std::visit(
      overloaded{
         [this](const FullSpace&) { return Policy(num_states_, uniform_strategy(num_actions_)); },
         [](const SingletonSpace& v) { return v.policy; },
         [](const ConvexHullGlobal& v) { return v.generators.front(); },
         [](const ConvexHullStatewise& v) {
            Policy p;
            for(const auto& per_state : v.generators) {
               p.push_back(per_state.front());
            }
            return p;
         },
         [this](const StateUniform&) { return Policy(num_states_, uniform_strategy(num_actions_)); },
         [this](const FixedCoordinates&) {
            return project(Policy(num_states_, uniform_strategy(num_actions_)));
         },
         [this](const DeterministicOnly&) { return Policy(num_states_, pure_strategy(num_actions_, 0)); },
      },
      variant_);
}

Policy RestrictedPolicySpace::sample(std::mt19937_64& rng) const
{
   return std::visit(
      overloaded{
         [&](const FullSpace&) {
            Policy p;
            for(std::size_t s = 0; s < num_states_; ++s) {
               p.push_back(dirichlet(num_actions_, rng));
            }
            return p;
         },
         [](const SingletonSpace& v) { return v.policy; },
         [&](const ConvexHullGlobal& v) { return mix_policies(v.generators, dirichlet(v.generators.size(), rng)); },
         [&](const ConvexHullStatewise& v) {
            Policy p;
            for(const auto& per_state : v.generators) {
               p.push_back(strategy_matrix(per_state) * dirichlet(per_state.size(), rng));
            }
            return p;
         },
         [&](const StateUniform&) { return Policy(num_states_, dirichlet(num_actions_, rng)); },
         [&](const FixedCoordinates&) {
            auto vertices = statewise_vertices();
            Policy p;
            for(const auto& per_state : vertices) {
               p.push_back(strategy_matrix(per_state) * dirichlet(per_state.size(), rng));
            }
            return p;
         },
         [&](const DeterministicOnly&) {
            std::uniform_int_distribution< std::size_t > pick(0, num_actions_ - 1);
            Policy p;
            for(std::size_t s = 0; s < num_states_; ++s) {
               p.push_back(pure_strategy(num_actions_, pick(rng)));
            }
            return p;
         },
      },
      variant_);
}

std::vector< std::vector< Strategy > > RestrictedPolicySpace::statewise_vertices() const
{
   std::vector< Strategy > pure;
   for(std::size_t a = 0; a < num_actions_; ++a) {
      pure.push_back(pure_strategy(num_actions_, a));
   }
   return std::visit(
      overloaded{
         [&](const FullSpace&) { return std::vector< std::vector< Strategy > >(num_states_, pure); },
         [&](const DeterministicOnly&) { return std::vector< std::vector< Strategy > >(num_states_, pure); },
         [&](const StateUniform&) { return std::vector< std::vector< Strategy > >(num_states_, pure); },
         [&](const SingletonSpace& v) {
            std::vector< std::vector< Strategy > > out;
            for(const auto& row : v.policy) {
               out.push_back({row});
            }
            return out;
         },
         [&](const ConvexHullGlobal& v) {
            std::vector< std::vector< Strategy > > out(num_states_);
            for(const auto& g : v.generators) {
               for(std::size_t s = 0; s < num_states_; ++s) {
                  out[s].push_back(g[s]);
               }
            }
            return out;
         },
         [&](const ConvexHullStatewise& v) { return v.generators; },
         [&](const FixedCoordinates& v) {
            std::vector< std::vector< Strategy > > out;
            for(std::size_t s = 0; s < num_states_; ++s) {
               Strategy base = Strategy::Zero(Eigen::Index(num_actions_));
               std::vector< bool > pinned(num_actions_, false);
               double mass = 1.0;
               for(const auto& pin : v.pins) {
                  if(pin.state == s) {
                     base[Eigen::Index(pin.action)] = pin.probability;
                     pinned[pin.action] = true;
                     mass -= pin.probability;
                  }
               }
               std::vector< Strategy > vertices;
               for(std::size_t a = 0; a < num_actions_; ++a) {
                  if(not pinned[a]) {
                     Strategy vtx = base;
                     vtx[Eigen::Index(a)] += std::max(mass, 0.0);
                     vertices.push_back(std::move(vtx));
                  }
               }
               if(vertices.empty()) {
                  vertices.push_back(base);
               }
               out.push_back(std::move(vertices));
            }
            return out;
         },
      },
      variant_);
}

bool RestrictedPolicySpace::has_global_generators() const
{
   return num_states_ == 1 or std::holds_alternative< ConvexHullGlobal >(variant_)
          or std::holds_alternative< StateUniform >(variant_) or std::holds_alternative< SingletonSpace >(variant_);
}

std::vector< Policy > RestrictedPolicySpace::global_generators() const
{
   if(const auto* hull = std::get_if< ConvexHullGlobal >(&variant_)) {
      return hull->generators;
   }
   if(const auto* single = std::get_if< SingletonSpace >(&variant_)) {
      return {single->policy};
   }
   if(std::holds_alternative< StateUniform >(variant_)) {
      std::vector< Policy > out;
      for(std::size_t a = 0; a < num_actions_; ++a) {
         out.push_back(Policy(num_states_, pure_strategy(num_actions_, a)));
      }
      return out;
   }
   if(num_states_ == 1) {
      std::vector< Policy > out;
      const auto vertices = statewise_vertices();
      for(const auto& v : vertices.front()) {
         out.push_back(Policy{v});
      }
      return out;
   }
   throw UnsupportedError("space has no global generator parameterization");
}

std::size_t RestrictedPolicySpace::parameter_dimension() const
{
   if(std::holds_alternative< SingletonSpace >(variant_)) {
      return 0;
   }
   if(std::holds_alternative< DeterministicOnly >(variant_)) {
      return 1;
   }
   if(has_global_generators()) {
      return global_generators().size() - 1;
   }
   std::size_t dim = 0;
   for(const auto& per_state : statewise_vertices()) {
      dim += per_state.size() - 1;
   }
   return dim;
}

double RestrictedPolicySpace::pure_policy_count() const
{
   return std::pow(double(num_actions_), double(num_states_));
}

std::vector< GridPoint > RestrictedPolicySpace::grid(double resolution) const
{
   if(not(resolution > 0.0 and resolution <= 1.0)) {
      throw std::invalid_argument("grid resolution must lie in (0, 1]");
   }
   const auto steps = std::size_t(std::ceil(1.0 / resolution - 1e-9));
   std::vector< GridPoint > out;

   if(const auto* single = std::get_if< SingletonSpace >(&variant_)) {
      out.push_back({{}, single->policy});
      return out;
   }
   if(std::holds_alternative< DeterministicOnly >(variant_)) {
      if(pure_policy_count() > 1e6) {
         throw UnsupportedError("too many pure policies to enumerate");
      }
      auto count = std::size_t(pure_policy_count());
      for(std::size_t index = 0; index < count; ++index) {
         std::vector< std::size_t > choice(num_states_);
         auto rest = index;
         for(std::size_t s = num_states_; s-- > 0;) {
            choice[s] = rest % num_actions_;
            rest /= num_actions_;
         }
         Policy p;
         for(auto a : choice) {
            p.push_back(pure_strategy(num_actions_, a));
         }
         out.push_back({{double(index)}, std::move(p)});
      }
      return out;
   }
   if(has_global_generators()) {
      auto gens = global_generators();
      for(auto& w : simplex_grid(gens.size(), steps)) {
         out.push_back({std::vector< double >(w.data(), w.data() + w.size() - 1), mix_policies(gens, w)});
      }
      return out;
   }
   // Product over states of per-state simplex grids.
   auto vertices = statewise_vertices();
   std::vector< std::vector< Eigen::VectorXd > > per_state;
   for(const auto& v : vertices) {
      per_state.push_back(simplex_grid(v.size(), steps));
   }
   std::vector< std::size_t > odometer(num_states_, 0);
   for(;;) {
      GridPoint point;
      for(std::size_t s = 0; s < num_states_; ++s) {
         const auto& w = per_state[s][odometer[s]];
         point.params.insert(point.params.end(), w.data(), w.data() + w.size() - 1);
         point.policy.push_back(strategy_matrix(vertices[s]) * w);
      }
      out.push_back(std::move(point));
      std::size_t s = num_states_;
      while(s-- > 0) {
         if(++odometer[s] < per_state[s].size()) {
            break;
         }
         odometer[s] = 0;
      }
      if(s == std::size_t(-1)) {
         break;
      }
   }
   return out;
}

std::pair< Eigen::VectorXd, double > RestrictedPolicySpace::hull_weights(const Policy& policy) const
{
   auto gens = global_generators();
   return max_norm_weights(generator_matrix(gens), flatten(policy));
}

bool convexity_probe(const RestrictedPolicySpace& space, std::size_t trials, std::uint64_t seed)
{
   std::mt19937_64 rng(seed);
   for(std::size_t t = 0; t < trials; ++t) {
      auto x1 = space.sample(rng);
      auto x2 = space.sample(rng);
      auto mid = statewise_blend(x1, x2, std::vector< double >(x1.size(), 0.5));
      if(not space.contains(mid)) {
         return false;
      }
   }
   return true;
}

}  // namespace sgl
