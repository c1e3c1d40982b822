#include "sgl/solvers.hpp"

#include "sgl/builders.hpp"
#include "sgl/lp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace sgl {

namespace {

constexpr double kGolden = 0.6180339887498949;

/// max over x in simplex of min_j (x^T a)_j, lexicographically least optimal x.
std::pair< double, Strategy > maximin_side(const Eigen::MatrixXd& a)
{
   const auto m = a.rows();
   const auto n = a.cols();
   // Variables: x (m), v+ , v-.
   Eigen::VectorXd c = Eigen::VectorXd::Zero(m + 2);
   c[m] = 1.0;
   c[m + 1] = -1.0;
   Eigen::MatrixXd a_ub(n, m + 2);
   a_ub.leftCols(m) = -a.transpose();
   a_ub.col(m).setOnes();
   a_ub.col(m + 1).setConstant(-1.0);
   Eigen::VectorXd b_ub = Eigen::VectorXd::Zero(n);
   Eigen::MatrixXd a_eq = Eigen::MatrixXd::Zero(1, m + 2);
   a_eq.leftCols(m).setOnes();
   Eigen::VectorXd b_eq = Eigen::VectorXd::Ones(1);
   auto lp = solve_lp(c, a_ub, b_ub, a_eq, b_eq);
   if(lp.status != LpStatus::optimal) {
      throw std::logic_error("minimax LP did not reach an optimum");
   }
   const double value = lp.objective;
   Strategy x = lp.x.head(m);

   // Lexicographic refinement: minimize x_0, then x_1, ... over the optimal face.
   const double slack = 1e-12 * (1.0 + a.cwiseAbs().maxCoeff());
   std::vector< double > fixed;
   for(Eigen::Index k = 0; k + 1 < m; ++k) {
      Eigen::VectorXd obj = Eigen::VectorXd::Zero(m);
      obj[k] = -1.0;
      Eigen::MatrixXd eq = Eigen::MatrixXd::Zero(Eigen::Index(fixed.size()) + 1, m);
      Eigen::VectorXd rhs(static_cast< Eigen::Index >(fixed.size()) + 1);
      eq.row(0).setOnes();
      rhs[0] = 1.0;
      for(std::size_t j = 0; j < fixed.size(); ++j) {
         eq(Eigen::Index(j) + 1, Eigen::Index(j)) = 1.0;
         rhs[Eigen::Index(j) + 1] = fixed[j];
      }
      Eigen::VectorXd ub_rhs = Eigen::VectorXd::Constant(n, -value);
      auto refine = solve_lp(obj, -a.transpose(), ub_rhs, eq, rhs);
      if(refine.status != LpStatus::optimal) {
         ub_rhs.array() += slack;
         refine = solve_lp(obj, -a.transpose(), ub_rhs, eq, rhs);
      }
      if(refine.status != LpStatus::optimal) {
         break;
      }
      x = refine.x;
      fixed.push_back(x[k]);
   }
   x = x.cwiseMax(0.0);
   x /= x.sum();
   return {value, x};
}

double scale_of(const Eigen::VectorXd& v)
{
   return 1.0 + (v.size() ? v.cwiseAbs().maxCoeff() : 0.0);
}

/// Index of the largest entry, lowest index on ties within `tol`.
Eigen::Index argmax_lowest(const Eigen::VectorXd& v, double tol)
{
   Eigen::Index best = 0;
   for(Eigen::Index j = 1; j < v.size(); ++j) {
      if(v[j] > v[best] + tol) {
         best = j;
      }
   }
   return best;
}

bool contains_policy(const std::vector< Policy >& set, const Policy& p)
{
   for(const auto& q : set) {
      if(max_abs_diff(p, q) <= 1e-9) {
         return true;
      }
   }
   return false;
}

/// Gain and bias (bias pinned to zero at `ref`) of a unichain policy.
std::pair< double, Eigen::VectorXd > gain_bias(const Eigen::MatrixXd& p, const Eigen::VectorXd& r, Eigen::Index ref)
{
   const auto n = p.rows();
   Eigen::MatrixXd system = Eigen::MatrixXd::Zero(n + 1, n + 1);
   Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
   system.topLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n) - p;
   system.topRightCorner(n, 1).setOnes();
   system(n, ref) = 1.0;
   rhs.head(n) = r;
   Eigen::VectorXd sol = system.colPivHouseholderQr().solve(rhs);
   return {sol[n], sol.head(n)};
}

BestResponseResult policy_iteration(const InducedMDP& mdp, const std::vector< std::vector< Strategy > >& vertices)
{
   const auto ns = mdp.num_states;
   const auto* disc = std::get_if< Discounted >(&mdp.formulation);
   std::vector< std::vector< double > > vr(ns);
   std::vector< std::vector< Eigen::RowVectorXd > > vp(ns);
   for(std::size_t s = 0; s < ns; ++s) {
      for(const auto& v : vertices[s]) {
         vr[s].push_back(v.dot(mdp.reward[s]));
         vp[s].push_back(v.transpose() * mdp.transition[s]);
      }
   }
   std::vector< std::size_t > choice(ns, 0);
   Eigen::VectorXd values;
   double gain = 0.0;
   std::vector< Eigen::VectorXd > q(ns);
   for(int iter = 0; iter < 10000; ++iter) {
      Eigen::MatrixXd p(static_cast< Eigen::Index >(ns), Eigen::Index(ns));
      Eigen::VectorXd r(static_cast< Eigen::Index >(ns));
      for(std::size_t s = 0; s < ns; ++s) {
         p.row(Eigen::Index(s)) = vp[s][choice[s]];
         r[Eigen::Index(s)] = vr[s][choice[s]];
      }
      if(disc) {
         values = (Eigen::MatrixXd::Identity(p.rows(), p.cols()) - disc->gamma * p).partialPivLu().solve(r);
      } else {
         stationary_distribution(p);  // throws unless unichain
         std::tie(gain, values) = gain_bias(p, r, Eigen::Index(mdp.initial_state));
      }
      bool changed = false;
      for(std::size_t s = 0; s < ns; ++s) {
         q[s].resize(Eigen::Index(vertices[s].size()));
         for(std::size_t v = 0; v < vertices[s].size(); ++v) {
            double future = vp[s][v].dot(values);
            q[s][Eigen::Index(v)] = vr[s][v] + (disc ? disc->gamma * future : future);
         }
         const double tol = 1e-12 * scale_of(q[s]);
         auto best = std::size_t(argmax_lowest(q[s], tol));
         if(q[s][Eigen::Index(best)] > q[s][Eigen::Index(choice[s])] + tol) {
            choice[s] = best;
            changed = true;
         }
      }
      if(not changed) {
         break;
      }
   }

   BestResponseResult result;
   for(std::size_t s = 0; s < ns; ++s) {
      result.policy.push_back(vertices[s][choice[s]]);
   }
   result.value = disc ? values[Eigen::Index(mdp.initial_state)] : gain;
   result.optimal_set.push_back(result.policy);
   for(std::size_t s = 0; s < ns and result.optimal_set.size() < 32; ++s) {
      const double tol = 1e-10 * scale_of(q[s]);
      const double top = q[s].maxCoeff();
      for(std::size_t v = 0; v < vertices[s].size(); ++v) {
         if(v != choice[s] and q[s][Eigen::Index(v)] >= top - tol) {
            Policy alt = result.policy;
            alt[s] = vertices[s][v];
            if(not contains_policy(result.optimal_set, alt)) {
               result.optimal_set.push_back(std::move(alt));
            }
         }
      }
   }
   return result;
}

double binomial(std::size_t n, std::size_t k)
{
   double out = 1.0;
   for(std::size_t j = 1; j <= k; ++j) {
      out = out * double(n - k + j) / double(j);
   }
   return out;
}

/// Maximizes V(s0) over mixtures of generator policies (weights on a simplex).
class GeneratorObjective {
  public:
   GeneratorObjective(const InducedMDP& mdp, std::vector< Policy > generators)
       : mdp_(mdp), generators_(std::move(generators))
   {
      for(const auto& g : generators_) {
         p_.push_back(mdp_policy_transition(mdp_, g));
         r_.push_back(mdp_policy_reward(mdp_, g));
      }
   }

   std::size_t size() const { return generators_.size(); }
   const std::vector< Policy >& generators() const { return generators_; }

   double operator()(const Eigen::VectorXd& w) const
   {
      Eigen::MatrixXd p = w[0] * p_[0];
      Eigen::VectorXd r = w[0] * r_[0];
      for(std::size_t k = 1; k < p_.size(); ++k) {
         if(w[Eigen::Index(k)] != 0.0) {
            p += w[Eigen::Index(k)] * p_[k];
            r += w[Eigen::Index(k)] * r_[k];
         }
      }
      if(const auto* disc = std::get_if< Discounted >(&mdp_.formulation)) {
         Eigen::MatrixXd system = Eigen::MatrixXd::Identity(p.rows(), p.cols()) - disc->gamma * p;
         return system.partialPivLu().solve(r)[Eigen::Index(mdp_.initial_state)];
      }
      return stationary_distribution(p).dot(r);
   }

  private:
   const InducedMDP& mdp_;
   std::vector< Policy > generators_;
   std::vector< Eigen::MatrixXd > p_;
   std::vector< Eigen::VectorXd > r_;
};

BestResponseResult generator_search(
   const InducedMDP& mdp,
   std::vector< Policy > generators,
   const BestResponseOptions& options)
{
   GeneratorObjective f(mdp, std::move(generators));
   const auto k = f.size();
   auto steps = std::size_t(std::ceil(1.0 / options.grid_step - 1e-9));
   while(steps > 1 and binomial(steps + k - 1, k - 1) > double(options.max_grid_points)) {
      steps = std::max< std::size_t >(1, std::size_t(double(steps) * 0.8));
   }
   auto grid = simplex_grid(k, steps);
   std::vector< double > values(grid.size());
   std::size_t best = 0;
   for(std::size_t g = 0; g < grid.size(); ++g) {
      values[g] = f(grid[g]);
      if(values[g] > values[best] + 1e-13 * (1.0 + std::abs(values[best]))) {
         best = g;
      }
   }
   Eigen::VectorXd w = grid[best];
   double fw = values[best];

   // Largest value change between the best grid point and its grid neighbours.
   const double h = 1.0 / double(steps);
   double tolerance = 0.0;
   for(std::size_t a = 0; a < k; ++a) {
      for(std::size_t b = 0; b < k; ++b) {
         if(a != b and grid[best][Eigen::Index(b)] >= h - 1e-12) {
            Eigen::VectorXd nb = grid[best];
            nb[Eigen::Index(a)] += h;
            nb[Eigen::Index(b)] = std::max(0.0, nb[Eigen::Index(b)] - h);
            tolerance = std::max(tolerance, std::abs(f(nb) - fw));
         }
      }
   }

   if(options.polish and k > 1) {
      for(int pass = 0; pass < 10; ++pass) {
         bool improved = false;
         for(std::size_t a = 0; a < k; ++a) {
            for(std::size_t b = a + 1; b < k; ++b) {
               const auto ia = Eigen::Index(a);
               const auto ib = Eigen::Index(b);
               double lo = std::max(-w[ia], -h);
               double hi = std::min(w[ib], h);
               if(hi - lo < 1e-15) {
                  continue;
               }
               auto along = [&](double t) {
                  Eigen::VectorXd x = w;
                  x[ia] += t;
                  x[ib] -= t;
                  x = x.cwiseMax(0.0);
                  return f(x);
               };
               double x1 = hi - kGolden * (hi - lo);
               double x2 = lo + kGolden * (hi - lo);
               double f1 = along(x1);
               double f2 = along(x2);
               for(int it = 0; it < 60 and hi - lo > 1e-12; ++it) {
                  if(f1 < f2) {
                     lo = x1;
                     x1 = x2;
                     f1 = f2;
                     x2 = lo + kGolden * (hi - lo);
                     f2 = along(x2);
                  } else {
                     hi = x2;
                     x2 = x1;
                     f2 = f1;
                     x1 = hi - kGolden * (hi - lo);
                     f1 = along(x1);
                  }
               }
               double t = 0.5 * (lo + hi);
               double ft = along(t);
               if(ft > fw + 1e-14 * (1.0 + std::abs(fw))) {
                  w[ia] += t;
                  w[ib] -= t;
                  w = w.cwiseMax(0.0);
                  fw = ft;
                  improved = true;
               }
            }
         }
         if(not improved) {
            break;
         }
      }
   }

   BestResponseResult result;
   result.policy = mix_policies(f.generators(), w);
   result.value = fw;
   result.tolerance = tolerance;
   result.optimal_set.push_back(result.policy);
   const double near = 1e-9 * (1.0 + std::abs(fw));
   for(std::size_t g = 0; g < grid.size() and result.optimal_set.size() < 64; ++g) {
      if(values[g] >= fw - near) {
         auto p = mix_policies(f.generators(), grid[g]);
         if(not contains_policy(result.optimal_set, p)) {
            result.optimal_set.push_back(std::move(p));
         }
      }
   }
   return result;
}

std::vector< double > player_gaps(
   const StochasticGame& game,
   const JointPolicy& joint,
   const std::vector< RestrictedPolicySpace >& spaces,
   const BestResponseOptions& options)
{
   auto current = player_values(game, joint);
   std::vector< double > gaps;
   for(std::size_t i = 0; i < game.num_players(); ++i) {
      if(std::holds_alternative< SingletonSpace >(spaces[i].variant())) {
         // The current policy is the only member, so there is nothing to deviate to.
         gaps.push_back(0.0);
         continue;
      }
      auto others = others_of(joint, i);
      auto br = restricted_best_response(game, i, others, spaces[i], options);
      // The current policy is itself feasible, so the gap is never negative.
      gaps.push_back(std::max(br.value, current[Eigen::Index(i)]) - current[Eigen::Index(i)]);
   }
   return gaps;
}

EquilibriumCertificate make_certificate(JointPolicy joint, std::vector< double > gaps, double epsilon)
{
   EquilibriumCertificate cert;
   cert.policy = std::move(joint);
   cert.gaps = std::move(gaps);
   cert.epsilon = epsilon;
   cert.verdict = cert.max_gap() <= epsilon;
   return cert;
}

void require_matrix_pair(const StochasticGame& game)
{
   if(game.num_states() != 1) {
      throw UnsupportedError("operation requires a single-state game");
   }
   if(game.num_players() != 2) {
      throw UnsupportedError("operation requires a two-player game");
   }
}

/// Subsets of {0..n-1} of size k in lexicographic order.
std::vector< std::vector< Eigen::Index > > subsets(Eigen::Index n, Eigen::Index k)
{
   std::vector< std::vector< Eigen::Index > > out;
   std::vector< Eigen::Index > cur(static_cast< std::size_t >(k));
   for(Eigen::Index j = 0; j < k; ++j) {
      cur[std::size_t(j)] = j;
   }
   if(k > n) {
      return out;
   }
   for(;;) {
      out.push_back(cur);
      Eigen::Index pos = k - 1;
      while(pos >= 0 and cur[std::size_t(pos)] == n - k + pos) {
         --pos;
      }
      if(pos < 0) {
         break;
      }
      ++cur[std::size_t(pos)];
      for(Eigen::Index j = pos + 1; j < k; ++j) {
         cur[std::size_t(j)] = cur[std::size_t(j - 1)] + 1;
      }
   }
   return out;
}

/// Solves payoff[:, support] y = u 1, sum y = 1. Returns nullopt when singular.
std::optional< std::pair< Eigen::VectorXd, double > > indifference(
   const Eigen::MatrixXd& payoff_rows_support_cols)
{
   const auto k = payoff_rows_support_cols.rows();
   Eigen::MatrixXd system = Eigen::MatrixXd::Zero(k + 1, k + 1);
   system.topLeftCorner(k, k) = payoff_rows_support_cols;
   system.topRightCorner(k, 1).setConstant(-1.0);
   system.bottomLeftCorner(1, k).setOnes();
   Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
   rhs[k] = 1.0;
   Eigen::FullPivLU< Eigen::MatrixXd > lu(system);
   if(not lu.isInvertible()) {
      return std::nullopt;
   }
   Eigen::VectorXd sol = lu.solve(rhs);
   return std::make_pair(Eigen::VectorXd(sol.head(k)), sol[k]);
}

}  // namespace

double EquilibriumCertificate::max_gap() const
{
   double out = 0.0;
   for(double g : gaps) {
      out = std::max(out, g);
   }
   return out;
}

Eigen::MatrixXd payoff_matrix(const StochasticGame& game, std::size_t player)
{
   require_matrix_pair(game);
   const auto m = game.num_actions(0);
   const auto n = game.num_actions(1);
   Eigen::MatrixXd out(static_cast< Eigen::Index >(m), Eigen::Index(n));
   for(std::size_t a = 0; a < m; ++a) {
      for(std::size_t b = 0; b < n; ++b) {
         out(Eigen::Index(a), Eigen::Index(b)) = game.rewards[player][0][Eigen::Index(a * n + b)];
      }
   }
   return out;
}

MinimaxResult solve_minimax(const Eigen::MatrixXd& row_payoff)
{
   auto [value, row] = maximin_side(row_payoff);
   auto col = maximin_side(-row_payoff.transpose()).second;
   return {value, std::move(row), std::move(col)};
}

MinimaxResult minimax_zero_sum_matrix(const StochasticGame& game)
{
   require_matrix_pair(game);
   require_valid(game);
   if(not classify(game).zero_sum) {
      throw UnsupportedError("minimax requires a zero-sum game");
   }
   auto result = solve_minimax(payoff_matrix(game, 0));
   if(const auto* disc = std::get_if< Discounted >(&game.formulation)) {
      result.value /= (1.0 - disc->gamma);
   }
   return result;
}

SupportEnumerationResult support_enumeration_bimatrix(const StochasticGame& game, std::size_t max_actions)
{
   require_matrix_pair(game);
   require_valid(game);
   if(game.num_actions(0) > max_actions or game.num_actions(1) > max_actions) {
      throw UnsupportedError("support enumeration size bound exceeded");
   }
   const Eigen::MatrixXd a = payoff_matrix(game, 0);
   const Eigen::MatrixXd b = payoff_matrix(game, 1);
   const auto m = a.rows();
   const auto n = a.cols();
   const double tol = 1e-9 * (1.0 + std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()));

   SupportEnumerationResult result;
   for(Eigen::Index k = 1; k <= std::min(m, n); ++k) {
      for(const auto& rows : subsets(m, k)) {
         for(const auto& cols : subsets(n, k)) {
            Eigen::MatrixXd a_sub(k, k);
            Eigen::MatrixXd bt_sub(k, k);
            for(Eigen::Index r = 0; r < k; ++r) {
               for(Eigen::Index c = 0; c < k; ++c) {
                  a_sub(r, c) = a(rows[std::size_t(r)], cols[std::size_t(c)]);
                  bt_sub(c, r) = b(rows[std::size_t(r)], cols[std::size_t(c)]);
               }
            }
            auto col_side = indifference(a_sub);
            auto row_side = indifference(bt_sub);
            if(not col_side or not row_side) {
               result.degenerate = true;
               continue;
            }
            const auto& [y_sub, u] = *col_side;
            const auto& [x_sub, v] = *row_side;
            if(y_sub.minCoeff() < -tol or x_sub.minCoeff() < -tol) {
               continue;
            }
            Strategy x = Strategy::Zero(m);
            Strategy y = Strategy::Zero(n);
            for(Eigen::Index j = 0; j < k; ++j) {
               x[rows[std::size_t(j)]] = std::max(0.0, x_sub[j]);
               y[cols[std::size_t(j)]] = std::max(0.0, y_sub[j]);
            }
            x /= x.sum();
            y /= y.sum();
            Eigen::VectorXd row_payoffs = a * y;
            Eigen::VectorXd col_payoffs = b.transpose() * x;
            if(row_payoffs.maxCoeff() > u + tol or col_payoffs.maxCoeff() > v + tol) {
               continue;
            }
            // Ties outside the support, or zero weight inside it, mean degeneracy.
            for(Eigen::Index r = 0; r < m; ++r) {
               if(x[r] <= tol and row_payoffs[r] >= u - tol) {
                  result.degenerate = true;
               }
            }
            for(Eigen::Index c = 0; c < n; ++c) {
               if(y[c] <= tol and col_payoffs[c] >= v - tol) {
                  result.degenerate = true;
               }
            }
            bool duplicate = false;
            for(const auto& eq : result.equilibria) {
               if((eq.row - x).cwiseAbs().maxCoeff() <= tol and (eq.col - y).cwiseAbs().maxCoeff() <= tol) {
                  duplicate = true;
               }
            }
            if(not duplicate) {
               result.equilibria.push_back({x, y, x.dot(a * y), x.dot(b * y)});
            }
         }
      }
   }
   return result;
}

BestResponseResult restricted_best_response(
   const StochasticGame& game,
   std::size_t player,
   std::span< const Policy > others,
   const RestrictedPolicySpace& space,
   const BestResponseOptions& options)
{
   if(player >= game.num_players()) {
      throw DimensionError("player index out of range");
   }
   if(space.num_states() != game.num_states() or space.num_actions() != game.num_actions(player)) {
      throw DimensionError("restricted space does not match the player's policy shape");
   }
   const auto mdp = induce_mdp(game, player, others);
   auto evaluate = [&](const Policy& p) { return mdp_policy_value(mdp, p)[Eigen::Index(mdp.initial_state)]; };

   if(const auto* single = std::get_if< SingletonSpace >(&space.variant())) {
      BestResponseResult result;
      result.policy = single->policy;
      result.value = evaluate(single->policy);
      result.optimal_set = {single->policy};
      return result;
   }
   const bool deterministic = std::holds_alternative< DeterministicOnly >(space.variant());
   if(deterministic and space.pure_policy_count() > 1e6) {
      throw UnsupportedError("deterministic space too large to search");
   }

   if(game.num_states() == 1) {
      // The value is linear in the strategy, so a vertex of the space is optimal.
      const auto vertices = space.statewise_vertices().front();
      Eigen::VectorXd values(static_cast< Eigen::Index >(vertices.size()));
      for(std::size_t v = 0; v < vertices.size(); ++v) {
         values[Eigen::Index(v)] = evaluate(Policy{vertices[v]});
      }
      const double tol = 1e-12 * scale_of(values);
      auto best = argmax_lowest(values, tol);
      BestResponseResult result;
      result.policy = Policy{vertices[std::size_t(best)]};
      result.value = values[best];
      result.optimal_set.push_back(result.policy);
      for(std::size_t v = 0; v < vertices.size(); ++v) {
         if(Eigen::Index(v) != best and values[Eigen::Index(v)] >= values[best] - tol) {
            Policy p{vertices[v]};
            if(not contains_policy(result.optimal_set, p)) {
               result.optimal_set.push_back(std::move(p));
            }
         }
      }
      return result;
   }

   if(deterministic or space.is_statewise_convex()) {
      // Pure optimal policies exist in MDPs, so the deterministic space shares
      // the full space's optimum.
      return policy_iteration(mdp, space.statewise_vertices());
   }
   return generator_search(mdp, space.global_generators(), options);
}

std::vector< RestrictedPolicySpace > full_spaces(const StochasticGame& game)
{
   std::vector< RestrictedPolicySpace > spaces;
   for(std::size_t i = 0; i < game.num_players(); ++i) {
      spaces.push_back(RestrictedPolicySpace::full(game.num_states(), game.num_actions(i)));
   }
   return spaces;
}

EquilibriumCertificate check_equilibrium(
   const StochasticGame& game,
   const JointPolicy& joint,
   const std::vector< RestrictedPolicySpace >& spaces,
   double epsilon,
   const BestResponseOptions& options)
{
   require_joint_shape(game, joint);
   if(spaces.size() != game.num_players()) {
      throw DimensionError("need one restricted space per player");
   }
   for(std::size_t i = 0; i < spaces.size(); ++i) {
      if(not spaces[i].contains(joint[i])) {
         throw PreconditionError("policy of player " + std::to_string(i) + " is not in its restricted space");
      }
   }
   return make_certificate(joint, player_gaps(game, joint, spaces, options), epsilon);
}

std::vector< EquilibriumCertificate > enumerate_deterministic(const StochasticGame& game, double epsilon)
{
   require_valid(game);
   std::vector< RestrictedPolicySpace > det;
   double total = 1.0;
   for(std::size_t i = 0; i < game.num_players(); ++i) {
      det.push_back(RestrictedPolicySpace::deterministic(game.num_states(), game.num_actions(i)));
      total *= det.back().pure_policy_count();
   }
   if(total > 1e5) {
      throw UnsupportedError("too many pure joint policies to enumerate");
   }
   std::vector< std::vector< GridPoint > > pure;
   for(const auto& space : det) {
      pure.push_back(space.grid(1.0));
   }
   const auto spaces = full_spaces(game);
   std::vector< EquilibriumCertificate > out;
   std::vector< std::size_t > odometer(pure.size(), 0);
   for(;;) {
      JointPolicy joint;
      for(std::size_t i = 0; i < pure.size(); ++i) {
         joint.push_back(pure[i][odometer[i]].policy);
      }
      auto gaps = player_gaps(game, joint, spaces, {});
      out.push_back(make_certificate(std::move(joint), std::move(gaps), epsilon));
      std::size_t i = pure.size();
      while(i-- > 0) {
         if(++odometer[i] < pure[i].size()) {
            break;
         }
         odometer[i] = 0;
      }
      if(i == std::size_t(-1)) {
         break;
      }
   }
   return out;
}

ImplicitEquilibrium restricted_equilibrium_via_implicit(
   const StochasticGame& game,
   const std::vector< RestrictedPolicySpace >& spaces,
   double epsilon)
{
   require_matrix_pair(game);
   require_valid(game);
   if(not classify(game).zero_sum) {
      throw UnsupportedError("implicit-game equilibrium requires a zero-sum game");
   }
   if(spaces.size() != 2) {
      throw DimensionError("need one restricted space per player");
   }
   for(const auto& space : spaces) {
      const auto& v = space.variant();
      if(not(std::holds_alternative< FullSpace >(v) or std::holds_alternative< ConvexHullGlobal >(v)
             or std::holds_alternative< ConvexHullStatewise >(v) or std::holds_alternative< SingletonSpace >(v))) {
         throw UnsupportedError("implicit-game equilibrium needs full or finitely generated hull spaces");
      }
   }
   auto implicit = implicit_from_spaces(game, spaces);
   auto mm = minimax_zero_sum_matrix(implicit.game);
   JointPolicy implicit_joint{Policy{mm.row}, Policy{mm.col}};
   auto explicit_joint = map_policy(implicit, implicit_joint);
   auto cert = check_equilibrium(game, explicit_joint, spaces, epsilon);
   return {std::move(explicit_joint), std::move(implicit_joint), mm.value, std::move(cert), std::move(implicit)};
}

SweepResult sweep_existence(
   const StochasticGame& game,
   const std::vector< RestrictedPolicySpace >& spaces,
   double resolution,
   double epsilon,
   const BestResponseOptions& options)
{
   require_valid(game);
   if(spaces.size() != game.num_players()) {
      throw DimensionError("need one restricted space per player");
   }
   std::size_t dims = 0;
   for(const auto& space : spaces) {
      dims += space.parameter_dimension();
   }
   if(dims > 4) {
      throw UnsupportedError("sweep parameterization has more than four dimensions");
   }

   std::vector< std::vector< GridPoint > > grids;
   std::vector< std::vector< std::vector< std::size_t > > > neighbours;
   for(const auto& space : spaces) {
      grids.push_back(space.grid(resolution));
      const auto& grid = grids.back();
      std::vector< std::vector< std::size_t > > nb(grid.size());
      if(not std::holds_alternative< DeterministicOnly >(space.variant())) {
         // Integer lattice coordinates; neighbours differ by at most one step per coordinate.
         const double step = 1.0 / std::ceil(1.0 / resolution - 1e-9);
         std::map< std::vector< long >, std::size_t > index;
         std::vector< std::vector< long > > coords;
         for(std::size_t g = 0; g < grid.size(); ++g) {
            std::vector< long > c;
            for(double p : grid[g].params) {
               c.push_back(std::lround(p / step));
            }
            index[c] = g;
            coords.push_back(std::move(c));
         }
         for(std::size_t g = 0; g < grid.size(); ++g) {
            const auto d = coords[g].size();
            std::size_t offsets = 1;
            for(std::size_t j = 0; j < d; ++j) {
               offsets *= 3;
            }
            for(std::size_t o = 0; o < offsets; ++o) {
               auto c = coords[g];
               auto code = o;
               bool moved = false;
               for(std::size_t j = 0; j < d; ++j) {
                  long delta = long(code % 3) - 1;
                  code /= 3;
                  c[j] += delta;
                  moved = moved or delta != 0;
               }
               if(not moved) {
                  continue;
               }
               if(auto it = index.find(c); it != index.end() and it->second > g) {
                  nb[g].push_back(it->second);
               }
            }
         }
      }
      neighbours.push_back(std::move(nb));
   }

   const auto players = game.num_players();
   std::vector< std::size_t > sizes;
   std::size_t total = 1;
   for(const auto& g : grids) {
      sizes.push_back(g.size());
      total *= g.size();
   }
   auto decode = [&](std::size_t flat) {
      std::vector< std::size_t > idx(players);
      for(std::size_t i = players; i-- > 0;) {
         idx[i] = flat % sizes[i];
         flat /= sizes[i];
      }
      return idx;
   };
   auto encode = [&](const std::vector< std::size_t >& idx) {
      std::size_t flat = 0;
      for(std::size_t i = 0; i < players; ++i) {
         flat = flat * sizes[i] + idx[i];
      }
      return flat;
   };

   SweepResult result;
   result.epsilon = epsilon;
   result.resolution = resolution;
   result.rows.resize(total);
   std::size_t best = 0;
   for(std::size_t flat = 0; flat < total; ++flat) {
      auto idx = decode(flat);
      JointPolicy joint;
      SweepRow row;
      for(std::size_t i = 0; i < players; ++i) {
         const auto& point = grids[i][idx[i]];
         joint.push_back(point.policy);
         row.params.insert(row.params.end(), point.params.begin(), point.params.end());
      }
      auto gaps = player_gaps(game, joint, spaces, options);
      row.max_gap = *std::max_element(gaps.begin(), gaps.end());
      result.rows[flat] = std::move(row);
      if(result.rows[flat].max_gap < result.rows[best].max_gap) {
         best = flat;
      }
   }

   for(std::size_t flat = 0; flat < total; ++flat) {
      auto idx = decode(flat);
      for(std::size_t i = 0; i < players; ++i) {
         for(auto other : neighbours[i][idx[i]]) {
            auto moved = idx;
            moved[i] = other;
            double diff = std::abs(result.rows[encode(moved)].max_gap - result.rows[flat].max_gap);
            result.refinement_bound = std::max(result.refinement_bound, diff);
         }
      }
   }

   auto best_idx = decode(best);
   for(std::size_t i = 0; i < players; ++i) {
      result.argmin.push_back(grids[i][best_idx[i]].policy);
   }
   result.argmin_params = result.rows[best].params;
   result.min_max_gap = result.rows[best].max_gap;
   result.margin = result.min_max_gap - result.refinement_bound;
   result.no_equilibrium_found = result.margin > epsilon;
   return result;
}

bool best_response_convexity_test(
   const StochasticGame& game,
   std::size_t player,
   std::span< const Policy > others,
   const RestrictedPolicySpace& space,
   std::size_t trials,
   std::uint64_t seed)
{
   if(not space.is_convex()) {
      throw UnsupportedError("best-response convexity test needs a convex space");
   }
   auto br = restricted_best_response(game, player, others, space);
   const auto& optimal = br.optimal_set;
   if(optimal.size() < 2) {
      return true;
   }
   std::mt19937_64 rng(seed);
   std::uniform_int_distribution< std::size_t > pick(0, optimal.size() - 1);
   std::uniform_real_distribution< double > unit(0.0, 1.0);
   const double tol = 1e-8 * (1.0 + std::abs(br.value));
   for(std::size_t t = 0; t < trials; ++t) {
      auto a = pick(rng);
      auto b = pick(rng);
      if(a == b) {
         b = (a + 1) % optimal.size();
      }
      double alpha = unit(rng);
      auto blend = statewise_blend(optimal[a], optimal[b], std::vector< double >(optimal[a].size(), alpha));
      auto joint = with_player(others, player, blend);
      double v = player_values(game, joint)[Eigen::Index(player)];
      if(v < br.value - tol) {
         return false;
      }
   }
   return true;
}

}  // namespace sgl
