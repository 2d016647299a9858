#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"
#include "parity/population.hpp"

namespace parity {

// q(x) = P(Yhat = 1 | X = x). Deterministic predictors are the {0,1}-valued
// special case; the DP-constrained optimum generally needs one fractional
// coordinate, so the randomized class is the honest search space.
class RandomizedPredictor {
 public:
  explicit RandomizedPredictor(std::vector<double> q);
  static RandomizedPredictor from_deterministic(const DeterministicPredictor& h);

  std::size_t size() const noexcept { return q_.size(); }
  double operator[](std::size_t x) const { return q_[x]; }
  std::span<const double> values() const noexcept { return q_; }
  bool deterministic() const noexcept;

 private:
  std::vector<double> q_;
};

struct GroupJointError {
  double err0 = 0.0;
  double err1 = 0.0;
  double joint = 0.0;
};

// err_a = sum_x [P(x, y=0 | a) q(x) + P(x, y=1 | a) (1 - q(x))], exact.
GroupJointError joint_error(const FinitePopulation& pop, const RandomizedPredictor& q);

// |sum_x P(x|0) q(x) - sum_x P(x|1) q(x)|, exact and linear in q.
double dp_gap_exact(const FinitePopulation& pop, const RandomizedPredictor& q);

struct OracleResult {
  double min_joint_error = 0.0;
  RandomizedPredictor argmin;
  std::uint64_t num_vertices_examined = 0;
  double delta_br = 0.0;

  nlohmann::json to_json() const;
};

// Exact minimum of the joint error over {q in [0,1]^n : dp gap <= budget}.
// Objective and constraint are both linear, so an optimum sits at a vertex of
// the box-plus-slab polytope; every vertex has at most one fractional
// coordinate (the one pinned by an active gap face). All 2^n corners are
// enumerated in Gray-code order with O(1) updates, and for each corner every
// coordinate is solved against the two gap faces. gap_budget = 0 recovers
// exact demographic parity. Ties break to the lexicographically smallest q.
OracleResult min_joint_error_dp(const FinitePopulation& pop, double gap_budget,
                                std::size_t max_support = 16);

// Noiseless group-separable population (each x carries a single (y,a)) with
// the given base rates; its DP-constrained minimum joint error is |p0 - p1|.
FinitePopulation tightness_instance(double p0, double p1);

struct FrontierPoint {
  double budget = 0.0;
  double min_joint_error = 0.0;
};

// Oracle minima across ascending gap budgets; non-increasing by construction.
std::vector<FrontierPoint> dp_frontier(const FinitePopulation& pop,
                                       std::span<const double> budgets,
                                       std::size_t max_support = 16);

struct ImpossibilitySweepReport {
  bool vacuous = false;        // base rates equal: the claim has no content
  double delta_br = 0.0;
  std::uint64_t num_checked = 0;
  std::uint64_t num_perfect = 0;
  std::vector<DeterministicPredictor> counterexamples;

  bool holds() const noexcept { return counterexamples.empty(); }
  nlohmann::json to_json() const;
};

// Enumerates every deterministic predictor and verifies that no non-perfect
// one satisfies positive rate parity and predictive rate parity at once
// (tolerance 1e-9) when the base rates differ.
ImpossibilitySweepReport impossibility_sweep(const FinitePopulation& pop,
                                             std::size_t max_support = 16);

}  // namespace parity
