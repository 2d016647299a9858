#include "parity/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace parity {

namespace {

constexpr double kFeasibilitySlack = 1e-9;
constexpr double kTieTol = 1e-12;

void check_support_limit(std::size_t n, std::size_t max_support) {
  if (max_support > 25) {
    raise(ErrorCode::invalid_argument, "support limit above 25 is not enumerable");
  }
  if (n > max_support) {
    std::ostringstream msg;
    msg << "population has " << n << " x-values, limit is " << max_support;
    raise(ErrorCode::too_large, msg.str());
  }
}

void check_predictor_length(const FinitePopulation& pop, std::size_t len) {
  if (len != pop.size()) {
    std::ostringstream msg;
    msg << "predictor covers " << len << " x-values, population has " << pop.size();
    raise(ErrorCode::length_mismatch, msg.str());
  }
}

bool lexicographically_smaller(std::span<const double> a, std::span<const double> b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

}  // namespace

RandomizedPredictor::RandomizedPredictor(std::vector<double> q) : q_(std::move(q)) {
  for (std::size_t x = 0; x < q_.size(); ++x) {
    if (!(q_[x] >= 0.0 && q_[x] <= 1.0)) {
      std::ostringstream msg;
      msg << "q(" << x << ") = " << q_[x] << " outside [0,1]";
      raise(ErrorCode::invalid_argument, msg.str());
    }
  }
}

RandomizedPredictor RandomizedPredictor::from_deterministic(
    const DeterministicPredictor& h) {
  std::vector<double> q(h.size());
  for (std::size_t x = 0; x < h.size(); ++x) {
    if (h[x] > 1) raise(ErrorCode::invalid_argument, "deterministic values must be 0/1");
    q[x] = static_cast<double>(h[x]);
  }
  return RandomizedPredictor(std::move(q));
}

bool RandomizedPredictor::deterministic() const noexcept {
  for (double v : q_) {
    if (v != 0.0 && v != 1.0) return false;
  }
  return true;
}

GroupJointError joint_error(const FinitePopulation& pop, const RandomizedPredictor& q) {
  check_predictor_length(pop, q.size());
  GroupJointError out;
  double err[2] = {0.0, 0.0};
  for (std::size_t x = 0; x < pop.size(); ++x) {
    for (int a = 0; a < 2; ++a) {
      err[a] += pop.xy_given_group(x, 0, a) * q[x] +
                pop.xy_given_group(x, 1, a) * (1.0 - q[x]);
    }
  }
  out.err0 = err[0];
  out.err1 = err[1];
  out.joint = err[0] + err[1];
  return out;
}

double dp_gap_exact(const FinitePopulation& pop, const RandomizedPredictor& q) {
  check_predictor_length(pop, q.size());
  double rate[2] = {0.0, 0.0};
  for (std::size_t x = 0; x < pop.size(); ++x) {
    for (int a = 0; a < 2; ++a) rate[a] += pop.x_given_group(x, a) * q[x];
  }
  return std::abs(rate[0] - rate[1]);
}

namespace {

// Linear coefficients of the oracle LP. With q the positive-decision
// probabilities: joint(q) = base + w.q and signed_gap(q) = d.q.
struct LinearForm {
  double base = 0.0;            // joint error of q == 0 (sum of base rates)
  std::vector<double> w;        // d(joint)/d(q_x)
  std::vector<double> d;        // P(x|0) - P(x|1)
};

LinearForm linear_form(const FinitePopulation& pop) {
  LinearForm lf;
  lf.w.resize(pop.size());
  lf.d.resize(pop.size());
  for (std::size_t x = 0; x < pop.size(); ++x) {
    double w = 0.0;
    for (int a = 0; a < 2; ++a) {
      lf.base += pop.xy_given_group(x, 1, a);
      w += pop.xy_given_group(x, 0, a) - pop.xy_given_group(x, 1, a);
    }
    lf.w[x] = w;
    lf.d[x] = pop.x_given_group(x, 0) - pop.x_given_group(x, 1);
  }
  return lf;
}

struct BestVertex {
  double objective = std::numeric_limits<double>::infinity();
  std::vector<double> q;

  void offer(double objective_candidate, std::span<const double> q_candidate) {
    if (objective_candidate < objective - kTieTol ||
        (std::abs(objective_candidate - objective) <= kTieTol &&
         lexicographically_smaller(q_candidate, q))) {
      objective = objective_candidate;
      q.assign(q_candidate.begin(), q_candidate.end());
    }
  }
};

}  // namespace

OracleResult min_joint_error_dp(const FinitePopulation& pop, double gap_budget,
                                std::size_t max_support) {
  check_support_limit(pop.size(), max_support);
  if (gap_budget < 0.0) {
    raise(ErrorCode::invalid_argument, "gap budget must be >= 0");
  }
  const std::size_t n = pop.size();
  const LinearForm lf = linear_form(pop);

  std::vector<double> q(n, 0.0);
  double gap = 0.0;          // signed gap d.q of the current corner
  double joint = lf.base;    // objective at the current corner
  std::uint64_t examined = 0;
  BestVertex best;
  std::vector<double> scratch(n);

  const std::uint64_t corners = std::uint64_t{1} << n;
  for (std::uint64_t code = 0;; ++code) {
    ++examined;
    if (std::abs(gap) <= gap_budget + kFeasibilitySlack) {
      best.offer(joint, q);
    }
    // Vertices with one fractional coordinate: pin x' to a gap face.
    for (std::size_t x = 0; x < n; ++x) {
      if (lf.d[x] == 0.0) continue;
      const double rest = gap - lf.d[x] * q[x];
      for (const double face : {gap_budget, -gap_budget}) {
        const double t = (face - rest) / lf.d[x];
        if (t <= 1e-12 || t >= 1.0 - 1e-12) continue;  // corners cover the rest
        ++examined;
        scratch.assign(q.begin(), q.end());
        scratch[x] = t;
        best.offer(joint + lf.w[x] * (t - q[x]), scratch);
        if (gap_budget == 0.0) break;  // both faces coincide
      }
    }
    if (code + 1 == corners) break;
    // Gray-code step: flip the bit that changes between code and code+1.
    const std::size_t flip = static_cast<std::size_t>(std::countr_zero(code + 1));
    const double delta = q[flip] == 0.0 ? 1.0 : -1.0;
    q[flip] += delta;
    gap += delta * lf.d[flip];
    joint += delta * lf.w[flip];
  }

  OracleResult result{best.objective, RandomizedPredictor(best.q), examined,
                      pop.delta_br()};
  return result;
}

FinitePopulation tightness_instance(double p0, double p1) {
  if (!(p0 >= 0.0 && p0 <= 1.0 && p1 >= 0.0 && p1 <= 1.0)) {
    raise(ErrorCode::invalid_argument, "base rates must lie in [0,1]");
  }
  // Four x-values, each carrying a single (y,a); groups weighted equally.
  const FinitePopulation::Entry entries[] = {
      {0, 1, 0, 0.5 * p0},
      {1, 0, 0, 0.5 * (1.0 - p0)},
      {2, 1, 1, 0.5 * p1},
      {3, 0, 1, 0.5 * (1.0 - p1)},
  };
  return FinitePopulation::from_entries(4, entries);
}

std::vector<FrontierPoint> dp_frontier(const FinitePopulation& pop,
                                       std::span<const double> budgets,
                                       std::size_t max_support) {
  if (budgets.empty()) raise(ErrorCode::invalid_argument, "no budgets given");
  for (std::size_t i = 1; i < budgets.size(); ++i) {
    if (budgets[i] < budgets[i - 1]) {
      raise(ErrorCode::invalid_argument, "budgets must be ascending");
    }
  }
  std::vector<FrontierPoint> points;
  points.reserve(budgets.size());
  for (double budget : budgets) {
    points.push_back({budget, min_joint_error_dp(pop, budget, max_support).min_joint_error});
  }
  return points;
}

namespace {

// Accumulated joint mass of {h = 1} cells, updated per Gray-code bit flip.
struct SweepAccumulator {
  double pred1_mass[2][2] = {{0, 0}, {0, 0}};  // [y][a], conditioned on group
  double err[2] = {0, 0};
};

}  // namespace

ImpossibilitySweepReport impossibility_sweep(const FinitePopulation& pop,
                                             std::size_t max_support) {
  check_support_limit(pop.size(), max_support);
  const std::size_t n = pop.size();

  ImpossibilitySweepReport report;
  report.delta_br = pop.delta_br();
  if (report.delta_br <= 1e-9) {
    report.vacuous = true;
    return report;
  }

  // Conditional cell masses P(x, y | a).
  std::vector<double> cond(n * 4);
  double label_mass[2][2] = {{0, 0}, {0, 0}};  // [y][a]
  for (std::size_t x = 0; x < n; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int a = 0; a < 2; ++a) {
        cond[(x * 2 + y) * 2 + a] = pop.xy_given_group(x, y, a);
        label_mass[y][a] += pop.xy_given_group(x, y, a);
      }
    }
  }

  DeterministicPredictor h(n, 0);
  SweepAccumulator acc;
  for (int a = 0; a < 2; ++a) acc.err[a] = pop.base_rate(a);  // h == 0

  constexpr double tol = 1e-9;
  const std::uint64_t corners = std::uint64_t{1} << n;
  for (std::uint64_t code = 0;; ++code) {
    ++report.num_checked;
    const double joint_err = acc.err[0] + acc.err[1];
    if (joint_err <= 1e-12) {
      ++report.num_perfect;  // perfect predictors are outside the claim
    } else {
      // Positive rate parity: P(h=1 | y, a) equal across groups for both y.
      bool positive_rate_parity = true;
      for (int y = 0; y < 2 && positive_rate_parity; ++y) {
        if (label_mass[y][0] <= 0.0 || label_mass[y][1] <= 0.0) continue;
        const double r0 = acc.pred1_mass[y][0] / label_mass[y][0];
        const double r1 = acc.pred1_mass[y][1] / label_mass[y][1];
        if (std::abs(r0 - r1) > tol) positive_rate_parity = false;
      }
      // Predictive rate parity: P(Y=1 | h=c, a) equal across groups where the
      // prediction cell has mass in both groups.
      bool predictive_rate_parity = true;
      if (positive_rate_parity) {
        for (int c = 0; c < 2 && predictive_rate_parity; ++c) {
          double cell[2] = {0, 0};
          double cell_pos[2] = {0, 0};
          for (int a = 0; a < 2; ++a) {
            for (int y = 0; y < 2; ++y) {
              const double m = c == 1 ? acc.pred1_mass[y][a]
                                      : label_mass[y][a] - acc.pred1_mass[y][a];
              cell[a] += m;
              if (y == 1) cell_pos[a] += m;
            }
          }
          if (cell[0] <= 0.0 || cell[1] <= 0.0) continue;
          if (std::abs(cell_pos[0] / cell[0] - cell_pos[1] / cell[1]) > tol) {
            predictive_rate_parity = false;
          }
        }
        if (predictive_rate_parity) report.counterexamples.push_back(h);
      }
    }
    if (code + 1 == corners) break;
    const std::size_t flip = static_cast<std::size_t>(std::countr_zero(code + 1));
    const double delta = h[flip] == 0 ? 1.0 : -1.0;
    h[flip] = h[flip] == 0 ? 1 : 0;
    for (int y = 0; y < 2; ++y) {
      for (int a = 0; a < 2; ++a) {
        acc.pred1_mass[y][a] += delta * cond[(flip * 2 + y) * 2 + a];
      }
    }
    // err_a = P(y=1,h=0|a) + P(y=0,h=1|a); flipping x moves both terms.
    for (int a = 0; a < 2; ++a) {
      acc.err[a] += delta * (cond[(flip * 2 + 0) * 2 + a] - cond[(flip * 2 + 1) * 2 + a]);
    }
  }
  return report;
}

nlohmann::json OracleResult::to_json() const {
  nlohmann::json q = nlohmann::json::array();
  for (double v : argmin.values()) q.push_back(v);
  return {
      {"min_joint_error", min_joint_error},
      {"argmin", std::move(q)},
      {"num_vertices_examined", num_vertices_examined},
      {"delta_BR", delta_br},
  };
}

nlohmann::json ImpossibilitySweepReport::to_json() const {
  nlohmann::json exes = nlohmann::json::array();
  for (const auto& h : counterexamples) {
    nlohmann::json one = nlohmann::json::array();
    for (auto v : h) one.push_back(static_cast<int>(v));
    exes.push_back(std::move(one));
  }
  return {
      {"vacuous", vacuous},
      {"delta_BR", delta_br},
      {"num_checked", num_checked},
      {"num_perfect", num_perfect},
      {"holds", holds()},
      {"counterexamples", std::move(exes)},
  };
}

}  // namespace parity
