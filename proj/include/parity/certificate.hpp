#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace parity {

// One named hypothesis of a conditional bound, with the measured value it was
// judged on (e.g. the demographic parity gap of the audited predictor).
struct Assumption {
  std::string name;
  bool satisfied = true;
  double value = 0.0;
};

// A checked instance of an inequality: LHS vs RHS with a slack tolerance.
// For lower bounds the claim is lhs >= rhs, for upper bounds lhs <= rhs;
// margin is oriented so that the claim holds numerically iff margin >= -slack.
// A certificate whose assumptions are violated is vacuous: it reports
// holds = true with assumptions_satisfied = false, so sweeps always complete
// and consumers can tell a real violation from an inapplicable bound.
struct BoundCertificate {
  std::string bound_name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool holds = true;
  double slack = 1e-9;
  std::vector<Assumption> assumptions;
  bool assumptions_satisfied = true;

  bool vacuous() const noexcept { return !assumptions_satisfied; }

  static BoundCertificate lower_bound(std::string name, double lhs, double rhs,
                                      double slack,
                                      std::vector<Assumption> assumptions = {});
  static BoundCertificate upper_bound(std::string name, double lhs, double rhs,
                                      double slack,
                                      std::vector<Assumption> assumptions = {});

  nlohmann::json to_json() const;
};

}  // namespace parity
