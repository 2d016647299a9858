#include "parity/certificate.hpp"

#include <cmath>
#include <utility>

namespace parity {

namespace {

bool all_satisfied(const std::vector<Assumption>& assumptions) {
  for (const auto& a : assumptions) {
    if (!a.satisfied) return false;
  }
  return true;
}

// Margin oriented so holds <=> margin >= -slack; with infinities the
// difference can be NaN, so the comparison is done on lhs/rhs directly.
BoundCertificate build(std::string name, double lhs, double rhs, double slack,
                       std::vector<Assumption> assumptions, bool lower) {
  BoundCertificate cert;
  cert.bound_name = std::move(name);
  cert.lhs = lhs;
  cert.rhs = rhs;
  cert.slack = slack;
  cert.assumptions = std::move(assumptions);
  cert.assumptions_satisfied = all_satisfied(cert.assumptions);

  const double raw_margin = lower ? lhs - rhs : rhs - lhs;
  cert.margin = std::isnan(raw_margin) ? 0.0 : raw_margin;  // inf - inf
  const bool inequality_holds = lower ? lhs >= rhs - slack : lhs <= rhs + slack;
  cert.holds = inequality_holds || !cert.assumptions_satisfied;
  return cert;
}

}  // namespace

BoundCertificate BoundCertificate::lower_bound(std::string name, double lhs, double rhs,
                                               double slack,
                                               std::vector<Assumption> assumptions) {
  return build(std::move(name), lhs, rhs, slack, std::move(assumptions), true);
}

BoundCertificate BoundCertificate::upper_bound(std::string name, double lhs, double rhs,
                                               double slack,
                                               std::vector<Assumption> assumptions) {
  return build(std::move(name), lhs, rhs, slack, std::move(assumptions), false);
}

nlohmann::json BoundCertificate::to_json() const {
  nlohmann::json detail = nlohmann::json::array();
  for (const auto& a : assumptions) {
    detail.push_back({{"name", a.name}, {"satisfied", a.satisfied}, {"value", a.value}});
  }
  return {
      {"bound_name", bound_name},
      {"lhs", lhs},
      {"rhs", rhs},
      {"margin", margin},
      {"holds", holds},
      {"assumptions", detail},
      {"assumptions_satisfied", assumptions_satisfied},
  };
}

}  // namespace parity
