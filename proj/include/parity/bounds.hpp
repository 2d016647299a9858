#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "parity/certificate.hpp"
#include "parity/dataset.hpp"
#include "parity/distribution.hpp"
#include "parity/metrics.hpp"
#include "parity/population.hpp"

namespace parity {

// Slack used by every certificate in this module.
inline constexpr double kBoundSlack = 1e-9;

// joint error >= base-rate difference, for predictors satisfying demographic
// parity. The measured dp gap is recorded as the assumption; when parity does
// not hold exactly the certificate is vacuous rather than failed.
BoundCertificate dp_tradeoff_certificate(const FairnessReport& report);

// max group error >= base-rate difference / 2, same DP hypothesis.
BoundCertificate max_group_error_certificate(const FairnessReport& report);

// joint error >= base-rate difference - dp gap (clamped at 0); holds for any
// predictor, no assumptions.
BoundCertificate dp_gap_tradeoff_certificate(const FairnessReport& report);

// err_a >= d_TV(D_a(Y), D_a(Yhat)) for one group; soft uses scores for both
// the error and the prediction distribution.
BoundCertificate error_tv_certificate(const GroupedDataset& ds, const PredictionSet& preds,
                                      int group, bool soft = true);

struct RepresentationCertificates {
  BoundCertificate tv;
  BoundCertificate js;
  BoundCertificate hellinger;
};

// Lower bounds on the joint error driven by how far the label distributions
// sit apart relative to the group-conditional feature distributions:
//   joint >= d_TV(Y0, Y1) - d_TV(Z0, Z1)
//   joint >= (d_JS(Y0, Y1) - d_JS(Z0, Z1))^2 / 2     [needs d_JS(Z) <= d_JS(Y)]
//   joint >= (H(Y0, Y1) - H(Z0, Z1))^2 / 2           [needs H(Z) <= H(Y)]
// Each certificate carries its feature-vs-label assumption; violated
// assumptions yield vacuous-true certificates so sweeps always complete.
RepresentationCertificates representation_certificates(
    const DiscreteDistribution& label_dist_0, const DiscreteDistribution& label_dist_1,
    const DiscreteDistribution& feature_dist_0, const DiscreteDistribution& feature_dist_1,
    const FairnessReport& report);

// Group-optimal decision rule: h_a*(x) = 1 iff P(Y=1|x,a) >= 1/2 (ties to 1).
// Defined only on x with positive group mass; off-support entries are zero
// with on_support = 0 so callers choose and record their own extension.
struct OptimalDecision {
  DeterministicPredictor decision;
  std::vector<std::uint8_t> on_support;
};
OptimalDecision optimal_group_decision(const FinitePopulation& pop, int group);

// Irreducible absolute-loss error of the group: E[min(eta, 1 - eta)].
double group_noise(const FinitePopulation& pop, int group);

// Mass (under the group's X marginal) where the two predictors differ.
double disagreement(const FinitePopulation& pop, int group,
                    std::span<const std::uint8_t> h, std::span<const std::uint8_t> h_prime);

struct DecompositionTerms {
  double noise_0 = 0.0;
  double noise_1 = 0.0;
  double input_tv = 0.0;           // d_TV(D0(X), D1(X))
  double min_disagreement = 0.0;   // min_a E_a|h0* - h1*| with recorded extension
  double rhs_total = 0.0;

  nlohmann::json to_json() const;
};

// Upper bound on the error gap of any deterministic predictor:
//   |err_0(h) - err_1(h)| <= noise_0 + noise_1 + d_TV(D0(X), D1(X))
//                            + min_a E_a|h0* - h1*|.
// h_a* is extended off its group's support by the other group's decision when
// available, else 0; the extension counts are recorded on the certificate.
std::pair<DecompositionTerms, BoundCertificate> accuracy_parity_certificate(
    const FinitePopulation& pop, std::span<const std::uint8_t> h);

// Shared equal-frequency grid for discretizing feature vectors; cells are
// computed on the pooled rows so both groups see the same bins. The product
// support is kept under `support_cap` by halving the per-dimension bin count
// and, as a last resort, dropping trailing dimensions.
struct BinnedFeatures {
  std::vector<std::size_t> cell;   // per-row cell index
  std::size_t support = 0;         // number of distinct cells (dense indices)
  std::size_t bins_per_dim = 0;
  std::size_t dims_used = 0;
};
BinnedFeatures equal_frequency_binning(const GroupedDataset& ds,
                                       std::size_t bins_per_dim = 8,
                                       std::size_t support_cap = 4096);

// Group-conditional distributions over the shared cells.
std::pair<DiscreteDistribution, DiscreteDistribution> binned_group_distributions(
    const GroupedDataset& ds, const BinnedFeatures& binned);

}  // namespace parity
