#include "parity/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace parity {

namespace {

Assumption dp_assumption(const FairnessReport& report) {
  return {"demographic_parity", report.dp_gap <= kBoundSlack, report.dp_gap};
}

}  // namespace

BoundCertificate dp_tradeoff_certificate(const FairnessReport& report) {
  return BoundCertificate::lower_bound("dp_joint_error_lower_bound", report.joint_err,
                                       report.delta_BR, kBoundSlack,
                                       {dp_assumption(report)});
}

BoundCertificate max_group_error_certificate(const FairnessReport& report) {
  return BoundCertificate::lower_bound("dp_max_group_error_lower_bound",
                                       std::max(report.err_D0, report.err_D1),
                                       report.delta_BR / 2.0, kBoundSlack,
                                       {dp_assumption(report)});
}

BoundCertificate dp_gap_tradeoff_certificate(const FairnessReport& report) {
  const double rhs = std::max(0.0, report.delta_BR - report.dp_gap);
  return BoundCertificate::lower_bound("dp_gap_joint_error_lower_bound",
                                       report.joint_err, rhs, kBoundSlack);
}

BoundCertificate error_tv_certificate(const GroupedDataset& ds, const PredictionSet& preds,
                                      int group, bool soft) {
  if (ds.size() != preds.size()) {
    raise(ErrorCode::length_mismatch, "dataset and predictions differ in length");
  }
  if (ds.group_count(group) == 0) {
    raise(ErrorCode::empty_group, "no rows in requested group");
  }
  double err_sum = 0.0, label_sum = 0.0, pred_sum = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.group(i) != group) continue;
    const double pred = soft ? preds.score(i) : static_cast<double>(preds.hard(i));
    err_sum += std::abs(static_cast<double>(ds.label(i)) - pred);
    label_sum += ds.label(i);
    pred_sum += pred;
  }
  const double count = static_cast<double>(ds.group_count(group));
  const double tv = std::abs(label_sum - pred_sum) / count;  // two-outcome TV
  std::ostringstream name;
  name << "group" << group << "_error_tv_lower_bound";
  return BoundCertificate::lower_bound(name.str(), err_sum / count, tv, kBoundSlack);
}

RepresentationCertificates representation_certificates(
    const DiscreteDistribution& label_dist_0, const DiscreteDistribution& label_dist_1,
    const DiscreteDistribution& feature_dist_0, const DiscreteDistribution& feature_dist_1,
    const FairnessReport& report) {
  const double label_tv = tv_distance(label_dist_0, label_dist_1);
  const double label_js = js_distance(label_dist_0, label_dist_1);
  const double label_h = hellinger_distance(label_dist_0, label_dist_1);
  const double feat_tv = tv_distance(feature_dist_0, feature_dist_1);
  const double feat_js = js_distance(feature_dist_0, feature_dist_1);
  const double feat_h = hellinger_distance(feature_dist_0, feature_dist_1);

  const auto gap_sq_half = [](double label_d, double feat_d) {
    const double gap = label_d - feat_d;
    return gap * gap / 2.0;
  };

  RepresentationCertificates out{
      BoundCertificate::lower_bound(
          "representation_tv_lower_bound", report.joint_err, label_tv - feat_tv,
          kBoundSlack,
          {{"feature_tv_below_label_tv", feat_tv <= label_tv + kBoundSlack, feat_tv}}),
      BoundCertificate::lower_bound(
          "representation_js_lower_bound", report.joint_err,
          gap_sq_half(label_js, feat_js), kBoundSlack,
          {{"feature_js_below_label_js", feat_js <= label_js + kBoundSlack, feat_js}}),
      BoundCertificate::lower_bound(
          "representation_hellinger_lower_bound", report.joint_err,
          gap_sq_half(label_h, feat_h), kBoundSlack,
          {{"feature_hellinger_below_label_hellinger", feat_h <= label_h + kBoundSlack,
            feat_h}}),
  };
  return out;
}

OptimalDecision optimal_group_decision(const FinitePopulation& pop, int group) {
  OptimalDecision out;
  out.decision.assign(pop.size(), 0);
  out.on_support.assign(pop.size(), 0);
  bool any = false;
  for (std::size_t x = 0; x < pop.size(); ++x) {
    if (!pop.has_x_mass(x, group)) continue;
    any = true;
    out.on_support[x] = 1;
    out.decision[x] = pop.y1_given_x(x, group) >= 0.5 ? 1 : 0;
  }
  if (!any) raise(ErrorCode::empty_group, "group has no support");
  return out;
}

double group_noise(const FinitePopulation& pop, int group) {
  double noise = 0.0;
  bool any = false;
  for (std::size_t x = 0; x < pop.size(); ++x) {
    if (!pop.has_x_mass(x, group)) continue;
    any = true;
    const double eta = pop.y1_given_x(x, group);
    noise += pop.x_given_group(x, group) * std::min(eta, 1.0 - eta);
  }
  if (!any) raise(ErrorCode::empty_group, "group has no support");
  return noise;
}

double disagreement(const FinitePopulation& pop, int group,
                    std::span<const std::uint8_t> h,
                    std::span<const std::uint8_t> h_prime) {
  if (h.size() != pop.size() || h_prime.size() != pop.size()) {
    raise(ErrorCode::undefined_on_support, "predictor does not cover the support");
  }
  double mass = 0.0;
  for (std::size_t x = 0; x < pop.size(); ++x) {
    if (h[x] != h_prime[x]) mass += pop.x_given_group(x, group);
  }
  return mass;
}

namespace {

double exact_group_error(const FinitePopulation& pop, int group,
                         std::span<const std::uint8_t> h) {
  double err = 0.0;
  for (std::size_t x = 0; x < pop.size(); ++x) {
    err += pop.xy_given_group(x, 1 - h[x], group);
  }
  return err;
}

}  // namespace

std::pair<DecompositionTerms, BoundCertificate> accuracy_parity_certificate(
    const FinitePopulation& pop, std::span<const std::uint8_t> h) {
  if (h.size() != pop.size()) {
    raise(ErrorCode::undefined_on_support, "predictor does not cover the support");
  }
  const OptimalDecision h0 = optimal_group_decision(pop, 0);
  const OptimalDecision h1 = optimal_group_decision(pop, 1);

  // Extend each group-optimal rule to the union support: borrow the other
  // group's decision where available, else 0.
  DeterministicPredictor h0_ext(pop.size()), h1_ext(pop.size());
  double extended[2] = {0, 0};
  for (std::size_t x = 0; x < pop.size(); ++x) {
    h0_ext[x] = h0.on_support[x] ? h0.decision[x] : (h1.on_support[x] ? h1.decision[x] : 0);
    h1_ext[x] = h1.on_support[x] ? h1.decision[x] : (h0.on_support[x] ? h0.decision[x] : 0);
    extended[0] += !h0.on_support[x];
    extended[1] += !h1.on_support[x];
  }

  DecompositionTerms terms;
  terms.noise_0 = group_noise(pop, 0);
  terms.noise_1 = group_noise(pop, 1);
  terms.input_tv = pop.x_marginal_tv();
  terms.min_disagreement = std::min(disagreement(pop, 0, h0_ext, h1_ext),
                                    disagreement(pop, 1, h0_ext, h1_ext));
  terms.rhs_total =
      terms.noise_0 + terms.noise_1 + terms.input_tv + terms.min_disagreement;

  const double err0 = exact_group_error(pop, 0, h);
  const double err1 = exact_group_error(pop, 1, h);
  auto cert = BoundCertificate::upper_bound(
      "accuracy_parity_upper_bound", std::abs(err0 - err1), terms.rhs_total, kBoundSlack,
      {{"h0_star_off_support_extensions", true, extended[0]},
       {"h1_star_off_support_extensions", true, extended[1]}});
  return {terms, std::move(cert)};
}

BinnedFeatures equal_frequency_binning(const GroupedDataset& ds,
                                       std::size_t bins_per_dim,
                                       std::size_t support_cap) {
  if (bins_per_dim < 2) raise(ErrorCode::invalid_bin_count, "need at least 2 bins");
  if (support_cap < 2) raise(ErrorCode::invalid_argument, "support cap too small");
  if (ds.feature_dim() == 0) {
    raise(ErrorCode::invalid_argument, "dataset has no features to bin");
  }

  // Shrink bins, then dimensions, until the product support fits the cap.
  std::size_t bins = bins_per_dim;
  std::size_t dims = ds.feature_dim();
  const auto product_fits = [&](std::size_t b, std::size_t d) {
    double prod = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      prod *= static_cast<double>(b);
      if (prod > static_cast<double>(support_cap)) return false;
    }
    return true;
  };
  while (bins > 2 && !product_fits(bins, dims)) bins /= 2;
  while (dims > 1 && !product_fits(bins, dims)) --dims;

  // Per-dimension cut points at equal-frequency ranks over the pooled rows.
  const std::size_t rows = ds.size();
  std::vector<std::vector<double>> cuts(dims);
  std::vector<double> column(rows);
  for (std::size_t d = 0; d < dims; ++d) {
    for (std::size_t i = 0; i < rows; ++i) column[i] = ds.row(i)[d];
    std::sort(column.begin(), column.end());
    auto& cut = cuts[d];
    for (std::size_t b = 1; b < bins; ++b) {
      cut.push_back(column[b * rows / bins]);
    }
    cut.erase(std::unique(cut.begin(), cut.end()), cut.end());
  }

  BinnedFeatures out;
  out.bins_per_dim = bins;
  out.dims_used = dims;
  out.cell.resize(rows);
  std::map<std::vector<std::size_t>, std::size_t> dense;
  std::vector<std::size_t> key(dims);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto row = ds.row(i);
    for (std::size_t d = 0; d < dims; ++d) {
      const auto& cut = cuts[d];
      key[d] = static_cast<std::size_t>(
          std::upper_bound(cut.begin(), cut.end(), row[d]) - cut.begin());
    }
    const auto [it, inserted] = dense.try_emplace(key, dense.size());
    out.cell[i] = it->second;
  }
  out.support = dense.size();
  return out;
}

std::pair<DiscreteDistribution, DiscreteDistribution> binned_group_distributions(
    const GroupedDataset& ds, const BinnedFeatures& binned) {
  if (binned.cell.size() != ds.size()) {
    raise(ErrorCode::length_mismatch, "binning does not cover the dataset");
  }
  if (ds.group_count(0) == 0 || ds.group_count(1) == 0) {
    raise(ErrorCode::empty_group, "both groups are required");
  }
  std::vector<double> w0(binned.support, 0.0), w1(binned.support, 0.0);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    (ds.group(i) == 0 ? w0 : w1)[binned.cell[i]] += 1.0;
  }
  return {normalized(w0), normalized(w1)};
}

nlohmann::json DecompositionTerms::to_json() const {
  return {
      {"noise_0", noise_0},
      {"noise_1", noise_1},
      {"input_tv", input_tv},
      {"min_disagreement", min_disagreement},
      {"rhs_total", rhs_total},
  };
}

}  // namespace parity
