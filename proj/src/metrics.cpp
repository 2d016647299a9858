#include "parity/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace parity {

namespace {

void check_lengths(const GroupedDataset& ds, const PredictionSet& preds) {
  if (ds.size() != preds.size()) {
    std::ostringstream msg;
    msg << ds.size() << " rows vs " << preds.size() << " predictions";
    raise(ErrorCode::length_mismatch, msg.str());
  }
}

void require_group(const GroupedDataset& ds, int a) {
  if (ds.group_count(a) == 0) {
    std::ostringstream msg;
    msg << "group " << a << " has no rows";
    raise(ErrorCode::empty_group, msg.str());
  }
}

}  // namespace

BaseRates base_rates(const GroupedDataset& ds) {
  require_group(ds, 0);
  require_group(ds, 1);
  double positives[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < ds.size(); ++i) {
    positives[ds.group(i)] += ds.label(i);
  }
  BaseRates out;
  out.base_rate_0 = positives[0] / static_cast<double>(ds.group_count(0));
  out.base_rate_1 = positives[1] / static_cast<double>(ds.group_count(1));
  out.delta_br = std::abs(out.base_rate_0 - out.base_rate_1);
  out.alpha = static_cast<double>(ds.group_count(1)) / static_cast<double>(ds.size());
  return out;
}

GroupErrors group_errors(const GroupedDataset& ds, const PredictionSet& preds,
                         bool soft) {
  check_lengths(ds, preds);
  require_group(ds, 0);
  require_group(ds, 1);
  double abs_err[2] = {0.0, 0.0};
  double total = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double pred = soft ? preds.score(i) : static_cast<double>(preds.hard(i));
    const double e = std::abs(static_cast<double>(ds.label(i)) - pred);
    abs_err[ds.group(i)] += e;
    total += e;
  }
  GroupErrors out;
  out.err0 = abs_err[0] / static_cast<double>(ds.group_count(0));
  out.err1 = abs_err[1] / static_cast<double>(ds.group_count(1));
  out.err = total / static_cast<double>(ds.size());
  out.joint = out.err0 + out.err1;
  return out;
}

double dp_gap(const GroupedDataset& ds, const PredictionSet& preds) {
  check_lengths(ds, preds);
  require_group(ds, 0);
  require_group(ds, 1);
  double positives[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < ds.size(); ++i) {
    positives[ds.group(i)] += preds.hard(i);
  }
  return std::abs(positives[0] / static_cast<double>(ds.group_count(0)) -
                  positives[1] / static_cast<double>(ds.group_count(1)));
}

PositiveRateGaps positive_rate_gaps(const GroupedDataset& ds, const PredictionSet& preds) {
  check_lengths(ds, preds);
  double cell_count[2][2] = {{0, 0}, {0, 0}};       // [group][label]
  double cell_positive[2][2] = {{0, 0}, {0, 0}};    // predicted-1 counts
  for (std::size_t i = 0; i < ds.size(); ++i) {
    cell_count[ds.group(i)][ds.label(i)] += 1.0;
    cell_positive[ds.group(i)][ds.label(i)] += preds.hard(i);
  }
  for (int a = 0; a < 2; ++a) {
    for (int y = 0; y < 2; ++y) {
      if (cell_count[a][y] == 0.0) {
        std::ostringstream msg;
        msg << "no rows with group=" << a << ", label=" << y;
        raise(ErrorCode::empty_cell, msg.str());
      }
    }
  }
  PositiveRateGaps out;
  out.tpr_gap = std::abs(cell_positive[0][1] / cell_count[0][1] -
                         cell_positive[1][1] / cell_count[1][1]);
  out.fpr_gap = std::abs(cell_positive[0][0] / cell_count[0][0] -
                         cell_positive[1][0] / cell_count[1][0]);
  return out;
}

PredictiveRateReport predictive_rate_report(const GroupedDataset& ds,
                                            const PredictionSet& preds,
                                            std::size_t bins) {
  check_lengths(ds, preds);
  if (bins < 1) raise(ErrorCode::invalid_bin_count, "need at least one bin");

  PredictiveRateReport report;
  report.bins.resize(bins);
  std::vector<double> score_sum(bins, 0.0);
  std::vector<double> label_sum(bins, 0.0);
  const double width = 1.0 / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    report.bins[b].lo = static_cast<double>(b) * width;
    report.bins[b].hi = b + 1 == bins ? 1.0 : static_cast<double>(b + 1) * width;
  }
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto b = std::min<std::size_t>(
        static_cast<std::size_t>(preds.score(i) * static_cast<double>(bins)), bins - 1);
    auto& cell = report.bins[b];
    cell.count[ds.group(i)] += 1;
    cell.positives[ds.group(i)] += ds.label(i);
    score_sum[b] += preds.score(i);
    label_sum[b] += ds.label(i);
  }
  for (std::size_t b = 0; b < bins; ++b) {
    auto& cell = report.bins[b];
    if (cell.count[0] > 0 && cell.count[1] > 0) {
      cell.gap = std::abs(
          static_cast<double>(cell.positives[0]) / static_cast<double>(cell.count[0]) -
          static_cast<double>(cell.positives[1]) / static_cast<double>(cell.count[1]));
    }
    const std::size_t pooled = cell.count[0] + cell.count[1];
    if (pooled > 0) {
      cell.calibration_error = std::abs(score_sum[b] - label_sum[b]) /
                               static_cast<double>(pooled);
    }
  }
  return report;
}

FairnessReport full_report(const GroupedDataset& ds, const PredictionSet& preds,
                           std::size_t bins) {
  const BaseRates br = base_rates(ds);
  const GroupErrors ge = group_errors(ds, preds, /*soft=*/false);
  const PositiveRateGaps prg = positive_rate_gaps(ds, preds);
  const PredictiveRateReport prr = predictive_rate_report(ds, preds, bins);

  FairnessReport r;
  r.err_D = ge.err;
  r.err_D0 = ge.err0;
  r.err_D1 = ge.err1;
  r.joint_err = ge.joint;
  r.acc_gap = std::abs(ge.err0 - ge.err1);
  r.dp_gap = dp_gap(ds, preds);
  r.base_rate_0 = br.base_rate_0;
  r.base_rate_1 = br.base_rate_1;
  r.delta_BR = br.delta_br;
  r.alpha = br.alpha;
  r.tpr_gap = prg.tpr_gap;
  r.fpr_gap = prg.fpr_gap;
  r.predictive_rate_gaps.reserve(prr.bins.size());
  for (const auto& bin : prr.bins) r.predictive_rate_gaps.push_back(bin.gap);
  return r;
}

nlohmann::json PredictiveRateReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& bin : bins) {
    nlohmann::json j{{"lo", bin.lo},
                     {"hi", bin.hi},
                     {"count_0", bin.count[0]},
                     {"count_1", bin.count[1]},
                     {"positives_0", bin.positives[0]},
                     {"positives_1", bin.positives[1]}};
    j["gap"] = bin.gap ? nlohmann::json(*bin.gap) : nlohmann::json();
    j["calibration_error"] =
        bin.calibration_error ? nlohmann::json(*bin.calibration_error) : nlohmann::json();
    arr.push_back(std::move(j));
  }
  return arr;
}

nlohmann::json FairnessReport::to_json() const {
  nlohmann::json gaps = nlohmann::json::array();
  for (const auto& g : predictive_rate_gaps) {
    gaps.push_back(g ? nlohmann::json(*g) : nlohmann::json());
  }
  return {
      {"err_D", err_D},
      {"err_D0", err_D0},
      {"err_D1", err_D1},
      {"joint_err", joint_err},
      {"acc_gap", acc_gap},
      {"dp_gap", dp_gap},
      {"base_rate_0", base_rate_0},
      {"base_rate_1", base_rate_1},
      {"delta_BR", delta_BR},
      {"alpha", alpha},
      {"tpr_gap", tpr_gap},
      {"fpr_gap", fpr_gap},
      {"predictive_rate_gaps", std::move(gaps)},
  };
}

}  // namespace parity
