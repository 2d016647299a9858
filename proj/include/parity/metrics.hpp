#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "json.hpp"
#include "parity/dataset.hpp"

namespace parity {

struct BaseRates {
  double base_rate_0 = 0.0;  // P(Y=1 | A=0)
  double base_rate_1 = 0.0;  // P(Y=1 | A=1)
  double delta_br = 0.0;     // |base_rate_0 - base_rate_1|
  double alpha = 0.0;        // P(A=1)
};

struct GroupErrors {
  double err0 = 0.0;   // mean |Y - prediction| on group 0
  double err1 = 0.0;
  double err = 0.0;    // population error: (1-alpha)*err0 + alpha*err1
  double joint = 0.0;  // err0 + err1, the group-insensitive total
};

struct PositiveRateGaps {
  double tpr_gap = 0.0;  // |P(Yhat=1|Y=1,A=0) - P(Yhat=1|Y=1,A=1)|
  double fpr_gap = 0.0;
};

struct PredictiveRateBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count[2] = {0, 0};      // rows per group landing in the bin
  std::size_t positives[2] = {0, 0};  // of those, rows with Y=1
  // |P(Y=1|bin,A=0) - P(Y=1|bin,A=1)|; absent when either group is missing
  // from the bin (an empty cell is flagged, never reported as agreement).
  std::optional<double> gap;
  // |mean score in bin - positive fraction in bin| over both groups pooled.
  std::optional<double> calibration_error;
};

struct PredictiveRateReport {
  std::vector<PredictiveRateBin> bins;
  nlohmann::json to_json() const;
};

struct FairnessReport {
  double err_D = 0.0;
  double err_D0 = 0.0;
  double err_D1 = 0.0;
  double joint_err = 0.0;
  double acc_gap = 0.0;
  double dp_gap = 0.0;
  double base_rate_0 = 0.0;
  double base_rate_1 = 0.0;
  double delta_BR = 0.0;
  double alpha = 0.0;
  double tpr_gap = 0.0;
  double fpr_gap = 0.0;
  std::vector<std::optional<double>> predictive_rate_gaps;

  nlohmann::json to_json() const;
};

// Per-group positive label rates. Requires both groups present.
BaseRates base_rates(const GroupedDataset& ds);

// Mean absolute prediction error per group; scores when soft, hard labels
// otherwise. err is the group-size weighted mixture, joint the plain sum.
GroupErrors group_errors(const GroupedDataset& ds, const PredictionSet& preds,
                         bool soft = false);

// |P(Yhat=1|A=0) - P(Yhat=1|A=1)| on hard labels.
double dp_gap(const GroupedDataset& ds, const PredictionSet& preds);

// True/false positive rate gaps; every (group, label) cell must be occupied.
PositiveRateGaps positive_rate_gaps(const GroupedDataset& ds, const PredictionSet& preds);

// Scores split into `bins` equal-width bins over [0,1]; per-bin group gap in
// positive fraction plus a pooled calibration entry.
PredictiveRateReport predictive_rate_report(const GroupedDataset& ds,
                                            const PredictionSet& preds,
                                            std::size_t bins);

// All of the above in one pass; hard-label metrics, default 10 score bins.
FairnessReport full_report(const GroupedDataset& ds, const PredictionSet& preds,
                           std::size_t bins = 10);

}  // namespace parity
