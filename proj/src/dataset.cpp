#include "parity/dataset.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace parity {

GroupedDataset::GroupedDataset(std::vector<double> features_row_major,
                               std::size_t feature_dim,
                               std::vector<std::uint8_t> labels,
                               std::vector<std::uint8_t> groups)
    : features_(std::move(features_row_major)),
      feature_dim_(feature_dim),
      labels_(std::move(labels)),
      groups_(std::move(groups)) {
  if (labels_.empty()) {
    raise(ErrorCode::invalid_argument, "dataset must be nonempty");
  }
  if (groups_.size() != labels_.size()) {
    raise(ErrorCode::length_mismatch, "labels and groups differ in length");
  }
  if (features_.size() != labels_.size() * feature_dim_) {
    raise(ErrorCode::length_mismatch, "feature buffer does not match rows x dim");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] > 1 || groups_[i] > 1) {
      std::ostringstream msg;
      msg << "row " << i << ": labels and groups must be 0 or 1";
      raise(ErrorCode::invalid_argument, msg.str());
    }
    ++group_counts_[groups_[i]];
  }
}

GroupedDataset GroupedDataset::subset(std::span<const std::size_t> indices) const {
  std::vector<double> feats;
  feats.reserve(indices.size() * feature_dim_);
  std::vector<std::uint8_t> labels, groups;
  labels.reserve(indices.size());
  groups.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= size()) {
      raise(ErrorCode::index_out_of_range, "subset index beyond dataset");
    }
    const auto r = row(i);
    feats.insert(feats.end(), r.begin(), r.end());
    labels.push_back(labels_[i]);
    groups.push_back(groups_[i]);
  }
  return GroupedDataset(std::move(feats), feature_dim_, std::move(labels),
                        std::move(groups));
}

PredictionSet PredictionSet::from_scores(std::vector<double> scores, double threshold) {
  PredictionSet ps;
  ps.threshold_ = threshold;
  ps.hard_.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double s = scores[i];
    if (!(s >= 0.0 && s <= 1.0)) {
      std::ostringstream msg;
      msg << "score " << i << " = " << s << " outside [0,1]";
      raise(ErrorCode::invalid_argument, msg.str());
    }
    ps.hard_.push_back(s >= threshold ? 1 : 0);
  }
  ps.scores_ = std::move(scores);
  return ps;
}

PredictionSet PredictionSet::from_hard_labels(std::vector<std::uint8_t> labels) {
  PredictionSet ps;
  ps.scores_.reserve(labels.size());
  for (std::uint8_t v : labels) {
    if (v > 1) raise(ErrorCode::invalid_argument, "hard labels must be 0 or 1");
    ps.scores_.push_back(static_cast<double>(v));
  }
  ps.hard_ = std::move(labels);
  return ps;
}

}  // namespace parity
