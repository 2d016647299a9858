#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "parity/error.hpp"

namespace parity {

// Sampled rows (features, binary label, binary group). Features are stored
// row-major with a constant dimension; dimension 0 is legal for audits that
// only need labels and groups. Immutable after construction.
class GroupedDataset {
 public:
  GroupedDataset(std::vector<double> features_row_major, std::size_t feature_dim,
                 std::vector<std::uint8_t> labels, std::vector<std::uint8_t> groups);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t feature_dim() const noexcept { return feature_dim_; }

  std::span<const double> row(std::size_t i) const {
    return {features_.data() + i * feature_dim_, feature_dim_};
  }
  int label(std::size_t i) const { return labels_[i]; }
  int group(std::size_t i) const { return groups_[i]; }

  std::span<const double> features() const noexcept { return features_; }
  std::span<const std::uint8_t> labels() const noexcept { return labels_; }
  std::span<const std::uint8_t> groups() const noexcept { return groups_; }

  std::size_t group_count(int a) const noexcept { return group_counts_[a]; }

  // Row subset, preserving order of `indices`.
  GroupedDataset subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<double> features_;
  std::size_t feature_dim_;
  std::vector<std::uint8_t> labels_;
  std::vector<std::uint8_t> groups_;
  std::size_t group_counts_[2] = {0, 0};
};

// Per-row scores in [0,1] plus the hard labels they induce at a recorded
// threshold (score >= threshold -> 1).
class PredictionSet {
 public:
  static PredictionSet from_scores(std::vector<double> scores, double threshold = 0.5);
  static PredictionSet from_hard_labels(std::vector<std::uint8_t> labels);

  std::size_t size() const noexcept { return scores_.size(); }
  double score(std::size_t i) const { return scores_[i]; }
  int hard(std::size_t i) const { return hard_[i]; }
  double threshold() const noexcept { return threshold_; }

  std::span<const double> scores() const noexcept { return scores_; }
  std::span<const std::uint8_t> hard_labels() const noexcept { return hard_; }

 private:
  PredictionSet() = default;
  std::vector<double> scores_;
  std::vector<std::uint8_t> hard_;
  double threshold_ = 0.5;
};

}  // namespace parity
