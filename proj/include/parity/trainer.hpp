#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "parity/certificate.hpp"
#include "parity/dataset.hpp"

namespace parity {

// How the adversary's objective reaches the encoder. Gradient reversal folds
// the min-max game into one update per batch: the encoder descends
// d(target_loss)/dθ - rho * d(adversary_loss)/dθ while the adversary head
// descends its own loss. Alternating updates step the adversary first, then
// the encoder and target head.
enum class AdversaryMode { gradient_reversal, alternating };

struct TrainConfig {
  std::vector<int> hidden_sizes{500, 200, 100};
  int adversary_hidden = 50;
  double rho = 0.0;
  double learning_rate = 0.01;
  int epochs = 20;
  int batch_size = 128;
  std::uint64_t seed = 0;
  AdversaryMode adversary_mode = AdversaryMode::gradient_reversal;
  bool ablate_adversary = false;   // skip adversary compute entirely
  double holdout_fraction = 0.25;  // used only when no eval split is given

  void validate() const;
};

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
};

// Encoder g (ReLU stack), target head h (affine + logistic) and the adversary
// that tries to recover the group from the encoded features.
struct MLPModel {
  std::vector<DenseLayer> encoder;
  DenseLayer target_head;       // 1 x feature_dim
  DenseLayer adversary_hidden;  // adversary_hidden x feature_dim, ReLU
  DenseLayer adversary_head;    // 1 x adversary_hidden

  int input_dim() const { return static_cast<int>(encoder.front().weight.cols()); }
  int feature_dim() const { return static_cast<int>(encoder.back().weight.rows()); }
};

// Seeded uniform initialization with scale sqrt(6 / (fan_in + fan_out)).
MLPModel init_model(int input_dim, const TrainConfig& config, std::mt19937_64& rng);

struct ForwardResult {
  double target_score = 0.5;
  double adversary_score = 0.5;
  Eigen::VectorXd features;  // encoder output Z
};

ForwardResult forward(const MLPModel& model, std::span<const double> input);

struct Batch {
  Eigen::MatrixXd inputs;   // rows x input_dim
  Eigen::VectorXd labels;   // 0/1
  Eigen::VectorXd groups;   // 0/1
};

// Mean cross-entropies of the two heads on a batch, no gradients.
struct LossComponents {
  double target_loss = 0.0;
  double adversary_loss = 0.0;
};
LossComponents loss_components(const MLPModel& model, const Batch& batch);

struct ModelGradients {
  std::vector<DenseLayer> encoder;
  DenseLayer target_head;
  DenseLayer adversary_hidden;
  DenseLayer adversary_head;
};

// loss = target CE + rho * adversary CE. Gradients implement the reversal:
// encoder blocks hold d(target CE)/dθ - rho * d(adversary CE)/dθ, the
// adversary blocks hold rho * d(adversary CE)/dθ, the target head its own CE
// gradient. rho = 0 therefore reduces exactly to target-only training.
struct LossGradients {
  double loss = 0.0;
  LossComponents components;
  ModelGradients gradients;
};
LossGradients loss_and_gradients(const MLPModel& model, const Batch& batch, double rho);

// One row of the rho sweep, evaluated on the held-out split at threshold 0.5.
struct SweepRow {
  double rho = 0.0;
  double err_D = 0.0;
  double joint_err = 0.0;
  double acc_gap = 0.0;
  double dp_gap = 0.0;

  nlohmann::json to_json() const;
  static SweepRow from_json(const nlohmann::json& j);
};

struct TrainResult {
  MLPModel model;
  SweepRow row;
};

// Minibatch SGD with the combined loss; fully deterministic for a fixed seed
// (seeded init, seeded shuffle stream, sequential updates).
TrainResult train(const GroupedDataset& train_ds, const GroupedDataset& eval_ds,
                  const TrainConfig& config);

// Splits off a deterministic holdout (config.holdout_fraction) for evaluation.
TrainResult train(const GroupedDataset& ds, const TrainConfig& config);

// Score every row with the target head.
PredictionSet predict(const MLPModel& model, const GroupedDataset& ds,
                      double threshold = 0.5);

struct SweepOutcome {
  std::vector<SweepRow> rows;
  std::vector<BoundCertificate> certificates;  // one per row, unconditional
  double delta_br = 0.0;                       // of the evaluation split

  nlohmann::json to_json() const;
};

// One training run per rho, identical config and seed otherwise. Runs execute
// in parallel up to `max_threads` (0 = PARITY_AUDIT_THREADS, else hardware).
SweepOutcome sweep(const GroupedDataset& train_ds, const GroupedDataset& eval_ds,
                   const TrainConfig& base_config, std::span<const double> rhos,
                   unsigned max_threads = 0);

}  // namespace parity
