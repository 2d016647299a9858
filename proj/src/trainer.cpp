#include "parity/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <thread>

#include "parity/bounds.hpp"
#include "parity/metrics.hpp"

namespace parity {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// CE of a logistic output from its logit: softplus(z) - y*z, stable for large |z|.
double logistic_ce(double logit, double y) {
  const double softplus = logit > 0.0 ? logit + std::log1p(std::exp(-logit))
                                      : std::log1p(std::exp(logit));
  return softplus - y * logit;
}

Eigen::VectorXd sigmoid_vec(const Eigen::VectorXd& z) {
  return z.unaryExpr([](double v) { return sigmoid(v); });
}

double mean_ce(const Eigen::VectorXd& logits, const Eigen::VectorXd& targets) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    total += logistic_ce(logits(i), targets(i));
  }
  return total / static_cast<double>(logits.size());
}

struct ForwardCache {
  std::vector<Eigen::MatrixXd> pre;   // encoder preactivations
  std::vector<Eigen::MatrixXd> act;   // act[0] = inputs, act[k] = relu(pre[k-1])
  Eigen::VectorXd target_logits;
  Eigen::MatrixXd adversary_pre;
  Eigen::MatrixXd adversary_act;
  Eigen::VectorXd adversary_logits;
};

ForwardCache forward_batch(const MLPModel& model, const Eigen::MatrixXd& inputs,
                           bool with_adversary) {
  ForwardCache cache;
  cache.act.push_back(inputs);
  for (const auto& layer : model.encoder) {
    Eigen::MatrixXd pre = cache.act.back() * layer.weight.transpose();
    pre.rowwise() += layer.bias.transpose();
    cache.pre.push_back(pre);
    cache.act.push_back(pre.cwiseMax(0.0));
  }
  const Eigen::MatrixXd& z = cache.act.back();
  cache.target_logits = z * model.target_head.weight.transpose();
  cache.target_logits.array() += model.target_head.bias(0);
  if (with_adversary) {
    cache.adversary_pre = z * model.adversary_hidden.weight.transpose();
    cache.adversary_pre.rowwise() += model.adversary_hidden.bias.transpose();
    cache.adversary_act = cache.adversary_pre.cwiseMax(0.0);
    cache.adversary_logits =
        cache.adversary_act * model.adversary_head.weight.transpose();
    cache.adversary_logits.array() += model.adversary_head.bias(0);
  }
  return cache;
}

DenseLayer zeros_like(const DenseLayer& layer) {
  return {Eigen::MatrixXd::Zero(layer.weight.rows(), layer.weight.cols()),
          Eigen::VectorXd::Zero(layer.bias.size())};
}

void check_batch(const MLPModel& model, const Batch& batch) {
  if (batch.inputs.rows() == 0) raise(ErrorCode::empty_batch, "batch has no rows");
  if (batch.inputs.cols() != model.input_dim()) {
    std::ostringstream msg;
    msg << "batch dim " << batch.inputs.cols() << " vs model input " << model.input_dim();
    raise(ErrorCode::dimension_mismatch, msg.str());
  }
  if (batch.labels.size() != batch.inputs.rows() ||
      batch.groups.size() != batch.inputs.rows()) {
    raise(ErrorCode::length_mismatch, "batch labels/groups do not match rows");
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (hidden_sizes.empty()) {
    raise(ErrorCode::invalid_argument, "need at least one hidden layer");
  }
  for (int h : hidden_sizes) {
    if (h <= 0) raise(ErrorCode::invalid_argument, "hidden sizes must be positive");
  }
  if (adversary_hidden <= 0) {
    raise(ErrorCode::invalid_argument, "adversary hidden size must be positive");
  }
  if (rho < 0.0) raise(ErrorCode::invalid_argument, "rho must be >= 0");
  if (learning_rate <= 0.0) raise(ErrorCode::invalid_argument, "learning rate must be > 0");
  if (epochs <= 0) raise(ErrorCode::invalid_argument, "epochs must be positive");
  if (batch_size <= 0) raise(ErrorCode::invalid_argument, "batch size must be positive");
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    raise(ErrorCode::invalid_argument, "holdout fraction must lie in (0,1)");
  }
}

namespace {

DenseLayer init_layer(int out, int in, std::mt19937_64& rng) {
  const double scale = std::sqrt(6.0 / static_cast<double>(in + out));
  std::uniform_real_distribution<double> u(-scale, scale);
  DenseLayer layer{Eigen::MatrixXd(out, in), Eigen::VectorXd::Zero(out)};
  for (int r = 0; r < out; ++r) {
    for (int c = 0; c < in; ++c) layer.weight(r, c) = u(rng);
  }
  return layer;
}

}  // namespace

MLPModel init_model(int input_dim, const TrainConfig& config, std::mt19937_64& rng) {
  config.validate();
  if (input_dim <= 0) raise(ErrorCode::invalid_argument, "input dim must be positive");
  MLPModel model;
  int in = input_dim;
  for (int h : config.hidden_sizes) {
    model.encoder.push_back(init_layer(h, in, rng));
    in = h;
  }
  model.target_head = init_layer(1, in, rng);
  model.adversary_hidden = init_layer(config.adversary_hidden, in, rng);
  model.adversary_head = init_layer(1, config.adversary_hidden, rng);
  return model;
}

ForwardResult forward(const MLPModel& model, std::span<const double> input) {
  if (static_cast<int>(input.size()) != model.input_dim()) {
    raise(ErrorCode::dimension_mismatch, "input does not match model dimension");
  }
  Eigen::MatrixXd row(1, input.size());
  for (std::size_t i = 0; i < input.size(); ++i) row(0, i) = input[i];
  const ForwardCache cache = forward_batch(model, row, /*with_adversary=*/true);
  ForwardResult out;
  out.target_score = sigmoid(cache.target_logits(0));
  out.adversary_score = sigmoid(cache.adversary_logits(0));
  out.features = cache.act.back().row(0).transpose();
  return out;
}

LossComponents loss_components(const MLPModel& model, const Batch& batch) {
  check_batch(model, batch);
  const ForwardCache cache = forward_batch(model, batch.inputs, /*with_adversary=*/true);
  return {mean_ce(cache.target_logits, batch.labels),
          mean_ce(cache.adversary_logits, batch.groups)};
}

namespace {

// Backpropagates d(loss)/d(Z) through the encoder stack.
void backprop_encoder(const MLPModel& model, const ForwardCache& cache,
                      const Eigen::MatrixXd& dz, ModelGradients& grads) {
  Eigen::MatrixXd delta = dz;
  for (int k = static_cast<int>(model.encoder.size()) - 1; k >= 0; --k) {
    delta = ((cache.pre[k].array() > 0.0).cast<double>() * delta.array()).matrix();
    grads.encoder[k].weight = delta.transpose() * cache.act[k];
    grads.encoder[k].bias = delta.colwise().sum().transpose();
    if (k > 0) delta = delta * model.encoder[k].weight;
  }
}

}  // namespace

LossGradients loss_and_gradients(const MLPModel& model, const Batch& batch, double rho) {
  check_batch(model, batch);
  if (rho < 0.0) raise(ErrorCode::invalid_argument, "rho must be >= 0");

  const ForwardCache cache = forward_batch(model, batch.inputs, /*with_adversary=*/true);
  const double inv_rows = 1.0 / static_cast<double>(batch.inputs.rows());
  const Eigen::MatrixXd& z = cache.act.back();

  LossGradients out;
  out.components.target_loss = mean_ce(cache.target_logits, batch.labels);
  out.components.adversary_loss = mean_ce(cache.adversary_logits, batch.groups);
  out.loss = out.components.target_loss + rho * out.components.adversary_loss;
  if (!std::isfinite(out.loss)) {
    raise(ErrorCode::non_finite_loss, "loss is not finite");
  }

  out.gradients.encoder.reserve(model.encoder.size());
  for (const auto& layer : model.encoder) out.gradients.encoder.push_back(zeros_like(layer));
  out.gradients.target_head = zeros_like(model.target_head);
  out.gradients.adversary_hidden = zeros_like(model.adversary_hidden);
  out.gradients.adversary_head = zeros_like(model.adversary_head);

  // Target branch.
  const Eigen::VectorXd du =
      (sigmoid_vec(cache.target_logits) - batch.labels) * inv_rows;
  out.gradients.target_head.weight = du.transpose() * z;
  out.gradients.target_head.bias(0) = du.sum();
  Eigen::MatrixXd dz_target = du * model.target_head.weight;

  // Adversary branch: gradients of the plain adversary CE first.
  const Eigen::VectorXd dv =
      (sigmoid_vec(cache.adversary_logits) - batch.groups) * inv_rows;
  Eigen::MatrixXd d_adv_act = dv * model.adversary_head.weight;
  const Eigen::MatrixXd d_adv_pre =
      ((cache.adversary_pre.array() > 0.0).cast<double>() * d_adv_act.array()).matrix();
  out.gradients.adversary_head.weight = rho * (dv.transpose() * cache.adversary_act);
  out.gradients.adversary_head.bias(0) = rho * dv.sum();
  out.gradients.adversary_hidden.weight = rho * (d_adv_pre.transpose() * z);
  out.gradients.adversary_hidden.bias = rho * d_adv_pre.colwise().sum().transpose();

  // Reversal at the encoder junction.
  const Eigen::MatrixXd dz =
      dz_target - rho * (d_adv_pre * model.adversary_hidden.weight);
  backprop_encoder(model, cache, dz, out.gradients);
  return out;
}

namespace {

void sgd_step(DenseLayer& layer, const DenseLayer& grad, double lr) {
  layer.weight.noalias() -= lr * grad.weight;
  layer.bias.noalias() -= lr * grad.bias;
}

Batch slice_batch(const GroupedDataset& ds, std::span<const std::size_t> rows) {
  Batch batch;
  batch.inputs.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(ds.feature_dim()));
  batch.labels.resize(static_cast<Eigen::Index>(rows.size()));
  batch.groups.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto row = ds.row(rows[r]);
    for (std::size_t c = 0; c < row.size(); ++c) {
      batch.inputs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
    }
    batch.labels(static_cast<Eigen::Index>(r)) = ds.label(rows[r]);
    batch.groups(static_cast<Eigen::Index>(r)) = ds.group(rows[r]);
  }
  return batch;
}

// Adversary-only descent on its unscaled CE; used by the alternating mode.
void adversary_step(MLPModel& model, const Batch& batch, double lr) {
  const ForwardCache cache = forward_batch(model, batch.inputs, /*with_adversary=*/true);
  const double inv_rows = 1.0 / static_cast<double>(batch.inputs.rows());
  const Eigen::VectorXd dv =
      (sigmoid_vec(cache.adversary_logits) - batch.groups) * inv_rows;
  const Eigen::MatrixXd d_adv_act = dv * model.adversary_head.weight;
  const Eigen::MatrixXd d_adv_pre =
      ((cache.adversary_pre.array() > 0.0).cast<double>() * d_adv_act.array()).matrix();
  DenseLayer head_grad{dv.transpose() * cache.adversary_act,
                       Eigen::VectorXd::Constant(1, dv.sum())};
  DenseLayer hidden_grad{d_adv_pre.transpose() * cache.act.back(),
                         d_adv_pre.colwise().sum().transpose()};
  sgd_step(model.adversary_head, head_grad, lr);
  sgd_step(model.adversary_hidden, hidden_grad, lr);
}

}  // namespace

PredictionSet predict(const MLPModel& model, const GroupedDataset& ds, double threshold) {
  if (static_cast<int>(ds.feature_dim()) != model.input_dim()) {
    raise(ErrorCode::dimension_mismatch, "dataset does not match model input");
  }
  std::vector<std::size_t> all(ds.size());
  std::iota(all.begin(), all.end(), 0);
  const Batch batch = slice_batch(ds, all);
  const ForwardCache cache = forward_batch(model, batch.inputs, /*with_adversary=*/false);
  std::vector<double> scores(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    scores[i] = sigmoid(cache.target_logits(static_cast<Eigen::Index>(i)));
  }
  return PredictionSet::from_scores(std::move(scores), threshold);
}

TrainResult train(const GroupedDataset& train_ds, const GroupedDataset& eval_ds,
                  const TrainConfig& config) {
  config.validate();
  if (train_ds.feature_dim() == 0) {
    raise(ErrorCode::invalid_argument, "training data has no features");
  }
  if (train_ds.group_count(0) == 0 || train_ds.group_count(1) == 0) {
    raise(ErrorCode::empty_group, "training data must contain both groups");
  }

  std::mt19937_64 rng(config.seed);
  MLPModel model = init_model(static_cast<int>(train_ds.feature_dim()), config, rng);

  std::vector<std::size_t> order(train_ds.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch_size = static_cast<std::size_t>(config.batch_size);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      const std::size_t count = std::min(batch_size, order.size() - start);
      const Batch batch = slice_batch(train_ds, {order.data() + start, count});

      if (!config.ablate_adversary &&
          config.adversary_mode == AdversaryMode::alternating && config.rho > 0.0) {
        adversary_step(model, batch, config.learning_rate);
      }
      const double rho = config.ablate_adversary ? 0.0 : config.rho;
      LossGradients lg = loss_and_gradients(model, batch, rho);
      if (!std::isfinite(lg.loss)) raise(ErrorCode::diverged, "training diverged");

      for (std::size_t k = 0; k < model.encoder.size(); ++k) {
        sgd_step(model.encoder[k], lg.gradients.encoder[k], config.learning_rate);
      }
      sgd_step(model.target_head, lg.gradients.target_head, config.learning_rate);
      if (!config.ablate_adversary &&
          config.adversary_mode == AdversaryMode::gradient_reversal) {
        sgd_step(model.adversary_hidden, lg.gradients.adversary_hidden,
                 config.learning_rate);
        sgd_step(model.adversary_head, lg.gradients.adversary_head, config.learning_rate);
      }
    }
  }

  const PredictionSet preds = predict(model, eval_ds);
  const GroupErrors ge = group_errors(eval_ds, preds, /*soft=*/false);
  SweepRow row;
  row.rho = config.rho;
  row.err_D = ge.err;
  row.joint_err = ge.joint;
  row.acc_gap = std::abs(ge.err0 - ge.err1);
  row.dp_gap = dp_gap(eval_ds, preds);
  return {std::move(model), row};
}

TrainResult train(const GroupedDataset& ds, const TrainConfig& config) {
  config.validate();
  // Deterministic holdout: shuffle once with a split-only stream so the
  // training RNG sequence matches the explicit-split overload.
  std::mt19937_64 split_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(ds.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), split_rng);
  const auto holdout = static_cast<std::size_t>(
      std::max(1.0, std::floor(config.holdout_fraction * static_cast<double>(ds.size()))));
  if (holdout >= ds.size()) {
    raise(ErrorCode::invalid_argument, "holdout leaves no training rows");
  }
  const std::span<const std::size_t> eval_rows{order.data(), holdout};
  const std::span<const std::size_t> train_rows{order.data() + holdout,
                                                ds.size() - holdout};
  return train(ds.subset(train_rows), ds.subset(eval_rows), config);
}

namespace {

unsigned resolve_thread_cap(unsigned requested, std::size_t jobs) {
  unsigned cap = requested;
  if (cap == 0) {
    if (const char* env = std::getenv("PARITY_AUDIT_THREADS")) {
      const long parsed = std::strtol(env, nullptr, 10);
      if (parsed > 0) cap = static_cast<unsigned>(parsed);
    }
  }
  if (cap == 0) cap = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(cap, jobs));
}

}  // namespace

SweepOutcome sweep(const GroupedDataset& train_ds, const GroupedDataset& eval_ds,
                   const TrainConfig& base_config, std::span<const double> rhos,
                   unsigned max_threads) {
  if (rhos.empty()) raise(ErrorCode::invalid_argument, "rho list is empty");
  base_config.validate();

  SweepOutcome outcome;
  outcome.rows.resize(rhos.size());
  const unsigned threads = resolve_thread_cap(max_threads, rhos.size());

  std::vector<std::exception_ptr> errors(rhos.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < rhos.size(); i = next.fetch_add(1)) {
      try {
        TrainConfig config = base_config;
        config.rho = rhos[i];
        outcome.rows[i] = train(train_ds, eval_ds, config).row;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  const BaseRates br = base_rates(eval_ds);
  outcome.delta_br = br.delta_br;
  for (const auto& row : outcome.rows) {
    FairnessReport summary;
    summary.joint_err = row.joint_err;
    summary.delta_BR = br.delta_br;
    summary.dp_gap = row.dp_gap;
    auto cert = dp_gap_tradeoff_certificate(summary);
    outcome.certificates.push_back(std::move(cert));
  }
  return outcome;
}

nlohmann::json SweepRow::to_json() const {
  return {
      {"rho", rho},       {"err_D", err_D},   {"joint_err", joint_err},
      {"acc_gap", acc_gap}, {"dp_gap", dp_gap},
  };
}

SweepRow SweepRow::from_json(const nlohmann::json& j) {
  SweepRow row;
  row.rho = j.at("rho").get<double>();
  row.err_D = j.at("err_D").get<double>();
  row.joint_err = j.at("joint_err").get<double>();
  row.acc_gap = j.at("acc_gap").get<double>();
  row.dp_gap = j.at("dp_gap").get<double>();
  return row;
}

nlohmann::json SweepOutcome::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& row : rows) rows_json.push_back(row.to_json());
  nlohmann::json certs_json = nlohmann::json::array();
  for (const auto& cert : certificates) certs_json.push_back(cert.to_json());
  return {
      {"rows", std::move(rows_json)},
      {"certificates", std::move(certs_json)},
      {"delta_BR", delta_br},
  };
}

}  // namespace parity
