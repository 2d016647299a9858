#include "parity/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace parity {

namespace {

constexpr double kNormalizationTol = 1e-9;
constexpr double kLn2 = 0.6931471805599453094172321214581766;

double checked_sum(std::span<const double> weights) {
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!(w >= 0.0)) {  // also rejects NaN
      std::ostringstream msg;
      msg << "entry " << i << " is " << w;
      raise(ErrorCode::negative_mass, msg.str());
    }
    sum += w;
  }
  return sum;
}

void check_same_support(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  if (p.size() != q.size()) {
    std::ostringstream msg;
    msg << "supports of size " << p.size() << " and " << q.size();
    raise(ErrorCode::support_mismatch, msg.str());
  }
}

double log_in(double x, KlLogBase base) {
  return base == KlLogBase::natural ? std::log(x) : std::log2(x);
}

}  // namespace

ExtendedReal::ExtendedReal(double v) : v_(v) {
  if (std::isnan(v) || v < 0.0) {
    raise(ErrorCode::invalid_argument, "extended real must be >= 0 or +inf");
  }
}

DiscreteDistribution::DiscreteDistribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty()) {
    raise(ErrorCode::invalid_argument, "distribution needs at least one outcome");
  }
  const double sum = checked_sum(probs_);
  if (std::abs(sum - 1.0) > kNormalizationTol) {
    std::ostringstream msg;
    msg << "probabilities sum to " << sum;
    raise(ErrorCode::not_normalized, msg.str());
  }
}

bool DiscreteDistribution::approx_equals(const DiscreteDistribution& other,
                                         double tol) const {
  check_same_support(*this, other);
  for (std::size_t i = 0; i < size(); ++i) {
    if (std::abs(probs_[i] - other.probs_[i]) > tol) return false;
  }
  return true;
}

DiscreteDistribution make_distribution(std::vector<double> weights) {
  return DiscreteDistribution(std::move(weights));
}

DiscreteDistribution normalized(std::span<const double> weights) {
  const double sum = checked_sum(weights);
  if (sum <= 0.0) {
    raise(ErrorCode::invalid_argument, "cannot normalize zero total weight");
  }
  std::vector<double> probs(weights.begin(), weights.end());
  for (double& w : probs) w /= sum;
  return DiscreteDistribution(std::move(probs));
}

DiscreteDistribution bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    raise(ErrorCode::invalid_argument, "bernoulli parameter must lie in [0,1]");
  }
  return DiscreteDistribution({1.0 - p, p});
}

const char* to_string(DivergenceKind kind) noexcept {
  switch (kind) {
    case DivergenceKind::KL: return "kl";
    case DivergenceKind::ReverseKL: return "reverse_kl";
    case DivergenceKind::JensenShannon: return "jensen_shannon";
    case DivergenceKind::SquaredHellinger: return "squared_hellinger";
    case DivergenceKind::TotalVariation: return "total_variation";
  }
  return "unknown";
}

namespace {

// One term of sum_i q_i f(p_i/q_i), in nats for the log-based generators.
// Conventions: 0*f(0/0) = 0; q = 0 < p contributes p * f'(inf); p = 0 < q
// contributes q * f(0). Both limits are finite except for the KL pair.
// Returns NaN to signal +infinity.
double generator_term(DivergenceKind kind, double p, double q) {
  constexpr double inf = std::numeric_limits<double>::quiet_NaN();
  if (p == 0.0 && q == 0.0) return 0.0;
  switch (kind) {
    case DivergenceKind::KL:
      if (q == 0.0) return inf;        // f'(inf) = inf
      if (p == 0.0) return 0.0;        // f(0) = 0
      return p * std::log(p / q);      // q * (t log t), t = p/q
    case DivergenceKind::ReverseKL:
      if (q == 0.0) return 0.0;        // f'(inf) = 0
      if (p == 0.0) return inf;        // f(0) = inf
      return q * std::log(q / p);      // q * (-log t)
    case DivergenceKind::JensenShannon: {
      // q * [t log t - (t+1) log((t+1)/2)] = p log(2p/(p+q)) + q log(2q/(p+q))
      const double m = 0.5 * (p + q);
      double term = 0.0;
      if (p > 0.0) term += 0.5 * p * std::log(p / m);
      if (q > 0.0) term += 0.5 * q * std::log(q / m);
      return term;
    }
    case DivergenceKind::SquaredHellinger: {
      const double d = std::sqrt(p) - std::sqrt(q);
      return 0.5 * d * d;
    }
    case DivergenceKind::TotalVariation:
      return 0.5 * std::abs(p - q);
  }
  return 0.0;
}

ExtendedReal finish(DivergenceKind kind, double nats, KlLogBase kl_base) {
  if (std::isnan(nats)) return ExtendedReal::infinity();
  double value = nats;
  switch (kind) {
    case DivergenceKind::JensenShannon:
      value = nats / kLn2;  // always reported in bits so JSD <= 1
      break;
    case DivergenceKind::KL:
    case DivergenceKind::ReverseKL:
      if (kl_base == KlLogBase::two) value = nats / kLn2;
      break;
    default:
      break;
  }
  // Tiny negative values can appear from cancellation at p ~= q.
  return ExtendedReal(std::max(0.0, value));
}

}  // namespace

ExtendedReal f_divergence(DivergenceKind kind, const DiscreteDistribution& p,
                          const DiscreteDistribution& q, KlLogBase kl_base) {
  check_same_support(p, q);
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double term = generator_term(kind, p[i], q[i]);
    if (std::isnan(term)) return ExtendedReal::infinity();
    total += term;
  }
  return finish(kind, total, kl_base);
}

ExtendedReal bernoulli_divergence_closed_form(DivergenceKind kind, double p, double q,
                                              KlLogBase kl_base) {
  if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0)) {
    raise(ErrorCode::invalid_argument, "bernoulli parameters must lie in [0,1]");
  }
  // kl(p, q) = p log(p/q) + (1-p) log((1-p)/(1-q)) in the requested base,
  // NaN signalling +infinity as in generator_term.
  const auto kl = [](double a, double b, KlLogBase base) -> double {
    double total = 0.0;
    if (a > 0.0) {
      if (b == 0.0) return std::numeric_limits<double>::quiet_NaN();
      total += a * log_in(a / b, base);
    }
    if (a < 1.0) {
      if (b == 1.0) return std::numeric_limits<double>::quiet_NaN();
      total += (1.0 - a) * log_in((1.0 - a) / (1.0 - b), base);
    }
    return total;
  };

  double value = 0.0;
  switch (kind) {
    case DivergenceKind::KL:
      value = kl(p, q, kl_base);
      break;
    case DivergenceKind::ReverseKL:
      value = kl(q, p, kl_base);
      break;
    case DivergenceKind::JensenShannon: {
      const double m = 0.5 * (p + q);
      value = 0.5 * (kl(p, m, KlLogBase::two) + kl(q, m, KlLogBase::two));
      break;
    }
    case DivergenceKind::SquaredHellinger:
      value = 1.0 - std::sqrt(p * q) - std::sqrt((1.0 - p) * (1.0 - q));
      break;
    case DivergenceKind::TotalVariation:
      value = std::abs(p - q);
      break;
  }
  if (std::isnan(value)) return ExtendedReal::infinity();
  return ExtendedReal(std::max(0.0, value));
}

double tv_distance(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  return f_divergence(DivergenceKind::TotalVariation, p, q).value();
}

double js_distance(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  return std::sqrt(f_divergence(DivergenceKind::JensenShannon, p, q).value());
}

double hellinger_distance(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  return std::sqrt(f_divergence(DivergenceKind::SquaredHellinger, p, q).value());
}

namespace {

std::size_t resolve_output_size(std::span<const std::size_t> index_map,
                                std::size_t output_size) {
  std::size_t needed = 0;
  for (std::size_t t : index_map) needed = std::max(needed, t + 1);
  if (output_size == 0) return needed;
  if (needed > output_size) {
    raise(ErrorCode::index_out_of_range, "map target exceeds output size");
  }
  return output_size;
}

}  // namespace

DiscreteDistribution pushforward(const DiscreteDistribution& p,
                                 std::span<const std::size_t> index_map,
                                 std::size_t output_size) {
  if (index_map.size() != p.size()) {
    raise(ErrorCode::length_mismatch, "map must cover every outcome of p");
  }
  std::vector<double> out(resolve_output_size(index_map, output_size), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) out[index_map[i]] += p[i];
  return DiscreteDistribution(std::move(out));
}

StochasticKernel::StochasticKernel(std::vector<std::vector<double>> rows)
    : rows_(std::move(rows)) {
  if (rows_.empty()) {
    raise(ErrorCode::invalid_argument, "kernel needs at least one row");
  }
  const std::size_t width = rows_.front().size();
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].size() != width) {
      raise(ErrorCode::support_mismatch, "kernel rows have unequal widths");
    }
    const double sum = checked_sum(rows_[i]);
    if (std::abs(sum - 1.0) > kNormalizationTol) {
      std::ostringstream msg;
      msg << "kernel row " << i << " sums to " << sum;
      raise(ErrorCode::not_normalized, msg.str());
    }
  }
}

StochasticKernel StochasticKernel::identity(std::size_t n) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1.0;
  return StochasticKernel(std::move(rows));
}

StochasticKernel StochasticKernel::deterministic(std::span<const std::size_t> index_map,
                                                 std::size_t output_size) {
  const std::size_t width = resolve_output_size(index_map, output_size);
  std::vector<std::vector<double>> rows(index_map.size(),
                                        std::vector<double>(width, 0.0));
  for (std::size_t i = 0; i < index_map.size(); ++i) rows[i][index_map[i]] = 1.0;
  return StochasticKernel(std::move(rows));
}

DiscreteDistribution apply_kernel(const StochasticKernel& kernel,
                                  const DiscreteDistribution& p) {
  if (kernel.input_size() != p.size()) {
    raise(ErrorCode::support_mismatch, "kernel input arity does not match support");
  }
  std::vector<double> out(kernel.output_size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += p[i] * kernel(i, j);
  }
  // Rows sum to 1 within tolerance, so the output total can drift by up to
  // the row tolerance; fold the residue into the largest entry so the result
  // satisfies the distribution invariant exactly as the math says it should.
  const double sum = std::accumulate(out.begin(), out.end(), 0.0);
  *std::max_element(out.begin(), out.end()) += 1.0 - sum;
  return DiscreteDistribution(std::move(out));
}

BoundCertificate data_processing_certificate(DivergenceKind kind,
                                             const StochasticKernel& kernel,
                                             const DiscreteDistribution& p,
                                             const DiscreteDistribution& q,
                                             KlLogBase kl_base) {
  check_same_support(p, q);
  const double lhs =
      f_divergence(kind, apply_kernel(kernel, p), apply_kernel(kernel, q), kl_base).value();
  const double rhs = f_divergence(kind, p, q, kl_base).value();
  return BoundCertificate::upper_bound(
      std::string("data_processing_") + to_string(kind), lhs, rhs, 1e-12);
}

}  // namespace parity
