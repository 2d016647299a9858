#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "parity/certificate.hpp"
#include "parity/error.hpp"

namespace parity {

// Nonnegative real extended with +infinity. Divergences take values here:
// KL-type divergences are infinite when absolute continuity fails.
class ExtendedReal {
 public:
  ExtendedReal() = default;
  explicit ExtendedReal(double v);

  static ExtendedReal infinity() noexcept {
    ExtendedReal r;
    r.v_ = std::numeric_limits<double>::infinity();
    return r;
  }

  bool is_finite() const noexcept { return v_ != std::numeric_limits<double>::infinity(); }
  double value() const noexcept { return v_; }

  friend bool operator==(const ExtendedReal&, const ExtendedReal&) = default;
  friend auto operator<=>(const ExtendedReal&, const ExtendedReal&) = default;

 private:
  double v_ = 0.0;
};

// Finite probability vector over outcome indices 0..size-1. Validated at
// construction, never silently renormalized.
class DiscreteDistribution {
 public:
  explicit DiscreteDistribution(std::vector<double> probs);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const noexcept { return probs_; }

  // Elementwise equality within 1e-9; requires matching supports.
  bool approx_equals(const DiscreteDistribution& other, double tol = 1e-9) const;

 private:
  std::vector<double> probs_;
};

// Validating factory. Weights must be >= 0 and sum to 1 within 1e-9.
DiscreteDistribution make_distribution(std::vector<double> weights);

// Normalizes nonnegative counts/weights to a distribution. For empirical data.
DiscreteDistribution normalized(std::span<const double> weights);

// Two-outcome distribution with P(outcome 1) = p.
DiscreteDistribution bernoulli(double p);

enum class DivergenceKind {
  KL,
  ReverseKL,
  JensenShannon,
  SquaredHellinger,
  TotalVariation,
};

constexpr DivergenceKind kAllDivergenceKinds[] = {
    DivergenceKind::KL, DivergenceKind::ReverseKL, DivergenceKind::JensenShannon,
    DivergenceKind::SquaredHellinger, DivergenceKind::TotalVariation};

const char* to_string(DivergenceKind kind) noexcept;

// Log base used by the KL-type divergences. Jensen-Shannon is always computed
// base-2 so that it lies in [0,1] and sqrt(JSD) is a bounded metric.
enum class KlLogBase { natural, two };

// Generic f-divergence: sum_i q_i * f(p_i / q_i), with 0*f(0/0) = 0 and
// zero-mass outcomes handled by the generator's limits.
ExtendedReal f_divergence(DivergenceKind kind, const DiscreteDistribution& p,
                          const DiscreteDistribution& q,
                          KlLogBase kl_base = KlLogBase::natural);

// Closed forms for two-outcome distributions; agrees with f_divergence on
// bernoulli(p), bernoulli(q) to 1e-12.
ExtendedReal bernoulli_divergence_closed_form(DivergenceKind kind, double p, double q,
                                              KlLogBase kl_base = KlLogBase::natural);

// Bounded distance metrics derived from the divergences; all in [0,1].
double tv_distance(const DiscreteDistribution& p, const DiscreteDistribution& q);
double js_distance(const DiscreteDistribution& p, const DiscreteDistribution& q);
double hellinger_distance(const DiscreteDistribution& p, const DiscreteDistribution& q);

// Distribution of map(X) when X ~ p. The map must send every index of p to an
// index below output_size (defaults to 1 + max mapped index).
DiscreteDistribution pushforward(const DiscreteDistribution& p,
                                 std::span<const std::size_t> index_map,
                                 std::size_t output_size = 0);

// Row-stochastic matrix: a conditional distribution over outputs per input.
class StochasticKernel {
 public:
  explicit StochasticKernel(std::vector<std::vector<double>> rows);

  static StochasticKernel identity(std::size_t n);
  // Deterministic kernel: all mass of input i goes to index_map[i].
  static StochasticKernel deterministic(std::span<const std::size_t> index_map,
                                        std::size_t output_size = 0);

  std::size_t input_size() const noexcept { return rows_.size(); }
  std::size_t output_size() const noexcept { return rows_.empty() ? 0 : rows_.front().size(); }
  double operator()(std::size_t in, std::size_t out) const { return rows_[in][out]; }

 private:
  std::vector<std::vector<double>> rows_;
};

// (kappa p)_j = sum_i p_i k_ij.
DiscreteDistribution apply_kernel(const StochasticKernel& kernel,
                                  const DiscreteDistribution& p);

// Certifies D_f(kp || kq) <= D_f(p || q): processing through any stochastic
// kernel cannot increase discriminating information.
BoundCertificate data_processing_certificate(DivergenceKind kind,
                                             const StochasticKernel& kernel,
                                             const DiscreteDistribution& p,
                                             const DiscreteDistribution& q,
                                             KlLogBase kl_base = KlLogBase::natural);

}  // namespace parity
