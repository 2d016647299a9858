#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "parity/error.hpp"

namespace parity {

// Exact joint pmf over (x-index, y, a) with x in [0,n), y,a binary. Ground
// truth for the oracle and the decomposition bounds: every conditional is a
// finite sum, nothing is estimated.
class FinitePopulation {
 public:
  // mass laid out as mass[(x*2 + y)*2 + a]; must total 1 within 1e-9 and give
  // positive mass to both groups.
  FinitePopulation(std::size_t n, std::vector<double> mass);

  struct Entry {
    std::size_t x;
    int y;
    int a;
    double mass;
  };
  static FinitePopulation from_entries(std::size_t n, std::span<const Entry> entries);

  std::size_t size() const noexcept { return n_; }
  double mass(std::size_t x, int y, int a) const {
    return mass_[(x * 2 + y) * 2 + a];
  }

  double group_mass(int a) const noexcept { return group_mass_[a]; }

  // P(X=x | A=a)
  double x_given_group(std::size_t x, int a) const {
    return (mass(x, 0, a) + mass(x, 1, a)) / group_mass_[a];
  }
  // P(X=x, Y=y | A=a)
  double xy_given_group(std::size_t x, int y, int a) const {
    return mass(x, y, a) / group_mass_[a];
  }
  // P(Y=1 | X=x, A=a); requires positive mass at (x, a).
  double y1_given_x(std::size_t x, int a) const;

  bool has_x_mass(std::size_t x, int a) const {
    return mass(x, 0, a) + mass(x, 1, a) > 0.0;
  }

  double base_rate(int a) const noexcept { return base_rate_[a]; }
  double delta_br() const noexcept;

  // d_TV between the group-conditional X marginals.
  double x_marginal_tv() const;

 private:
  std::size_t n_;
  std::vector<double> mass_;
  double group_mass_[2] = {0.0, 0.0};
  double base_rate_[2] = {0.0, 0.0};
};

// Deterministic predictor over x-indices.
using DeterministicPredictor = std::vector<std::uint8_t>;

}  // namespace parity
