#include "parity/population.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace parity {

FinitePopulation::FinitePopulation(std::size_t n, std::vector<double> mass)
    : n_(n), mass_(std::move(mass)) {
  if (n_ == 0) raise(ErrorCode::invalid_argument, "population needs at least one x");
  if (mass_.size() != n_ * 4) {
    raise(ErrorCode::length_mismatch, "mass array must have n*4 entries");
  }
  double total = 0.0;
  double positive[2] = {0.0, 0.0};
  for (std::size_t x = 0; x < n_; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int a = 0; a < 2; ++a) {
        const double m = mass(x, y, a);
        if (!(m >= 0.0)) {
          std::ostringstream msg;
          msg << "mass(" << x << "," << y << "," << a << ") = " << m;
          raise(ErrorCode::negative_mass, msg.str());
        }
        total += m;
        group_mass_[a] += m;
        if (y == 1) positive[a] += m;
      }
    }
  }
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "total mass is " << total;
    raise(ErrorCode::mass_not_normalized, msg.str());
  }
  for (int a = 0; a < 2; ++a) {
    if (group_mass_[a] <= 0.0) {
      std::ostringstream msg;
      msg << "group " << a << " has zero mass";
      raise(ErrorCode::empty_group, msg.str());
    }
    base_rate_[a] = positive[a] / group_mass_[a];
  }
}

FinitePopulation FinitePopulation::from_entries(std::size_t n,
                                                std::span<const Entry> entries) {
  std::vector<double> mass(n * 4, 0.0);
  for (const auto& e : entries) {
    if (e.x >= n || e.y < 0 || e.y > 1 || e.a < 0 || e.a > 1) {
      std::ostringstream msg;
      msg << "entry (" << e.x << "," << e.y << "," << e.a << ") out of range for n=" << n;
      raise(ErrorCode::index_out_of_range, msg.str());
    }
    mass[(e.x * 2 + e.y) * 2 + e.a] += e.mass;
  }
  return FinitePopulation(n, std::move(mass));
}

double FinitePopulation::y1_given_x(std::size_t x, int a) const {
  const double m = mass(x, 0, a) + mass(x, 1, a);
  if (m <= 0.0) {
    std::ostringstream msg;
    msg << "x=" << x << " has no mass in group " << a;
    raise(ErrorCode::undefined_on_support, msg.str());
  }
  return mass(x, 1, a) / m;
}

double FinitePopulation::delta_br() const noexcept {
  return std::abs(base_rate_[0] - base_rate_[1]);
}

double FinitePopulation::x_marginal_tv() const {
  double tv = 0.0;
  for (std::size_t x = 0; x < n_; ++x) {
    tv += std::abs(x_given_group(x, 0) - x_given_group(x, 1));
  }
  return 0.5 * tv;
}

}  // namespace parity
