#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "bfamily/grid.hpp"

namespace testing {

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double sup(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

inline bfam::Field sample(const bfam::GridPtr& g, const std::function<double(double)>& f) {
  return bfam::Field::from_function(g, f);
}

/// Random real trigonometric polynomial with modes 1..max_mode.
inline bfam::Field random_band_limited(const bfam::GridPtr& g, std::size_t max_mode, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> a(max_mode + 1), b(max_mode + 1);
  for (std::size_t n = 0; n <= max_mode; ++n) {
    a[n] = normal(rng);
    b[n] = normal(rng);
  }
  const double L = g->half_length();
  return bfam::Field::from_function(g, [&](double x) {
    double v = a[0];
    for (std::size_t n = 1; n <= max_mode; ++n) {
      const double k = static_cast<double>(n) * std::numbers::pi / L;
      v += a[n] * std::cos(k * x) + b[n] * std::sin(k * x);
    }
    return v;
  });
}

}  // namespace testing
