#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace rbmstop {

/// log(1 + e^z) without overflow for large |z|.
inline double softplus(double z) noexcept {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

inline double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// log(sigmoid(z)); log(1 - sigmoid(z)) is log_sigmoid(-z).
inline double log_sigmoid(double z) noexcept { return -softplus(-z); }

inline double logsumexp(std::span<const double> terms) noexcept {
  if (terms.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(terms.begin(), terms.end());
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - m);
  return m + std::log(acc);
}

}  // namespace rbmstop
