#pragma once

#include "rbmstop/rbm.hpp"

namespace testing_util {

/// Weights and biases i.i.d. uniform on [-scale, scale].
inline rbmstop::RbmParams random_params(Eigen::Index V, Eigen::Index H, double scale, rbmstop::Rng& rng) {
  auto u = [&] { return scale * (2.0 * rng.uniform() - 1.0); };
  rbmstop::RbmParams p = rbmstop::RbmParams::zeros(V, H);
  for (Eigen::Index k = 0; k < p.W.size(); ++k) p.W.data()[k] = u();
  for (Eigen::Index i = 0; i < V; ++i) p.b[i] = u();
  for (Eigen::Index j = 0; j < H; ++j) p.c[j] = u();
  return p;
}

inline rbmstop::Vector random_bits(Eigen::Index n, rbmstop::Rng& rng) {
  rbmstop::Vector v(n);
  for (Eigen::Index k = 0; k < n; ++k) v[k] = rng.bernoulli(0.5) ? 1.0 : 0.0;
  return v;
}

/// The 2x2 model used by several worked examples.
inline rbmstop::RbmParams tiny_params() {
  rbmstop::Matrix W(2, 2);
  W << 1.0, -1.0, 0.5, 0.0;
  rbmstop::Vector b(2), c(2);
  b << 0.1, -0.2;
  c << 0.0, 0.3;
  return {W, b, c};
}

inline rbmstop::Vector vec(std::initializer_list<double> xs) {
  rbmstop::Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v[k++] = x;
  return v;
}

}  // namespace testing_util
