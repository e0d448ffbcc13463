#pragma once

// Monitored quantities: reconstruction log-probability, the partition-free
// log xi ratio, and exact (enumerated) partition function, log-likelihood
// and log-likelihood gradient.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "rbmstop/dataset.hpp"
#include "rbmstop/numeric.hpp"
#include "rbmstop/rbm.hpp"
#include "rbmstop/training.hpp"

namespace rbmstop {

/// Returned by reconstruction_log_prob in place of -inf.
inline constexpr double kLogProbSentinel = -1e300;

/// log P(x | E[h|x]) under the factorized visible conditional.
inline double reconstruction_log_prob(const RbmParams& p, const BinaryVector& x) {
  require_size(x.size(), p.visible(), "reconstruction_log_prob: x");
  const RealVector hhat = hidden_conditional_mean(p, x);
  Vector pre;
  visible_preactivation(p, hhat, pre);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) acc += x[i] * log_sigmoid(pre[i]);
    if (x[i] != 1.0) acc += (1.0 - x[i]) * log_sigmoid(-pre[i]);
  }
  return std::isfinite(acc) ? acc : kLogProbSentinel;
}

inline bool is_sentinel(double log_prob) noexcept { return log_prob <= kLogProbSentinel; }

enum class XiVariant {
  RandomHidden,     // h_s uniform on [0,1]^H
  ComplementH1,     // h_s = 1 - h1, h1 the first hidden sample of the chain
  ComplementMeanH,  // h_s = 1 - E[h | x1]
};

inline const char* to_string(XiVariant v) {
  switch (v) {
    case XiVariant::RandomHidden: return "random_hidden";
    case XiVariant::ComplementH1: return "complement_h1";
    case XiVariant::ComplementMeanH: return "complement_mean_h";
  }
  return "?";
}

struct XiProbe {
  XiVariant variant;
  RealVector y;
};

/// Low-probability counterpart y = E[x | h_s] of the chain's start x1.
/// Only RandomHidden draws from `rng` (H uniforms).
inline XiProbe xi_probe(const RbmParams& p, const GibbsChain& chain, XiVariant variant, Rng& rng) {
  RealVector hs(p.hidden());
  switch (variant) {
    case XiVariant::RandomHidden:
      for (Eigen::Index j = 0; j < hs.size(); ++j) hs[j] = rng.uniform();
      break;
    case XiVariant::ComplementH1:
      require_size(chain.h1().size(), p.hidden(), "xi_probe: h1");
      hs = (1.0 - chain.h1().array()).matrix();
      break;
    case XiVariant::ComplementMeanH:
      hs = (1.0 - hidden_conditional_mean(p, chain.x1).array()).matrix();
      break;
  }
  return {variant, visible_conditional_mean(p, hs)};
}

/// log prod_i P(x_i) / P(y_i), evaluated with unnormalized marginals so the
/// partition function never appears. Summed in sample order.
inline double log_xi(const RbmParams& p, const Dataset& data, const std::vector<XiProbe>& probes) {
  if (probes.size() != data.size()) {
    throw DimensionError("log_xi: " + std::to_string(probes.size()) + " probes for " +
                         std::to_string(data.size()) + " samples");
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < data.size(); ++k)
    acc += log_unnormalized_marginal(p, data.samples[k]) - log_unnormalized_marginal(p, probes[k].y);
  return acc;
}

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr Eigen::Index kMaxEnumeratedUnits = 25;

struct PartitionValue {
  double log_z;
};

inline void require_enumerable(Eigen::Index units, const char* what) {
  if (units > kMaxEnumeratedUnits) {
    throw InfeasibleError(std::string(what) + ": enumerating 2^" + std::to_string(units) +
                          " states exceeds the limit of 2^" + std::to_string(kMaxEnumeratedUnits));
  }
}

/// Bits of `k` as a 0/1 vector, unit j = bit j.
inline Vector state_from_index(std::uint64_t k, Eigen::Index len) {
  Vector s(len);
  for (Eigen::Index j = 0; j < len; ++j) s[j] = static_cast<double>((k >> j) & 1u);
  return s;
}

/// log of sum_x exp(-Energy(x, h)) for fixed h: c'h + sum_i softplus(b_i + (W'h)_i).
inline double log_unnormalized_hidden_marginal(const RbmParams& p, const Vector& h) {
  Vector pre;
  visible_preactivation(p, h, pre);
  double acc = 0.0;
  for (Eigen::Index j = 0; j < h.size(); ++j) acc += p.c[j] * h[j];
  for (Eigen::Index i = 0; i < pre.size(); ++i) acc += softplus(pre[i]);
  return acc;
}

inline PartitionValue log_partition_over_hidden(const RbmParams& p) {
  require_enumerable(p.hidden(), "log_partition");
  const std::uint64_t count = std::uint64_t{1} << p.hidden();
  std::vector<double> terms(count);
  for (std::uint64_t k = 0; k < count; ++k)
    terms[k] = log_unnormalized_hidden_marginal(p, state_from_index(k, p.hidden()));
  return {logsumexp(terms)};
}

inline PartitionValue log_partition_over_visible(const RbmParams& p) {
  require_enumerable(p.visible(), "log_partition");
  const std::uint64_t count = std::uint64_t{1} << p.visible();
  std::vector<double> terms(count);
  for (std::uint64_t k = 0; k < count; ++k)
    terms[k] = log_unnormalized_marginal(p, state_from_index(k, p.visible()));
  return {logsumexp(terms)};
}

/// log Z by enumerating the smaller layer.
inline PartitionValue log_partition(const RbmParams& p) {
  if (std::min(p.hidden(), p.visible()) > kMaxEnumeratedUnits) {
    throw InfeasibleError("log_partition: both layers exceed " + std::to_string(kMaxEnumeratedUnits) +
                          " units");
  }
  return p.hidden() <= p.visible() ? log_partition_over_hidden(p) : log_partition_over_visible(p);
}

/// sum_i log P(x_i) = sum_i log_unnormalized_marginal(x_i) - N log Z.
inline double exact_log_likelihood(const RbmParams& p, const Dataset& data, const PartitionValue& z) {
  double acc = 0.0;
  for (const auto& x : data.samples) acc += log_unnormalized_marginal(p, x);
  return acc - static_cast<double>(data.size()) * z.log_z;
}

inline double exact_log_likelihood(const RbmParams& p, const Dataset& data) {
  return exact_log_likelihood(p, data, log_partition(p));
}

/// Model expectations E[h x'], E[x], E[h] under the joint distribution,
/// enumerating the smaller layer.
inline GradientEstimate model_moments(const RbmParams& p) {
  const PartitionValue z = log_partition(p);
  GradientEstimate m = GradientEstimate::zeros_like(p);
  if (p.hidden() <= p.visible()) {
    const std::uint64_t count = std::uint64_t{1} << p.hidden();
    for (std::uint64_t k = 0; k < count; ++k) {
      const Vector h = state_from_index(k, p.hidden());
      const double w = std::exp(log_unnormalized_hidden_marginal(p, h) - z.log_z);
      const Vector ex = visible_conditional_mean(p, h);
      m.dW.noalias() += w * h * ex.transpose();
      m.db += w * ex;
      m.dc += w * h;
    }
  } else {
    const std::uint64_t count = std::uint64_t{1} << p.visible();
    for (std::uint64_t k = 0; k < count; ++k) {
      const Vector x = state_from_index(k, p.visible());
      const double w = std::exp(log_unnormalized_marginal(p, x) - z.log_z);
      const Vector eh = hidden_conditional_mean(p, x);
      m.dW.noalias() += w * eh * x.transpose();
      m.db += w * x;
      m.dc += w * eh;
    }
  }
  return m;
}

/// Gradient of the mean data log-likelihood: data moments minus model
/// moments.
inline GradientEstimate exact_gradient(const RbmParams& p, const Dataset& data) {
  if (data.empty()) throw std::invalid_argument("exact_gradient: empty dataset");
  GradientEstimate g = GradientEstimate::zeros_like(p);
  for (const auto& x : data.samples) {
    const Vector eh = hidden_conditional_mean(p, x);
    g.dW.noalias() += eh * x.transpose();
    g.db += x;
    g.dc += eh;
  }
  const double n = static_cast<double>(data.size());
  const GradientEstimate model = model_moments(p);
  g.dW = g.dW / n - model.dW;
  g.db = g.db / n - model.db;
  g.dc = g.dc / n - model.dc;
  return g;
}

}  // namespace rbmstop
