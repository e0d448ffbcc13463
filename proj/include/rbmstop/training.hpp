#pragma once

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rbmstop/dataset.hpp"
#include "rbmstop/rbm.hpp"

namespace rbmstop {

/// How per-sample gradients within a batch are combined before the update.
enum class GradientReduction {
  Sum,   // ascent on the total log-likelihood of the batch
  Mean,  // ascent on the mean per-sample log-likelihood
};

struct TrainingConfig {
  int cd_order = 1;
  double learning_rate = 0.01;
  double weight_decay = 0.0;
  long epochs = 10000;
  long measure_every = 50;
  /// Samples per parameter update; 0 means one full-batch update per epoch.
  std::size_t batch_size = 0;
  GradientReduction reduction = GradientReduction::Sum;
  /// Visit samples in a fresh random order each epoch.
  bool shuffle = false;
  double init_stddev = 0.01;

  void validate() const {
    if (cd_order < 1) throw std::invalid_argument("cd_order must be >= 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
    if (!(weight_decay >= 0.0)) throw std::invalid_argument("weight_decay must be >= 0");
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (measure_every < 1) throw std::invalid_argument("measure_every must be >= 1");
    if (!(init_stddev >= 0.0)) throw std::invalid_argument("init_stddev must be >= 0");
  }
};

/// Ascent direction on the log-likelihood: positive minus negative phase.
struct GradientEstimate {
  Matrix dW;
  Vector db;
  Vector dc;

  static GradientEstimate zeros(Eigen::Index visible, Eigen::Index hidden) {
    return {Matrix::Zero(hidden, visible), Vector::Zero(visible), Vector::Zero(hidden)};
  }
  static GradientEstimate zeros_like(const RbmParams& p) { return zeros(p.visible(), p.hidden()); }

  void set_zero() {
    dW.setZero();
    db.setZero();
    dc.setZero();
  }
};

class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// W ~ N(0, stddev^2) i.i.d. (hidden-major order), b = c = 0.
inline RbmParams init_params(Eigen::Index visible, Eigen::Index hidden, double stddev, Rng& rng) {
  RbmParams p = RbmParams::zeros(visible, hidden);
  if (stddev > 0.0) {
    for (Eigen::Index j = 0; j < hidden; ++j)
      for (Eigen::Index i = 0; i < visible; ++i) p.W(j, i) = rng.normal(0.0, stddev);
  }
  return p;
}

namespace detail {

/// dst += hpos x1' - hneg xneg' (and the bias parts), elementwise in a fixed
/// order.
inline void add_phase_difference(GradientEstimate& dst, const Vector& x1, const Vector& hpos,
                                 const Vector& xneg, const Vector& hneg) {
  const Eigen::Index V = x1.size(), H = hpos.size();
  for (Eigen::Index i = 0; i < V; ++i) {
    double* col = dst.dW.col(i).data();
    const double a = x1[i], z = xneg[i];
    for (Eigen::Index j = 0; j < H; ++j) col[j] += hpos[j] * a - hneg[j] * z;
  }
  for (Eigen::Index i = 0; i < V; ++i) dst.db[i] += x1[i] - xneg[i];
  for (Eigen::Index j = 0; j < H; ++j) dst.dc[j] += hpos[j] - hneg[j];
}

inline void sample_into(const Vector& pre, Vector& out, Rng& rng) {
  out.resize(pre.size());
  for (Eigen::Index k = 0; k < pre.size(); ++k) out[k] = rng.bernoulli(sigmoid(pre[k])) ? 1.0 : 0.0;
}

}  // namespace detail

/// Per-sample CD-n estimate. Both phases use the hidden conditional mean;
/// the chain in between is sampled.
inline std::pair<GradientEstimate, GibbsChain> cd_gradient(const RbmParams& p, const BinaryVector& x1,
                                                           int n, Rng& rng) {
  GibbsChain chain = run_gibbs_chain(p, x1, n, rng);
  GradientEstimate g = GradientEstimate::zeros_like(p);
  detail::add_phase_difference(g, x1, hidden_conditional_mean(p, x1), chain.x_last(),
                               hidden_conditional_mean(p, chain.x_last()));
  return {std::move(g), std::move(chain)};
}

/// Buffers for the allocation-free training path.
struct CdWorkspace {
  Vector pre_h, pre_v, hpos, hneg, h, x;
};

/// Same draws and arithmetic as cd_gradient, accumulated into `acc`.
inline void accumulate_cd_gradient(const RbmParams& p, const BinaryVector& x1, int n, Rng& rng,
                                   GradientEstimate& acc, CdWorkspace& ws) {
  hidden_preactivation(p, x1, ws.pre_h);
  ws.hpos.resize(ws.pre_h.size());
  for (Eigen::Index j = 0; j < ws.pre_h.size(); ++j) ws.hpos[j] = sigmoid(ws.pre_h[j]);
  ws.h.resize(ws.hpos.size());
  for (Eigen::Index j = 0; j < ws.hpos.size(); ++j) ws.h[j] = rng.bernoulli(ws.hpos[j]) ? 1.0 : 0.0;
  visible_preactivation(p, ws.h, ws.pre_v);
  detail::sample_into(ws.pre_v, ws.x, rng);
  for (int k = 1; k < n; ++k) {
    hidden_preactivation(p, ws.x, ws.pre_h);
    detail::sample_into(ws.pre_h, ws.h, rng);
    visible_preactivation(p, ws.h, ws.pre_v);
    detail::sample_into(ws.pre_v, ws.x, rng);
  }
  hidden_preactivation(p, ws.x, ws.pre_h);
  ws.hneg.resize(ws.pre_h.size());
  for (Eigen::Index j = 0; j < ws.pre_h.size(); ++j) ws.hneg[j] = sigmoid(ws.pre_h[j]);
  detail::add_phase_difference(acc, x1, ws.hpos, ws.x, ws.hneg);
}

/// W += lr (dW - wd W); b += lr db; c += lr dc. Decay touches W only.
inline void apply_update_in_place(RbmParams& p, const GradientEstimate& g, const TrainingConfig& cfg) {
  if (g.dW.rows() != p.W.rows() || g.dW.cols() != p.W.cols() || g.db.size() != p.b.size() ||
      g.dc.size() != p.c.size()) {
    throw DimensionError("apply_update: gradient shape does not match params");
  }
  const double lr = cfg.learning_rate, wd = cfg.weight_decay;
  for (Eigen::Index k = 0; k < p.W.size(); ++k) {
    double& w = p.W.data()[k];
    w = w + lr * (g.dW.data()[k] - wd * w);
  }
  for (Eigen::Index i = 0; i < p.b.size(); ++i) p.b[i] = p.b[i] + lr * g.db[i];
  for (Eigen::Index j = 0; j < p.c.size(); ++j) p.c[j] = p.c[j] + lr * g.dc[j];
}

inline RbmParams apply_update(RbmParams p, const GradientEstimate& g, const TrainingConfig& cfg) {
  apply_update_in_place(p, g, cfg);
  if (!p.finite()) throw NonFiniteError("apply_update: non-finite parameters after update");
  return p;
}

/// Sample visiting order for one epoch: identity, or a Fisher-Yates shuffle
/// drawn from `rng`.
inline std::vector<std::size_t> epoch_order(std::size_t n, bool shuffle, Rng& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (shuffle) {
    for (std::size_t k = n; k > 1; --k) std::swap(order[k - 1], order[rng.index(k)]);
  }
  return order;
}

/// Reusable state for repeated epochs over the same model shape.
class Trainer {
 public:
  Trainer(const RbmParams& shape, TrainingConfig cfg)
      : cfg_(std::move(cfg)), acc_(GradientEstimate::zeros_like(shape)) {
    cfg_.validate();
  }

  /// One pass over `data`: the sample order is split into consecutive
  /// batches and each batch's summed (or mean) CD gradient is applied.
  void epoch(RbmParams& p, const Dataset& data, Rng& rng) {
    const std::size_t N = data.size();
    if (N == 0) throw std::invalid_argument("train_epoch: empty dataset");
    const std::size_t batch = cfg_.batch_size == 0 ? N : cfg_.batch_size;
    const std::vector<std::size_t> order = epoch_order(N, cfg_.shuffle, rng);
    for (std::size_t start = 0; start < N; start += batch) {
      const std::size_t stop = std::min(N, start + batch);
      acc_.set_zero();
      for (std::size_t k = start; k < stop; ++k)
        accumulate_cd_gradient(p, data.samples[order[k]], cfg_.cd_order, rng, acc_, ws_);
      if (cfg_.reduction == GradientReduction::Mean) {
        const double m = static_cast<double>(stop - start);
        acc_.dW /= m;
        acc_.db /= m;
        acc_.dc /= m;
      }
      apply_update_in_place(p, acc_, cfg_);
    }
    if (!p.finite()) throw NonFiniteError("train_epoch: non-finite parameters");
  }

  const TrainingConfig& config() const noexcept { return cfg_; }

 private:
  TrainingConfig cfg_;
  GradientEstimate acc_;
  CdWorkspace ws_;
};

inline RbmParams train_epoch(RbmParams p, const Dataset& data, const TrainingConfig& cfg, Rng& rng) {
  Trainer(p, cfg).epoch(p, data, rng);
  return p;
}

}  // namespace rbmstop
