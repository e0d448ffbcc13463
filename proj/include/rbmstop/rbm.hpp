#pragma once

// Binary-binary restricted Boltzmann machine: parameters, energy, the
// closed-form hidden sum, factorized conditionals and block Gibbs sampling.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "rbmstop/numeric.hpp"
#include "rbmstop/random.hpp"

namespace rbmstop {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Vector whose entries are exactly 0 or 1 (data, Gibbs samples).
using BinaryVector = Vector;
/// Vector with entries in [0, 1] (conditional means, criterion probes).
using RealVector = Vector;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require_size(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(want) +
                         ", got " + std::to_string(got));
  }
}

inline bool is_binary(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0 && v[i] != 1.0) return false;
  }
  return true;
}

/// W is hidden x visible, b the visible bias, c the hidden bias.
struct RbmParams {
  Matrix W;
  Vector b;
  Vector c;

  RbmParams() = default;
  RbmParams(Matrix weights, Vector visible_bias, Vector hidden_bias)
      : W(std::move(weights)), b(std::move(visible_bias)), c(std::move(hidden_bias)) {
    if (W.rows() != c.size() || W.cols() != b.size()) {
      throw DimensionError("RbmParams: W is " + std::to_string(W.rows()) + "x" +
                           std::to_string(W.cols()) + " but b has " + std::to_string(b.size()) +
                           " and c has " + std::to_string(c.size()) + " entries");
    }
  }

  static RbmParams zeros(Eigen::Index visible, Eigen::Index hidden) {
    return {Matrix::Zero(hidden, visible), Vector::Zero(visible), Vector::Zero(hidden)};
  }

  Eigen::Index visible() const noexcept { return b.size(); }
  Eigen::Index hidden() const noexcept { return c.size(); }

  bool finite() const { return W.allFinite() && b.allFinite() && c.allFinite(); }

  bool operator==(const RbmParams& o) const {
    return W.rows() == o.W.rows() && W.cols() == o.W.cols() && b.size() == o.b.size() &&
           c.size() == o.c.size() && W == o.W && b == o.b && c == o.c;
  }
};

/// c + Wx, accumulated with a fixed summation order (bias first, then
/// visible units ascending).
inline void hidden_preactivation(const RbmParams& p, const Vector& x, Vector& out) {
  out = p.c;
  const Eigen::Index H = p.hidden();
  for (Eigen::Index i = 0; i < p.visible(); ++i) {
    const double xi = x[i];
    const double* col = p.W.col(i).data();
    for (Eigen::Index j = 0; j < H; ++j) out[j] += col[j] * xi;
  }
}

/// b + W'h, bias first, then hidden units ascending.
inline void visible_preactivation(const RbmParams& p, const Vector& h, Vector& out) {
  out.resize(p.visible());
  const Eigen::Index H = p.hidden();
  for (Eigen::Index i = 0; i < p.visible(); ++i) {
    const double* col = p.W.col(i).data();
    double acc = p.b[i];
    for (Eigen::Index j = 0; j < H; ++j) acc += col[j] * h[j];
    out[i] = acc;
  }
}

/// Energy(x, h) = -b'x - c'h - h'Wx.
inline double energy(const RbmParams& p, const BinaryVector& x, const BinaryVector& h) {
  require_size(x.size(), p.visible(), "energy: x");
  require_size(h.size(), p.hidden(), "energy: h");
  return -p.b.dot(x) - p.c.dot(h) - h.dot(p.W * x);
}

/// log sum_h exp(-Energy(x, h)) = b'x + sum_j softplus(c_j + (Wx)_j).
/// Accepts real-valued x; the formula is evaluated as is.
inline double log_unnormalized_marginal(const RbmParams& p, const RealVector& x) {
  require_size(x.size(), p.visible(), "log_unnormalized_marginal: x");
  Vector pre;
  hidden_preactivation(p, x, pre);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) acc += p.b[i] * x[i];
  for (Eigen::Index j = 0; j < pre.size(); ++j) acc += softplus(pre[j]);
  return acc;
}

inline double unnormalized_marginal(const RbmParams& p, const RealVector& x) {
  return std::exp(log_unnormalized_marginal(p, x));
}

/// E[h | x]: sigmoid(c + Wx).
inline RealVector hidden_conditional_mean(const RbmParams& p, const RealVector& x) {
  require_size(x.size(), p.visible(), "hidden_conditional_mean: x");
  Vector out;
  hidden_preactivation(p, x, out);
  for (double& v : out) v = sigmoid(v);
  return out;
}

/// E[x | h]: sigmoid(b + W'h).
inline RealVector visible_conditional_mean(const RbmParams& p, const RealVector& h) {
  require_size(h.size(), p.hidden(), "visible_conditional_mean: h");
  Vector out;
  visible_preactivation(p, h, out);
  for (double& v : out) v = sigmoid(v);
  return out;
}

/// Independent Bernoulli draw per component, consuming one uniform each in
/// index order.
inline BinaryVector sample_bernoulli(const RealVector& mean, Rng& rng) {
  BinaryVector out(mean.size());
  for (Eigen::Index i = 0; i < mean.size(); ++i) out[i] = rng.bernoulli(mean[i]) ? 1.0 : 0.0;
  return out;
}

/// x1, h1, x2, ..., hn, x_{n+1}. hidden[k] and visible[k] hold h_{k+1} and
/// x_{k+2}.
struct GibbsChain {
  BinaryVector x1;
  std::vector<BinaryVector> hidden;
  std::vector<BinaryVector> visible;

  int steps() const noexcept { return static_cast<int>(hidden.size()); }
  const BinaryVector& h1() const { return hidden.front(); }
  const BinaryVector& x_last() const { return visible.back(); }
};

inline GibbsChain run_gibbs_chain(const RbmParams& p, const BinaryVector& x1, int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("run_gibbs_chain: n must be >= 1");
  require_size(x1.size(), p.visible(), "run_gibbs_chain: x1");
  GibbsChain chain;
  chain.x1 = x1;
  chain.hidden.reserve(n);
  chain.visible.reserve(n);
  const BinaryVector* x = &chain.x1;
  for (int k = 0; k < n; ++k) {
    chain.hidden.push_back(sample_bernoulli(hidden_conditional_mean(p, *x), rng));
    chain.visible.push_back(sample_bernoulli(visible_conditional_mean(p, chain.hidden.back()), rng));
    x = &chain.visible.back();
  }
  return chain;
}

}  // namespace rbmstop
