#pragma once

// Brute-force reference quantities for tiny RBMs. Everything here works on
// plain arrays with scalar loops and full joint enumeration, independent of
// the closed forms used by the library.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "rbmstop/rbm.hpp"

namespace oracle {

struct Model {
  int V = 0, H = 0;
  std::vector<double> W;  // row-major H x V
  std::vector<double> b, c;

  double w(int j, int i) const { return W[static_cast<std::size_t>(j * V + i)]; }

  static Model from(const rbmstop::RbmParams& p) {
    Model m;
    m.V = static_cast<int>(p.visible());
    m.H = static_cast<int>(p.hidden());
    for (int j = 0; j < m.H; ++j)
      for (int i = 0; i < m.V; ++i) m.W.push_back(p.W(j, i));
    for (int i = 0; i < m.V; ++i) m.b.push_back(p.b[i]);
    for (int j = 0; j < m.H; ++j) m.c.push_back(p.c[j]);
    return m;
  }
};

using Bits = std::vector<double>;

inline Bits bits(std::uint64_t k, int n) {
  Bits v(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) v[static_cast<std::size_t>(t)] = static_cast<double>((k >> t) & 1u);
  return v;
}

inline Bits to_bits(const rbmstop::Vector& v) { return Bits(v.data(), v.data() + v.size()); }

/// Term-by-term -b'x - c'h - sum_ji h_j W_ji x_i.
inline double energy(const Model& m, const Bits& x, const Bits& h) {
  double e = 0.0;
  for (int i = 0; i < m.V; ++i) e -= m.b[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
  for (int j = 0; j < m.H; ++j) e -= m.c[static_cast<std::size_t>(j)] * h[static_cast<std::size_t>(j)];
  for (int j = 0; j < m.H; ++j)
    for (int i = 0; i < m.V; ++i) e -= h[static_cast<std::size_t>(j)] * m.w(j, i) * x[static_cast<std::size_t>(i)];
  return e;
}

inline double lse(const std::vector<double>& t) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : t) mx = std::max(mx, v);
  double s = 0.0;
  for (double v : t) s += std::exp(v - mx);
  return mx + std::log(s);
}

/// log sum_h exp(-E(x, h)) by enumerating every hidden vector.
inline double log_marginal(const Model& m, const Bits& x) {
  std::vector<double> t;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << m.H); ++k) t.push_back(-energy(m, x, bits(k, m.H)));
  return lse(t);
}

/// log Z over the full joint state space.
inline double log_z(const Model& m) {
  std::vector<double> t;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << m.V); ++a) {
    const Bits x = bits(a, m.V);
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << m.H); ++k) t.push_back(-energy(m, x, bits(k, m.H)));
  }
  return lse(t);
}

/// log P(x) = log_marginal(x) - log Z from the joint.
inline double log_prob(const Model& m, const Bits& x) { return log_marginal(m, x) - log_z(m); }

/// P(h_j = 1 | x) by summing joint weights over hidden vectors.
inline std::vector<double> hidden_marginals(const Model& m, const Bits& x) {
  std::vector<double> num(static_cast<std::size_t>(m.H), 0.0);
  double den = 0.0;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << m.H); ++k) {
    const Bits h = bits(k, m.H);
    const double w = std::exp(-energy(m, x, h));
    den += w;
    for (int j = 0; j < m.H; ++j) num[static_cast<std::size_t>(j)] += w * h[static_cast<std::size_t>(j)];
  }
  for (double& v : num) v /= den;
  return num;
}

/// P(x_i = 1 | h) by summing joint weights over visible vectors.
inline std::vector<double> visible_marginals(const Model& m, const Bits& h) {
  std::vector<double> num(static_cast<std::size_t>(m.V), 0.0);
  double den = 0.0;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << m.V); ++a) {
    const Bits x = bits(a, m.V);
    const double w = std::exp(-energy(m, x, h));
    den += w;
    for (int i = 0; i < m.V; ++i) num[static_cast<std::size_t>(i)] += w * x[static_cast<std::size_t>(i)];
  }
  for (double& v : num) v /= den;
  return num;
}

/// Full conditional table P(h | x), indexed by the hidden state's integer code.
inline std::vector<double> hidden_posterior(const Model& m, const Bits& x) {
  std::vector<double> w;
  double den = 0.0;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << m.H); ++k) {
    w.push_back(std::exp(-energy(m, x, bits(k, m.H))));
    den += w.back();
  }
  for (double& v : w) v /= den;
  return w;
}

inline std::vector<double> visible_posterior(const Model& m, const Bits& h) {
  std::vector<double> w;
  double den = 0.0;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << m.V); ++a) {
    w.push_back(std::exp(-energy(m, bits(a, m.V), h)));
    den += w.back();
  }
  for (double& v : w) v /= den;
  return w;
}

/// One Gibbs round from x1: P(x2 | x1) = sum_h P(x2 | h) P(h | x1).
inline std::vector<double> transition(const Model& m, const Bits& x1) {
  std::vector<double> out(std::size_t{1} << m.V, 0.0);
  const std::vector<double> ph = hidden_posterior(m, x1);
  for (std::uint64_t k = 0; k < ph.size(); ++k) {
    const std::vector<double> px = visible_posterior(m, bits(k, m.H));
    for (std::size_t a = 0; a < px.size(); ++a) out[a] += ph[k] * px[a];
  }
  return out;
}

/// Integer code of a binary vector (bit t = component t).
inline std::uint64_t code(const rbmstop::Vector& v) {
  std::uint64_t k = 0;
  for (Eigen::Index t = 0; t < v.size(); ++t)
    if (v[t] != 0.0) k |= std::uint64_t{1} << t;
  return k;
}

/// Exact mean log-likelihood gradient as flat [W row-major, b, c], computed
/// from joint-enumeration expectations.
inline std::vector<double> exact_gradient(const Model& m, const std::vector<Bits>& data) {
  const std::size_t nW = static_cast<std::size_t>(m.H * m.V);
  std::vector<double> g(nW + static_cast<std::size_t>(m.V + m.H), 0.0);
  const double n = static_cast<double>(data.size());
  for (const Bits& x : data) {
    const std::vector<double> post = hidden_posterior(m, x);
    for (std::uint64_t k = 0; k < post.size(); ++k) {
      const Bits h = bits(k, m.H);
      for (int j = 0; j < m.H; ++j)
        for (int i = 0; i < m.V; ++i)
          g[static_cast<std::size_t>(j * m.V + i)] += post[k] * h[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(i)] / n;
      for (int j = 0; j < m.H; ++j) g[nW + static_cast<std::size_t>(m.V + j)] += post[k] * h[static_cast<std::size_t>(j)] / n;
    }
    for (int i = 0; i < m.V; ++i) g[nW + static_cast<std::size_t>(i)] += x[static_cast<std::size_t>(i)] / n;
  }
  const double lz = log_z(m);
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << m.V); ++a) {
    const Bits x = bits(a, m.V);
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << m.H); ++k) {
      const Bits h = bits(k, m.H);
      const double p = std::exp(-energy(m, x, h) - lz);
      for (int j = 0; j < m.H; ++j)
        for (int i = 0; i < m.V; ++i)
          g[static_cast<std::size_t>(j * m.V + i)] -= p * h[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(i)];
      for (int i = 0; i < m.V; ++i) g[nW + static_cast<std::size_t>(i)] -= p * x[static_cast<std::size_t>(i)];
      for (int j = 0; j < m.H; ++j) g[nW + static_cast<std::size_t>(m.V + j)] -= p * h[static_cast<std::size_t>(j)];
    }
  }
  return g;
}

/// Relative difference with an absolute floor of 1.
inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace oracle
