#pragma once

// Multi-seed training sweeps with periodic measurement of the exact
// log-likelihood, both log xi variants and the reconstruction
// log-probability; seed averaging and peak detection over the results.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rbmstop/criteria.hpp"
#include "rbmstop/dataset.hpp"
#include "rbmstop/rbm.hpp"
#include "rbmstop/training.hpp"

namespace rbmstop {

struct MetricsRecord {
  long epoch = 0;
  double log_likelihood = 0.0;
  double log_xi_random = 0.0;
  double log_xi_complement = 0.0;
  /// NaN unless the ComplementMeanH variant is enabled.
  double log_xi_mean_complement = std::numeric_limits<double>::quiet_NaN();
  double log_recon_mean = 0.0;
  double log_likelihood_mean = 0.0;
  /// Samples whose reconstruction log-probability hit the -inf sentinel.
  std::size_t recon_sentinels = 0;
};

enum class Metric {
  LogLikelihood,
  LogXiRandom,
  LogXiComplement,
  LogXiMeanComplement,
  LogReconMean,
  LogLikelihoodMean,
};

inline const char* to_string(Metric m) {
  switch (m) {
    case Metric::LogLikelihood: return "log_likelihood";
    case Metric::LogXiRandom: return "log_xi_random";
    case Metric::LogXiComplement: return "log_xi_complement";
    case Metric::LogXiMeanComplement: return "log_xi_mean_complement";
    case Metric::LogReconMean: return "log_recon_mean";
    case Metric::LogLikelihoodMean: return "log_likelihood_mean";
  }
  return "?";
}

inline double& metric_ref(MetricsRecord& r, Metric m) {
  switch (m) {
    case Metric::LogLikelihood: return r.log_likelihood;
    case Metric::LogXiRandom: return r.log_xi_random;
    case Metric::LogXiComplement: return r.log_xi_complement;
    case Metric::LogXiMeanComplement: return r.log_xi_mean_complement;
    case Metric::LogReconMean: return r.log_recon_mean;
    case Metric::LogLikelihoodMean: return r.log_likelihood_mean;
  }
  throw std::logic_error("unknown metric");
}

inline double metric_value(const MetricsRecord& r, Metric m) {
  return metric_ref(const_cast<MetricsRecord&>(r), m);
}

inline constexpr Metric kAllMetrics[] = {Metric::LogLikelihood,       Metric::LogXiRandom,
                                         Metric::LogXiComplement,     Metric::LogXiMeanComplement,
                                         Metric::LogReconMean,        Metric::LogLikelihoodMean};

/// Snapshot of every monitored quantity. Per sample, in dataset order: a
/// CD-length Gibbs chain, then the random-hidden probe's uniforms.
inline MetricsRecord measure(const RbmParams& p, const Dataset& data, long epoch, int cd_order,
                             bool mean_complement, Rng& rng) {
  const std::size_t N = data.size();
  std::vector<XiProbe> random_probes, complement_probes, mean_probes;
  random_probes.reserve(N);
  complement_probes.reserve(N);
  if (mean_complement) mean_probes.reserve(N);

  MetricsRecord r;
  r.epoch = epoch;
  double recon = 0.0;
  for (const auto& x : data.samples) {
    const GibbsChain chain = run_gibbs_chain(p, x, cd_order, rng);
    complement_probes.push_back(xi_probe(p, chain, XiVariant::ComplementH1, rng));
    random_probes.push_back(xi_probe(p, chain, XiVariant::RandomHidden, rng));
    if (mean_complement) mean_probes.push_back(xi_probe(p, chain, XiVariant::ComplementMeanH, rng));
    const double lr = reconstruction_log_prob(p, x);
    if (is_sentinel(lr)) ++r.recon_sentinels;
    recon += lr;
  }
  r.log_likelihood = exact_log_likelihood(p, data);
  r.log_likelihood_mean = r.log_likelihood / static_cast<double>(N);
  r.log_xi_random = log_xi(p, data, random_probes);
  r.log_xi_complement = log_xi(p, data, complement_probes);
  if (mean_complement) r.log_xi_mean_complement = log_xi(p, data, mean_probes);
  r.log_recon_mean = recon / static_cast<double>(N);
  return r;
}

enum class DatasetKind { BarsAndStripes, LabeledShifter };

struct ExperimentConfig {
  DatasetKind dataset = DatasetKind::BarsAndStripes;
  ShiftMode shift = ShiftMode::Cyclic;
  Eigen::Index visible = 16;
  Eigen::Index hidden = 8;
  TrainingConfig training;
  int num_runs = 10;
  std::uint64_t base_seed = 1;
  bool mean_complement_variant = false;
  int smoothing_window = 5;
  long full_scale_epochs = 50000;

  void validate() const {
    training.validate();
    const Eigen::Index want = dataset == DatasetKind::BarsAndStripes ? 16 : 19;
    if (visible != want) {
      throw std::invalid_argument("visible must be " + std::to_string(want) + " for this dataset");
    }
    if (hidden < 1) throw std::invalid_argument("hidden must be >= 1");
    if (num_runs < 1) throw std::invalid_argument("num_runs must be >= 1");
    if (smoothing_window < 1) throw std::invalid_argument("smoothing_window must be >= 1");
  }
};

inline Dataset make_dataset(const ExperimentConfig& cfg) {
  return cfg.dataset == DatasetKind::BarsAndStripes ? generate_bars_and_stripes()
                                                    : generate_labeled_shifter(cfg.shift);
}

struct RunResult {
  int run_index = 0;
  std::uint64_t seed = 0;
  std::vector<MetricsRecord> series;
  RbmParams final_params;
  bool aborted = false;
  std::string abort_reason;
};

/// One seeded run: initialize, then train with a snapshot at epoch 0 and
/// after every `measure_every`-th epoch.
inline RunResult run_single(const ExperimentConfig& cfg, const Dataset& data, int run_index) {
  RunResult res;
  res.run_index = run_index;
  res.seed = cfg.base_seed + static_cast<std::uint64_t>(run_index);
  Rng init_rng = Rng::substream(res.seed, Stream::Init);
  Rng train_rng = Rng::substream(res.seed, Stream::Training);
  Rng measure_rng = Rng::substream(res.seed, Stream::Measurement);

  const TrainingConfig& tc = cfg.training;
  RbmParams p = init_params(cfg.visible, cfg.hidden, tc.init_stddev, init_rng);
  Trainer trainer(p, tc);
  res.series.push_back(measure(p, data, 0, tc.cd_order, cfg.mean_complement_variant, measure_rng));
  try {
    for (long epoch = 1; epoch <= tc.epochs; ++epoch) {
      trainer.epoch(p, data, train_rng);
      if (epoch % tc.measure_every == 0)
        res.series.push_back(measure(p, data, epoch, tc.cd_order, cfg.mean_complement_variant, measure_rng));
    }
  } catch (const NonFiniteError& e) {
    res.aborted = true;
    res.abort_reason = e.what();
  }
  res.final_params = std::move(p);
  return res;
}

/// Runs seeds base_seed + k for k < num_runs on up to `jobs` threads. Output
/// does not depend on `jobs`.
inline std::vector<RunResult> run_experiment(const ExperimentConfig& cfg, unsigned jobs = 1) {
  cfg.validate();
  const Dataset data = make_dataset(cfg);
  std::vector<RunResult> results(static_cast<std::size_t>(cfg.num_runs));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k = next++; k < cfg.num_runs; k = next++) results[static_cast<std::size_t>(k)] = run_single(cfg, data, k);
  };
  jobs = std::clamp<unsigned>(jobs, 1u, static_cast<unsigned>(cfg.num_runs));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  return results;
}

struct AveragedSeries {
  std::vector<MetricsRecord> records;
  std::size_t n_runs = 0;
  std::size_t n_aborted = 0;
};

/// Per-epoch arithmetic mean over completed runs, accumulated in run order.
inline AveragedSeries average_runs(const std::vector<RunResult>& results) {
  AveragedSeries out;
  const RunResult* first = nullptr;
  for (const auto& r : results) {
    if (r.aborted) {
      ++out.n_aborted;
      continue;
    }
    if (!first) first = &r;
    ++out.n_runs;
  }
  if (!first) throw std::runtime_error("average_runs: no completed runs");

  out.records = first->series;
  for (auto& rec : out.records) {
    for (Metric m : kAllMetrics) metric_ref(rec, m) = 0.0;
    rec.recon_sentinels = 0;
  }
  for (const auto& r : results) {
    if (r.aborted) continue;
    if (r.series.size() != out.records.size()) throw std::runtime_error("average_runs: epoch grids differ");
    for (std::size_t t = 0; t < r.series.size(); ++t) {
      if (r.series[t].epoch != out.records[t].epoch)
        throw std::runtime_error("average_runs: epoch grids differ");
      for (Metric m : kAllMetrics) metric_ref(out.records[t], m) += metric_value(r.series[t], m);
      out.records[t].recon_sentinels += r.series[t].recon_sentinels;
    }
  }
  const double n = static_cast<double>(out.n_runs);
  for (auto& rec : out.records)
    for (Metric m : kAllMetrics) metric_ref(rec, m) /= n;
  return out;
}

/// Centered moving average; near the ends the window shrinks symmetrically
/// so every point stays centered.
inline std::vector<double> smooth(const std::vector<double>& v, int window) {
  const long half = std::max(0, window - 1) / 2;
  const long n = static_cast<long>(v.size());
  std::vector<double> out(v.size());
  for (long t = 0; t < n; ++t) {
    const long reach = std::min({half, t, n - 1 - t});
    double acc = 0.0;
    for (long k = t - reach; k <= t + reach; ++k) acc += v[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(t)] = acc / static_cast<double>(2 * reach + 1);
  }
  return out;
}

inline std::vector<double> metric_series(const std::vector<MetricsRecord>& series, Metric m) {
  std::vector<double> v;
  v.reserve(series.size());
  for (const auto& r : series) v.push_back(metric_value(r, m));
  return v;
}

struct PeakReport {
  std::string metric;
  int window = 1;
  long epoch_of_max = 0;
  double max_value = 0.0;
  long raw_epoch_of_max = 0;
  double raw_max_value = 0.0;
};

/// First index of the maximum.
inline std::size_t argmax_first(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t t = 1; t < v.size(); ++t)
    if (v[t] > v[best]) best = t;
  return best;
}

inline PeakReport detect_peak(const std::vector<MetricsRecord>& series, Metric m, int window = 5) {
  if (series.size() < 3) throw std::invalid_argument("detect_peak: need at least 3 points");
  const std::vector<double> raw = metric_series(series, m);
  const std::vector<double> smoothed = smooth(raw, window);
  const std::size_t s = argmax_first(smoothed), r = argmax_first(raw);
  return {to_string(m), window, series[s].epoch, smoothed[s], series[r].epoch, raw[r]};
}

/// Gibbs sampling from a uniformly random visible start: `burn_in` rounds
/// are discarded, then every `thin`-th visible sample is kept.
inline std::vector<BinaryVector> generate_samples(const RbmParams& p, int count, int burn_in, int thin,
                                                  Rng& rng) {
  if (count < 1) throw std::invalid_argument("generate_samples: count must be >= 1");
  if (burn_in < 0 || thin < 1) throw std::invalid_argument("generate_samples: need burn_in >= 0, thin >= 1");
  BinaryVector x = sample_bernoulli(RealVector::Constant(p.visible(), 0.5), rng);
  std::vector<BinaryVector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long round = 1; static_cast<int>(out.size()) < count; ++round) {
    const BinaryVector h = sample_bernoulli(hidden_conditional_mean(p, x), rng);
    x = sample_bernoulli(visible_conditional_mean(p, h), rng);
    if (round > burn_in && (round - burn_in) % thin == 0) out.push_back(x);
  }
  return out;
}

}  // namespace rbmstop
