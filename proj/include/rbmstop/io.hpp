#pragma once

// Text artifacts: per-run and averaged metric CSVs, peak reports and the
// parameter dump.

#include <cstdio>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rbmstop/dataset.hpp"
#include "rbmstop/experiment.hpp"
#include "rbmstop/rbm.hpp"

namespace rbmstop {

/// 17 significant digits: parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void write_metric_columns(std::ostream& out, const MetricsRecord& r, bool mean_variant) {
  out << ',' << format_double(r.log_likelihood) << ',' << format_double(r.log_xi_random) << ','
      << format_double(r.log_xi_complement) << ',' << format_double(r.log_recon_mean) << ','
      << format_double(r.log_likelihood_mean);
  if (mean_variant) out << ',' << format_double(r.log_xi_mean_complement);
}

inline constexpr const char* kMetricHeader =
    "log_likelihood,log_xi_random,log_xi_complement,log_recon_mean,log_likelihood_mean";

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace detail

inline void write_run_csv(const RunResult& run, std::ostream& out, bool mean_variant) {
  out << "epoch,seed," << detail::kMetricHeader << (mean_variant ? ",log_xi_mean_complement" : "") << '\n';
  for (const auto& r : run.series) {
    out << r.epoch << ',' << run.seed;
    detail::write_metric_columns(out, r, mean_variant);
    out << '\n';
  }
}

inline void write_averaged_csv(const AveragedSeries& avg, std::ostream& out, bool mean_variant) {
  out << "epoch," << detail::kMetricHeader << (mean_variant ? ",log_xi_mean_complement" : "") << ",n_runs\n";
  for (const auto& r : avg.records) {
    out << r.epoch;
    detail::write_metric_columns(out, r, mean_variant);
    out << ',' << avg.n_runs << '\n';
  }
}

struct MetricsTable {
  std::vector<MetricsRecord> records;
  /// Per-row seed column, empty if absent.
  std::vector<std::uint64_t> seeds;
};

/// Parses either CSV flavor by header name.
inline MetricsTable read_metrics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV", 0);
  const std::vector<std::string> header = detail::split_csv(line);
  MetricsTable table;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::vector<std::string> cells = detail::split_csv(line);
    if (cells.size() != header.size()) throw ParseError("wrong column count", lineno);
    MetricsRecord r;
    try {
      for (std::size_t k = 0; k < header.size(); ++k) {
        const std::string& col = header[k];
        const std::string& v = cells[k];
        if (col == "epoch") {
          r.epoch = std::stol(v);
        } else if (col == "seed") {
          table.seeds.push_back(std::stoull(v));
        } else if (col == "n_runs") {
          continue;
        } else {
          bool known = false;
          for (Metric m : kAllMetrics) {
            if (col == to_string(m)) {
              metric_ref(r, m) = std::stod(v);
              known = true;
            }
          }
          if (!known) throw ParseError("unknown column '" + col + "'", 1);
        }
      }
    } catch (const std::logic_error&) {
      throw ParseError("malformed number", lineno);
    }
    table.records.push_back(r);
  }
  return table;
}

inline void write_peak_reports(const std::vector<PeakReport>& peaks, std::ostream& out) {
  bool first = true;
  for (const auto& p : peaks) {
    if (!first) out << '\n';
    first = false;
    out << "metric=" << p.metric << '\n'
        << "epoch=" << p.epoch_of_max << '\n'
        << "value=" << format_double(p.max_value) << '\n'
        << "window=" << p.window << '\n'
        << "raw_epoch=" << p.raw_epoch_of_max << '\n'
        << "raw_value=" << format_double(p.raw_max_value) << '\n';
  }
}

/// "V H", then H rows of V weights, then the b row, then the c row.
inline void write_params(const RbmParams& p, std::ostream& out) {
  out << p.visible() << ' ' << p.hidden() << '\n';
  auto row = [&out](auto&& values, Eigen::Index n) {
    for (Eigen::Index k = 0; k < n; ++k) out << (k ? " " : "") << format_double(values(k));
    out << '\n';
  };
  for (Eigen::Index j = 0; j < p.hidden(); ++j) row(p.W.row(j), p.visible());
  row(p.b, p.visible());
  row(p.c, p.hidden());
}

inline RbmParams read_params(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next_row = [&](Eigen::Index expected) {
    if (!std::getline(in, line)) throw ParseError("unexpected end of file", lineno + 1);
    ++lineno;
    std::istringstream ss(line);
    std::vector<double> vals;
    std::string tok;
    while (ss >> tok) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::logic_error&) {
        throw ParseError("malformed number '" + tok + "'", lineno);
      }
    }
    if (static_cast<Eigen::Index>(vals.size()) != expected) {
      throw ParseError("expected " + std::to_string(expected) + " values, got " + std::to_string(vals.size()),
                       lineno);
    }
    return vals;
  };
  const std::vector<double> shape = next_row(2);
  const auto V = static_cast<Eigen::Index>(shape[0]), H = static_cast<Eigen::Index>(shape[1]);
  if (V < 1 || H < 1 || static_cast<double>(V) != shape[0] || static_cast<double>(H) != shape[1])
    throw ParseError("shape header must be two positive integers", 1);
  RbmParams p = RbmParams::zeros(V, H);
  for (Eigen::Index j = 0; j < H; ++j) {
    const auto r = next_row(V);
    for (Eigen::Index i = 0; i < V; ++i) p.W(j, i) = r[static_cast<std::size_t>(i)];
  }
  const auto b = next_row(V);
  for (Eigen::Index i = 0; i < V; ++i) p.b[i] = b[static_cast<std::size_t>(i)];
  const auto c = next_row(H);
  for (Eigen::Index j = 0; j < H; ++j) p.c[j] = c[static_cast<std::size_t>(j)];
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") != std::string::npos) throw ParseError("trailing content", lineno);
  }
  if (!p.finite()) throw ParseError("non-finite parameter", 0);
  return p;
}

template <class Fn>
void write_file(const std::string& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  fn(out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace rbmstop
