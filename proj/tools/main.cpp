// rbmstop: generate datasets, run seeded training sweeps with stopping
// criteria monitoring, and sample from trained models.
//
// Exit codes: 0 success, 1 run-level failure, 2 usage or config error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rbmstop/rbmstop.hpp"

namespace fs = std::filesystem;
using namespace rbmstop;

namespace {

constexpr int kOk = 0;
constexpr int kRunFailure = 1;
constexpr int kUsage = 2;

std::string run_name(int k, const char* suffix) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "run_%02d%s", k, suffix);
  return buf;
}

int cmd_dataset(const std::string& name, const std::string& out_path, const std::string& shift) {
  Dataset d;
  if (name == "bs") {
    d = generate_bars_and_stripes();
  } else if (name == "lse") {
    if (shift != "cyclic" && shift != "end_off") {
      std::cerr << "error: --shift must be cyclic or end_off\n";
      return kUsage;
    }
    d = generate_labeled_shifter(shift == "cyclic" ? ShiftMode::Cyclic : ShiftMode::EndOff);
  } else {
    std::cerr << "error: unknown dataset '" << name << "' (expected bs or lse)\n"
              << "usage: rbmstop dataset {bs|lse} OUT\n";
    return kUsage;
  }
  write_dataset(d, out_path);
  std::cout << d.size() << " samples written to " << out_path << '\n';
  return kOk;
}

struct TrainOptions {
  std::string config_path;
  std::string out_dir;
  unsigned jobs = 1;
  std::optional<long> epochs;
  bool full_scale = false;
  std::optional<std::uint64_t> seed;
};

int cmd_train(const TrainOptions& opt) {
  CliConfig cfg;
  try {
    std::ifstream in(opt.config_path);
    if (!in) throw ConfigError("cannot open config " + opt.config_path);
    cfg = parse_config(in);
    ExperimentConfig& e = cfg.experiment;
    if (opt.epochs && opt.full_scale) throw ConfigError("--epochs and --full-scale are mutually exclusive");
    if (opt.epochs) e.training.epochs = *opt.epochs;
    if (opt.full_scale) e.training.epochs = e.full_scale_epochs;
    if (opt.seed) e.base_seed = *opt.seed;
    e.validate();
  } catch (const std::exception& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return kUsage;
  }
  const ExperimentConfig& e = cfg.experiment;
  fs::create_directories(opt.out_dir);
  const fs::path dir(opt.out_dir);

  const std::vector<RunResult> runs = run_experiment(e, opt.jobs);
  std::size_t aborted = 0;
  for (const auto& r : runs) {
    write_file((dir / run_name(r.run_index, ".csv")).string(),
               [&](std::ostream& out) { write_run_csv(r, out, e.mean_complement_variant); });
    write_file((dir / run_name(r.run_index, "_params.txt")).string(),
               [&](std::ostream& out) { write_params(r.final_params, out); });
    if (r.aborted) {
      ++aborted;
      std::cerr << "warning: run " << r.run_index << " (seed " << r.seed << ") aborted: " << r.abort_reason << '\n';
      continue;
    }
    if (cfg.sampling) {
      Rng rng = Rng::substream(r.seed, Stream::Sampling);
      Dataset samples{"samples", e.visible,
                      generate_samples(r.final_params, cfg.sampling->count, cfg.sampling->burn_in,
                                       cfg.sampling->thin, rng)};
      write_dataset(samples, (dir / run_name(r.run_index, "_samples.txt")).string());
    }
  }
  if (aborted == runs.size()) {
    std::cerr << "error: every run aborted\n";
    return kRunFailure;
  }

  const AveragedSeries avg = average_runs(runs);
  write_file((dir / "averaged.csv").string(),
             [&](std::ostream& out) { write_averaged_csv(avg, out, e.mean_complement_variant); });
  std::size_t sentinels = 0;
  for (const auto& rec : avg.records) sentinels += rec.recon_sentinels;
  if (sentinels) std::cerr << "warning: " << sentinels << " reconstruction log-probabilities hit -inf\n";

  if (avg.records.size() >= 3) {
    std::vector<PeakReport> peaks;
    for (Metric m : kAllMetrics) {
      if (m == Metric::LogXiMeanComplement && !e.mean_complement_variant) continue;
      peaks.push_back(detect_peak(avg.records, m, e.smoothing_window));
    }
    write_file((dir / "peaks.txt").string(), [&](std::ostream& out) { write_peak_reports(peaks, out); });
    for (const auto& p : peaks)
      std::cout << p.metric << ": peak at epoch " << p.epoch_of_max << " (" << format_double(p.max_value) << ")\n";
  } else {
    std::cerr << "warning: fewer than 3 measurements, no peak report\n";
  }
  std::cout << runs.size() - aborted << "/" << runs.size() << " runs completed, outputs in " << opt.out_dir << '\n';

  if (aborted * 10 > 3 * runs.size()) {
    std::cerr << "error: " << aborted << " of " << runs.size() << " runs aborted\n";
    return kRunFailure;
  }
  return kOk;
}

int cmd_sample(const std::string& params_path, int count, const std::string& out_path, std::uint64_t seed,
               int burn_in, int thin) {
  if (count < 1 || burn_in < 0 || thin < 1) {
    std::cerr << "error: need --count >= 1, --burn-in >= 0, --thin >= 1\n";
    return kUsage;
  }
  RbmParams p;
  try {
    std::ifstream in(params_path);
    if (!in) throw std::runtime_error("cannot open " + params_path);
    p = read_params(in);
  } catch (const std::exception& err) {
    std::cerr << "params error: " << err.what() << '\n';
    return kUsage;
  }
  Rng rng = Rng::substream(seed, Stream::Sampling);
  Dataset samples{"samples", p.visible(), generate_samples(p, count, burn_in, thin, rng)};
  write_dataset(samples, out_path);
  std::cout << samples.size() << " samples written to " << out_path << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Restricted Boltzmann machines with partition-free stopping criteria"};
  app.require_subcommand(1);

  auto* dataset = app.add_subcommand("dataset", "Write the bs or lse training set");
  std::string ds_name, ds_out, ds_shift = "cyclic";
  dataset->add_option("name", ds_name, "bs or lse")->required();
  auto* ds_out_pos = dataset->add_option("path", ds_out, "Output path");
  dataset->add_option("--out", ds_out, "Output path")->excludes(ds_out_pos);
  dataset->add_option("--shift", ds_shift, "lse shift: cyclic or end_off");

  auto* train = app.add_subcommand("train", "Run a seeded training sweep from a JSON config");
  TrainOptions topt;
  long epochs = 0;
  std::uint64_t train_seed = 0;
  train->add_option("--config", topt.config_path, "JSON config")->required();
  train->add_option("--out", topt.out_dir, "Output directory")->required();
  train->add_option("--jobs", topt.jobs, "Concurrent runs")->check(CLI::PositiveNumber);
  auto* epochs_opt = train->add_option("--epochs", epochs, "Override training epochs");
  train->add_flag("--full-scale", topt.full_scale, "Use full_scale_epochs from the config");
  auto* seed_opt = train->add_option("--seed", train_seed, "Override base_seed");

  auto* sample = app.add_subcommand("sample", "Draw Gibbs samples from a params file");
  std::string params_path, sample_out;
  int count = 30, burn_in = 1000, thin = 10;
  std::uint64_t sample_seed = 1;
  sample->add_option("--params", params_path, "Params file")->required();
  sample->add_option("--count", count, "Number of samples");
  sample->add_option("--out", sample_out, "Output path")->required();
  sample->add_option("--seed", sample_seed, "Sampling seed");
  sample->add_option("--burn-in", burn_in, "Discarded Gibbs rounds");
  sample->add_option("--thin", thin, "Rounds between kept samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*dataset) {
      if (ds_out.empty()) {
        std::cerr << "error: output path required\nusage: rbmstop dataset {bs|lse} OUT\n";
        return kUsage;
      }
      return cmd_dataset(ds_name, ds_out, ds_shift);
    }
    if (*train) {
      if (*epochs_opt) topt.epochs = epochs;
      if (*seed_opt) topt.seed = train_seed;
      return cmd_train(topt);
    }
    if (*sample) return cmd_sample(params_path, count, sample_out, sample_seed, burn_in, thin);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kRunFailure;
  }
  return kUsage;
}
