#pragma once

// JSON experiment configuration. Every key except "dataset" is optional;
// unknown keys and wrongly typed values are rejected before any work starts.

#include <istream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "rbmstop/experiment.hpp"

namespace rbmstop {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SamplingConfig {
  int count = 30;
  int burn_in = 1000;
  int thin = 10;
};

struct CliConfig {
  ExperimentConfig experiment;
  /// When set, each run's final params are sampled from after training.
  std::optional<SamplingConfig> sampling;
};

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
void read_number(const json& obj, const char* key, T& dst) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw ConfigError(std::string(key) + " must be an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (v.is_number_unsigned()) {
        dst = v.get<T>();
        return;
      }
      if (v.get<long long>() < 0) throw ConfigError(std::string(key) + " must be non-negative");
    }
    dst = v.get<T>();
  } else {
    if (!v.is_number()) throw ConfigError(std::string(key) + " must be a number");
    dst = v.get<T>();
  }
}

inline void read_bool(const json& obj, const char* key, bool& dst) {
  if (!obj.contains(key)) return;
  if (!obj.at(key).is_boolean()) throw ConfigError(std::string(key) + " must be a boolean");
  dst = obj.at(key).get<bool>();
}

inline std::string read_string(const json& obj, const char* key) {
  if (!obj.at(key).is_string()) throw ConfigError(std::string(key) + " must be a string");
  return obj.at(key).get<std::string>();
}

}  // namespace detail

inline CliConfig parse_config(const nlohmann::json& j) {
  using detail::read_number;
  detail::reject_unknown(j,
                         {"dataset", "lse_shift", "visible", "hidden", "training", "num_runs", "base_seed",
                          "variants", "smoothing_window", "full_scale_epochs", "sampling"},
                         "config");
  CliConfig out;
  ExperimentConfig& e = out.experiment;

  if (!j.contains("dataset")) throw ConfigError("missing required key 'dataset'");
  const std::string ds = detail::read_string(j, "dataset");
  if (ds == "bs") {
    e.dataset = DatasetKind::BarsAndStripes;
    e.visible = 16;
    e.hidden = 8;
    e.training.epochs = 10000;
  } else if (ds == "lse") {
    e.dataset = DatasetKind::LabeledShifter;
    e.visible = 19;
    e.hidden = 10;
    e.training.epochs = 20000;
  } else {
    throw ConfigError("dataset must be \"bs\" or \"lse\"");
  }
  if (j.contains("lse_shift")) {
    const std::string s = detail::read_string(j, "lse_shift");
    if (s == "cyclic") e.shift = ShiftMode::Cyclic;
    else if (s == "end_off") e.shift = ShiftMode::EndOff;
    else throw ConfigError("lse_shift must be \"cyclic\" or \"end_off\"");
  }
  read_number(j, "visible", e.visible);
  read_number(j, "hidden", e.hidden);
  read_number(j, "num_runs", e.num_runs);
  read_number(j, "base_seed", e.base_seed);
  read_number(j, "smoothing_window", e.smoothing_window);
  read_number(j, "full_scale_epochs", e.full_scale_epochs);

  if (j.contains("training")) {
    const auto& t = j.at("training");
    detail::reject_unknown(t,
                           {"cd_order", "learning_rate", "weight_decay", "epochs", "measure_every", "batch_size",
                            "reduction", "shuffle", "init_stddev"},
                           "training");
    TrainingConfig& tc = e.training;
    read_number(t, "cd_order", tc.cd_order);
    read_number(t, "learning_rate", tc.learning_rate);
    read_number(t, "weight_decay", tc.weight_decay);
    read_number(t, "epochs", tc.epochs);
    read_number(t, "measure_every", tc.measure_every);
    read_number(t, "batch_size", tc.batch_size);
    if (t.contains("reduction")) {
      const std::string r = detail::read_string(t, "reduction");
      if (r == "sum") tc.reduction = GradientReduction::Sum;
      else if (r == "mean") tc.reduction = GradientReduction::Mean;
      else throw ConfigError("reduction must be \"sum\" or \"mean\"");
    }
    detail::read_bool(t, "shuffle", tc.shuffle);
    read_number(t, "init_stddev", tc.init_stddev);
  }

  if (j.contains("variants")) {
    const auto& v = j.at("variants");
    if (!v.is_array()) throw ConfigError("variants must be an array");
    bool random = false, complement = false;
    for (const auto& item : v) {
      if (!item.is_string()) throw ConfigError("variants entries must be strings");
      const std::string name = item.get<std::string>();
      if (name == to_string(XiVariant::RandomHidden)) random = true;
      else if (name == to_string(XiVariant::ComplementH1)) complement = true;
      else if (name == to_string(XiVariant::ComplementMeanH)) e.mean_complement_variant = true;
      else throw ConfigError("unknown variant '" + name + "'");
    }
    if (!random || !complement)
      throw ConfigError("variants must include random_hidden and complement_h1 (both are CSV columns)");
  }

  if (j.contains("sampling")) {
    const auto& s = j.at("sampling");
    detail::reject_unknown(s, {"count", "burn_in", "thin"}, "sampling");
    SamplingConfig sc;
    read_number(s, "count", sc.count);
    read_number(s, "burn_in", sc.burn_in);
    read_number(s, "thin", sc.thin);
    if (sc.count < 1 || sc.burn_in < 0 || sc.thin < 1)
      throw ConfigError("sampling needs count >= 1, burn_in >= 0, thin >= 1");
    out.sampling = sc;
  }

  try {
    e.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(err.what());
  }
  if (e.full_scale_epochs < 1) throw ConfigError("full_scale_epochs must be >= 1");
  return out;
}

inline CliConfig parse_config(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& err) {
    throw ConfigError(std::string("invalid JSON: ") + err.what());
  }
  return parse_config(j);
}

}  // namespace rbmstop
