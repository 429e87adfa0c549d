#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "flowlab/experiment.hpp"

namespace flowlab {

/// Config-file problem with the offending line number baked into what().
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line);
  int line() const { return line_; }

 private:
  int line_;
};

struct TomlValue {
  enum class Kind { number, string, boolean, array };
  Kind kind = Kind::number;
  double number = 0.0;
  std::string text;
  bool boolean = false;
  std::vector<TomlValue> array;
  int line = 0;
};

using TomlSection = std::map<std::string, TomlValue>;
using TomlTable = std::map<std::string, TomlSection>;

/// Parses the TOML subset used by the lab configs: [section] headers,
/// key = value lines with numbers, strings, booleans and (nested, possibly
/// multi-line) arrays, and # comments.
TomlTable parse_toml(const std::string& text);

/// Everything a run needs, pre-filled with the lab defaults: two-mode
/// target at (+/-2, 0) with stddev 0.3, shift degradation (+0.8, +0.8),
/// first-coordinate mask, t0 = 0.6, 30 steps, lambda = 0.2.
struct LabConfig {
  // [target]
  std::vector<double> weights = {0.5, 0.5};
  std::vector<std::vector<double>> means = {{2.0, 0.0}, {-2.0, 0.0}};
  std::vector<double> sigmas = {0.3, 0.3};
  std::vector<std::vector<std::vector<double>>> covs;  // overrides sigmas when set

  // [degradation]
  Degradation degradation = Degradation{Tensor::row({0.8, 0.8}), std::nullopt, std::nullopt};

  // [sampler]
  SamplerConfig sampler;

  // [experiment]
  std::vector<Method> methods = {Method::ode, Method::sde, Method::self_guided_sde};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> mask = {1.0, 0.0};
  std::size_t n_samples = 1000;
  std::size_t n_eval = 4000;
  std::size_t n_proj = 128;

  GmmSpec build_target() const;
  ExperimentSpec build_experiment() const;
};

/// Parse `path` and merge it over the defaults. Unknown sections or keys are
/// errors.
LabConfig load_config(const std::filesystem::path& path);
LabConfig config_from_toml(const TomlTable& table);

}  // namespace flowlab
