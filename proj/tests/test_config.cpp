#include <doctest.h>

#include "flowlab/config.hpp"

using namespace flowlab;

TEST_CASE("empty config keeps every default") {
  const LabConfig cfg = config_from_toml(parse_toml(""));
  CHECK(cfg.sampler.t0 == 0.6);
  CHECK(cfg.sampler.steps == 30);
  CHECK(cfg.sampler.lambda == 0.2);
  CHECK(cfg.sampler.cutoff == 0.25);
  CHECK(cfg.sampler.mcs_weight == 0.5);
  CHECK(cfg.seeds.size() == 10);
  CHECK(cfg.means.size() == 2);
  CHECK(cfg.build_target().component_count() == 2);
}

TEST_CASE("sampler section overrides defaults") {
  const auto table = parse_toml("[sampler]\nt0 = 0.8\nsteps = 12\nlambda = 0.0\n");
  const LabConfig cfg = config_from_toml(table);
  CHECK(cfg.sampler.t0 == 0.8);
  CHECK(cfg.sampler.steps == 12);
  CHECK(cfg.sampler.lambda == 0.0);
}

TEST_CASE("nested arrays configure the target") {
  const std::string text =
      "[target]\n"
      "weights = [0.25, 0.75]\n"
      "means = [[1.0, 0.0], [-1.0, 0.0]]\n"
      "sigmas = [0.5, 0.5]\n"
      "[experiment]\n"
      "methods = [\"ode\", \"sde\"]\n"
      "n_seeds = 4\n"
      "mask = [1, 1]\n";
  const LabConfig cfg = config_from_toml(parse_toml(text));
  CHECK(cfg.weights[1] == 0.75);
  CHECK(cfg.methods.size() == 2);
  CHECK(cfg.seeds.size() == 4);
  const GmmSpec target = cfg.build_target();
  CHECK(target.components()[0].mean()[0] == 1.0);
  CHECK(target.components()[0].covariance().at(0, 0) == 0.25);
}

TEST_CASE("arrays may span lines") {
  const std::string text =
      "[target]\n"
      "means = [[2.0, 0.0],\n"
      "         [-2.0, 0.0]]\n";
  const LabConfig cfg = config_from_toml(parse_toml(text));
  CHECK(cfg.means.size() == 2);
  CHECK(cfg.means[1][0] == -2.0);
}

TEST_CASE("malformed input reports the line") {
  try {
    parse_toml("[sampler]\nt0 = 0.6\nbad line here\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("unknown keys and sections are rejected") {
  CHECK_THROWS_AS(config_from_toml(parse_toml("[sampler]\nt_zero = 0.6\n")), ConfigError);
  CHECK_THROWS_AS(config_from_toml(parse_toml("[mystery]\nx = 1\n")), ConfigError);
  CHECK_THROWS_AS(parse_toml("[sampler]\nt0 = 0.6\nt0 = 0.7\n"), ConfigError);
  CHECK_THROWS_AS(parse_toml("orphan = 1\n"), ConfigError);
}

TEST_CASE("comments and strings coexist") {
  const auto table = parse_toml(
      "# lab setup\n"
      "[sampler]\n"
      "gamma_mode = \"constant\"  # switch off the default\n"
      "gamma_value = 0.25\n");
  const LabConfig cfg = config_from_toml(table);
  CHECK(cfg.sampler.gamma_mode == GammaMode::constant);
  CHECK(cfg.sampler.gamma_value == 0.25);
}

TEST_CASE("degradation section") {
  const auto cfg = config_from_toml(parse_toml(
      "[degradation]\n"
      "shift = [0.5, 0.5]\n"
      "blur_cutoff = 0.3\n"));
  REQUIRE(cfg.degradation.shift.has_value());
  CHECK((*cfg.degradation.shift)[0] == 0.5);
  CHECK(cfg.degradation.blur_cutoff == 0.3);
  CHECK_FALSE(cfg.degradation.mode_collapse.has_value());

  // an explicit [degradation] section resets the default shift
  const auto clean = config_from_toml(parse_toml("[degradation]\n"));
  CHECK_FALSE(clean.degradation.shift.has_value());
}

TEST_CASE("experiment spec builds from the merged config") {
  const LabConfig cfg = config_from_toml(parse_toml("[experiment]\nn_samples = 64\n"));
  const ExperimentSpec spec = cfg.build_experiment();
  CHECK(spec.n_samples == 64);
  CHECK(spec.methods.size() == 3);
  CHECK(spec.mask.size() == 2);
}
