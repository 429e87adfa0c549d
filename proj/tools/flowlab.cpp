#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flowlab/config.hpp"
#include "flowlab/format.hpp"
#include "flowlab/fourier.hpp"
#include "flowlab/mlp_field.hpp"
#include "flowlab/svg.hpp"
#include "flowlab/viewtime.hpp"

namespace {

using namespace flowlab;

std::vector<std::string> split_csv_list(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string samples_to_csv(const Tensor& samples) {
  std::ostringstream out;
  for (std::size_t j = 0; j < samples.cols(); ++j) {
    if (j) out << ",";
    out << "x" << j;
  }
  out << "\n";
  for (std::size_t i = 0; i < samples.rows(); ++i) {
    for (std::size_t j = 0; j < samples.cols(); ++j) {
      if (j) out << ",";
      out << format_double(samples.at(i, j));
    }
    out << "\n";
  }
  return out.str();
}

struct SamplerFlags {
  std::string method;
  double t0 = 0.0, lambda = 0.0, gamma_value = 0.0, mcs_weight = 0.0, cutoff = 0.0;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  std::string gamma_mode;
};

// Flags override config-file values only when the user passed them.
void add_sampler_flags(CLI::App* cmd, SamplerFlags& flags) {
  cmd->add_option("--t0", flags.t0, "noise injection level in (0,1]");
  cmd->add_option("--steps", flags.steps, "denoising steps");
  cmd->add_option("--lambda", flags.lambda, "guidance step size");
  cmd->add_option("--gamma-mode", flags.gamma_mode, "re-noising strength: sigma_t or constant");
  cmd->add_option("--gamma-value", flags.gamma_value, "constant re-noising strength in [0,1]");
  cmd->add_option("--mcs-weight", flags.mcs_weight, "mcs blend weight in [0,1]");
  cmd->add_option("--cutoff", flags.cutoff, "hfs/nc frequency cutoff in (0,1)");
  cmd->add_option("--seed", flags.seed, "base seed")->envname("FLOWLAB_SEED");
}

void apply_sampler_flags(const CLI::App* cmd, const SamplerFlags& flags, LabConfig& cfg) {
  if (cmd->count("--t0")) cfg.sampler.t0 = flags.t0;
  if (cmd->count("--steps")) cfg.sampler.steps = flags.steps;
  if (cmd->count("--lambda")) cfg.sampler.lambda = flags.lambda;
  if (cmd->count("--gamma-mode")) {
    if (flags.gamma_mode == "sigma_t") {
      cfg.sampler.gamma_mode = GammaMode::sigma_t;
    } else if (flags.gamma_mode == "constant") {
      cfg.sampler.gamma_mode = GammaMode::constant;
    } else {
      throw CLI::ValidationError("--gamma-mode must be sigma_t or constant");
    }
  }
  if (cmd->count("--gamma-value")) cfg.sampler.gamma_value = flags.gamma_value;
  if (cmd->count("--mcs-weight")) cfg.sampler.mcs_weight = flags.mcs_weight;
  if (cmd->count("--cutoff")) cfg.sampler.cutoff = flags.cutoff;
  if (cmd->count("--seed")) cfg.sampler.seed = flags.seed;
}

LabConfig load_config_or_default(const std::string& path) {
  if (path.empty()) return LabConfig{};
  return load_config(path);
}

int run_check(std::ostream& out) {
  bool all_ok = true;
  auto report = [&](const std::string& name, bool ok, double err) {
    out << (ok ? "PASS" : "FAIL") << " " << name << " (max error " << format_double(err)
        << ")\n";
    all_ok &= ok;
  };

  SeededRng rng(20260809, fnv1a64("flowlab.check"));

  // Endpoint estimates re-interpolated at sigma_t must reproduce the state.
  {
    double max_err = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
      Tensor x = rng.normal({8});
      Tensor v = rng.normal({8});
      const double s = rng.next_uniform();
      const PosteriorPair pair = make_posterior_pair(x, v, s, s);
      const Tensor back = interpolate_step(pair, s);
      max_err = std::max(max_err, (back - x).max_abs());
    }
    report("path-identity", max_err <= 1e-12, max_err);
  }

  // Drift + diffusion must match the re-noise-then-interpolate update.
  {
    double max_err = 0.0;
    bool bit_exact = true;
    for (int rep = 0; rep < 200; ++rep) {
      Tensor x0 = rng.normal({6});
      Tensor x1 = rng.normal({6});
      Tensor eps = rng.normal({6});
      const double sigma_next = rng.next_uniform();
      const double gamma = rng.next_uniform();
      const auto parts = prop3_decomposition(x0, x1, eps, sigma_next, gamma);
      max_err = std::max(max_err, (parts.drift + parts.diffusion - parts.x_next).max_abs());
      const PosteriorPair pair{x0, renoise(x1, gamma, eps), 1.0, 1.0};
      const Tensor direct = interpolate_step(pair, sigma_next);
      for (std::size_t i = 0; i < direct.size(); ++i) {
        bit_exact &= direct[i] == parts.x_next[i];
      }
    }
    report("prop3-decomposition", bit_exact && max_err <= 1e-12, max_err);
  }

  // Low band plus high band must reassemble the signal.
  {
    double max_err = 0.0;
    for (std::size_t n : {15, 16, 33, 64}) {
      Tensor s = rng.normal({n});
      const Tensor lo = frequency_filter(s, 0.2, FilterMode::low);
      const Tensor hi = frequency_filter(s, 0.2, FilterMode::high);
      max_err = std::max(max_err, (lo + hi - s).max_abs());
    }
    report("filter-complementarity", max_err <= 1e-10, max_err);
  }

  return all_ok ? 0 : 2;
}

int cmd_train(const std::string& config_path, const TrainConfig& train_cfg,
              const std::string& out_path) {
  LabConfig cfg = load_config_or_default(config_path);
  const GmmSpec target = cfg.build_target();
  MlpVelocityField field = train_mlp_field(sampler_of(target), target.dim(), train_cfg);

  SeededRng eval_rng(train_cfg.seed, fnv1a64("flowlab.train.eval"));
  FmBatch batch;
  batch.x0 = target.sample(eval_rng, 2048);
  batch.x1 = eval_rng.normal({2048, target.dim()});
  batch.t.resize(2048);
  for (double& t : batch.t) t = eval_rng.next_uniform();
  std::cout << "trained " << train_cfg.steps << " steps; eval loss "
            << format_double(fm_loss(field, batch)) << "\n";

  save_mlp_field(field, out_path);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int cmd_restore(const LabConfig& cfg, const std::string& method, const std::string& out_path,
                const std::string& svg_path) {
  LabConfig merged = cfg;
  if (!method.empty()) merged.sampler.method = method_from_string(method);
  ExperimentSpec spec = merged.build_experiment();

  SeededRng rng(merged.sampler.seed, fnv1a64("flowlab.restore"));
  SeededRng data_rng = rng.split(0);
  SeededRng degrade_rng = rng.split(1);
  SeededRng sampler_rng = rng.split(2);

  const Tensor clean = spec.target.sample(data_rng, spec.n_samples);
  const Tensor y = apply_degradation(spec.degradation, spec.target, clean, degrade_rng);

  Tensor mask_full = Tensor::zeros(y.shape());
  for (std::size_t i = 0; i < y.rows(); ++i) mask_full.set_row(i, spec.mask);

  const AnalyticGmmField field(spec.target, merged.sampler.schedule);
  std::optional<AnalyticGmmField> src_field;
  if (merged.sampler.method == Method::flowedit) {
    auto src = degraded_law(spec.degradation, spec.target);
    if (!src) throw std::runtime_error("flowedit: degraded distribution has no closed form");
    src_field.emplace(*src, merged.sampler.schedule);
  }
  const SampleResult result = restore(field, y, mask_full, merged.sampler, sampler_rng,
                                      src_field ? &*src_field : nullptr);

  write_file_atomic(out_path, samples_to_csv(result.sample));
  std::cout << "wrote " << out_path << "\n";

  if (!svg_path.empty()) {
    SeededRng fresh_rng = rng.split(3);
    const Tensor fresh = spec.target.sample(fresh_rng, spec.n_samples);
    emit_svg_scatter({{fresh, "target"}, {result.sample, "restored"}}, svg_path);
    std::cout << "wrote " << svg_path << "\n";
  }
  return 0;
}

int cmd_schedule(const std::string& mode, std::size_t views, std::size_t frames,
                 std::size_t ntraj, const std::string& out_path) {
  ScheduleConfig cfg{views, frames, ntraj, schedule_mode_from_string(mode)};
  const auto trajectories = make_schedule(cfg);
  write_file_atomic(out_path, schedule_to_json(cfg, trajectories));
  const CoverageStats stats = coverage_stats(trajectories);
  std::cout << "wrote " << out_path << " (" << stats.frames_total << " frames, "
            << stats.distinct_views << " views, " << stats.distinct_times << " times)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flowlab: flow-matching restoration sampler lab"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "train a velocity model on the config target");
  TrainConfig train_cfg;
  std::string train_config_path, train_out;
  train->add_option("--config", train_config_path, "TOML config file");
  train->add_option("--hidden", train_cfg.hidden, "hidden width");
  train->add_option("--steps", train_cfg.steps, "optimizer steps");
  train->add_option("--batch", train_cfg.batch, "batch size");
  train->add_option("--lr", train_cfg.learning_rate, "learning rate");
  train->add_option("--seed", train_cfg.seed, "training seed")->envname("FLOWLAB_SEED");
  train->add_option("--out", train_out, "output model path (FLF1)")->required();

  // restore
  auto* restore_cmd = app.add_subcommand("restore", "restore a degraded sample cloud");
  std::string restore_config_path, restore_method, restore_out, restore_svg;
  SamplerFlags restore_flags;
  restore_cmd->add_option("--config", restore_config_path, "TOML config file");
  restore_cmd->add_option("--method", restore_method, "sampling method");
  restore_cmd->add_option("--out", restore_out, "restored samples CSV")->required();
  restore_cmd->add_option("--svg", restore_svg, "optional scatter overlay SVG");
  add_sampler_flags(restore_cmd, restore_flags);

  // compare
  auto* compare = app.add_subcommand("compare", "run the method comparison table");
  std::string compare_config_path, compare_methods, compare_seed_list, compare_out;
  std::size_t compare_seeds = 0, compare_workers = 1;
  bool compare_timings = false;
  SamplerFlags compare_flags;
  compare->add_option("--config", compare_config_path, "TOML config file");
  compare->add_option("--methods", compare_methods, "comma-separated method list");
  compare->add_option("--seeds", compare_seeds, "number of seeds (1..N)");
  compare->add_option("--seed-list", compare_seed_list, "explicit comma-separated seeds");
  compare->add_option("--workers", compare_workers, "parallel cells");
  compare->add_flag("--timings", compare_timings, "measure wall-clock runtime per cell");
  compare->add_option("--out", compare_out, "output CSV")->required();
  add_sampler_flags(compare, compare_flags);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "sweep the noise injection level t0");
  std::string sweep_config_path, sweep_methods, sweep_values, sweep_out;
  std::size_t sweep_seeds = 0, sweep_workers = 1;
  SamplerFlags sweep_flags;
  sweep->add_option("--config", sweep_config_path, "TOML config file");
  sweep->add_option("--methods", sweep_methods, "comma-separated method list");
  sweep->add_option("--seeds", sweep_seeds, "number of seeds (1..N)");
  sweep->add_option("--t0-values", sweep_values, "comma-separated t0 list")
      ->default_val("0.2,0.4,0.6,0.8");
  sweep->add_option("--workers", sweep_workers, "parallel cells");
  sweep->add_option("--out", sweep_out, "output CSV")->required();
  add_sampler_flags(sweep, sweep_flags);

  // schedule
  auto* schedule = app.add_subcommand("schedule", "emit a view-time trajectory schedule");
  std::string schedule_mode = "diagonal", schedule_out;
  std::size_t schedule_views = 8, schedule_frames = 16, schedule_ntraj = 3;
  schedule->add_option("--mode", schedule_mode, "diagonal, bullet_time or independent_view");
  schedule->add_option("--views", schedule_views, "view count V");
  schedule->add_option("--frames", schedule_frames, "time count T");
  schedule->add_option("--ntraj", schedule_ntraj, "trajectory count");
  schedule->add_option("--out", schedule_out, "output JSON")->required();

  // check
  auto* check = app.add_subcommand("check", "run the built-in identity suite");
  (void)check;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (train->parsed()) return cmd_train(train_config_path, train_cfg, train_out);
    if (restore_cmd->parsed()) {
      LabConfig cfg = load_config_or_default(restore_config_path);
      apply_sampler_flags(restore_cmd, restore_flags, cfg);
      return cmd_restore(cfg, restore_method, restore_out, restore_svg);
    }
    if (compare->parsed()) {
      LabConfig cfg = load_config_or_default(compare_config_path);
      apply_sampler_flags(compare, compare_flags, cfg);
      if (!compare_methods.empty()) {
        cfg.methods.clear();
        for (const auto& m : split_csv_list(compare_methods)) {
          cfg.methods.push_back(method_from_string(m));
        }
      }
      if (compare->count("--seeds")) {
        cfg.seeds.clear();
        for (std::size_t s = 1; s <= compare_seeds; ++s) cfg.seeds.push_back(s);
      }
      if (!compare_seed_list.empty()) {
        cfg.seeds.clear();
        for (const auto& s : split_csv_list(compare_seed_list)) {
          cfg.seeds.push_back(std::stoull(s));
        }
      }
      ExperimentSpec spec = cfg.build_experiment();
      spec.measure_runtime = compare_timings;
      const auto rows = run_restoration_experiment(spec, compare_workers);
      write_file_atomic(compare_out, report_to_csv(rows));
      std::cout << "wrote " << compare_out << " (" << rows.size() << " rows)\n";
      return 0;
    }
    if (sweep->parsed()) {
      LabConfig cfg = load_config_or_default(sweep_config_path);
      apply_sampler_flags(sweep, sweep_flags, cfg);
      if (!sweep_methods.empty()) {
        cfg.methods.clear();
        for (const auto& m : split_csv_list(sweep_methods)) {
          cfg.methods.push_back(method_from_string(m));
        }
      }
      if (sweep->count("--seeds")) {
        cfg.seeds.clear();
        for (std::size_t s = 1; s <= sweep_seeds; ++s) cfg.seeds.push_back(s);
      }
      std::vector<double> t0_values;
      for (const auto& t : split_csv_list(sweep_values)) t0_values.push_back(std::stod(t));
      ExperimentSpec spec = cfg.build_experiment();
      const auto rows = t0_sweep(spec, t0_values, sweep_workers);
      write_file_atomic(sweep_out, report_to_csv(rows));
      std::cout << "wrote " << sweep_out << " (" << rows.size() << " rows)\n";
      return 0;
    }
    if (schedule->parsed()) {
      return cmd_schedule(schedule_mode, schedule_views, schedule_frames, schedule_ntraj,
                          schedule_out);
    }
    if (check->parsed()) return run_check(std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
