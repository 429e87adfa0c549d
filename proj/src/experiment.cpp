#include "flowlab/experiment.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "flowlab/format.hpp"
#include "flowlab/fourier.hpp"
#include "flowlab/metrics.hpp"

namespace flowlab {

namespace {

Tensor tile_mask(const Tensor& mask, std::size_t rows) {
  Tensor out = Tensor::zeros({rows, mask.size()});
  for (std::size_t i = 0; i < rows; ++i) out.set_row(i, mask);
  return out;
}

// Stream id folding method name and t0 so every (method, seed, t0) cell owns
// an rng independent of list order and worker scheduling.
std::uint64_t cell_stream(Method method, double t0) {
  return fnv1a64(method_to_string(method)) ^ std::bit_cast<std::uint64_t>(t0);
}

ReportRow run_cell(const ExperimentSpec& spec, Method method, std::uint64_t seed) {
  ReportRow row;
  row.method = method_to_string(method);
  row.seed = seed;
  row.t0 = spec.cfg.t0;
  row.lambda = spec.cfg.lambda;

  SeededRng rng(seed, cell_stream(method, spec.cfg.t0));
  SeededRng data_rng = rng.split(0);
  SeededRng degrade_rng = rng.split(1);
  SeededRng sampler_rng = rng.split(2);
  SeededRng eval_rng = rng.split(3);
  SeededRng proj_rng = rng.split(4);

  const auto started = std::chrono::steady_clock::now();
  try {
    const Tensor clean = spec.target.sample(data_rng, spec.n_samples);
    const Tensor y = apply_degradation(spec.degradation, spec.target, clean, degrade_rng);
    const Tensor mask_full = tile_mask(spec.mask, y.rows());

    SamplerConfig cfg = spec.cfg;
    cfg.method = method;
    cfg.seed = seed;

    const AnalyticGmmField field(spec.target, cfg.schedule);
    std::optional<AnalyticGmmField> src_field;
    if (method == Method::flowedit) {
      auto src = degraded_law(spec.degradation, spec.target);
      if (!src) {
        throw std::runtime_error("flowedit: degraded distribution has no closed form");
      }
      src_field.emplace(*src, cfg.schedule);
    }

    const SampleResult result =
        restore(field, y, mask_full, cfg, sampler_rng, src_field ? &*src_field : nullptr);

    const Tensor fresh = spec.target.sample(eval_rng, spec.n_eval);
    row.sliced_w2 = sliced_wasserstein(result.sample, fresh, spec.n_proj, proj_rng);
    row.masked_mse = masked_mse(result.sample, y, mask_full);
  } catch (const std::exception& ex) {
    row.failed = true;
    row.error = ex.what();
    row.sliced_w2 = std::numeric_limits<double>::quiet_NaN();
    row.masked_mse = std::numeric_limits<double>::quiet_NaN();
  }
  if (spec.measure_runtime) {
    const auto elapsed = std::chrono::steady_clock::now() - started;
    row.runtime_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(elapsed).count();
  }
  return row;
}

}  // namespace

Tensor apply_degradation(const Degradation& deg, const GmmSpec& target, const Tensor& clean,
                         SeededRng& rng) {
  Tensor y = clean;
  if (deg.mode_collapse) {
    y = target.single_component(*deg.mode_collapse).sample(rng, clean.rows());
  }
  if (deg.shift) {
    const Tensor& s = *deg.shift;
    if (s.size() != y.cols()) {
      throw std::invalid_argument("degradation shift: dimension mismatch");
    }
    for (std::size_t i = 0; i < y.rows(); ++i) {
      for (std::size_t j = 0; j < y.cols(); ++j) y.at(i, j) += s[j];
    }
  }
  if (deg.blur_cutoff) {
    y = frequency_filter(y, *deg.blur_cutoff, FilterMode::low);
  }
  return y;
}

std::optional<GmmSpec> degraded_law(const Degradation& deg, const GmmSpec& target) {
  // Blur mixes coordinates across samples; no mixture describes the result.
  if (deg.blur_cutoff) return std::nullopt;
  GmmSpec out = target;
  if (deg.mode_collapse) out = out.single_component(*deg.mode_collapse);
  if (deg.shift) out = out.shifted(*deg.shift);
  return out;
}

void ExperimentSpec::validate() const {
  cfg.validate();
  if (methods.empty()) throw std::invalid_argument("ExperimentSpec: methods must be nonempty");
  if (seeds.empty()) throw std::invalid_argument("ExperimentSpec: seeds must be nonempty");
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    for (std::size_t j = i + 1; j < seeds.size(); ++j) {
      if (seeds[i] == seeds[j]) throw std::invalid_argument("ExperimentSpec: seeds must be distinct");
    }
  }
  if (mask.rank() != 1 || mask.size() != target.dim()) {
    throw std::invalid_argument("ExperimentSpec: mask must be [d]");
  }
  if (n_samples < 2 || n_eval < 2) {
    throw std::invalid_argument("ExperimentSpec: need at least 2 samples");
  }
}

std::vector<ReportRow> run_restoration_experiment(const ExperimentSpec& spec,
                                                  std::size_t workers) {
  spec.validate();
  const std::size_t cell_count = spec.methods.size() * spec.seeds.size();
  std::vector<ReportRow> rows(cell_count);

  auto cell_of = [&](std::size_t index) {
    const Method method = spec.methods[index / spec.seeds.size()];
    const std::uint64_t seed = spec.seeds[index % spec.seeds.size()];
    return std::pair{method, seed};
  };

  if (workers <= 1 || cell_count == 1) {
    for (std::size_t i = 0; i < cell_count; ++i) {
      const auto [method, seed] = cell_of(i);
      rows[i] = run_cell(spec, method, seed);
    }
    return rows;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cell_count) return;
      const auto [method, seed] = cell_of(i);
      rows[i] = run_cell(spec, method, seed);
    }
  };
  std::vector<std::thread> pool;
  const std::size_t pool_size = std::min(workers, cell_count);
  pool.reserve(pool_size);
  for (std::size_t w = 0; w < pool_size; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return rows;
}

std::vector<ReportRow> t0_sweep(const ExperimentSpec& spec, const std::vector<double>& t0_values,
                                std::size_t workers) {
  if (t0_values.empty()) throw std::invalid_argument("t0_sweep: empty t0 list");
  std::vector<ReportRow> all;
  for (double t0 : t0_values) {
    if (!(t0 > 0.0 && t0 <= 1.0)) throw std::invalid_argument("t0_sweep: t0 must be in (0,1]");
    ExperimentSpec tagged = spec;
    tagged.cfg.t0 = t0;
    auto rows = run_restoration_experiment(tagged, workers);
    all.insert(all.end(), rows.begin(), rows.end());
  }
  return all;
}

std::string report_to_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << kReportCsvHeader << "\n";
  for (const auto& row : rows) {
    out << row.method << "," << row.seed << "," << format_double(row.t0) << ","
        << format_double(row.lambda) << "," << format_double(row.sliced_w2) << ","
        << format_double(row.masked_mse) << "," << format_double(row.runtime_ms) << "\n";
  }
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_file_atomic: cannot open " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write_file_atomic: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

double sliced_w2_noise_floor(const GmmSpec& target, std::size_t n, std::size_t n_proj,
                             SeededRng& rng, std::size_t repeats) {
  double total = 0.0;
  for (std::size_t r = 0; r < repeats; ++r) {
    SeededRng ra = rng.split(2 * r);
    SeededRng rb = rng.split(2 * r + 1);
    Tensor a = target.sample(ra, n);
    Tensor b = target.sample(rb, n);
    SeededRng rp = rng.split(1000 + r);
    total += sliced_wasserstein(a, b, n_proj, rp);
  }
  return total / static_cast<double>(repeats);
}

double mean_metric(const std::vector<ReportRow>& rows, const std::string& method,
                   double ReportRow::* field) {
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& row : rows) {
    if (row.method != method || row.failed) continue;
    total += row.*field;
    ++count;
  }
  if (count == 0) throw std::runtime_error("mean_metric: no rows for method " + method);
  return total / static_cast<double>(count);
}

}  // namespace flowlab
