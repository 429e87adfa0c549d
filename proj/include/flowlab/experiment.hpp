#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flowlab/distributions.hpp"
#include "flowlab/samplers.hpp"
#include "flowlab/tensor.hpp"

namespace flowlab {

/// How the target samples are corrupted into the degraded input y.
struct Degradation {
  std::optional<Tensor> shift;                 // constant offset per coordinate
  std::optional<double> blur_cutoff;           // ideal low-pass over the cloud
  std::optional<std::size_t> mode_collapse;    // resample all points from one component
};

struct ExperimentSpec {
  GmmSpec target;
  Degradation degradation;
  Tensor mask;  // [d], tiled across rows for the samplers
  std::vector<Method> methods;
  std::vector<std::uint64_t> seeds;
  SamplerConfig cfg;
  std::size_t n_samples = 1000;  // cloud size restored per cell
  std::size_t n_eval = 4000;     // fresh target draws per metric evaluation
  std::size_t n_proj = 128;
  bool measure_runtime = false;  // off by default so reports are byte-stable

  void validate() const;
};

/// Corrupt a clean target cloud per the degradation settings. Mode collapse
/// resamples from one component, shift offsets every row, blur low-passes the
/// whole cloud.
Tensor apply_degradation(const Degradation& deg, const GmmSpec& target, const Tensor& clean,
                         SeededRng& rng);

/// Exact law of the degraded input when one exists (shift and mode collapse
/// compose in closed form; blur does not). flowedit uses it as the source
/// distribution.
std::optional<GmmSpec> degraded_law(const Degradation& deg, const GmmSpec& target);

struct ReportRow {
  std::string method;
  std::uint64_t seed = 0;
  double t0 = 0.0;
  double lambda = 0.0;
  double sliced_w2 = 0.0;
  double masked_mse = 0.0;
  double runtime_ms = 0.0;
  bool failed = false;  // sampler error; metric fields are nan in the CSV
  std::string error;
};

inline constexpr const char* kReportCsvHeader =
    "method,seed,t0,lambda,sliced_w2,masked_mse,runtime_ms";

/// One restoration per (method, seed): degrade a fresh target cloud, restore
/// it with the analytic target field, and score distribution recovery
/// (sliced W2 against fresh target draws) and input fidelity (masked MSE
/// against y). Every cell derives its randomness from (seed, method, t0)
/// alone, so rows do not depend on execution order; sampler failures become
/// error rows and the run continues.
std::vector<ReportRow> run_restoration_experiment(const ExperimentSpec& spec,
                                                  std::size_t workers = 1);

/// run_restoration_experiment once per t0 value, rows tagged via the t0
/// column.
std::vector<ReportRow> t0_sweep(const ExperimentSpec& spec, const std::vector<double>& t0_values,
                                std::size_t workers = 1);

std::string report_to_csv(const std::vector<ReportRow>& rows);

/// Write-to-temp-then-rename so readers never observe a torn file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Sliced-W2 between two independent draws of the same target: the
/// resolution limit below which comparisons are meaningless.
double sliced_w2_noise_floor(const GmmSpec& target, std::size_t n, std::size_t n_proj,
                             SeededRng& rng, std::size_t repeats = 4);

/// Mean over rows matching a method (finite rows only).
double mean_metric(const std::vector<ReportRow>& rows, const std::string& method,
                   double ReportRow::* field);

}  // namespace flowlab
