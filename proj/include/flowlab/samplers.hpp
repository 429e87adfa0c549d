#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flowlab/estimators.hpp"
#include "flowlab/rng.hpp"
#include "flowlab/schedule.hpp"
#include "flowlab/velocity_field.hpp"

namespace flowlab {

enum class Method {
  ode,              // deterministic restoration (noise injection + ODE steps)
  sde,              // stochastic restoration with re-noising, no guidance
  self_guided_sde,  // full guided stochastic sampler
  sdedit,           // vanilla baseline, identical mechanics to `ode`
  mcs,              // posterior-mean blending toward the source
  hfs,              // high-frequency substitution from the noised source
  nc,               // posterior high-band calibration from the source
  flowedit,         // velocity-difference editing between two fields
};

Method method_from_string(const std::string& name);
std::string method_to_string(Method method);
const std::vector<Method>& all_methods();

enum class GammaMode { sigma_t, constant };

struct SamplerConfig {
  Method method = Method::self_guided_sde;
  double t0 = 0.6;
  std::size_t steps = 30;
  double lambda = 0.2;
  GammaMode gamma_mode = GammaMode::sigma_t;
  double gamma_value = 0.0;  // used when gamma_mode == constant
  double mcs_weight = 0.5;
  double cutoff = 0.25;
  std::uint64_t seed = 0;
  bool hfs_reuse_injection_noise = false;
  NoiseSchedule schedule;

  void validate() const;
};

/// Re-noising strength at time t: sigma_t by default, or the configured
/// constant.
double gamma_at(const SamplerConfig& cfg, double t);

/// Descending times t_k = t0 * (steps - k) / steps for k = 0..steps; the last
/// entry is exactly 0.
struct TimeGrid {
  std::vector<double> times;
};

TimeGrid make_time_grid(double t0, std::size_t steps);

struct TraceRow {
  double t = 0.0;
  double sigma_t = 0.0;
  double masked_residual = 0.0;  // RMS of mask (.) (x0_hat - y) after guidance
  std::optional<Tensor> snapshot;
};

struct RunTrace {
  std::vector<TraceRow> rows;
};

struct SampleResult {
  Tensor sample;
  RunTrace trace;
};

/// Noise injection to level t0: sigma_{t0} * eps + (1 - sigma_{t0}) * y.
Tensor inject_noise(const Tensor& y, double t0, SeededRng& rng,
                    const NoiseSchedule& schedule = {});
Tensor inject_noise(const Tensor& y, double t0, const Tensor& eps,
                    const NoiseSchedule& schedule = {});

/// Partial noise replacement on the predicted noise endpoint:
/// sqrt(gamma) * eps + sqrt(1 - gamma) * x1_hat. gamma = 0 returns x1_hat
/// unchanged (no draw is consumed by the rng overload).
Tensor renoise(const Tensor& x1_hat, double gamma, SeededRng& rng);
Tensor renoise(const Tensor& x1_hat, double gamma, const Tensor& eps);

/// One deterministic update t -> t_next via endpoint estimates and linear
/// re-interpolation.
Tensor step_ode(const VelocityField& field, const Tensor& x_t, double t, double t_next,
                const NoiseSchedule& schedule = {});

/// Stochastic update: like step_ode but the noise endpoint is re-noised with
/// strength gamma before interpolation.
Tensor step_sde(const VelocityField& field, const Tensor& x_t, double t, double t_next,
                double gamma, SeededRng& rng, const NoiseSchedule& schedule = {});

struct Prop3Parts {
  Tensor drift;      // (1 - sigma_next) x0_hat + sigma_next sqrt(1-gamma) x1_hat
  Tensor diffusion;  // sigma_next sqrt(gamma) eps
  Tensor x_next;
};

/// Drift/diffusion split of the stochastic update. x_next is computed through
/// the same re-noise-then-interpolate arithmetic as step_sde, so the two
/// agree bit for bit when given the same eps; drift + diffusion equals x_next
/// up to rounding.
Prop3Parts prop3_decomposition(const Tensor& x0_hat, const Tensor& x1_hat, const Tensor& eps,
                               double sigma_next, double gamma);

/// Guided stochastic restoration of y: inject noise to t0, then per step
/// estimate both endpoints, pull the data estimate toward y on the mask,
/// re-noise the noise estimate, and re-interpolate down the grid.
SampleResult sample_self_guided(const VelocityField& field, const Tensor& y, const Tensor& mask,
                                const SamplerConfig& cfg, SeededRng& rng);

/// Noise injection followed by plain ODE steps; no guidance, no re-noising.
Tensor baseline_sdedit(const VelocityField& field, const Tensor& y, const SamplerConfig& cfg,
                       SeededRng& rng);

/// ODE restoration where each data estimate is blended with the source:
/// x0_hat <- w * x0_hat + (1 - w) * y.
Tensor baseline_mcs(const VelocityField& field, const Tensor& y, const SamplerConfig& cfg,
                    SeededRng& rng);

/// ODE restoration that, after each step, swaps in the high band of a freshly
/// noised copy of the source at the new time.
Tensor baseline_hfs(const VelocityField& field, const Tensor& y, const SamplerConfig& cfg,
                    SeededRng& rng);

/// ODE restoration where each data estimate has its high band replaced by the
/// source's high band.
Tensor baseline_nc(const VelocityField& field, const Tensor& y, const SamplerConfig& cfg,
                   SeededRng& rng);

/// Velocity-difference edit from the source field's distribution to the
/// target field's. Per step a shared eps noises the source; the source
/// velocity is taken at that point and the target velocity at the edited
/// state plus the same displacement.
Tensor baseline_flowedit(const VelocityField& src_field, const VelocityField& tgt_field,
                         const Tensor& x_src, const SamplerConfig& cfg, SeededRng& rng);

/// Unified restoration entry point dispatching on cfg.method. src_field is
/// required only by flowedit.
SampleResult restore(const VelocityField& field, const Tensor& y, const Tensor& mask,
                     const SamplerConfig& cfg, SeededRng& rng,
                     const VelocityField* src_field = nullptr);

/// Overdamped Langevin iteration x <- x + (h/2) score(x) + sqrt(h) eps over a
/// particle batch [n, d]. Aborts if any coordinate exceeds 1e6 in magnitude.
using ScoreFunction = std::function<Tensor(const Tensor&)>;
Tensor langevin_stationarity_run(const ScoreFunction& score, const Tensor& samples, double h,
                                 std::size_t steps, SeededRng& rng);

}  // namespace flowlab
