#include "flowlab/samplers.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "flowlab/fourier.hpp"

namespace flowlab {

namespace {

// sigma * eps + (1 - sigma) * y without the public-range check; sigma == 0
// returns y untouched so terminal-time uses stay exact.
Tensor noised_to_sigma(const Tensor& y, double s, const Tensor& eps) {
  if (s == 0.0) return y;
  require_same_shape(y, eps, "inject_noise");
  return Tensor::zip(y, eps, [s](double yi, double ei) { return s * ei + (1.0 - s) * yi; });
}

double masked_rms(const Tensor& x, const Tensor& y, const Tensor& mask) {
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (mask[i] == 0.0) continue;
    const double r = x[i] - y[i];
    acc += r * r;
    ++count;
  }
  return count ? std::sqrt(acc / static_cast<double>(count)) : 0.0;
}

void check_divergence(const Tensor& x, std::size_t step, const char* who) {
  if (x.max_abs() > 1e6) {
    std::ostringstream msg;
    msg << who << ": state diverged (|x| > 1e6) at step " << step;
    throw std::runtime_error(msg.str());
  }
}

}  // namespace

Method method_from_string(const std::string& name) {
  for (Method m : all_methods()) {
    if (method_to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown method: " + name);
}

std::string method_to_string(Method method) {
  switch (method) {
    case Method::ode: return "ode";
    case Method::sde: return "sde";
    case Method::self_guided_sde: return "self_guided_sde";
    case Method::sdedit: return "sdedit";
    case Method::mcs: return "mcs";
    case Method::hfs: return "hfs";
    case Method::nc: return "nc";
    case Method::flowedit: return "flowedit";
  }
  throw std::invalid_argument("method_to_string: bad enum value");
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = {
      Method::ode, Method::sde, Method::self_guided_sde, Method::sdedit,
      Method::mcs, Method::hfs, Method::nc,              Method::flowedit};
  return methods;
}

void SamplerConfig::validate() const {
  if (!(t0 > 0.0 && t0 <= 1.0)) throw std::invalid_argument("SamplerConfig: t0 must be in (0,1]");
  if (steps < 1) throw std::invalid_argument("SamplerConfig: steps must be >= 1");
  if (lambda < 0.0) throw std::invalid_argument("SamplerConfig: lambda must be >= 0");
  if (!(mcs_weight >= 0.0 && mcs_weight <= 1.0)) {
    throw std::invalid_argument("SamplerConfig: mcs_weight must be in [0,1]");
  }
  if (!(cutoff > 0.0 && cutoff < 1.0)) {
    throw std::invalid_argument("SamplerConfig: cutoff must be in (0,1)");
  }
  if (gamma_mode == GammaMode::constant && !(gamma_value >= 0.0 && gamma_value <= 1.0)) {
    throw std::invalid_argument("SamplerConfig: constant gamma must be in [0,1]");
  }
}

double gamma_at(const SamplerConfig& cfg, double t) {
  if (cfg.gamma_mode == GammaMode::constant) return cfg.gamma_value;
  return sigma(cfg.schedule, t);
}

TimeGrid make_time_grid(double t0, std::size_t steps) {
  if (!(t0 > 0.0 && t0 <= 1.0)) throw std::invalid_argument("make_time_grid: t0 must be in (0,1]");
  if (steps < 1) throw std::invalid_argument("make_time_grid: steps must be >= 1");
  TimeGrid grid;
  grid.times.resize(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    grid.times[k] = t0 * (static_cast<double>(steps - k) / static_cast<double>(steps));
  }
  return grid;
}

Tensor inject_noise(const Tensor& y, double t0, SeededRng& rng, const NoiseSchedule& schedule) {
  if (!(t0 > 0.0 && t0 <= 1.0)) throw std::invalid_argument("inject_noise: t0 must be in (0,1]");
  return noised_to_sigma(y, sigma(schedule, t0), rng.normal(y.shape()));
}

Tensor inject_noise(const Tensor& y, double t0, const Tensor& eps, const NoiseSchedule& schedule) {
  if (!(t0 > 0.0 && t0 <= 1.0)) throw std::invalid_argument("inject_noise: t0 must be in (0,1]");
  return noised_to_sigma(y, sigma(schedule, t0), eps);
}

Tensor renoise(const Tensor& x1_hat, double gamma, SeededRng& rng) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("renoise: gamma must be in [0,1]");
  }
  if (gamma == 0.0) return x1_hat;
  return renoise(x1_hat, gamma, rng.normal(x1_hat.shape()));
}

Tensor renoise(const Tensor& x1_hat, double gamma, const Tensor& eps) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("renoise: gamma must be in [0,1]");
  }
  if (gamma == 0.0) return x1_hat;
  require_same_shape(x1_hat, eps, "renoise");
  const double w_new = std::sqrt(gamma);
  const double w_old = std::sqrt(1.0 - gamma);
  return Tensor::zip(x1_hat, eps,
                     [w_new, w_old](double x, double e) { return w_new * e + w_old * x; });
}

Tensor step_ode(const VelocityField& field, const Tensor& x_t, double t, double t_next,
                const NoiseSchedule& schedule) {
  if (!(t_next < t)) throw std::invalid_argument("step_ode: t_next must be < t");
  const Tensor v = field.velocity(x_t, t);
  const PosteriorPair pair = make_posterior_pair(x_t, v, t, sigma(schedule, t));
  return interpolate_step(pair, sigma(schedule, t_next));
}

Tensor step_sde(const VelocityField& field, const Tensor& x_t, double t, double t_next,
                double gamma, SeededRng& rng, const NoiseSchedule& schedule) {
  if (!(t_next < t)) throw std::invalid_argument("step_sde: t_next must be < t");
  const Tensor v = field.velocity(x_t, t);
  PosteriorPair pair = make_posterior_pair(x_t, v, t, sigma(schedule, t));
  pair.x1_hat = renoise(pair.x1_hat, gamma, rng);
  return interpolate_step(pair, sigma(schedule, t_next));
}

Prop3Parts prop3_decomposition(const Tensor& x0_hat, const Tensor& x1_hat, const Tensor& eps,
                               double sigma_next, double gamma) {
  require_same_shape(x0_hat, x1_hat, "prop3_decomposition");
  require_same_shape(x0_hat, eps, "prop3_decomposition");
  const double w_old = std::sqrt(1.0 - gamma);
  const double w_new = std::sqrt(gamma);
  const double w0 = 1.0 - sigma_next;

  Prop3Parts parts;
  parts.drift = Tensor::zip(
      x0_hat, x1_hat, [&](double a, double b) { return w0 * a + sigma_next * (w_old * b); });
  parts.diffusion =
      Tensor::map(eps, [&](double e) { return sigma_next * (w_new * e); });
  // Same arithmetic path as step_sde: re-noise, then interpolate.
  const PosteriorPair pair{x0_hat, renoise(x1_hat, gamma, eps), 0.0, 1.0};
  parts.x_next = interpolate_step(pair, sigma_next);
  return parts;
}

SampleResult sample_self_guided(const VelocityField& field, const Tensor& y, const Tensor& mask,
                                const SamplerConfig& cfg, SeededRng& rng) {
  cfg.validate();
  require_same_shape(y, mask, "sample_self_guided");

  const TimeGrid grid = make_time_grid(cfg.t0, cfg.steps);
  Tensor x = inject_noise(y, cfg.t0, rng, cfg.schedule);

  RunTrace trace;
  trace.rows.reserve(cfg.steps);
  for (std::size_t k = 0; k + 1 < grid.times.size(); ++k) {
    const double t = grid.times[k];
    const double t_next = grid.times[k + 1];
    const double s = sigma(cfg.schedule, t);

    const Tensor v = field.velocity(x, t);
    PosteriorPair pair = make_posterior_pair(x, v, t, s);
    pair.x0_hat = guidance_step(pair.x0_hat, y, mask, cfg.lambda);
    pair.x1_hat = renoise(pair.x1_hat, gamma_at(cfg, t), rng);
    x = interpolate_step(pair, sigma(cfg.schedule, t_next));

    check_divergence(x, k, "sample_self_guided");
    trace.rows.push_back(TraceRow{t, s, masked_rms(pair.x0_hat, y, mask), std::nullopt});
  }
  return SampleResult{std::move(x), std::move(trace)};
}

Tensor baseline_sdedit(const VelocityField& field, const Tensor& y, const SamplerConfig& cfg,
                       SeededRng& rng) {
  cfg.validate();
  const TimeGrid grid = make_time_grid(cfg.t0, cfg.steps);
  Tensor x = inject_noise(y, cfg.t0, rng, cfg.schedule);
  for (std::size_t k = 0; k + 1 < grid.times.size(); ++k) {
    x = step_ode(field, x, grid.times[k], grid.times[k + 1], cfg.schedule);
    check_divergence(x, k, "baseline_sdedit");
  }
  return x;
}

Tensor baseline_mcs(const VelocityField& field, const Tensor& y, const SamplerConfig& cfg,
                    SeededRng& rng) {
  cfg.validate();
  const double w = cfg.mcs_weight;
  const TimeGrid grid = make_time_grid(cfg.t0, cfg.steps);
  Tensor x = inject_noise(y, cfg.t0, rng, cfg.schedule);
  for (std::size_t k = 0; k + 1 < grid.times.size(); ++k) {
    const double t = grid.times[k];
    const Tensor v = field.velocity(x, t);
    PosteriorPair pair = make_posterior_pair(x, v, t, sigma(cfg.schedule, t));
    if (w == 0.0) {
      pair.x0_hat = y;
    } else if (w != 1.0) {
      pair.x0_hat = Tensor::zip(pair.x0_hat, y,
                                [w](double a, double b) { return w * a + (1.0 - w) * b; });
    }
    x = interpolate_step(pair, sigma(cfg.schedule, grid.times[k + 1]));
    check_divergence(x, k, "baseline_mcs");
  }
  return x;
}

Tensor baseline_hfs(const VelocityField& field, const Tensor& y, const SamplerConfig& cfg,
                    SeededRng& rng) {
  cfg.validate();
  if (y.rank() != 1 && y.rank() != 2) {
    throw std::invalid_argument("baseline_hfs: sample must be 1-D or 2-D");
  }
  // Cutoffs at or above the Nyquist fraction leave the high band empty, so
  // the fusion is a no-op and the trajectory reduces to plain sdedit.
  const bool fuse = cfg.cutoff < 0.5;
  const TimeGrid grid = make_time_grid(cfg.t0, cfg.steps);
  const Tensor injection_eps = rng.normal(y.shape());
  Tensor x = noised_to_sigma(y, sigma(cfg.schedule, cfg.t0), injection_eps);
  for (std::size_t k = 0; k + 1 < grid.times.size(); ++k) {
    const double t_next = grid.times[k + 1];
    x = step_ode(field, x, grid.times[k], t_next, cfg.schedule);
    if (fuse) {
      const Tensor eps = cfg.hfs_reuse_injection_noise ? injection_eps : rng.normal(y.shape());
      const Tensor x_src = noised_to_sigma(y, sigma(cfg.schedule, t_next), eps);
      x = frequency_filter(x, cfg.cutoff, FilterMode::low) +
          frequency_filter(x_src, cfg.cutoff, FilterMode::high);
    }
    check_divergence(x, k, "baseline_hfs");
  }
  return x;
}

Tensor baseline_nc(const VelocityField& field, const Tensor& y, const SamplerConfig& cfg,
                   SeededRng& rng) {
  cfg.validate();
  if (y.rank() != 1 && y.rank() != 2) {
    throw std::invalid_argument("baseline_nc: sample must be 1-D or 2-D");
  }
  const bool calibrate = cfg.cutoff < 0.5;
  const Tensor y_high =
      calibrate ? frequency_filter(y, cfg.cutoff, FilterMode::high) : Tensor::zeros(y.shape());
  const TimeGrid grid = make_time_grid(cfg.t0, cfg.steps);
  Tensor x = inject_noise(y, cfg.t0, rng, cfg.schedule);
  for (std::size_t k = 0; k + 1 < grid.times.size(); ++k) {
    const double t = grid.times[k];
    const Tensor v = field.velocity(x, t);
    PosteriorPair pair = make_posterior_pair(x, v, t, sigma(cfg.schedule, t));
    if (calibrate) {
      pair.x0_hat = pair.x0_hat - frequency_filter(pair.x0_hat, cfg.cutoff, FilterMode::high) +
                    y_high;
    }
    x = interpolate_step(pair, sigma(cfg.schedule, grid.times[k + 1]));
    check_divergence(x, k, "baseline_nc");
  }
  return x;
}

Tensor baseline_flowedit(const VelocityField& src_field, const VelocityField& tgt_field,
                         const Tensor& x_src, const SamplerConfig& cfg, SeededRng& rng) {
  cfg.validate();
  if (src_field.dim() != tgt_field.dim()) {
    throw std::invalid_argument("baseline_flowedit: field dimensions differ");
  }
  const TimeGrid grid = make_time_grid(cfg.t0, cfg.steps);
  Tensor z = x_src;
  for (std::size_t k = 0; k + 1 < grid.times.size(); ++k) {
    const double t = grid.times[k];
    const double dt = grid.times[k + 1] - t;
    const double s = sigma(cfg.schedule, t);
    const Tensor eps = rng.normal(x_src.shape());
    const Tensor x_noised = noised_to_sigma(x_src, s, eps);
    const Tensor v_src = src_field.velocity(x_noised, t);
    const Tensor v_tgt = tgt_field.velocity(z + (x_noised - x_src), t);
    z += Tensor::zip(v_tgt, v_src, [dt](double a, double b) { return dt * (a - b); });
    check_divergence(z, k, "baseline_flowedit");
  }
  return z;
}

SampleResult restore(const VelocityField& field, const Tensor& y, const Tensor& mask,
                     const SamplerConfig& cfg, SeededRng& rng,
                     const VelocityField* src_field) {
  switch (cfg.method) {
    case Method::self_guided_sde:
      return sample_self_guided(field, y, mask, cfg, rng);
    case Method::sde: {
      SamplerConfig unguided = cfg;
      unguided.lambda = 0.0;
      return sample_self_guided(field, y, mask, unguided, rng);
    }
    case Method::ode:
    case Method::sdedit:
      return SampleResult{baseline_sdedit(field, y, cfg, rng), {}};
    case Method::mcs:
      return SampleResult{baseline_mcs(field, y, cfg, rng), {}};
    case Method::hfs:
      return SampleResult{baseline_hfs(field, y, cfg, rng), {}};
    case Method::nc:
      return SampleResult{baseline_nc(field, y, cfg, rng), {}};
    case Method::flowedit:
      if (src_field == nullptr) {
        throw std::runtime_error("restore: flowedit requires a source field");
      }
      return SampleResult{baseline_flowedit(*src_field, field, y, cfg, rng), {}};
  }
  throw std::invalid_argument("restore: bad method");
}

Tensor langevin_stationarity_run(const ScoreFunction& score, const Tensor& samples, double h,
                                 std::size_t steps, SeededRng& rng) {
  if (!(h > 0.0)) throw std::invalid_argument("langevin_stationarity_run: h must be > 0");
  const double half_h = 0.5 * h;
  const double sqrt_h = std::sqrt(h);
  Tensor x = samples;
  for (std::size_t k = 0; k < steps; ++k) {
    const Tensor drift = score(x);
    require_same_shape(x, drift, "langevin_stationarity_run");
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] += half_h * drift[i] + sqrt_h * rng.next_normal();
    }
    check_divergence(x, k, "langevin_stationarity_run");
  }
  return x;
}

}  // namespace flowlab
