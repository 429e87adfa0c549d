#pragma once

#include <functional>
#include <memory>

#include "flowlab/distributions.hpp"
#include "flowlab/schedule.hpp"
#include "flowlab/tensor.hpp"

namespace flowlab {

/// Evaluable map (x, t) -> velocity along the interpolation path.
/// Implementations are immutable after construction and safe to share.
class VelocityField {
 public:
  virtual ~VelocityField() = default;

  virtual std::size_t dim() const = 0;

  /// Velocity at a single point x of shape [d].
  virtual Tensor velocity_at(const Tensor& x, double t) const = 0;

  /// Dispatching evaluation: accepts [d] or a batch [n, d] (row-wise).
  Tensor velocity(const Tensor& x, double t) const;
};

/// Exact conditional-expectation velocity for a Gaussian target: with
/// a = 1 - sigma_t and b = sigma_t,
///   E[x0 | x] = mu + a Sigma (a^2 Sigma + b^2 I)^-1 (x - a mu)
///   E[x1 | x] = b (a^2 Sigma + b^2 I)^-1 (x - a mu)
/// and the field is E[x1 | x] - E[x0 | x]. Both endpoints t = 0, 1 are the
/// well-defined limits of the same expression.
class AnalyticGaussianField : public VelocityField {
 public:
  explicit AnalyticGaussianField(GaussianSpec spec, NoiseSchedule schedule = {});

  std::size_t dim() const override;
  Tensor velocity_at(const Tensor& x, double t) const override;

  const GaussianSpec& spec() const { return spec_; }

  /// Conditional data-endpoint estimate E[x0 | x_t = x].
  Tensor posterior_mean_exact(const Tensor& x, double t) const;

 private:
  GaussianSpec spec_;
  NoiseSchedule schedule_;
};

/// Mixture field: responsibilities under the component marginals
/// N(a mu_k, a^2 Sigma_k + b^2 I), computed in log space, weighting the
/// per-component Gaussian fields.
class AnalyticGmmField : public VelocityField {
 public:
  explicit AnalyticGmmField(GmmSpec spec, NoiseSchedule schedule = {});

  std::size_t dim() const override;
  Tensor velocity_at(const Tensor& x, double t) const override;

  const GmmSpec& spec() const { return spec_; }

 private:
  GmmSpec spec_;
  NoiseSchedule schedule_;
  std::vector<AnalyticGaussianField> component_fields_;
};

/// Wraps an arbitrary callable as a field; used for hard-wired test fields.
class FunctionField : public VelocityField {
 public:
  FunctionField(std::size_t dim, std::function<Tensor(const Tensor&, double)> fn);

  std::size_t dim() const override { return dim_; }
  Tensor velocity_at(const Tensor& x, double t) const override { return fn_(x, t); }

 private:
  std::size_t dim_;
  std::function<Tensor(const Tensor&, double)> fn_;
};

FunctionField zero_field(std::size_t dim);

/// Draws x0 rows from a data distribution; the oracle pairs them with fresh
/// standard normal x1 draws.
using DataSampler = std::function<Tensor(SeededRng&, std::size_t)>;

DataSampler sampler_of(const GaussianSpec& spec);
DataSampler sampler_of(const GmmSpec& spec);

struct OracleEstimate {
  Tensor value;            // [d]
  Tensor stderr_;          // [d] per-coordinate standard error
  double effective_n = 0;  // kernel-weight effective sample size
};

/// Brute-force kernel-regression estimate of E[x1 - x0 | x_t near x] from n
/// simulated path pairs, with a Gaussian kernel of width `bandwidth`. Fails
/// when the effective sample size drops below 30.
OracleEstimate mc_oracle_velocity(const DataSampler& sampler, const Tensor& x, double t,
                                  std::size_t n, double bandwidth, SeededRng& rng,
                                  NoiseSchedule schedule = {});

}  // namespace flowlab
