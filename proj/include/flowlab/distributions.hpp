#pragma once

#include <memory>
#include <vector>

#include "flowlab/rng.hpp"
#include "flowlab/tensor.hpp"

namespace flowlab {

/// Multivariate normal with symmetric positive-definite covariance.
/// Validation (symmetry within 1e-12, strictly positive spectrum) runs once
/// at construction; sampling and conditioning reuse the cached factorization.
class GaussianSpec {
 public:
  GaussianSpec(Tensor mean, Tensor covariance);

  static GaussianSpec isotropic(Tensor mean, double stddev);

  std::size_t dim() const;
  const Tensor& mean() const { return mean_; }
  const Tensor& covariance() const { return covariance_; }

  Tensor sample(SeededRng& rng, std::size_t n) const;  // [n, d]
  double log_density(const Tensor& x) const;           // x: [d]
  Tensor score(const Tensor& x) const;                 // grad log density, [d]

  struct Impl;
  const Impl& impl() const { return *impl_; }

 private:
  Tensor mean_;
  Tensor covariance_;
  std::shared_ptr<const Impl> impl_;
};

/// Finite mixture of Gaussians with weights on the simplex.
class GmmSpec {
 public:
  GmmSpec(std::vector<double> weights, std::vector<GaussianSpec> components);

  /// Equal-weight two-mode mixture at +/- mode_mean with isotropic stddev.
  static GmmSpec two_modes(const Tensor& mode_mean, double stddev);

  std::size_t dim() const;
  std::size_t component_count() const { return components_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<GaussianSpec>& components() const { return components_; }

  Tensor sample(SeededRng& rng, std::size_t n) const;
  double log_density(const Tensor& x) const;
  Tensor score(const Tensor& x) const;

  GmmSpec shifted(const Tensor& shift) const;
  GmmSpec single_component(std::size_t index) const;

 private:
  std::vector<double> weights_;
  std::vector<GaussianSpec> components_;
};

}  // namespace flowlab
