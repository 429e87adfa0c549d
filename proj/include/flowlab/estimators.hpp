#pragma once

#include "flowlab/tensor.hpp"

namespace flowlab {

/// Both endpoint estimates recovered from one state on the linear path,
/// together with the time they were taken at. Re-interpolating the pair at
/// sigma_t reproduces the original state.
struct PosteriorPair {
  Tensor x0_hat;
  Tensor x1_hat;
  double t = 0.0;
  double sigma_t = 0.0;
};

/// Predicted data endpoint: x_t - sigma_t * v.
Tensor posterior_mean(const Tensor& x_t, const Tensor& v, double sigma_t);

/// Predicted noise endpoint: x_t + (1 - sigma_t) * v.
Tensor posterior_noise(const Tensor& x_t, const Tensor& v, double sigma_t);

PosteriorPair make_posterior_pair(const Tensor& x_t, const Tensor& v, double t,
                                  double sigma_t);

/// Move along the linear path to sigma_next <= sigma_t:
/// (1 - sigma_next) * x0_hat + sigma_next * x1_hat.
/// sigma_next == 0 returns x0_hat exactly.
Tensor interpolate_step(const PosteriorPair& pair, double sigma_next);

/// Pull the data estimate toward y on the masked coordinates:
/// x0_hat - lambda * (mask (.) (x0_hat - y)).
///
/// lambda folds in both the factor 2 of the squared-residual gradient and the
/// identity approximation of the estimator Jacobian, so lambda = 1 projects
/// masked coordinates onto y exactly and unmasked coordinates are never
/// touched.
Tensor guidance_step(const Tensor& x0_hat, const Tensor& y, const Tensor& mask,
                     double lambda);

}  // namespace flowlab
