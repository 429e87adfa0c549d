#include "flowlab/estimators.hpp"

#include <stdexcept>

namespace flowlab {

Tensor posterior_mean(const Tensor& x_t, const Tensor& v, double sigma_t) {
  require_same_shape(x_t, v, "posterior_mean");
  if (!(sigma_t >= 0.0 && sigma_t <= 1.0)) {
    throw std::invalid_argument("posterior_mean: sigma_t must be in [0,1]");
  }
  return Tensor::zip(x_t, v, [sigma_t](double x, double vi) { return x - sigma_t * vi; });
}

Tensor posterior_noise(const Tensor& x_t, const Tensor& v, double sigma_t) {
  require_same_shape(x_t, v, "posterior_noise");
  if (!(sigma_t >= 0.0 && sigma_t <= 1.0)) {
    throw std::invalid_argument("posterior_noise: sigma_t must be in [0,1]");
  }
  const double w = 1.0 - sigma_t;
  return Tensor::zip(x_t, v, [w](double x, double vi) { return x + w * vi; });
}

PosteriorPair make_posterior_pair(const Tensor& x_t, const Tensor& v, double t,
                                  double sigma_t) {
  return PosteriorPair{posterior_mean(x_t, v, sigma_t),
                       posterior_noise(x_t, v, sigma_t), t, sigma_t};
}

Tensor interpolate_step(const PosteriorPair& pair, double sigma_next) {
  if (sigma_next > pair.sigma_t) {
    throw std::invalid_argument("interpolate_step: sigma_next exceeds sigma_t (backward step)");
  }
  if (sigma_next < 0.0) {
    throw std::invalid_argument("interpolate_step: sigma_next must be >= 0");
  }
  if (sigma_next == 0.0) return pair.x0_hat;
  const double w0 = 1.0 - sigma_next;
  return Tensor::zip(pair.x0_hat, pair.x1_hat,
                     [w0, sigma_next](double a, double b) { return w0 * a + sigma_next * b; });
}

Tensor guidance_step(const Tensor& x0_hat, const Tensor& y, const Tensor& mask,
                     double lambda) {
  require_same_shape(x0_hat, y, "guidance_step");
  require_same_shape(x0_hat, mask, "guidance_step");
  if (lambda < 0.0) {
    throw std::invalid_argument("guidance_step: lambda must be >= 0");
  }
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] != 0.0 && mask[i] != 1.0) {
      throw std::invalid_argument("guidance_step: mask must be binary");
    }
  }
  if (lambda == 0.0) return x0_hat;

  Tensor out = x0_hat;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (mask[i] == 0.0) continue;
    out[i] = (lambda == 1.0) ? y[i] : x0_hat[i] - lambda * (x0_hat[i] - y[i]);
  }
  return out;
}

}  // namespace flowlab
