#pragma once

#include <utility>

#include "flowlab/rng.hpp"
#include "flowlab/tensor.hpp"

namespace flowlab {

/// Sliced 2-Wasserstein distance between empirical samples a [n,d] and
/// b [m,d]: the mean over n_proj random unit directions of the exact 1-D
/// W2 distance between the projected samples (sorted-quantile form, which
/// handles n != m). Zero on identical sample sets, symmetric in law.
double sliced_wasserstein(const Tensor& a, const Tensor& b, std::size_t n_proj, SeededRng& rng);

/// Exact 1-D 2-Wasserstein distance between two sorted empirical samples.
double wasserstein2_1d(std::vector<double> a, std::vector<double> b);

/// Mean squared difference over mask-selected coordinates.
double masked_mse(const Tensor& x, const Tensor& y, const Tensor& mask);

/// Sample mean and unbiased covariance of rows.
std::pair<Tensor, Tensor> empirical_moments(const Tensor& samples);

}  // namespace flowlab
