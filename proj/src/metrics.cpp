#include "flowlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace flowlab {

double wasserstein2_1d(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("wasserstein2_1d: empty sample set");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::size_t n = a.size(), m = b.size();
  // Integrate |Qa(u) - Qb(u)|^2 over u in (0,1) across the merged quantile
  // breakpoints i/n and j/m.
  double acc = 0.0;
  double u = 0.0;
  std::size_t i = 0, j = 0;
  while (i < n && j < m) {
    const double edge_a = static_cast<double>(i + 1) / static_cast<double>(n);
    const double edge_b = static_cast<double>(j + 1) / static_cast<double>(m);
    const double next = std::min(edge_a, edge_b);
    const double diff = a[i] - b[j];
    acc += (next - u) * diff * diff;
    u = next;
    if (edge_a <= next) ++i;
    if (edge_b <= next) ++j;
  }
  return std::sqrt(acc);
}

double sliced_wasserstein(const Tensor& a, const Tensor& b, std::size_t n_proj, SeededRng& rng) {
  if (a.rank() != 2 || b.rank() != 2 || a.cols() != b.cols()) {
    throw std::invalid_argument("sliced_wasserstein: inputs must be [n,d] with matching d");
  }
  if (a.rows() < 2 || b.rows() < 2) {
    throw std::invalid_argument("sliced_wasserstein: need at least 2 samples per set");
  }
  if (n_proj < 1) {
    throw std::invalid_argument("sliced_wasserstein: n_proj must be >= 1");
  }
  const std::size_t d = a.cols();
  std::vector<double> dir(d), pa(a.rows()), pb(b.rows());
  double total = 0.0;
  for (std::size_t p = 0; p < n_proj; ++p) {
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        dir[j] = rng.next_normal();
        norm2 += dir[j] * dir[j];
      }
    } while (norm2 < 1e-24);
    const double inv_norm = 1.0 / std::sqrt(norm2);
    for (std::size_t j = 0; j < d; ++j) dir[j] *= inv_norm;

    for (std::size_t i = 0; i < a.rows(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += dir[j] * a.at(i, j);
      pa[i] = s;
    }
    for (std::size_t i = 0; i < b.rows(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += dir[j] * b.at(i, j);
      pb[i] = s;
    }
    total += wasserstein2_1d(pa, pb);
  }
  return total / static_cast<double>(n_proj);
}

double masked_mse(const Tensor& x, const Tensor& y, const Tensor& mask) {
  require_same_shape(x, y, "masked_mse");
  require_same_shape(x, mask, "masked_mse");
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (mask[i] == 0.0) continue;
    const double r = x[i] - y[i];
    acc += r * r;
    ++count;
  }
  if (count == 0) throw std::invalid_argument("masked_mse: mask selects no coordinates");
  return acc / static_cast<double>(count);
}

std::pair<Tensor, Tensor> empirical_moments(const Tensor& samples) {
  if (samples.rank() != 2 || samples.rows() < 2) {
    throw std::invalid_argument("empirical_moments: need [n,d] with n >= 2");
  }
  const std::size_t n = samples.rows(), d = samples.cols();
  Tensor mean = Tensor::zeros({d});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) mean[j] += samples.at(i, j);
  }
  for (std::size_t j = 0; j < d; ++j) mean[j] /= static_cast<double>(n);

  Tensor cov = Tensor::zeros({d, d});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double dj = samples.at(i, j) - mean[j];
      for (std::size_t k = j; k < d; ++k) {
        cov.at(j, k) += dj * (samples.at(i, k) - mean[k]);
      }
    }
  }
  const double denom = static_cast<double>(n - 1);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = j; k < d; ++k) {
      cov.at(j, k) /= denom;
      cov.at(k, j) = cov.at(j, k);
    }
  }
  return {std::move(mean), std::move(cov)};
}

}  // namespace flowlab
