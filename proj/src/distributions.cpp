#include "flowlab/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "eigen_util.hpp"
#include "gaussian_impl.hpp"

namespace flowlab {

GaussianSpec::GaussianSpec(Tensor mean, Tensor covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance)) {
  if (mean_.rank() != 1) {
    throw std::invalid_argument("GaussianSpec: mean must be 1-D");
  }
  const std::size_t d = mean_.size();
  if (covariance_.rank() != 2 || covariance_.rows() != d || covariance_.cols() != d) {
    throw std::invalid_argument("GaussianSpec: covariance must be [d,d]");
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      if (std::abs(covariance_.at(i, j) - covariance_.at(j, i)) > 1e-12) {
        throw std::invalid_argument("GaussianSpec: covariance not symmetric");
      }
    }
  }

  auto impl = std::make_shared<Impl>();
  impl->mean = detail::to_eigen_vector(mean_);
  impl->cov = detail::to_eigen_matrix(covariance_);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(impl->cov);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    throw std::invalid_argument("GaussianSpec: covariance must be positive-definite");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(impl->cov);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("GaussianSpec: Cholesky factorization failed");
  }
  impl->chol = llt.matrixL();
  impl->cov_inv = llt.solve(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d),
                                                      static_cast<Eigen::Index>(d)));
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < impl->chol.rows(); ++i) {
    log_det += 2.0 * std::log(impl->chol(i, i));
  }
  impl->log_norm =
      -0.5 * static_cast<double>(d) * std::log(2.0 * std::numbers::pi) - 0.5 * log_det;
  impl_ = std::move(impl);
}

GaussianSpec GaussianSpec::isotropic(Tensor mean, double stddev) {
  if (!(stddev > 0.0)) {
    throw std::invalid_argument("GaussianSpec::isotropic: stddev must be > 0");
  }
  const std::size_t d = mean.size();
  Tensor cov = Tensor::zeros({d, d});
  for (std::size_t i = 0; i < d; ++i) cov.at(i, i) = stddev * stddev;
  return GaussianSpec(std::move(mean), std::move(cov));
}

std::size_t GaussianSpec::dim() const { return mean_.size(); }

Tensor GaussianSpec::sample(SeededRng& rng, std::size_t n) const {
  const std::size_t d = dim();
  Tensor out = Tensor::zeros({n, d});
  Eigen::VectorXd z(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) z(static_cast<Eigen::Index>(j)) = rng.next_normal();
    Eigen::VectorXd x = impl_->mean + impl_->chol * z;
    for (std::size_t j = 0; j < d; ++j) out.at(i, j) = x(static_cast<Eigen::Index>(j));
  }
  return out;
}

double GaussianSpec::log_density(const Tensor& x) const {
  if (x.rank() != 1 || x.size() != dim()) {
    throw std::invalid_argument("GaussianSpec::log_density: dimension mismatch");
  }
  Eigen::VectorXd delta = detail::to_eigen_vector(x) - impl_->mean;
  const double quad = delta.dot(impl_->cov_inv * delta);
  return impl_->log_norm - 0.5 * quad;
}

Tensor GaussianSpec::score(const Tensor& x) const {
  if (x.rank() != 1 || x.size() != dim()) {
    throw std::invalid_argument("GaussianSpec::score: dimension mismatch");
  }
  Eigen::VectorXd delta = detail::to_eigen_vector(x) - impl_->mean;
  return detail::from_eigen_vector(-(impl_->cov_inv * delta));
}

GmmSpec::GmmSpec(std::vector<double> weights, std::vector<GaussianSpec> components)
    : weights_(std::move(weights)), components_(std::move(components)) {
  if (components_.empty()) {
    throw std::invalid_argument("GmmSpec: at least one component required");
  }
  if (weights_.size() != components_.size()) {
    throw std::invalid_argument("GmmSpec: one weight per component required");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (w < 0.0) throw std::invalid_argument("GmmSpec: weights must be >= 0");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("GmmSpec: weights must sum to 1");
  }
  const std::size_t d = components_.front().dim();
  for (const auto& c : components_) {
    if (c.dim() != d) throw std::invalid_argument("GmmSpec: mixed component dimensions");
  }
}

GmmSpec GmmSpec::two_modes(const Tensor& mode_mean, double stddev) {
  Tensor neg = Tensor::map(mode_mean, [](double v) { return -v; });
  return GmmSpec({0.5, 0.5}, {GaussianSpec::isotropic(mode_mean, stddev),
                              GaussianSpec::isotropic(neg, stddev)});
}

std::size_t GmmSpec::dim() const { return components_.front().dim(); }

Tensor GmmSpec::sample(SeededRng& rng, std::size_t n) const {
  const std::size_t d = dim();
  Tensor out = Tensor::zeros({n, d});
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.next_uniform();
    double acc = 0.0;
    std::size_t k = components_.size() - 1;
    for (std::size_t j = 0; j < weights_.size(); ++j) {
      acc += weights_[j];
      if (u <= acc) {
        k = j;
        break;
      }
    }
    Tensor x = components_[k].sample(rng, 1);
    for (std::size_t j = 0; j < d; ++j) out.at(i, j) = x.at(0, j);
  }
  return out;
}

double GmmSpec::log_density(const Tensor& x) const {
  double max_term = -std::numeric_limits<double>::infinity();
  std::vector<double> terms(components_.size());
  for (std::size_t k = 0; k < components_.size(); ++k) {
    terms[k] = weights_[k] > 0.0
                   ? std::log(weights_[k]) + components_[k].log_density(x)
                   : -std::numeric_limits<double>::infinity();
    max_term = std::max(max_term, terms[k]);
  }
  if (!std::isfinite(max_term)) {
    throw std::runtime_error("GmmSpec::log_density: all component terms underflow");
  }
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - max_term);
  return max_term + std::log(acc);
}

Tensor GmmSpec::score(const Tensor& x) const {
  // Responsibility-weighted component scores, responsibilities in log space.
  std::vector<double> log_terms(components_.size());
  double max_term = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < components_.size(); ++k) {
    log_terms[k] = weights_[k] > 0.0
                       ? std::log(weights_[k]) + components_[k].log_density(x)
                       : -std::numeric_limits<double>::infinity();
    max_term = std::max(max_term, log_terms[k]);
  }
  if (!std::isfinite(max_term)) {
    throw std::runtime_error("GmmSpec::score: all responsibilities underflow");
  }
  double norm = 0.0;
  for (double t : log_terms) norm += std::exp(t - max_term);

  Tensor out = Tensor::zeros({dim()});
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const double r = std::exp(log_terms[k] - max_term) / norm;
    if (r == 0.0) continue;
    Tensor s = components_[k].score(x);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += r * s[j];
  }
  return out;
}

GmmSpec GmmSpec::shifted(const Tensor& shift) const {
  if (shift.size() != dim()) {
    throw std::invalid_argument("GmmSpec::shifted: dimension mismatch");
  }
  std::vector<GaussianSpec> comps;
  comps.reserve(components_.size());
  for (const auto& c : components_) {
    comps.emplace_back(c.mean() + shift, c.covariance());
  }
  return GmmSpec(weights_, std::move(comps));
}

GmmSpec GmmSpec::single_component(std::size_t index) const {
  if (index >= components_.size()) {
    throw std::invalid_argument("GmmSpec::single_component: index out of range");
  }
  return GmmSpec({1.0}, {components_[index]});
}

}  // namespace flowlab
