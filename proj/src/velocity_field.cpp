#include "flowlab/velocity_field.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "eigen_util.hpp"
#include "gaussian_impl.hpp"

namespace flowlab {

Tensor VelocityField::velocity(const Tensor& x, double t) const {
  if (x.rank() == 1) {
    if (x.size() != dim()) {
      throw std::invalid_argument("VelocityField: dimension mismatch");
    }
    return velocity_at(x, t);
  }
  if (x.rank() == 2) {
    if (x.cols() != dim()) {
      throw std::invalid_argument("VelocityField: dimension mismatch");
    }
    Tensor out = Tensor::zeros(x.shape());
    for (std::size_t i = 0; i < x.rows(); ++i) {
      out.set_row(i, velocity_at(x.row_copy(i), t));
    }
    return out;
  }
  throw std::invalid_argument("VelocityField: input must be [d] or [n,d]");
}

namespace {

struct GaussianConditional {
  Eigen::VectorXd e_x0;
  Eigen::VectorXd e_x1;
};

// Joint-Gaussian conditioning of (x0, x1) on x_t = a x0 + b x1.
GaussianConditional condition_endpoints(const GaussianSpec::Impl& g, const Eigen::VectorXd& x,
                                        double a, double b) {
  const Eigen::Index d = x.size();
  Eigen::MatrixXd s = a * a * g.cov + b * b * Eigen::MatrixXd::Identity(d, d);
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("analytic velocity: marginal covariance solve failed");
  }
  Eigen::VectorXd delta = x - a * g.mean;
  Eigen::VectorXd z = llt.solve(delta);
  GaussianConditional out;
  out.e_x0 = g.mean + a * (g.cov * z);
  out.e_x1 = b * z;
  return out;
}

double log_marginal_density(const GaussianSpec::Impl& g, const Eigen::VectorXd& x, double a,
                            double b) {
  const Eigen::Index d = x.size();
  Eigen::MatrixXd s = a * a * g.cov + b * b * Eigen::MatrixXd::Identity(d, d);
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("analytic velocity: marginal covariance solve failed");
  }
  Eigen::VectorXd delta = x - a * g.mean;
  const double quad = delta.dot(llt.solve(delta));
  double log_det = 0.0;
  Eigen::MatrixXd l = llt.matrixL();
  for (Eigen::Index i = 0; i < d; ++i) log_det += 2.0 * std::log(l(i, i));
  return -0.5 * (static_cast<double>(d) * std::log(2.0 * std::numbers::pi) + log_det + quad);
}

}  // namespace

AnalyticGaussianField::AnalyticGaussianField(GaussianSpec spec, NoiseSchedule schedule)
    : spec_(std::move(spec)), schedule_(schedule) {}

std::size_t AnalyticGaussianField::dim() const { return spec_.dim(); }

Tensor AnalyticGaussianField::velocity_at(const Tensor& x, double t) const {
  const double s = sigma(schedule_, t);
  const double a = 1.0 - s;
  auto cond = condition_endpoints(spec_.impl(), detail::to_eigen_vector(x), a, s);
  return detail::from_eigen_vector(cond.e_x1 - cond.e_x0);
}

Tensor AnalyticGaussianField::posterior_mean_exact(const Tensor& x, double t) const {
  const double s = sigma(schedule_, t);
  const double a = 1.0 - s;
  auto cond = condition_endpoints(spec_.impl(), detail::to_eigen_vector(x), a, s);
  return detail::from_eigen_vector(cond.e_x0);
}

AnalyticGmmField::AnalyticGmmField(GmmSpec spec, NoiseSchedule schedule)
    : spec_(std::move(spec)), schedule_(schedule) {
  component_fields_.reserve(spec_.component_count());
  for (const auto& c : spec_.components()) {
    component_fields_.emplace_back(c, schedule);
  }
}

std::size_t AnalyticGmmField::dim() const { return spec_.dim(); }

Tensor AnalyticGmmField::velocity_at(const Tensor& x, double t) const {
  const std::size_t k_count = spec_.component_count();
  if (k_count == 1) return component_fields_[0].velocity_at(x, t);

  const double s = sigma(schedule_, t);
  const double a = 1.0 - s;
  const Eigen::VectorXd xe = detail::to_eigen_vector(x);

  std::vector<double> log_resp(k_count);
  double max_term = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < k_count; ++k) {
    const double w = spec_.weights()[k];
    log_resp[k] = w > 0.0
                      ? std::log(w) + log_marginal_density(spec_.components()[k].impl(), xe, a, s)
                      : -std::numeric_limits<double>::infinity();
    max_term = std::max(max_term, log_resp[k]);
  }
  if (!std::isfinite(max_term)) {
    throw std::runtime_error("analytic GMM velocity: responsibilities underflow");
  }
  double norm = 0.0;
  for (double lr : log_resp) norm += std::exp(lr - max_term);

  Tensor out = Tensor::zeros({dim()});
  for (std::size_t k = 0; k < k_count; ++k) {
    const double r = std::exp(log_resp[k] - max_term) / norm;
    if (r == 0.0) continue;
    Tensor vk = component_fields_[k].velocity_at(x, t);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += r * vk[j];
  }
  return out;
}

FunctionField::FunctionField(std::size_t dim, std::function<Tensor(const Tensor&, double)> fn)
    : dim_(dim), fn_(std::move(fn)) {}

FunctionField zero_field(std::size_t dim) {
  return FunctionField(dim, [dim](const Tensor&, double) { return Tensor::zeros({dim}); });
}

DataSampler sampler_of(const GaussianSpec& spec) {
  return [spec](SeededRng& rng, std::size_t n) { return spec.sample(rng, n); };
}

DataSampler sampler_of(const GmmSpec& spec) {
  return [spec](SeededRng& rng, std::size_t n) { return spec.sample(rng, n); };
}

OracleEstimate mc_oracle_velocity(const DataSampler& sampler, const Tensor& x, double t,
                                  std::size_t n, double bandwidth, SeededRng& rng,
                                  NoiseSchedule schedule) {
  if (n < 1000) {
    throw std::invalid_argument("mc_oracle_velocity: n must be >= 1000");
  }
  if (!(bandwidth > 0.0)) {
    throw std::invalid_argument("mc_oracle_velocity: bandwidth must be > 0");
  }
  if (x.rank() != 1) {
    throw std::invalid_argument("mc_oracle_velocity: x must be 1-D");
  }
  const std::size_t d = x.size();
  const double s = sigma(schedule, t);
  const double a = 1.0 - s;
  const double inv_two_h2 = 1.0 / (2.0 * bandwidth * bandwidth);

  Tensor x0 = sampler(rng, n);
  if (x0.rank() != 2 || x0.cols() != d) {
    throw std::invalid_argument("mc_oracle_velocity: sampler dimension mismatch");
  }

  // Kernel-weighted mean of u = x1 - x0 at x, plus weighted variance for the
  // standard error. Single pass; weights are exp(-|xt - x|^2 / 2h^2).
  std::vector<double> mean(d, 0.0);
  std::vector<double> m2(d, 0.0);
  double w_sum = 0.0, w2_sum = 0.0;
  std::vector<double> u(d);
  for (std::size_t i = 0; i < n; ++i) {
    double dist2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double x1j = rng.next_normal();
      const double x0j = x0.at(i, j);
      const double xtj = a * x0j + s * x1j;
      const double diff = xtj - x[j];
      dist2 += diff * diff;
      u[j] = x1j - x0j;
    }
    const double w = std::exp(-dist2 * inv_two_h2);
    if (w == 0.0) continue;
    w_sum += w;
    w2_sum += w * w;
    for (std::size_t j = 0; j < d; ++j) {
      const double delta = u[j] - mean[j];
      mean[j] += (w / w_sum) * delta;
      m2[j] += w * delta * (u[j] - mean[j]);
    }
  }

  const double n_eff = w_sum > 0.0 ? (w_sum * w_sum) / w2_sum : 0.0;
  if (n_eff < 30.0) {
    throw std::runtime_error("mc_oracle_velocity: insufficient data (effective sample size < 30)");
  }
  std::vector<double> se(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double var = m2[j] / w_sum;
    se[j] = std::sqrt(var / n_eff);
  }
  return OracleEstimate{Tensor::row(std::move(mean)), Tensor::row(std::move(se)), n_eff};
}

}  // namespace flowlab
