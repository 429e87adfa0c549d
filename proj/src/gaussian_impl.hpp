#pragma once

#include <Eigen/Dense>

#include "flowlab/distributions.hpp"

namespace flowlab {

// Cached Eigen-side state of a GaussianSpec, shared by sampling, density
// evaluation and the analytic conditioning in the velocity fields.
struct GaussianSpec::Impl {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  Eigen::MatrixXd chol;     // lower factor, cov = chol * chol^T
  Eigen::MatrixXd cov_inv;
  double log_norm = 0.0;    // -d/2 log(2 pi) - 1/2 log det cov
};

}  // namespace flowlab
