#pragma once

#include <Eigen/Dense>

#include "flowlab/tensor.hpp"

namespace flowlab::detail {

inline Eigen::VectorXd to_eigen_vector(const Tensor& t) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i) v(static_cast<Eigen::Index>(i)) = t[i];
  return v;
}

inline Eigen::MatrixXd to_eigen_matrix(const Tensor& t) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(t.rows()), static_cast<Eigen::Index>(t.cols()));
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t.at(i, j);
    }
  }
  return m;
}

inline Tensor from_eigen_vector(const Eigen::VectorXd& v) {
  std::vector<double> out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v(i);
  return Tensor::row(std::move(out));
}

inline Tensor from_eigen_matrix(const Eigen::MatrixXd& m) {
  std::vector<double> out(static_cast<std::size_t>(m.rows() * m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
    }
  }
  return Tensor({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())},
                std::move(out));
}

}  // namespace flowlab::detail
