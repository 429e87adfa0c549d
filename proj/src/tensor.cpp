#include "flowlab/tensor.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace flowlab {

namespace {

std::size_t shape_product(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t e : shape) n *= e;
  return n;
}

}  // namespace

Tensor::Tensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  validate();
}

void Tensor::validate() const {
  if (shape_.empty()) {
    throw std::invalid_argument("Tensor: shape must have at least one extent");
  }
  if (shape_product(shape_) != values_.size()) {
    std::ostringstream msg;
    msg << "Tensor: shape " << shape_to_string(shape_) << " expects "
        << shape_product(shape_) << " values, got " << values_.size();
    throw std::invalid_argument(msg.str());
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("Tensor: non-finite value");
    }
  }
}

Tensor Tensor::zeros(Shape shape) {
  std::size_t n = shape_product(shape);
  return Tensor(std::move(shape), std::vector<double>(n, 0.0));
}

Tensor Tensor::full(Shape shape, double value) {
  std::size_t n = shape_product(shape);
  return Tensor(std::move(shape), std::vector<double>(n, value));
}

Tensor Tensor::row(std::initializer_list<double> values) {
  return Tensor({values.size()}, std::vector<double>(values));
}

Tensor Tensor::row(std::vector<double> values) {
  std::size_t n = values.size();
  return Tensor({n}, std::move(values));
}

std::size_t Tensor::rows() const {
  if (rank() != 2) throw std::invalid_argument("Tensor: rows() requires rank 2");
  return shape_[0];
}

std::size_t Tensor::cols() const {
  if (rank() != 2) throw std::invalid_argument("Tensor: cols() requires rank 2");
  return shape_[1];
}

double Tensor::at(std::size_t i, std::size_t j) const {
  return values_[i * cols() + j];
}

double& Tensor::at(std::size_t i, std::size_t j) {
  return values_[i * cols() + j];
}

Tensor Tensor::row_copy(std::size_t i) const {
  std::size_t d = cols();
  std::vector<double> out(d);
  for (std::size_t j = 0; j < d; ++j) out[j] = values_[i * d + j];
  return Tensor({d}, std::move(out));
}

void Tensor::set_row(std::size_t i, const Tensor& r) {
  std::size_t d = cols();
  if (r.size() != d) throw std::invalid_argument("Tensor: set_row size mismatch");
  for (std::size_t j = 0; j < d; ++j) values_[i * d + j] = r[j];
}

Tensor& Tensor::operator+=(const Tensor& rhs) {
  require_same_shape(*this, rhs, "operator+=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += rhs.values_[i];
  validate();
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& rhs) {
  require_same_shape(*this, rhs, "operator-=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= rhs.values_[i];
  validate();
  return *this;
}

Tensor& Tensor::operator*=(double s) {
  for (double& v : values_) v *= s;
  validate();
  return *this;
}

double Tensor::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

Tensor Tensor::map(const Tensor& a, const std::function<double(double)>& f) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i]);
  return Tensor(a.shape(), std::move(out));
}

Tensor Tensor::zip(const Tensor& a, const Tensor& b,
                   const std::function<double(double, double)>& f) {
  require_same_shape(a, b, "Tensor::zip");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i], b[i]);
  return Tensor(a.shape(), std::move(out));
}

Tensor operator+(const Tensor& a, const Tensor& b) {
  Tensor r = a;
  r += b;
  return r;
}

Tensor operator-(const Tensor& a, const Tensor& b) {
  Tensor r = a;
  r -= b;
  return r;
}

Tensor operator*(double s, const Tensor& a) {
  Tensor r = a;
  r *= s;
  return r;
}

Tensor operator*(const Tensor& a, const Tensor& b) {
  return Tensor::zip(a, b, [](double x, double y) { return x * y; });
}

std::string shape_to_string(const Shape& shape) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << ",";
    out << shape[i];
  }
  out << "]";
  return out.str();
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* where) {
  if (!a.same_shape(b)) {
    std::ostringstream msg;
    msg << where << ": shape mismatch " << shape_to_string(a.shape()) << " vs "
        << shape_to_string(b.shape());
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace flowlab
