#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace flowlab {

using Shape = std::vector<std::size_t>;

/// Dense row-major array of doubles with an explicit shape.
///
/// Construction validates that the value count matches the shape and that
/// every entry is finite, so a Tensor in flight is always a well-formed
/// finite array. Elementwise operators require identical shapes.
class Tensor {
 public:
  Tensor() = default;
  Tensor(Shape shape, std::vector<double> values);

  static Tensor zeros(Shape shape);
  static Tensor full(Shape shape, double value);
  static Tensor row(std::initializer_list<double> values);
  static Tensor row(std::vector<double> values);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return values_.size(); }
  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  // 2-D accessors.
  std::size_t rows() const;
  std::size_t cols() const;
  double at(std::size_t i, std::size_t j) const;
  double& at(std::size_t i, std::size_t j);
  Tensor row_copy(std::size_t i) const;
  void set_row(std::size_t i, const Tensor& r);

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  Tensor& operator+=(const Tensor& rhs);
  Tensor& operator-=(const Tensor& rhs);
  Tensor& operator*=(double s);

  double max_abs() const;

  static Tensor map(const Tensor& a, const std::function<double(double)>& f);
  static Tensor zip(const Tensor& a, const Tensor& b,
                    const std::function<double(double, double)>& f);

 private:
  Shape shape_;
  std::vector<double> values_;

  void validate() const;
};

Tensor operator+(const Tensor& a, const Tensor& b);
Tensor operator-(const Tensor& a, const Tensor& b);
Tensor operator*(double s, const Tensor& a);
Tensor operator*(const Tensor& a, const Tensor& b);  // elementwise

std::string shape_to_string(const Shape& shape);
void require_same_shape(const Tensor& a, const Tensor& b, const char* where);

}  // namespace flowlab
