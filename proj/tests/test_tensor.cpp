#include <doctest.h>

#include <limits>
#include <stdexcept>

#include "flowlab/tensor.hpp"

using namespace flowlab;

TEST_CASE("tensor construction validates shape and values") {
  Tensor t({2, 3}, {1, 2, 3, 4, 5, 6});
  CHECK(t.size() == 6);
  CHECK(t.rows() == 2);
  CHECK(t.cols() == 3);
  CHECK(t.at(1, 2) == 6.0);

  CHECK_THROWS_AS(Tensor({2, 2}, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(Tensor({1}, {std::numeric_limits<double>::quiet_NaN()}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Tensor({1}, {std::numeric_limits<double>::infinity()}),
                  std::invalid_argument);
}

TEST_CASE("elementwise ops require matching shapes") {
  Tensor a = Tensor::row({1, 2, 3});
  Tensor b = Tensor::row({4, 5, 6});
  Tensor c = a + b;
  CHECK(c[0] == 5.0);
  CHECK(c[2] == 9.0);
  CHECK((2.0 * a)[1] == 4.0);
  CHECK((a * b)[2] == 18.0);
  CHECK((b - a).max_abs() == 3.0);

  Tensor wrong = Tensor::row({1, 2});
  CHECK_THROWS_AS(a + wrong, std::invalid_argument);
}

TEST_CASE("row access on 2-D tensors") {
  Tensor t({2, 2}, {1, 2, 3, 4});
  Tensor r = t.row_copy(1);
  CHECK(r.shape() == Shape{2});
  CHECK(r[0] == 3.0);
  t.set_row(0, Tensor::row({9, 8}));
  CHECK(t.at(0, 1) == 8.0);
}

TEST_CASE("empty clouds are representable") {
  Tensor empty = Tensor::zeros({0, 2});
  CHECK(empty.size() == 0);
  CHECK(empty.rows() == 0);
}
