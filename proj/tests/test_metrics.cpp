#include <doctest.h>

#include <cmath>

#include "flowlab/distributions.hpp"
#include "flowlab/metrics.hpp"

using namespace flowlab;

TEST_CASE("sliced wasserstein is zero on identical sets") {
  SeededRng rng(601);
  Tensor a = rng.normal({50, 3});
  SeededRng proj(1);
  CHECK(sliced_wasserstein(a, a, 32, proj) == 0.0);
}

TEST_CASE("constant shift in 1-D") {
  Tensor a({2, 1}, {0.0, 0.0});
  Tensor b({2, 1}, {1.0, 1.0});
  SeededRng proj(2);
  CHECK(sliced_wasserstein(a, b, 16, proj) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("shifted gaussians recover the analytic distance") {
  SeededRng rng(602);
  SeededRng ra = rng.split(0), rb = rng.split(1), proj = rng.split(2);
  Tensor a = GaussianSpec::isotropic(Tensor::row({0.0}), 1.0).sample(ra, 10000);
  Tensor b = GaussianSpec::isotropic(Tensor::row({2.0}), 1.0).sample(rb, 10000);
  const double d = sliced_wasserstein(a, b, 64, proj);
  CHECK(d == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("sliced wasserstein is symmetric and nonnegative") {
  SeededRng rng(603);
  Tensor a = rng.normal({40, 2});
  Tensor b = rng.normal({70, 2});
  SeededRng p1(9), p2(9);
  const double ab = sliced_wasserstein(a, b, 32, p1);
  const double ba = sliced_wasserstein(b, a, 32, p2);
  CHECK(ab >= 0.0);
  // same projection stream, mirrored arguments
  CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
  CHECK_THROWS_AS(sliced_wasserstein(a, Tensor::zeros({3, 3}), 8, p1), std::invalid_argument);
  CHECK_THROWS_AS(sliced_wasserstein(Tensor::zeros({1, 2}), b, 8, p1), std::invalid_argument);
}

TEST_CASE("unequal sample counts use the exact quantile overlap") {
  // quantile functions: a = 0 on (0,1); b = 0 on (0,1/2), 1 on (1/2,1)
  CHECK(wasserstein2_1d({0.0, 0.0}, {0.0, 1.0}) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(wasserstein2_1d({0.0}, {0.0, 1.0}) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("masked mse") {
  Tensor x = Tensor::row({1.0, 5.0});
  Tensor y = Tensor::row({2.0, 9.0});
  CHECK(masked_mse(x, x, Tensor::row({1.0, 1.0})) == 0.0);
  CHECK(masked_mse(x, y, Tensor::row({1.0, 0.0})) == 1.0);
  CHECK(masked_mse(x, y, Tensor::row({1.0, 1.0})) == doctest::Approx(8.5).epsilon(1e-15));
  CHECK_THROWS_AS(masked_mse(x, y, Tensor::row({0.0, 0.0})), std::invalid_argument);
}

TEST_CASE("empirical moments use the unbiased divisor") {
  Tensor two({2, 1}, {-1.0, 1.0});
  const auto [mean, cov] = empirical_moments(two);
  CHECK(mean[0] == 0.0);
  CHECK(cov.at(0, 0) == 2.0);

  Tensor constant({3, 2}, {4, 4, 4, 4, 4, 4});
  const auto [m2, c2] = empirical_moments(constant);
  CHECK(m2[0] == 4.0);
  CHECK(c2.max_abs() == 0.0);
}

TEST_CASE("moments of a large standard normal draw") {
  SeededRng rng(604);
  Tensor x = rng.normal({100000, 2});
  const auto [mean, cov] = empirical_moments(x);
  CHECK(std::abs(mean[0]) < 0.02);
  CHECK(std::abs(mean[1]) < 0.02);
  CHECK(std::abs(cov.at(0, 0) - 1.0) < 0.03);
  CHECK(std::abs(cov.at(1, 1) - 1.0) < 0.03);
  CHECK(std::abs(cov.at(0, 1)) < 0.03);
}
