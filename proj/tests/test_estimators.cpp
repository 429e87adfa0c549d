#include <doctest.h>

#include <cmath>

#include "flowlab/estimators.hpp"
#include "flowlab/rng.hpp"
#include "flowlab/velocity_field.hpp"

using namespace flowlab;

TEST_CASE("posterior mean arithmetic") {
  Tensor x = Tensor::row({1.0});
  Tensor v = Tensor::row({0.4});
  CHECK(posterior_mean(x, v, 0.0)[0] == 1.0);
  CHECK(posterior_mean(x, v, 0.5)[0] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK_THROWS_AS(posterior_mean(x, Tensor::row({1, 2}), 0.5), std::invalid_argument);
}

TEST_CASE("posterior noise arithmetic") {
  Tensor x = Tensor::row({1.0});
  Tensor v = Tensor::row({0.4});
  CHECK(posterior_noise(x, v, 1.0)[0] == 1.0);
  CHECK(posterior_noise(x, v, 0.5)[0] == doctest::Approx(1.2).epsilon(1e-15));

  // re-interpolating both estimates at sigma_t returns x_t
  const PosteriorPair pair = make_posterior_pair(x, v, 0.5, 0.5);
  CHECK(interpolate_step(pair, 0.5)[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("interpolate_step endpoints and bounds") {
  PosteriorPair pair{Tensor::row({0.8}), Tensor::row({1.2}), 0.5, 0.5};
  CHECK(interpolate_step(pair, 0.5)[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(interpolate_step(pair, 0.0)[0] == 0.8);  // exact endpoint
  CHECK(interpolate_step(pair, 0.25)[0] == doctest::Approx(0.9).epsilon(1e-15));
  CHECK_THROWS_AS(interpolate_step(pair, 0.6), std::invalid_argument);
}

TEST_CASE("path identity on random inputs") {
  SeededRng rng(11);
  double max_err = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    Tensor x = rng.normal({5});
    Tensor v = rng.normal({5});
    const double s = rng.next_uniform();
    const Tensor back = interpolate_step(make_posterior_pair(x, v, s, s), s);
    max_err = std::max(max_err, (back - x).max_abs());
  }
  CHECK(max_err <= 1e-12);
}

TEST_CASE("guidance arithmetic and projections") {
  Tensor x0 = Tensor::row({1.0, 1.0});
  Tensor y = Tensor::row({2.0, 2.0});
  Tensor mask = Tensor::row({1.0, 0.0});

  Tensor same = guidance_step(x0, y, mask, 0.0);
  CHECK(same[0] == x0[0]);
  CHECK(same[1] == x0[1]);

  Tensor stepped = guidance_step(x0, y, mask, 0.2);
  CHECK(stepped[0] == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(stepped[1] == 1.0);

  Tensor projected = guidance_step(x0, y, Tensor::row({1.0, 1.0}), 1.0);
  CHECK(projected[0] == 2.0);
  CHECK(projected[1] == 2.0);

  CHECK_THROWS_AS(guidance_step(x0, y, mask, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(guidance_step(x0, y, Tensor::row({0.5, 0.0}), 0.2), std::invalid_argument);
}

TEST_CASE("guidance leaves unmasked coordinates bit-identical") {
  SeededRng rng(21);
  for (int rep = 0; rep < 100; ++rep) {
    Tensor x0 = rng.normal({6});
    Tensor y = rng.normal({6});
    Tensor mask = Tensor::map(rng.uniform({6}), [](double u) { return u < 0.5 ? 0.0 : 1.0; });
    Tensor out = guidance_step(x0, y, mask, rng.next_uniform());
    for (std::size_t i = 0; i < 6; ++i) {
      if (mask[i] == 0.0) CHECK(out[i] == x0[i]);
    }
  }
}

TEST_CASE("masked residual is non-increasing in lambda") {
  SeededRng rng(22);
  Tensor x0 = rng.normal({8});
  Tensor y = rng.normal({8});
  Tensor mask = Tensor::row({1, 1, 1, 0, 0, 1, 0, 1});
  double prev = -1.0;
  for (double lambda : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
    Tensor out = guidance_step(x0, y, mask, lambda);
    double resid = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
      if (mask[i] != 0.0) resid += (out[i] - y[i]) * (out[i] - y[i]);
    }
    resid = std::sqrt(resid);
    if (prev >= 0.0) CHECK(resid <= prev);
    prev = resid;
  }
  CHECK(prev == 0.0);  // lambda = 1 zeroes the masked residual
}

TEST_CASE("guidance equals the finite-difference gradient of the masked loss") {
  SeededRng rng(23);
  Tensor x0 = rng.normal({5});
  Tensor y = rng.normal({5});
  Tensor mask = Tensor::row({1, 0, 1, 1, 0});
  const double lambda = 0.37;

  auto loss = [&](const Tensor& z) {
    double acc = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double r = mask[i] * (y[i] - z[i]);
      acc += r * r;
    }
    return acc;
  };

  const double eps = 1e-6;
  Tensor expected = x0;
  for (std::size_t i = 0; i < x0.size(); ++i) {
    Tensor up = x0, down = x0;
    up[i] += eps;
    down[i] -= eps;
    const double grad = (loss(up) - loss(down)) / (2.0 * eps);
    expected[i] = x0[i] - 0.5 * lambda * grad;
  }
  Tensor got = guidance_step(x0, y, mask, lambda);
  for (std::size_t i = 0; i < x0.size(); ++i) {
    CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-6));
  }
}

TEST_CASE("posterior estimate collapses onto the data endpoint as t -> 0") {
  // Monte-Carlo mean of |x0 - x0_hat| with the exact conditional field: the
  // estimate at t = 0.05 must be under 10% of the estimate at t = 0.8.
  const GaussianSpec spec = GaussianSpec::isotropic(Tensor::row({0.0, 0.0}), 1.0);
  const AnalyticGaussianField field(spec);

  auto mean_gap = [&](double t, std::uint64_t seed) {
    SeededRng rng(seed);
    const std::size_t n = 4000;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Tensor x0 = spec.sample(rng, 1).row_copy(0);
      Tensor x1 = rng.normal({2});
      Tensor xt = Tensor::zip(x0, x1, [t](double a, double b) { return (1 - t) * a + t * b; });
      Tensor x0_hat = posterior_mean(xt, field.velocity_at(xt, t), t);
      double norm2 = 0.0;
      for (std::size_t j = 0; j < 2; ++j) {
        norm2 += (x0[j] - x0_hat[j]) * (x0[j] - x0_hat[j]);
      }
      acc += std::sqrt(norm2);
    }
    return acc / static_cast<double>(n);
  };

  const double low = mean_gap(0.05, 31);
  const double high = mean_gap(0.8, 32);
  CHECK(low < 0.1 * high);
}
