#include <doctest.h>

#include <cmath>

#include "flowlab/mlp_field.hpp"
#include "flowlab/velocity_field.hpp"

using namespace flowlab;

namespace {

GaussianSpec standard_normal(std::size_t d) {
  return GaussianSpec::isotropic(Tensor::zeros({d}), 1.0);
}

}  // namespace

TEST_CASE("sigma schedule") {
  NoiseSchedule linear;
  CHECK(sigma(linear, 0.0) == 0.0);
  CHECK(sigma(linear, 1.0) == 1.0);
  CHECK(sigma(linear, 0.6) == 0.6);
  CHECK_THROWS_AS(sigma(linear, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(sigma(linear, 1.1), std::invalid_argument);

  NoiseSchedule shifted{3.0};
  CHECK(sigma(shifted, 0.0) == 0.0);
  CHECK(sigma(shifted, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  double prev = 0.0;
  for (double t = 0.05; t < 1.0; t += 0.05) {
    const double s = sigma(shifted, t);
    CHECK(s > prev);
    prev = s;
  }
}

TEST_CASE("gaussian spec validation") {
  CHECK_THROWS_AS(GaussianSpec(Tensor::row({0.0}), Tensor({1, 1}, {0.0})),
                  std::invalid_argument);
  CHECK_THROWS_AS(GaussianSpec(Tensor::row({0.0, 0.0}), Tensor({2, 2}, {1, 0.5, 0.2, 1})),
                  std::invalid_argument);
  CHECK_THROWS_AS(GaussianSpec(Tensor::row({0.0, 0.0}), Tensor({2, 2}, {1, 2, 2, 1})),
                  std::invalid_argument);  // eigenvalue -1
}

TEST_CASE("standard normal field at the symmetric midpoint") {
  const AnalyticGaussianField field(standard_normal(3));
  Tensor v = field.velocity_at(Tensor::row({0.7, -1.3, 2.0}), 0.5);
  CHECK(v.max_abs() < 1e-12);
}

TEST_CASE("standard normal field closed form: v = (2t-1) x / ((1-t)^2 + t^2)") {
  const AnalyticGaussianField field(standard_normal(1));
  const double t = 0.75;
  Tensor v = field.velocity_at(Tensor::row({1.0}), t);
  const double expected = (2 * t - 1) / ((1 - t) * (1 - t) + t * t);
  CHECK(v[0] == doctest::Approx(expected).epsilon(1e-12));
  CHECK(v[0] == doctest::Approx(0.8).epsilon(1e-12));

  // endpoint limits of the same expression
  CHECK(field.velocity_at(Tensor::row({1.0}), 0.0)[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(field.velocity_at(Tensor::row({1.0}), 1.0)[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gaussian field matches the monte-carlo oracle") {
  SeededRng rng(301);
  const GaussianSpec spec(Tensor::row({3.0}), Tensor({1, 1}, {1.0}));
  const AnalyticGaussianField field(spec);
  const double t = 0.3;
  const Tensor x = Tensor::row({3.0 * (1.0 - t)});  // the marginal mean

  SeededRng oracle_rng = rng.split(1);
  const auto est = mc_oracle_velocity(sampler_of(spec), x, t, 100000, 0.2, oracle_rng);
  const Tensor v = field.velocity_at(x, t);
  CHECK(std::abs(v[0] - est.value[0]) < 3.0 * est.stderr_[0]);
}

TEST_CASE("oracle sanity at symmetric points") {
  const GaussianSpec spec = standard_normal(1);
  SeededRng rng(302);
  const auto origin = mc_oracle_velocity(sampler_of(spec), Tensor::row({0.0}), 0.5, 100000,
                                         0.2, rng);
  CHECK(std::abs(origin.value[0]) < 3.0 * origin.stderr_[0]);

  SeededRng rng2(303);
  const auto off = mc_oracle_velocity(sampler_of(spec), Tensor::row({1.0}), 0.75, 100000,
                                      0.05, rng2);
  CHECK(std::abs(off.value[0] - 0.8) < 3.0 * off.stderr_[0]);
}

TEST_CASE("oracle signals insufficient data") {
  const GaussianSpec spec = standard_normal(1);
  SeededRng rng(304);
  // A vanishing bandwidth leaves almost no effective samples near x.
  CHECK_THROWS_AS(
      mc_oracle_velocity(sampler_of(spec), Tensor::row({0.0}), 0.5, 1000, 1e-8, rng),
      std::runtime_error);
  CHECK_THROWS_AS(mc_oracle_velocity(sampler_of(spec), Tensor::row({0.0}), 0.5, 10, 0.2, rng),
                  std::invalid_argument);
}

TEST_CASE("single-component mixture reduces to the gaussian field") {
  const GaussianSpec gauss(Tensor::row({1.0, -2.0}), Tensor({2, 2}, {0.5, 0.1, 0.1, 0.8}));
  const AnalyticGaussianField direct(gauss);
  const AnalyticGmmField mixture(GmmSpec({1.0}, {gauss}));
  SeededRng rng(305);
  for (int rep = 0; rep < 20; ++rep) {
    Tensor x = rng.normal({2});
    const double t = rng.next_uniform();
    Tensor a = direct.velocity_at(x, t);
    Tensor b = mixture.velocity_at(x, t);
    CHECK((a - b).max_abs() <= 1e-12);
  }
}

TEST_CASE("symmetric two-mode mixture has zero velocity along the mode axis at 0") {
  const GmmSpec gmm = GmmSpec::two_modes(Tensor::row({2.0, 0.0}), 0.3);
  const AnalyticGmmField field(gmm);
  for (double t : {0.2, 0.5, 0.8}) {
    Tensor v = field.velocity_at(Tensor::row({0.0, 0.0}), t);
    CHECK(std::abs(v[0]) < 1e-12);
  }
}

TEST_CASE("two-mode mixture matches the oracle at a mode") {
  const GmmSpec gmm = GmmSpec::two_modes(Tensor::row({2.0, 0.0}), 0.3);
  const AnalyticGmmField field(gmm);
  const Tensor x = Tensor::row({2.0, 0.0});
  const double t = 0.5;
  SeededRng rng(306);
  const auto est = mc_oracle_velocity(sampler_of(gmm), x, t, 200000, 0.05, rng);
  const Tensor v = field.velocity_at(x, t);
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(std::abs(v[j] - est.value[j]) < 3.0 * est.stderr_[j]);
  }
}

TEST_CASE("velocity dispatch handles batches and validates shapes") {
  const AnalyticGaussianField field(standard_normal(2));
  SeededRng rng(307);
  Tensor batch = rng.normal({5, 2});
  Tensor out = field.velocity(batch, 0.3);
  CHECK(out.shape() == batch.shape());
  for (std::size_t i = 0; i < 5; ++i) {
    Tensor row = field.velocity_at(batch.row_copy(i), 0.3);
    CHECK((out.row_copy(i) - row).max_abs() == 0.0);
  }
  CHECK_THROWS_AS(field.velocity(Tensor::row({1.0}), 0.3), std::invalid_argument);

  // dispatch equals direct call for each variant
  const FunctionField fn = zero_field(2);
  CHECK(fn.velocity(Tensor::row({1.0, 2.0}), 0.1).max_abs() == 0.0);
}

TEST_CASE("optimal field scores lower fm loss than a perturbed copy") {
  const GaussianSpec spec = standard_normal(2);
  const AnalyticGaussianField optimal(spec);
  const FunctionField perturbed(2, [&](const Tensor& x, double t) {
    Tensor v = optimal.velocity_at(x, t);
    return Tensor::zip(v, x, [](double vi, double xi) { return vi + 0.1 * xi; });
  });

  SeededRng rng(308);
  FmBatch batch;
  batch.x0 = spec.sample(rng, 4000);
  batch.x1 = rng.normal({4000, 2});
  batch.t.resize(4000);
  for (double& t : batch.t) t = rng.next_uniform();

  CHECK(fm_loss(optimal, batch) < fm_loss(perturbed, batch));
}

TEST_CASE("mixture validation rejects bad weights") {
  const GaussianSpec comp = standard_normal(1);
  CHECK_THROWS_AS(GmmSpec({0.6, 0.3}, {comp, comp}), std::invalid_argument);
  CHECK_THROWS_AS(GmmSpec({1.5, -0.5}, {comp, comp}), std::invalid_argument);
  CHECK_THROWS_AS(GmmSpec({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(GmmSpec({0.5, 0.5}, {comp, standard_normal(2)}), std::invalid_argument);
}
