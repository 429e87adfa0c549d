#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "flowlab/mlp_field.hpp"

using namespace flowlab;

namespace {

FmBatch random_batch(SeededRng& rng, const DataSampler& sampler, std::size_t n, std::size_t d) {
  FmBatch batch;
  batch.x0 = sampler(rng, n);
  batch.x1 = rng.normal({n, d});
  batch.t.resize(n);
  for (double& t : batch.t) t = rng.next_uniform();
  return batch;
}

}  // namespace

TEST_CASE("fm loss of a perfect predictor is zero") {
  // single crafted pair; the field is hard-wired to its target velocity
  FmBatch batch{Tensor({1, 1}, {0.5}), Tensor({1, 1}, {1.7}), {0.3}};
  const FunctionField perfect(1, [](const Tensor&, double) { return Tensor::row({1.2}); });
  CHECK(fm_loss(perfect, batch) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("fm loss of the zero field on a unit pair") {
  FmBatch batch{Tensor({1, 1}, {0.0}), Tensor({1, 1}, {2.0}), {0.41}};
  const FunctionField zero = zero_field(1);
  CHECK(fm_loss(zero, batch) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("analytic gradient matches central finite differences") {
  const GaussianSpec spec = GaussianSpec::isotropic(Tensor::zeros({2}), 1.0);
  SeededRng rng(401);
  MlpVelocityField field = MlpVelocityField::glorot_init(2, 16, rng);
  FmBatch batch = random_batch(rng, sampler_of(spec), 32, 2);

  std::vector<double> grad(field.parameter_count());
  field.loss_and_gradient(batch, grad);

  SeededRng pick(402);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t i =
        static_cast<std::size_t>(pick.next_u64() % field.parameter_count());
    const double orig = field.parameter(i);
    const double eps = 1e-6 * std::max(1.0, std::abs(orig));
    std::vector<double> scratch(field.parameter_count());

    field.set_parameter(i, orig + eps);
    const double up = field.loss_and_gradient(batch, scratch);
    field.set_parameter(i, orig - eps);
    const double down = field.loss_and_gradient(batch, scratch);
    field.set_parameter(i, orig);

    const double fd = (up - down) / (2.0 * eps);
    const double scale = std::max({std::abs(fd), std::abs(grad[i]), 1e-8});
    CHECK(std::abs(fd - grad[i]) / scale < 1e-4);
  }
}

TEST_CASE("zero learning rate leaves the initialization untouched") {
  const GaussianSpec spec = GaussianSpec::isotropic(Tensor::zeros({2}), 1.0);
  TrainConfig cfg;
  cfg.steps = 1;
  cfg.batch = 8;
  cfg.learning_rate = 0.0;
  cfg.seed = 7;
  cfg.hidden = 8;
  MlpVelocityField trained = train_mlp_field(sampler_of(spec), 2, cfg);

  SeededRng root(cfg.seed, fnv1a64("flowlab.train"));
  SeededRng init_rng = root.split(0);
  MlpVelocityField init = MlpVelocityField::glorot_init(2, cfg.hidden, init_rng);
  for (std::size_t i = 0; i < init.parameter_count(); ++i) {
    CHECK(trained.parameter(i) == init.parameter(i));
  }
}

TEST_CASE("training reduces the loss and is seed-deterministic") {
  const GaussianSpec spec = GaussianSpec::isotropic(Tensor::zeros({2}), 1.0);
  TrainConfig cfg;
  cfg.steps = 300;
  cfg.batch = 64;
  cfg.seed = 11;
  cfg.hidden = 16;

  SeededRng eval_rng(999);
  FmBatch eval = random_batch(eval_rng, sampler_of(spec), 2000, 2);

  // loss at a fresh initialization drawn the same way training does
  SeededRng root(cfg.seed, fnv1a64("flowlab.train"));
  SeededRng init_stream = root.split(0);
  MlpVelocityField init = MlpVelocityField::glorot_init(2, cfg.hidden, init_stream);
  const double loss_init = fm_loss(init, eval);

  MlpVelocityField a = train_mlp_field(sampler_of(spec), 2, cfg);
  MlpVelocityField b = train_mlp_field(sampler_of(spec), 2, cfg);
  const double loss_trained = fm_loss(a, eval);
  CHECK(loss_trained < loss_init);
  for (std::size_t i = 0; i < a.parameter_count(); ++i) {
    CHECK(a.parameter(i) == b.parameter(i));
  }
}

TEST_CASE("model file round-trips and carries the documented header") {
  SeededRng rng(404);
  MlpVelocityField field = MlpVelocityField::glorot_init(3, 8, rng);
  const auto path = std::filesystem::temp_directory_path() / "flowlab_mlp_test.flf";
  save_mlp_field(field, path);

  MlpVelocityField loaded = load_mlp_field(path);
  CHECK(loaded.dim() == 3);
  CHECK(loaded.hidden() == 8);
  for (std::size_t i = 0; i < field.parameter_count(); ++i) {
    CHECK(loaded.parameter(i) == field.parameter(i));
  }

  std::ifstream in(path, std::ios::binary);
  unsigned char header[12 + 24];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  CHECK(header[0] == 'F');
  CHECK(header[1] == 'L');
  CHECK(header[2] == 'F');
  CHECK(header[3] == '1');
  CHECK(header[4] == 1);   // version 1, little-endian
  CHECK(header[5] == 0);
  CHECK(header[8] == 3);   // layer count
  CHECK(header[12] == 8);  // layer 0 rows = hidden
  CHECK(header[16] == 4);  // layer 0 cols = dim + 1
  std::filesystem::remove(path);
}
