#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "flowlab/velocity_field.hpp"

namespace flowlab {

/// Training batch of endpoint pairs with per-row times.
struct FmBatch {
  Tensor x0;              // [n, d]
  Tensor x1;              // [n, d]
  std::vector<double> t;  // n entries in [0,1]
};

/// Fixed-architecture velocity model: [d+1, h, h, d] with tanh activations,
/// input (x, t). Parameters live in one flat buffer so the optimizer and the
/// finite-difference checks can address single weights.
class MlpVelocityField : public VelocityField {
 public:
  MlpVelocityField(std::size_t dim, std::size_t hidden);

  static MlpVelocityField glorot_init(std::size_t dim, std::size_t hidden, SeededRng& rng);

  std::size_t dim() const override { return dim_; }
  std::size_t hidden() const { return hidden_; }
  Tensor velocity_at(const Tensor& x, double t) const override;

  std::size_t parameter_count() const { return params_.size(); }
  double parameter(std::size_t i) const { return params_[i]; }
  void set_parameter(std::size_t i, double v) { params_[i] = v; }
  std::span<const double> parameters() const { return params_; }
  std::span<double> parameters() { return params_; }

  /// Mean squared velocity-matching error over the batch, and its gradient
  /// with respect to every parameter (reverse-mode, batched).
  double loss_and_gradient(const FmBatch& batch, std::span<double> grad,
                           const NoiseSchedule& schedule = {}) const;

 private:
  std::size_t dim_;
  std::size_t hidden_;
  std::vector<double> params_;
};

/// Velocity-matching objective mean_i |v(x_t, t_i) - (x1_i - x0_i)|^2 with
/// x_t on the linear path; works for any field.
double fm_loss(const VelocityField& field, const FmBatch& batch,
               const NoiseSchedule& schedule = {});

struct TrainConfig {
  std::size_t steps = 5000;
  std::size_t batch = 256;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  std::size_t hidden = 64;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
};

/// Adam-optimized velocity model trained on (x0, x1, t) triples with x0 from
/// `sampler`, x1 standard normal and t uniform. Fully determined by
/// cfg.seed; aborts with the step index if the loss turns non-finite.
MlpVelocityField train_mlp_field(const DataSampler& sampler, std::size_t dim,
                                 const TrainConfig& cfg, const NoiseSchedule& schedule = {});

// Binary model format: magic "FLF1", version u32 LE, layer count u32 LE,
// per-layer (rows u32, cols u32), then per layer the row-major weight matrix
// followed by the bias, all little-endian f64.
void save_mlp_field(const MlpVelocityField& field, const std::filesystem::path& path);
MlpVelocityField load_mlp_field(const std::filesystem::path& path);

}  // namespace flowlab
