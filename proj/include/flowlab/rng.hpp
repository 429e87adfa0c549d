#pragma once

#include <cstdint>

#include "flowlab/tensor.hpp"

namespace flowlab {

/// Counter-based pseudorandom stream identified by (seed, stream_id).
///
/// Draws are a pure function of (seed, stream_id, counter), so two instances
/// built from the same pair replay the same sequence regardless of process,
/// thread, or call site. split() derives an independent child stream without
/// touching the parent, which is the only sanctioned way to parallelize.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Child stream keyed by `key`; parent state is unchanged.
  SeededRng split(std::uint64_t key) const;

  std::uint64_t next_u64();
  /// Uniform draw strictly inside (0, 1).
  double next_uniform();
  /// Standard normal draw via inverse-CDF transform.
  double next_normal();

  Tensor normal(const Shape& shape);
  Tensor uniform(const Shape& shape);

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  std::uint64_t base_ = 0;
  std::uint64_t counter_ = 0;
};

/// Draw i.i.d. standard normal values of the given shape, advancing `rng`.
Tensor sample_standard_normal(SeededRng& rng, const Shape& shape);

/// Child stream keyed by `key`; equivalent to rng.split(key).
SeededRng split_rng(const SeededRng& rng, std::uint64_t key);

/// Quantile function of the standard normal law (rational approximation,
/// relative error below 1.2e-9). Requires p in (0, 1).
double standard_normal_quantile(double p);

/// 64-bit FNV-1a, used to derive stable stream ids from names.
std::uint64_t fnv1a64(std::string_view text);

}  // namespace flowlab
