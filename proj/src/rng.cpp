#include "flowlab/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <string_view>

namespace flowlab {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// 64-bit finalizer (murmur3 variant); bijective with strong avalanche.
std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 33;
  z *= 0xff51afd7ed558ccdULL;
  z ^= z >> 33;
  z *= 0xc4ceb9fe1a85ec53ULL;
  z ^= z >> 33;
  return z;
}

}  // namespace

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  base_ = mix64(mix64(seed_ + kGolden) ^ stream_id_);
}

SeededRng SeededRng::split(std::uint64_t key) const {
  return SeededRng(seed_, mix64(stream_id_ + kGolden) ^ mix64(key + 1));
}

std::uint64_t SeededRng::next_u64() {
  counter_ += 1;
  return mix64(base_ + counter_ * kGolden);
}

double SeededRng::next_uniform() {
  // 53 high bits, offset by half an ulp: strictly inside (0, 1).
  const std::uint64_t bits = next_u64() >> 11;
  return (static_cast<double>(bits) + 0.5) * (1.0 / 9007199254740992.0);
}

double SeededRng::next_normal() { return standard_normal_quantile(next_uniform()); }

Tensor SeededRng::normal(const Shape& shape) {
  Tensor out = Tensor::zeros(shape);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = next_normal();
  return out;
}

Tensor SeededRng::uniform(const Shape& shape) {
  Tensor out = Tensor::zeros(shape);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = next_uniform();
  return out;
}

Tensor sample_standard_normal(SeededRng& rng, const Shape& shape) {
  if (shape.empty()) {
    throw std::invalid_argument("sample_standard_normal: empty shape");
  }
  for (std::size_t e : shape) {
    if (e == 0) {
      throw std::invalid_argument("sample_standard_normal: extents must be positive");
    }
  }
  return rng.normal(shape);
}

SeededRng split_rng(const SeededRng& rng, std::uint64_t key) { return rng.split(key); }

double standard_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("standard_normal_quantile: p must be in (0,1)");
  }
  // Acklam's rational approximation with tail branches.
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double q = p - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace flowlab
