#include "flowlab/fourier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace flowlab {

namespace {

using cplx = std::complex<double>;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey; n must be a power of two.
void fft_pow2(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
    const cplx wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        cplx u = a[i + k];
        cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse) {
    for (cplx& x : a) x /= static_cast<double>(n);
  }
}

// Bluestein's algorithm: DFT of arbitrary length via a power-of-two
// convolution. Chirp phases use k^2 mod 2n to keep the angle argument small.
std::vector<cplx> dft_bluestein(const std::vector<cplx>& input, bool inverse) {
  const std::size_t n = input.size();
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<cplx> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t k2 = (k * k) % (2 * n);
    const double ang = sign * std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
    chirp[k] = cplx(std::cos(ang), std::sin(ang));
  }

  std::size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;
  std::vector<cplx> a(m, cplx(0.0, 0.0)), b(m, cplx(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) a[k] = input[k] * chirp[k];
  for (std::size_t k = 0; k < n; ++k) {
    b[k] = std::conj(chirp[k]);
    if (k != 0) b[m - k] = std::conj(chirp[k]);
  }
  fft_pow2(a, false);
  fft_pow2(b, false);
  for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
  fft_pow2(a, true);

  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp[k];
  if (inverse) {
    for (cplx& x : out) x /= static_cast<double>(n);
  }
  return out;
}

double bin_frequency(std::size_t k, std::size_t n) {
  const std::size_t folded = std::min(k, n - k);
  return static_cast<double>(folded) / static_cast<double>(n);
}

}  // namespace

std::vector<cplx> dft(const std::vector<cplx>& input, bool inverse) {
  if (input.empty()) return {};
  if (input.size() == 1) return input;
  if (is_power_of_two(input.size())) {
    std::vector<cplx> a = input;
    fft_pow2(a, inverse);
    return a;
  }
  return dft_bluestein(input, inverse);
}

Tensor frequency_filter(const Tensor& signal, double cutoff_fraction, FilterMode mode) {
  if (!(cutoff_fraction > 0.0 && cutoff_fraction < 1.0)) {
    throw std::invalid_argument("frequency_filter: cutoff_fraction must be in (0,1)");
  }
  if (signal.rank() != 1 && signal.rank() != 2) {
    throw std::invalid_argument("frequency_filter: signal must be 1-D or 2-D");
  }
  const bool two_d = signal.rank() == 2;
  const std::size_t n_rows = two_d ? signal.rows() : 1;
  const std::size_t n_cols = two_d ? signal.cols() : signal.size();
  if (signal.size() == 0) return signal;

  // Pass mask over bins; degenerate masks skip the transform entirely.
  std::vector<bool> keep(signal.size());
  bool any_kept = false, any_dropped = false;
  for (std::size_t r = 0; r < n_rows; ++r) {
    for (std::size_t c = 0; c < n_cols; ++c) {
      double f = bin_frequency(c, n_cols);
      if (two_d) {
        const double fr = bin_frequency(r, n_rows);
        f = std::sqrt(f * f + fr * fr);
      }
      const bool in_low = f <= cutoff_fraction;
      const bool kept = (mode == FilterMode::low) ? in_low : !in_low;
      keep[r * n_cols + c] = kept;
      any_kept |= kept;
      any_dropped |= !kept;
    }
  }
  if (!any_dropped) return signal;
  if (!any_kept) return Tensor::zeros(signal.shape());

  std::vector<cplx> spectrum(signal.size());
  for (std::size_t i = 0; i < signal.size(); ++i) spectrum[i] = cplx(signal[i], 0.0);

  auto transform_rows = [&](std::vector<cplx>& data, bool inverse) {
    for (std::size_t r = 0; r < n_rows; ++r) {
      std::vector<cplx> row(data.begin() + static_cast<std::ptrdiff_t>(r * n_cols),
                            data.begin() + static_cast<std::ptrdiff_t>((r + 1) * n_cols));
      row = dft(row, inverse);
      std::copy(row.begin(), row.end(), data.begin() + static_cast<std::ptrdiff_t>(r * n_cols));
    }
  };
  auto transform_cols = [&](std::vector<cplx>& data, bool inverse) {
    std::vector<cplx> col(n_rows);
    for (std::size_t c = 0; c < n_cols; ++c) {
      for (std::size_t r = 0; r < n_rows; ++r) col[r] = data[r * n_cols + c];
      col = dft(col, inverse);
      for (std::size_t r = 0; r < n_rows; ++r) data[r * n_cols + c] = col[r];
    }
  };

  transform_rows(spectrum, false);
  if (two_d) transform_cols(spectrum, false);
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    if (!keep[i]) spectrum[i] = cplx(0.0, 0.0);
  }
  if (two_d) transform_cols(spectrum, true);
  transform_rows(spectrum, true);

  std::vector<double> out(signal.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = spectrum[i].real();
  return Tensor(signal.shape(), std::move(out));
}

}  // namespace flowlab
