#pragma once

#include <complex>
#include <vector>

#include "flowlab/tensor.hpp"

namespace flowlab {

enum class FilterMode { low, high };

/// Forward or inverse discrete Fourier transform of arbitrary length
/// (radix-2 in place, Bluestein for other sizes). Inverse includes the 1/n
/// normalization.
std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& input,
                                      bool inverse);

/// Ideal frequency-domain filter for 1-D or 2-D signals.
///
/// Bin k of an n-point axis carries normalized frequency min(k, n-k)/n in
/// [0, 1/2]; for 2-D the bin frequency is the Euclidean norm of the per-axis
/// values. `low` keeps bins with frequency <= cutoff_fraction, `high` keeps
/// the complement, so low(s) + high(s) partitions the spectrum exactly.
/// All-pass and all-stop masks short-circuit to a copy / zeros, keeping the
/// degenerate cases bit-exact.
Tensor frequency_filter(const Tensor& signal, double cutoff_fraction, FilterMode mode);

}  // namespace flowlab
