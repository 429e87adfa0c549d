#pragma once

namespace flowlab {

/// Interpolation schedule sigma_t on [0,1] with sigma_0 = 0 and sigma_1 = 1.
///
/// shift = 1 is the plain linear path sigma_t = t; shift > 1 applies the
/// time-warp sigma_t = shift*t / (1 + (shift-1)*t), which stays monotone and
/// keeps both endpoints fixed.
struct NoiseSchedule {
  double shift = 1.0;
};

double sigma(const NoiseSchedule& schedule, double t);

}  // namespace flowlab
