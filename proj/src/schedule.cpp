#include "flowlab/schedule.hpp"

#include <stdexcept>

namespace flowlab {

double sigma(const NoiseSchedule& schedule, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("sigma: t must be in [0,1]");
  }
  if (!(schedule.shift >= 1.0)) {
    throw std::invalid_argument("sigma: shift must be >= 1");
  }
  if (schedule.shift == 1.0) return t;
  return schedule.shift * t / (1.0 + (schedule.shift - 1.0) * t);
}

}  // namespace flowlab
