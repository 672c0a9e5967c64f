#pragma once

#include <cmath>
#include <cstdint>

namespace cfsampler {

// Round to nearest, ties away from zero. Written with trunc and an exact
// subtraction so the SIMD kernels can reproduce it bit for bit; agrees with
// std::round for every finite double.
inline double round_half_away(double y) {
  const double t = std::trunc(y);
  const double r = y - t;
  return std::fabs(r) >= 0.5 ? t + std::copysign(1.0, y) : t;
}

inline std::int64_t round_to_int(double y) {
  return static_cast<std::int64_t>(round_half_away(y));
}

}  // namespace cfsampler
