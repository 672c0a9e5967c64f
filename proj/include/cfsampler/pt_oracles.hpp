#pragma once

// Independent routes to Poisson-Tweedie probabilities and variates, used to
// cross-check the universal sampler.

#include <cstdint>
#include <vector>

#include "cfsampler/sampler.hpp"

namespace cfsampler {

/// Compound-Poisson generator for a < 0: N ~ Poisson(-(b/a)(1-c)^a), then a
/// Negative Binomial with shape N*(-a) and success probability 1 - c (the sum
/// of N i.i.d. NB(-a, 1-c) variates).
std::vector<std::int64_t> sample_pt_compound(double a, double b, double c, Rng& rng,
                                             std::size_t n);

/// max over x in [x_lo, x_hi] of
///   | p_X(x) - exp((b/a)(1-c)^a) c^x p_Y(x) |
/// with X Poisson-Tweedie(a, b, c) and Y Discrete Stable(a, b), both p.f.s
/// obtained by independent inversion of their characteristic functions.
double tilted_stable_check(double a, double b, double c, std::int64_t x_lo,
                           std::int64_t x_hi, double tol = 1e-12);

}  // namespace cfsampler
