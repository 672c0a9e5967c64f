#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "cfsampler/pf_evaluator.hpp"

namespace cfsampler {

struct GofResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
  std::size_t cells = 0;
};

inline constexpr std::size_t kMinGofSamples = 1000;

/// P(chi2_dof > statistic).
double chi_square_upper_tail(double statistic, double dof);

/// Pearson chi-square of integer samples against a probability function.
/// Consecutive values are pooled left to right until each cell expects at
/// least 5; the probability outside the scanned range goes to the last cell.
GofResult gof_chi_square(std::span<const std::int64_t> samples,
                         const std::function<double(std::int64_t)>& pf);

GofResult gof_chi_square(std::span<const std::int64_t> samples, const PfEvaluator& pf);

/// Homogeneity test between two samples (2 x cells contingency table);
/// cells pooled identically for both samples until each expects >= 5.
GofResult two_sample_chi_square(std::span<const std::int64_t> a,
                                std::span<const std::int64_t> b);

}  // namespace cfsampler
