#include "cfsampler/gof.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "cfsampler/errors.hpp"
#include "cfsampler/simd/kernels.hpp"

namespace cfsampler {
namespace {

constexpr double kMinExpected = 5.0;

GofResult finish(const std::vector<double>& observed, const std::vector<double>& expected,
                 std::size_t cells, std::size_t dof) {
  GofResult out;
  out.cells = cells;
  out.dof = dof;
  out.statistic = simd::chi_square_terms(observed, expected);
  out.p_value = chi_square_upper_tail(out.statistic, static_cast<double>(dof));
  return out;
}

}  // namespace

double chi_square_upper_tail(double statistic, double dof) {
  if (!(dof > 0.0)) throw std::invalid_argument("chi-square: dof must be positive");
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

GofResult gof_chi_square(std::span<const std::int64_t> samples,
                         const std::function<double(std::int64_t)>& pf) {
  if (samples.size() < kMinGofSamples) {
    throw InsufficientData("chi-square: need at least " + std::to_string(kMinGofSamples) +
                           " samples (got " + std::to_string(samples.size()) + ")");
  }
  const double n = static_cast<double>(samples.size());
  std::map<std::int64_t, double> counts;
  for (std::int64_t s : samples) counts[s] += 1.0;

  // Widen the sample range while the neighbouring expected counts are not
  // negligible.
  std::int64_t lo = counts.begin()->first;
  std::int64_t hi = counts.rbegin()->first;
  constexpr int kMaxWiden = 10000;
  for (int i = 0; i < kMaxWiden && pf(lo - 1) * n > 1e-6; ++i) --lo;
  for (int i = 0; i < kMaxWiden && pf(hi + 1) * n > 1e-6; ++i) ++hi;

  std::vector<double> observed;
  std::vector<double> expected;
  double cell_obs = 0.0;
  double cell_exp = 0.0;
  double scanned = 0.0;
  for (std::int64_t x = lo; x <= hi; ++x) {
    const double p = pf(x);
    scanned += p;
    cell_exp += n * p;
    if (auto it = counts.find(x); it != counts.end()) cell_obs += it->second;
    if (cell_exp >= kMinExpected) {
      observed.push_back(cell_obs);
      expected.push_back(cell_exp);
      cell_obs = cell_exp = 0.0;
    }
  }
  cell_exp += n * std::max(0.0, 1.0 - scanned);
  if (!observed.empty()) {
    observed.back() += cell_obs;
    expected.back() += cell_exp;
  } else {
    observed.push_back(cell_obs);
    expected.push_back(cell_exp);
  }
  if (observed.size() < 2) {
    throw InsufficientData("chi-square: fewer than two cells after pooling");
  }
  return finish(observed, expected, observed.size(), observed.size() - 1);
}

GofResult gof_chi_square(std::span<const std::int64_t> samples, const PfEvaluator& pf) {
  return gof_chi_square(samples, [&pf](std::int64_t x) { return pf(x); });
}

GofResult two_sample_chi_square(std::span<const std::int64_t> a,
                                std::span<const std::int64_t> b) {
  if (a.size() < kMinGofSamples || b.size() < kMinGofSamples) {
    throw InsufficientData("two-sample chi-square: need at least " +
                           std::to_string(kMinGofSamples) + " samples in each");
  }
  std::map<std::int64_t, std::pair<double, double>> counts;
  for (std::int64_t s : a) counts[s].first += 1.0;
  for (std::int64_t s : b) counts[s].second += 1.0;
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double share_a = na / (na + nb);
  const double share_b = nb / (na + nb);

  std::vector<std::pair<double, double>> cells;
  std::pair<double, double> cell{0.0, 0.0};
  for (const auto& [value, pair] : counts) {
    cell.first += pair.first;
    cell.second += pair.second;
    const double total = cell.first + cell.second;
    if (total * std::min(share_a, share_b) >= kMinExpected) {
      cells.push_back(cell);
      cell = {0.0, 0.0};
    }
  }
  if (!cells.empty()) {
    cells.back().first += cell.first;
    cells.back().second += cell.second;
  } else {
    cells.push_back(cell);
  }
  if (cells.size() < 2) {
    throw InsufficientData("two-sample chi-square: fewer than two cells after pooling");
  }
  std::vector<double> observed;
  std::vector<double> expected;
  for (const auto& [oa, ob] : cells) {
    const double total = oa + ob;
    observed.push_back(oa);
    expected.push_back(total * share_a);
    observed.push_back(ob);
    expected.push_back(total * share_b);
  }
  return finish(observed, expected, cells.size(), cells.size() - 1);
}

}  // namespace cfsampler
