#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <unordered_map>

#include "cfsampler/distribution.hpp"
#include "cfsampler/quadrature.hpp"

namespace cfsampler {

enum class PfStrategy { ClosedForm, Inversion };

std::string_view strategy_name(PfStrategy strategy);

/// Memoised x -> p_X(x). Uses the closed-form p.f. when the distribution has
/// one and characteristic-function inversion otherwise. Lookups are
/// thread-safe; each key is computed deterministically, so a racing
/// duplicate computation writes the same value.
class PfEvaluator {
 public:
  explicit PfEvaluator(Distribution dist, double tol = kDefaultPfTolerance);

  double operator()(std::int64_t x) const;

  const Distribution& distribution() const { return dist_; }
  PfStrategy strategy() const { return strategy_; }
  double tolerance() const { return tol_; }
  /// Number of underlying (uncached) evaluations performed so far.
  std::size_t evaluations() const { return state_->evaluations.load(); }
  std::size_t cache_size() const;

 private:
  double compute(std::int64_t x) const;

  struct State {
    std::shared_mutex mutex;
    std::unordered_map<std::int64_t, double> cache;
    std::atomic<std::size_t> evaluations{0};
  };

  Distribution dist_;
  PfStrategy strategy_;
  double tol_;
  std::unique_ptr<State> state_;
};

inline PfEvaluator pf_evaluator(Distribution dist, double tol = kDefaultPfTolerance) {
  return PfEvaluator(std::move(dist), tol);
}

}  // namespace cfsampler
