#include "cfsampler/pf_evaluator.hpp"

#include <algorithm>
#include <mutex>

namespace cfsampler {

std::string_view strategy_name(PfStrategy strategy) {
  return strategy == PfStrategy::ClosedForm ? "closed-form" : "inversion";
}

PfEvaluator::PfEvaluator(Distribution dist, double tol)
    : dist_(std::move(dist)),
      strategy_(dist_.has_closed_pf() ? PfStrategy::ClosedForm : PfStrategy::Inversion),
      tol_(tol),
      state_(std::make_unique<State>()) {}

double PfEvaluator::operator()(std::int64_t x) const {
  {
    std::shared_lock lock(state_->mutex);
    if (auto it = state_->cache.find(x); it != state_->cache.end()) return it->second;
  }
  const double value = compute(x);
  std::unique_lock lock(state_->mutex);
  return state_->cache.try_emplace(x, value).first->second;
}

std::size_t PfEvaluator::cache_size() const {
  std::shared_lock lock(state_->mutex);
  return state_->cache.size();
}

double PfEvaluator::compute(std::int64_t x) const {
  if (auto lo = dist_.support_min(); lo && x < *lo) return 0.0;
  if (auto hi = dist_.support_max(); hi && x > *hi) return 0.0;
  state_->evaluations.fetch_add(1);
  if (strategy_ == PfStrategy::ClosedForm) {
    return std::clamp(*dist_.pf_closed(x), 0.0, 1.0);
  }
  return pf_inversion(dist_, x, tol_);
}

}  // namespace cfsampler
