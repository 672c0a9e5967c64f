#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "cfsampler/envelope.hpp"
#include "cfsampler/pf_evaluator.hpp"

namespace cfsampler {

/// Seedable uniform source. std::mt19937_64 has a standard-mandated output
/// sequence, so streams are reproducible across platforms. Also usable as a
/// UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random mantissa bits.
  double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  result_type operator()() { return engine_(); }
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }

 private:
  std::mt19937_64 engine_;
};

inline constexpr std::uint64_t kMaxConsecutiveRejections = 1'000'000;

/// Iteration triples (U1, U2, U3) drawn per refill in sample_n.
inline constexpr std::size_t kSampleBlock = 64;

struct SampleReport {
  std::vector<std::int64_t> samples;
  std::uint64_t iterations = 0;
  std::uint64_t guard_rejections = 0;

  double acceptance_rate() const {
    return iterations ? static_cast<double>(samples.size()) / static_cast<double>(iterations)
                      : 0.0;
  }
};

/// Round(m + sigma * V) for V = u2 (u1 <= alpha) or 1/u2 (u1 > alpha);
/// empty when the proposal falls in the guard set.
std::optional<std::int64_t> propose_from_uniforms(const Envelope& env, double u1,
                                                  double u2);

/// Draws U1 ~ U[0,1), U2 ~ U[-1,1) and proposes.
std::optional<std::int64_t> propose(const Envelope& env, Rng& rng);

/// One exact draw from p_X: propose, draw U3, accept iff U3 h(X) <= p_X(X).
/// Throws IterationLimitError after kMaxConsecutiveRejections rejections.
std::int64_t sample_one(const Envelope& env, const PfEvaluator& pf, Rng& rng,
                        SampleReport* stats = nullptr);

/// n draws. Uniforms are consumed in blocks of kSampleBlock iterations
/// (U1, U2, U3 per iteration, in order); the unused tail of the final block
/// is discarded.
SampleReport sample_n(const Envelope& env, const PfEvaluator& pf, Rng& rng,
                      std::size_t n);

/// Distribution + envelope + p.f. evaluator, ready to draw.
class UniversalSampler {
 public:
  explicit UniversalSampler(Distribution dist, AnchorRule rule = AnchorRule::star(),
                            double tol = kDefaultPfTolerance);

  const Envelope& envelope() const { return env_; }
  const PfEvaluator& pf() const { return pf_; }
  const Distribution& distribution() const { return pf_.distribution(); }

  SampleReport sample(Rng& rng, std::size_t n) const {
    return sample_n(env_, pf_, rng, n);
  }

 private:
  PfEvaluator pf_;
  Envelope env_;
};

}  // namespace cfsampler
