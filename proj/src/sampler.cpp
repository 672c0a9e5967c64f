#include "cfsampler/sampler.hpp"

#include <array>
#include <cmath>
#include <span>
#include <string>

#include "cfsampler/errors.hpp"
#include "cfsampler/simd/kernels.hpp"

namespace cfsampler {
namespace {

simd::ProposalShape proposal_shape(const Envelope& env) {
  return {static_cast<double>(env.m), env.sigma, env.alpha};
}

simd::HatShape hat_shape(const Envelope& env) {
  return {static_cast<double>(env.m), env.sigma, env.c, env.k};
}

void run(const Envelope& env, const PfEvaluator& pf, Rng& rng, std::size_t n,
         std::size_t block, SampleReport& report) {
  std::array<double, kSampleBlock> u1{}, u2{}, u3{}, x{}, h{};
  const simd::Isa isa = simd::active_isa();
  const auto shape = proposal_shape(env);
  const auto hshape = hat_shape(env);
  const std::size_t target = report.samples.size() + n;
  std::uint64_t rejections = 0;

  while (report.samples.size() < target) {
    for (std::size_t i = 0; i < block; ++i) {
      u1[i] = rng.next_unit();
      u2[i] = 2.0 * rng.next_unit() - 1.0;
      u3[i] = rng.next_unit();
    }
    const std::span<const double> su1(u1.data(), block), su2(u2.data(), block);
    simd::propose(isa, shape, su1, su2, std::span<double>(x.data(), block));
    simd::hat(isa, hshape, std::span<const double>(x.data(), block),
              std::span<double>(h.data(), block));

    for (std::size_t i = 0; i < block && report.samples.size() < target; ++i) {
      ++report.iterations;
      bool accepted = false;
      if (std::isnan(x[i])) {
        ++report.guard_rejections;
      } else {
        const auto candidate = static_cast<std::int64_t>(x[i]);
        const double p = pf(candidate);
        if (p > 0.0 && u3[i] * h[i] <= p) {
          report.samples.push_back(candidate);
          accepted = true;
        }
      }
      if (accepted) {
        rejections = 0;
      } else if (++rejections >= kMaxConsecutiveRejections) {
        throw IterationLimitError(
            "sampler: " + std::to_string(rejections) +
                " consecutive rejections; the envelope does not fit the distribution",
            rejections);
      }
    }
  }
}

}  // namespace

std::optional<std::int64_t> propose_from_uniforms(const Envelope& env, double u1,
                                                  double u2) {
  double out = 0.0;
  simd::propose(simd::Isa::Scalar, proposal_shape(env), std::span<const double>(&u1, 1),
                std::span<const double>(&u2, 1), std::span<double>(&out, 1));
  if (std::isnan(out)) return std::nullopt;
  return static_cast<std::int64_t>(out);
}

std::optional<std::int64_t> propose(const Envelope& env, Rng& rng) {
  const double u1 = rng.next_unit();
  const double u2 = 2.0 * rng.next_unit() - 1.0;
  return propose_from_uniforms(env, u1, u2);
}

std::int64_t sample_one(const Envelope& env, const PfEvaluator& pf, Rng& rng,
                        SampleReport* stats) {
  SampleReport local;
  SampleReport& report = stats ? *stats : local;
  run(env, pf, rng, 1, 1, report);
  return report.samples.back();
}

SampleReport sample_n(const Envelope& env, const PfEvaluator& pf, Rng& rng,
                      std::size_t n) {
  SampleReport report;
  report.samples.reserve(n);
  run(env, pf, rng, n, kSampleBlock, report);
  return report;
}

UniversalSampler::UniversalSampler(Distribution dist, AnchorRule rule, double tol)
    : pf_(std::move(dist), tol) {
  const QuadratureOptions options = envelope_quadrature(tol);
  env_ = build_envelope(pf_.distribution(),
                        resolve_anchor(pf_.distribution(), rule, options), options);
}

}  // namespace cfsampler
