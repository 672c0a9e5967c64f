#include <immintrin.h>

#include <limits>

#include "kernels_impl.hpp"

namespace cfsampler::simd::detail::avx2 {
namespace {

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

// Mirrors cfsampler::round_half_away lane by lane, signed zeros included.
inline __m256d round_half_away_pd(__m256d y) {
  const __m256d t = _mm256_round_pd(y, _MM_FROUND_TO_ZERO | _MM_FROUND_NO_EXC);
  const __m256d r = _mm256_sub_pd(y, t);
  const __m256d ge = _mm256_cmp_pd(abs_pd(r), _mm256_set1_pd(0.5), _CMP_GE_OQ);
  const __m256d one = _mm256_or_pd(_mm256_and_pd(y, _mm256_set1_pd(-0.0)),
                                   _mm256_set1_pd(1.0));
  return _mm256_blendv_pd(t, _mm256_add_pd(t, one), ge);
}

inline double lane_sum(__m256d v) {
  alignas(32) double l[4];
  _mm256_store_pd(l, v);
  return (l[0] + l[1]) + (l[2] + l[3]);
}

}  // namespace

void propose(const ProposalShape& s, const double* u1, const double* u2,
             double* out, std::size_t n) {
  const __m256d alpha = _mm256_set1_pd(s.alpha);
  const __m256d m = _mm256_set1_pd(s.m);
  const __m256d sigma = _mm256_set1_pd(s.sigma);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d tiny = _mm256_set1_pd(kTinyU2);
  const __m256d span = _mm256_set1_pd(kMaxSpan);
  const __m256d nan = _mm256_set1_pd(std::numeric_limits<double>::quiet_NaN());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(u1 + i);
    const __m256d b = _mm256_loadu_pd(u2 + i);
    const __m256d tail = _mm256_cmp_pd(a, alpha, _CMP_GT_OQ);
    const __m256d v = _mm256_blendv_pd(b, _mm256_div_pd(one, b), tail);
    const __m256d y = _mm256_add_pd(m, _mm256_mul_pd(sigma, v));
    const __m256d x = round_half_away_pd(y);
    const __m256d tiny_u2 = _mm256_and_pd(tail, _mm256_cmp_pd(abs_pd(b), tiny, _CMP_LT_OQ));
    const __m256d in_span = _mm256_cmp_pd(abs_pd(_mm256_sub_pd(x, m)), span, _CMP_LE_OQ);
    const __m256d guard = _mm256_or_pd(tiny_u2, _mm256_andnot_pd(in_span, _mm256_castsi256_pd(_mm256_set1_epi64x(-1))));
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(x, nan, guard));
  }
  scalar::propose(s, u1 + i, u2 + i, out + i, n - i);
}

void hat(const HatShape& s, const double* x, double* out, std::size_t n) {
  const __m256d m = _mm256_set1_pd(s.m);
  const __m256d sigma = _mm256_set1_pd(s.sigma);
  const __m256d c = _mm256_set1_pd(s.c);
  const __m256d k = _mm256_set1_pd(s.k);
  const __m256d quarter = _mm256_set1_pd(0.25);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), m);
    const __m256d inside = _mm256_cmp_pd(abs_pd(d), sigma, _CMP_LE_OQ);
    const __m256d tail = _mm256_div_pd(k, _mm256_sub_pd(_mm256_mul_pd(d, d), quarter));
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(tail, c, inside));
  }
  scalar::hat(s, x + i, out + i, n - i);
}

void rounded_mixture_pf(const ProposalShape& s, const double* x, double* out,
                        std::size_t n) {
  const __m256d m = _mm256_set1_pd(s.m);
  const __m256d sigma = _mm256_set1_pd(s.sigma);
  const __m256d centre = _mm256_set1_pd(s.alpha / (2.0 * s.sigma));
  const __m256d tail_num = _mm256_set1_pd((1.0 - s.alpha) * s.sigma);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), m);
    const __m256d inside = _mm256_cmp_pd(abs_pd(d), sigma, _CMP_LE_OQ);
    const __m256d den = _mm256_sub_pd(_mm256_mul_pd(two, _mm256_mul_pd(d, d)), half);
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(_mm256_div_pd(tail_num, den), centre, inside));
  }
  scalar::rounded_mixture_pf(s, x + i, out + i, n - i);
}

KronrodSums gauss_kronrod21(const double* f) {
  __m256d k = _mm256_setzero_pd();
  __m256d g = _mm256_setzero_pd();
  for (std::size_t i = 0; i < 20; i += 4) {
    const __m256d v = _mm256_loadu_pd(f + i);
    k = _mm256_add_pd(k, _mm256_mul_pd(_mm256_loadu_pd(kKronrodWeights.data() + i), v));
    g = _mm256_add_pd(g, _mm256_mul_pd(_mm256_loadu_pd(kGaussWeights.data() + i), v));
  }
  return {lane_sum(k) + kKronrodWeights[20] * f[20],
          lane_sum(g) + kGaussWeights[20] * f[20]};
}

double chi_square_terms(const double* observed, const double* expected,
                        std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d e = _mm256_loadu_pd(expected + i);
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(observed + i), e);
    acc = _mm256_add_pd(acc, _mm256_div_pd(_mm256_mul_pd(d, d), e));
  }
  double total = lane_sum(acc);
  for (std::size_t i = body; i < n; ++i) {
    const double d = observed[i] - expected[i];
    total = total + (d * d) / expected[i];
  }
  return total;
}

}  // namespace cfsampler::simd::detail::avx2
