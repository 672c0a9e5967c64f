#include <cmath>
#include <limits>

#include "cfsampler/rounding.hpp"
#include "kernels_impl.hpp"

namespace cfsampler::simd::detail {

// QUADPACK qk21 abscissae and weights, mirrored onto [-1, 1].
const std::array<double, 21> kNodes = {
    -0.995657163025808080735527280689003, -0.973906528517171720077964012084452,
    -0.930157491355708226001207180059508, -0.865063366688984510732096688423493,
    -0.780817726586416897063717578345042, -0.679409568299024406234327365114874,
    -0.562757134668604683339000099272694, -0.433395394129247190799265943165784,
    -0.294392862701460198131126603103866, -0.148874338981631210884826001129720,
    0.0,
    0.148874338981631210884826001129720,  0.294392862701460198131126603103866,
    0.433395394129247190799265943165784,  0.562757134668604683339000099272694,
    0.679409568299024406234327365114874,  0.780817726586416897063717578345042,
    0.865063366688984510732096688423493,  0.930157491355708226001207180059508,
    0.973906528517171720077964012084452,  0.995657163025808080735527280689003,
};

const std::array<double, 21> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600169219864, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
    0.147739104901338491374841515972068, 0.142775938577060080797094273138717,
    0.134709217311473325928054001771707, 0.123491976262065851077600169219864,
    0.109387158802297641899210590325805, 0.093125454583697605535065465083366,
    0.075039674810919952767043140916190, 0.054755896574351996031381300244580,
    0.032558162307964727478818972459390, 0.011694638867371874278064396062192,
};

const std::array<double, 21> kGaussWeights = {
    0.0, 0.066671344308688137593568809893332,
    0.0, 0.149451349150580593145776339657909,
    0.0, 0.219086362515982043995534934228163,
    0.0, 0.269266719309996355091226921569469,
    0.0, 0.295524224714752870173892994651938,
    0.0,
    0.295524224714752870173892994651938, 0.0,
    0.269266719309996355091226921569469, 0.0,
    0.219086362515982043995534934228163, 0.0,
    0.149451349150580593145776339657909, 0.0,
    0.066671344308688137593568809893332, 0.0,
};

namespace scalar {

void propose(const ProposalShape& s, const double* u1, const double* u2,
             double* out, std::size_t n) {
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < n; ++i) {
    const bool tail = u1[i] > s.alpha;
    const double v = tail ? 1.0 / u2[i] : u2[i];
    const double y = s.m + s.sigma * v;
    const double x = round_half_away(y);
    const bool guard = (tail && std::fabs(u2[i]) < kTinyU2) ||
                       !(std::fabs(x - s.m) <= kMaxSpan);
    out[i] = guard ? kNaN : x;
  }
}

void hat(const HatShape& s, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - s.m;
    out[i] = std::fabs(d) <= s.sigma ? s.c : s.k / (d * d - 0.25);
  }
}

void rounded_mixture_pf(const ProposalShape& s, const double* x, double* out,
                        std::size_t n) {
  const double centre = s.alpha / (2.0 * s.sigma);
  const double tail_num = (1.0 - s.alpha) * s.sigma;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - s.m;
    out[i] = std::fabs(d) <= s.sigma ? centre : tail_num / (2.0 * (d * d) - 0.5);
  }
}

KronrodSums gauss_kronrod21(const double* f) {
  double k[4] = {0.0, 0.0, 0.0, 0.0};
  double g[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < 20; ++i) {
    k[i % 4] = k[i % 4] + kKronrodWeights[i] * f[i];
    g[i % 4] = g[i % 4] + kGaussWeights[i] * f[i];
  }
  KronrodSums out;
  out.kronrod = ((k[0] + k[1]) + (k[2] + k[3])) + kKronrodWeights[20] * f[20];
  out.gauss = ((g[0] + g[1]) + (g[2] + g[3])) + kGaussWeights[20] * f[20];
  return out;
}

double chi_square_terms(const double* observed, const double* expected,
                        std::size_t n) {
  double lanes[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; ++i) {
    const double d = observed[i] - expected[i];
    lanes[i % 4] = lanes[i % 4] + (d * d) / expected[i];
  }
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (std::size_t i = body; i < n; ++i) {
    const double d = observed[i] - expected[i];
    total = total + (d * d) / expected[i];
  }
  return total;
}

}  // namespace scalar
}  // namespace cfsampler::simd::detail
