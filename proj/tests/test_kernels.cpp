#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "cfsampler/rounding.hpp"
#include "cfsampler/simd/kernels.hpp"

using namespace cfsampler;
using simd::Isa;

namespace {

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

void expect_same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(same_bits(a[i], b[i])) << i << ": " << a[i] << " vs " << b[i];
  }
}

std::vector<double> uniform(std::mt19937_64& gen, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(gen);
  return v;
}

}  // namespace

TEST(Rounding, HalfAwayFromZero) {
  EXPECT_EQ(round_half_away(2.5), 3.0);
  EXPECT_EQ(round_half_away(-2.5), -3.0);
  EXPECT_EQ(round_half_away(0.49999999999999994), 0.0);
  EXPECT_EQ(round_half_away(2.25), 2.0);
  std::mt19937_64 gen(5);
  for (double v : uniform(gen, 100000, -1e6, 1e6)) {
    EXPECT_TRUE(same_bits(round_half_away(v), std::round(v))) << v;
  }
  for (double v : {0.5, -0.5, 1.5, -1.5, 4503599627370495.5, -0.0, 0.0, 1e300}) {
    EXPECT_TRUE(same_bits(round_half_away(v), std::round(v))) << v;
  }
}

TEST(Kernels, ScalarIsAlwaysSupported) {
  EXPECT_TRUE(simd::isa_supported(Isa::Scalar));
  EXPECT_FALSE(simd::supported_isas().empty());
}

class KernelEquivalence : public ::testing::TestWithParam<Isa> {};

TEST_P(KernelEquivalence, Propose) {
  std::mt19937_64 gen(11);
  for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
    auto u1 = uniform(gen, n, 0.0, 1.0);
    auto u2 = uniform(gen, n, -1.0, 1.0);
    if (n > 4) {
      u2[0] = 0.0;
      u2[1] = -0.0;
      u2[2] = 1e-14;
      u2[3] = 0.5;
      u1[3] = 0.0;
    }
    for (simd::ProposalShape shape : {simd::ProposalShape{3, 2.5, 0.6}, {-7, 0.5, 0.3}, {1000, 12.5, 1.0}}) {
      std::vector<double> ref(n), got(n);
      simd::propose(Isa::Scalar, shape, u1, u2, ref);
      simd::propose(GetParam(), shape, u1, u2, got);
      expect_same_bits(ref, got);
    }
  }
}

TEST_P(KernelEquivalence, HatAndMixture) {
  std::mt19937_64 gen(12);
  std::vector<double> x;
  for (int i = -200; i <= 200; ++i) x.push_back(i);
  for (std::size_t n : {1u, 5u, 401u}) {
    std::vector<double> xs(x.begin(), x.begin() + n);
    std::vector<double> ref(n), got(n);
    simd::hat(Isa::Scalar, {4, 2.5, 0.3, 1.7}, xs, ref);
    simd::hat(GetParam(), {4, 2.5, 0.3, 1.7}, xs, got);
    expect_same_bits(ref, got);
    simd::rounded_mixture_pf(Isa::Scalar, {4, 2.5, 0.55}, xs, ref);
    simd::rounded_mixture_pf(GetParam(), {4, 2.5, 0.55}, xs, got);
    expect_same_bits(ref, got);
  }
}

TEST_P(KernelEquivalence, GaussKronrod) {
  std::mt19937_64 gen(13);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto v = uniform(gen, 21, -5.0, 5.0);
    std::span<const double, 21> f(v.data(), 21);
    const auto ref = simd::gauss_kronrod21(Isa::Scalar, f);
    const auto got = simd::gauss_kronrod21(GetParam(), f);
    EXPECT_TRUE(same_bits(ref.kronrod, got.kronrod));
    EXPECT_TRUE(same_bits(ref.gauss, got.gauss));
  }
}

TEST_P(KernelEquivalence, ChiSquareTerms) {
  std::mt19937_64 gen(14);
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 9u, 100u, 1003u}) {
    const auto obs = uniform(gen, n, 0.0, 100.0);
    const auto exp = uniform(gen, n, 5.0, 100.0);
    EXPECT_TRUE(same_bits(simd::chi_square_terms(Isa::Scalar, obs, exp),
                          simd::chi_square_terms(GetParam(), obs, exp)));
  }
}

INSTANTIATE_TEST_SUITE_P(AllIsas, KernelEquivalence,
                         ::testing::ValuesIn(simd::supported_isas()),
                         [](const auto& info) { return std::string(simd::isa_name(info.param)); });

TEST(Kernels, ProposalExamples) {
  const double u1[] = {0.1, 0.1, 0.9, 0.9};
  const double u2[] = {0.0, 0.9, 0.5, 1e-14};
  double out[4];
  simd::propose(Isa::Scalar, {0, 2.5, 0.5}, u1, u2, out);
  EXPECT_EQ(out[0], 0.0);
  EXPECT_EQ(out[1], 2.0);
  EXPECT_EQ(out[2], 5.0);
  EXPECT_TRUE(std::isnan(out[3]));
}

TEST(Kernels, GaussKronrodIntegratesPolynomials) {
  const auto& nodes = simd::gauss_kronrod_nodes();
  for (int deg = 0; deg <= 19; ++deg) {
    std::array<double, 21> f;
    for (int i = 0; i < 21; ++i) f[i] = std::pow(nodes[i], deg);
    const auto s = simd::gauss_kronrod21(Isa::Scalar, f);
    const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
    EXPECT_NEAR(s.kronrod, exact, 1e-14) << deg;
    EXPECT_NEAR(s.gauss, exact, 1e-14) << deg;
  }
}
