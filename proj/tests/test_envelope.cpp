#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cfsampler/envelope.hpp"
#include "cfsampler/errors.hpp"
#include "cfsampler/pf_evaluator.hpp"

using namespace cfsampler;

namespace {

// exp(-1) * I0(1), and (1/pi) int_0^pi |cos(t/2)|^n for n = 10, 20, 40, from
// dense trapezoid rules.
constexpr double kPoissonOneC = 0.4657596075936404;
constexpr double kBinomialHalfC[] = {0.2460937500000001, 0.17619705200195335,
                                     0.12537068761957929};

Distribution point_mass() {
  CfTriple t;
  t.phi = [](double) { return Complex(1.0, 0.0); };
  t.dphi = [](double) { return Complex(0.0, 0.0); };
  t.d2phi = [](double) { return Complex(0.0, 0.0); };
  CustomOptions o;
  o.pf = [](std::int64_t x) { return x == 0 ? 1.0 : 0.0; };
  return Distribution::custom(t, o);
}

std::vector<Distribution> specs() {
  return {Distribution::poisson(1),
          Distribution::poisson(10),
          Distribution::binomial(10, 0.5),
          Distribution::binomial(20, 0.3),
          Distribution::negative_binomial(3, 0.4),
          Distribution::poisson_tweedie(0.5, 1, 0.5),
          Distribution::poisson_tweedie(0.1, 1, 0.9),
          Distribution::poisson_tweedie(-1, 1, 0.5)};
}

}  // namespace

TEST(EnvelopeConstants, ForcedArithmetic) {
  const auto env = envelope_from_constants(0, 0.4, 1.6);
  EXPECT_EQ(env.sigma, 2.5);
  EXPECT_NEAR(env.big_a, 3.28, 1e-14);
  EXPECT_NEAR(env.alpha, 2.0 / 3.28, 1e-14);
  EXPECT_NEAR(env.alpha, 0.60976, 1e-5);
  EXPECT_FALSE(env.degenerate);
  EXPECT_NEAR(hat(env, 3), 1.6 / 8.75, 1e-15);
  EXPECT_EQ(hat(env, 0), 0.4);
  EXPECT_EQ(hat(env, 2), 0.4);
}

TEST(EnvelopeConstants, ProposalProbabilities) {
  Envelope env{0, 0.0, 0.0, 1.5, 0.5, 0.0, false};
  EXPECT_NEAR(pz(env, 0), 0.5 / 3.0, 1e-15);
  EXPECT_NEAR(pz(env, 2), 0.1, 1e-15);
  EXPECT_NEAR(pz(env, -2), 0.1, 1e-15);
}

TEST(EnvelopeConstants, ProposalMassSumsToOne) {
  for (double sigma : {0.5, 1.5, 2.5, 7.5}) {
    for (double alpha : {0.1, 0.5, 0.9}) {
      Envelope env{3, 0.0, 0.0, sigma, alpha, 0.0, false};
      const auto j = static_cast<std::int64_t>(sigma - 0.5);
      double inner = 0.0;
      for (std::int64_t d = -j; d <= j; ++d) inner += pz(env, 3 + d);
      EXPECT_NEAR(inner, alpha, 1e-15);
      // Tail: sum_{|d|>j} 1/(d^2 - 1/4) = 2 / sigma, summed to |d| = N and
      // closed with the remainder 2/(N + 1/2).
      const std::int64_t n = 100000;
      double tail = 0.0;
      for (std::int64_t d = n; d > j; --d) tail += pz(env, 3 + d) + pz(env, 3 - d);
      tail += (1.0 - alpha) * sigma / (n + 0.5);
      EXPECT_NEAR(inner + tail, 1.0, 1e-12) << sigma << " " << alpha;
    }
  }
}

TEST(ComputeC, OracleValues) {
  EXPECT_NEAR(compute_c(Distribution::poisson(1)), kPoissonOneC, 1e-10);
  EXPECT_NEAR(compute_c(Distribution::binomial(10, 0.5)), kBinomialHalfC[0], 1e-10);
  EXPECT_NEAR(compute_c(Distribution::binomial(20, 0.5)), kBinomialHalfC[1], 1e-10);
  EXPECT_NEAR(compute_c(Distribution::binomial(40, 0.5)), kBinomialHalfC[2], 1e-10);
  EXPECT_NEAR(compute_c(point_mass()), 1.0, 1e-14);
}

TEST(ComputeC, ShiftInvariant) {
  const auto a = Distribution::finite_support(0, {0.2, 0.5, 0.3});
  const auto b = Distribution::finite_support(17, {0.2, 0.5, 0.3});
  EXPECT_NEAR(compute_c(a), compute_c(b), 1e-12);
}

TEST(ComputeK, Examples) {
  EXPECT_EQ(compute_k(point_mass(), 0.0), 0.0);
  // Dense trapezoid oracle.
  EXPECT_NEAR(compute_k(Distribution::poisson(1), 1.0), 0.44542299541637165, 1e-9);
  const double k = compute_k(Distribution::poisson(1), 1.0);
  EXPECT_GT(k, 0.0);
  EXPECT_LE(k, 1.0);
}

TEST(ComputeK, BoundedBySecondMomentAboutAnchor) {
  for (const auto& d : specs()) {
    const auto mom = d.moments();
    for (std::int64_t m : {0, 1, 2, 5}) {
      const double bound = mom.second - 2.0 * m * mom.mean + double(m) * double(m);
      EXPECT_LE(compute_k(d, double(m)), bound * (1 + 1e-9) + 1e-12) << d.describe() << " m=" << m;
    }
  }
}

TEST(Anchors, MeanRule) {
  EXPECT_EQ(select_m_mean(Distribution::poisson(10)), 10);
  EXPECT_EQ(select_m_mean(Distribution::binomial(100, 0.3)), 30);
  EXPECT_EQ(select_m_mean(Distribution::poisson_tweedie(0.5, 1, 0.5)), 1);
  EXPECT_EQ(select_m_mean(Distribution::poisson(2.5)), 3);
}

TEST(Anchors, OptimalRule) {
  for (double lambda : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0}) {
    const auto d = Distribution::poisson(lambda);
    EXPECT_EQ(select_m_star(d), select_m_mean(d)) << lambda;
  }
  EXPECT_EQ(select_m_star(Distribution::binomial(10, 0.5)), 5);
  EXPECT_EQ(select_m_star(point_mass()), 0);
  EXPECT_NE(select_m_star(Distribution::poisson_tweedie(0.5, 1, 0.5)),
            select_m_mean(Distribution::poisson_tweedie(0.5, 1, 0.5)));
}

TEST(Anchors, OptimalRuleIsLocallyOptimal) {
  for (const auto& d : specs()) {
    const auto m = select_m_star(d);
    const double k = compute_k(d, double(m));
    EXPECT_LE(k, compute_k(d, double(m - 1)) + 1e-12) << d.describe();
    EXPECT_LE(k, compute_k(d, double(m + 1)) + 1e-12) << d.describe();
  }
}

TEST(Anchors, ResolveAndPrint) {
  const auto d = Distribution::poisson(4.4);
  EXPECT_EQ(resolve_anchor(d, AnchorRule::mean()), 4);
  EXPECT_EQ(resolve_anchor(d, AnchorRule::fixed(-3)), -3);
  EXPECT_EQ(to_string(AnchorRule::star()), "star");
  EXPECT_EQ(to_string(AnchorRule::mean()), "mean");
  EXPECT_EQ(to_string(AnchorRule::fixed(7)), "7");
}

TEST(BuildEnvelope, PublishedComplexities) {
  EXPECT_NEAR(build_envelope(Distribution::poisson(1), 1).big_a, 1.99, 0.02);
  EXPECT_NEAR(build_envelope(Distribution::binomial(10, 0.5), 5).big_a, 1.73, 0.02);
}

TEST(BuildEnvelope, Invariants) {
  for (const auto& d : specs()) {
    const auto env = build_envelope(d, select_m_star(d));
    EXPECT_GT(env.c, 0.0);
    EXPECT_LE(env.c, 1.0);
    EXPECT_GE(env.k, 0.0);
    EXPECT_EQ(env.sigma - std::floor(env.sigma), 0.5);
    EXPECT_EQ(env.sigma, std::round(std::sqrt(env.k / env.c)) + 0.5);
    EXPECT_NEAR(env.big_a, 2 * (env.sigma * env.c + env.k / env.sigma), 1e-14);
    EXPECT_NEAR(env.alpha, 2 * env.sigma * env.c / env.big_a, 1e-14);
    EXPECT_GT(env.alpha, 0.0);
    EXPECT_LE(env.alpha, 1.0);
    EXPECT_GE(env.big_a, 1.0);
  }
}

TEST(BuildEnvelope, DominationAndHatIdentity) {
  for (const auto& d : specs()) {
    const auto env = build_envelope(d, select_m_star(d));
    const PfEvaluator pf(d, 1e-12);
    const auto span = static_cast<std::int64_t>(12 * env.sigma);
    for (std::int64_t x = env.m - span; x <= env.m + span; ++x) {
      const double p = pf(x);
      const double dx = double(x - env.m);
      EXPECT_LE(p, hat(env, x) + 1e-12) << d.describe() << " x=" << x;
      EXPECT_LE(p, env.c + 1e-12);
      if (x != env.m) {
        EXPECT_LE(p, env.k / (dx * dx) + 1e-12);
      }
      EXPECT_NEAR(hat(env, x), env.big_a * pz(env, x), 1e-14);
    }
  }
}

TEST(BuildEnvelope, PointMassIsDegenerate) {
  const auto env = build_envelope(point_mass(), 0);
  EXPECT_TRUE(env.degenerate);
  EXPECT_EQ(env.m, 0);
  EXPECT_NEAR(env.c, 1.0, 1e-14);
  EXPECT_EQ(env.k, 0.0);
  EXPECT_EQ(env.sigma, 0.5);
  EXPECT_NEAR(env.big_a, 1.0, 1e-14);
}

TEST(BuildEnvelope, RejectsHeavyTails) {
  EXPECT_THROW(build_envelope(Distribution::poisson_tweedie(0.5, 1, 1), 0), InvalidParameters);
}
