#include "cfsampler/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "cfsampler/errors.hpp"
#include "cfsampler/rounding.hpp"
#include "cfsampler/simd/kernels.hpp"

namespace cfsampler {
namespace {

void require_square_integrable(const Distribution& dist) {
  if (!dist.square_integrable()) {
    throw InvalidParameters(dist.describe() +
                            ": not square-integrable (E[X^2] = inf); no envelope exists");
  }
}

// Geometric breakpoints 1/sd, 2/sd, 4/sd, ... so that the first rule on a
// sharply peaked |phi| (large variance) already sees the peak at t = 0.
std::vector<double> peak_breakpoints(const Distribution& dist) {
  std::vector<double> points{0.0};
  if (dist.square_integrable()) {
    const Moments mom = dist.moments();
    const double var = mom.variance();
    if (var > 0.0 && std::isfinite(var)) {
      for (double b = 1.0 / std::sqrt(var); b < std::numbers::pi; b *= 2.0) {
        points.push_back(b);
      }
    }
  }
  points.push_back(std::numbers::pi);
  return points;
}

}  // namespace

QuadratureOptions envelope_quadrature(double tol) {
  QuadratureOptions options;
  options.abs_tol = tol;
  options.rel_tol = tol;
  return options;
}

double compute_c(const Distribution& dist, const QuadratureOptions& options) {
  BatchIntegrand f = [&dist](std::span<const double> t, std::span<double> out) {
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = std::abs(dist.cf(t[i]));
  };
  const auto points = peak_breakpoints(dist);
  return integrate(f, points, options).value / std::numbers::pi;
}

double compute_k(const Distribution& dist, double m, const QuadratureOptions& options) {
  require_square_integrable(dist);
  BatchIntegrand f = [&dist, m](std::span<const double> t, std::span<double> out) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      const Complex phi = dist.cf(t[i]);
      const CfDerivatives d = dist.cf_derivs(t[i]);
      out[i] = std::abs(d.second - Complex(0.0, 2.0 * m) * d.first - m * m * phi);
    }
  };
  const auto points = peak_breakpoints(dist);
  return integrate(f, points, options).value / std::numbers::pi;
}

std::int64_t select_m_mean(const Distribution& dist) {
  require_square_integrable(dist);
  return round_to_int(dist.moments().mean);
}

std::int64_t select_m_star(const Distribution& dist, const QuadratureOptions& options) {
  require_square_integrable(dist);
  const Moments mom = dist.moments();
  const double sd = std::sqrt(std::max(0.0, mom.variance()));
  if (!(sd > 0.0)) return round_to_int(mom.mean);

  const auto k_at = [&](double m) { return compute_k(dist, m, options); };

  double lo = mom.mean - 4.0 * sd;
  double hi = mom.mean + 4.0 * sd;
  const double k_lo = k_at(lo);
  const double k_hi = k_at(hi);

  constexpr double kInvPhi = 0.6180339887498948482;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = k_at(x1);
  double f2 = k_at(x2);
  while (hi - lo > 1e-4) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = k_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = k_at(x2);
    }
  }
  const double x_min = f1 <= f2 ? x1 : x2;
  const double k_min = std::min(f1, f2);

  std::vector<std::int64_t> candidates;
  if (std::min(k_lo, k_hi) < k_min) {
    const std::int64_t centre = round_to_int(mom.mean);
    for (std::int64_t d = -4; d <= 4; ++d) candidates.push_back(centre + d);
  } else {
    const std::int64_t centre = round_to_int(x_min);
    candidates = {centre, centre - 1, centre + 1};
  }
  std::int64_t best = candidates.front();
  double best_k = k_at(static_cast<double>(best));
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double k = k_at(static_cast<double>(candidates[i]));
    if (k < best_k) {
      best_k = k;
      best = candidates[i];
    }
  }
  return best;
}

std::string to_string(const AnchorRule& rule) {
  switch (rule.kind) {
    case AnchorKind::Star: return "star";
    case AnchorKind::Mean: return "mean";
    case AnchorKind::Explicit: return std::to_string(rule.m);
  }
  return "?";
}

std::int64_t resolve_anchor(const Distribution& dist, const AnchorRule& rule,
                            const QuadratureOptions& options) {
  switch (rule.kind) {
    case AnchorKind::Star: return select_m_star(dist, options);
    case AnchorKind::Mean: return select_m_mean(dist);
    case AnchorKind::Explicit: return rule.m;
  }
  return 0;
}

Envelope envelope_from_constants(std::int64_t m, double c, double k) {
  if (!(c > 0.0) || !(k >= 0.0) || !std::isfinite(c) || !std::isfinite(k)) {
    throw InvalidParameters("envelope: need c > 0 and k >= 0");
  }
  Envelope env;
  env.m = m;
  env.c = c;
  env.k = k;
  env.sigma = round_half_away(std::sqrt(k / c)) + 0.5;
  env.big_a = 2.0 * (env.sigma * c + k / env.sigma);
  env.alpha = 2.0 * env.sigma * c / env.big_a;
  env.degenerate = k < 1e-14 && std::fabs(c - 1.0) < 1e-9;
  return env;
}

Envelope build_envelope(const Distribution& dist, std::int64_t m,
                        const QuadratureOptions& options) {
  require_square_integrable(dist);
  const double c = std::min(compute_c(dist, options), 1.0);
  const double k = compute_k(dist, static_cast<double>(m), options);
  return envelope_from_constants(m, c, k);
}

double hat(const Envelope& env, std::int64_t x) {
  const double xd = static_cast<double>(x);
  double out = 0.0;
  simd::hat(simd::Isa::Scalar,
            {static_cast<double>(env.m), env.sigma, env.c, env.k},
            std::span<const double>(&xd, 1), std::span<double>(&out, 1));
  return out;
}

double pz(const Envelope& env, std::int64_t z) {
  const double zd = static_cast<double>(z);
  double out = 0.0;
  simd::rounded_mixture_pf(simd::Isa::Scalar,
                           {static_cast<double>(env.m), env.sigma, env.alpha},
                           std::span<const double>(&zd, 1), std::span<double>(&out, 1));
  return out;
}

}  // namespace cfsampler
