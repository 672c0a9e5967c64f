#pragma once

// Dominating envelope for the rejection sampler.
//
// For integer X with characteristic function phi and an integer anchor m,
//   p_X(x) <= min(c, k_m / (x - m)^2),
//   c   = (1/pi) int_0^pi |phi(t)| dt,
//   k_m = (1/pi) int_0^pi |phi_Y''(t)| dt,  Y = X - m.
// With sigma = Round(sqrt(k_m / c)) + 1/2 the hat
//   h(x) = c                         for |x - m| <= sigma,
//          k_m / ((x - m)^2 - 1/4)   otherwise,
// equals A * p_Z(x), where p_Z is the law of Round(V) for the flat-centre /
// inverse-square-tail mixture V, and A = 2 (sigma c + k_m / sigma) is the
// expected number of proposals per accepted variate.

#include <cstdint>
#include <string>

#include "cfsampler/distribution.hpp"
#include "cfsampler/quadrature.hpp"

namespace cfsampler {

struct Envelope {
  std::int64_t m = 0;
  double c = 0.0;
  double k = 0.0;
  double sigma = 0.5;  // j + 1/2
  double alpha = 0.0;
  double big_a = 0.0;  // expected iterations per sample
  /// Point mass detected (k ~ 0, c ~ 1); the envelope is still valid.
  bool degenerate = false;
};

/// Quadrature settings used for c and k_m (abs and rel tolerance = tol).
QuadratureOptions envelope_quadrature(double tol = kDefaultPfTolerance);

double compute_c(const Distribution& dist,
                 const QuadratureOptions& options = envelope_quadrature());

/// k_m for real m (the continuous extension used by the m* search).
double compute_k(const Distribution& dist, double m,
                 const QuadratureOptions& options = envelope_quadrature());

/// m** = Round(E[X]).
std::int64_t select_m_mean(const Distribution& dist);

/// m* = Round(argmin_m k_m): golden-section search on E[X] +- 4 sd, then
/// the best of the rounded minimiser and its two neighbours. Falls back to
/// scanning m** +- 4 if a bracket endpoint beats the interior minimum.
std::int64_t select_m_star(const Distribution& dist,
                           const QuadratureOptions& options = envelope_quadrature());

enum class AnchorKind { Star, Mean, Explicit };

struct AnchorRule {
  AnchorKind kind = AnchorKind::Star;
  std::int64_t m = 0;  // used when kind == Explicit

  static AnchorRule star() { return {AnchorKind::Star, 0}; }
  static AnchorRule mean() { return {AnchorKind::Mean, 0}; }
  static AnchorRule fixed(std::int64_t m) { return {AnchorKind::Explicit, m}; }
};

std::string to_string(const AnchorRule& rule);

std::int64_t resolve_anchor(const Distribution& dist, const AnchorRule& rule,
                            const QuadratureOptions& options = envelope_quadrature());

/// sigma, alpha and A from (m, c, k).
Envelope envelope_from_constants(std::int64_t m, double c, double k);

Envelope build_envelope(const Distribution& dist, std::int64_t m,
                        const QuadratureOptions& options = envelope_quadrature());

double hat(const Envelope& env, std::int64_t x);

/// Probability function of the proposal Z = Round(V).
double pz(const Envelope& env, std::int64_t z);

}  // namespace cfsampler
