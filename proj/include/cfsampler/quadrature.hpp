#pragma once

// Adaptive Gauss-Kronrod (10, 21) quadrature for bounded integrands on
// finite intervals, and probability-function recovery by inverting a
// characteristic function.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <type_traits>
#include <vector>

#include "cfsampler/distribution.hpp"

namespace cfsampler {

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  /// Maximum number of bisections of an initial panel.
  int max_depth = 60;
  /// Upper bound on live panels per initial segment.
  std::size_t max_panels = std::size_t{1} << 20;
};

/// Fills out[i] = f(t[i]). Called with the 21 nodes of one panel at a time.
using BatchIntegrand =
    std::function<void(std::span<const double> t, std::span<double> out)>;

/// Integrates over [breakpoints.front(), breakpoints.back()]. Each initial
/// segment is refined by bisecting its worst panel until the summed
/// |Kronrod - Gauss| estimates fit its share (proportional to width) of
/// max(abs_tol, rel_tol * |first-pass value|).
QuadratureResult integrate(const BatchIntegrand& f,
                           std::span<const double> breakpoints,
                           const QuadratureOptions& options = {});

QuadratureResult integrate(const BatchIntegrand& f, double lo, double hi,
                           const QuadratureOptions& options = {});

/// Scalar-callable convenience form.
template <class F>
  requires std::is_invocable_r_v<double, F, double>
QuadratureResult integrate(F&& f, double lo, double hi, double abs_tol,
                           double rel_tol) {
  QuadratureOptions options;
  options.abs_tol = abs_tol;
  options.rel_tol = rel_tol;
  BatchIntegrand batch = [&f](std::span<const double> t, std::span<double> out) {
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = f(t[i]);
  };
  return integrate(batch, lo, hi, options);
}

std::vector<double> uniform_breakpoints(double lo, double hi, std::size_t panels);

/// Default absolute tolerance for inverted probabilities.
inline constexpr double kDefaultPfTolerance = 1e-10;

/// p_X(x) = (1/pi) * integral_0^pi Re(exp(-itx) phi(t)) dt, clamped to [0, 1].
/// Throws ConsistencyError when the raw value is below -1e-9.
double pf_inversion(const Distribution& dist, std::int64_t x,
                    double tol = kDefaultPfTolerance);

/// The raw (unclamped) inversion integral with its quadrature diagnostics.
QuadratureResult pf_inversion_raw(const Distribution& dist, std::int64_t x,
                                  double tol = kDefaultPfTolerance);

/// p_X(x) from the complex integral over the full period [-pi, pi]
/// (no conjugate-symmetry folding). Returns (real part, imaginary part).
Complex pf_inversion_full_period(const Distribution& dist, std::int64_t x,
                                 double tol = kDefaultPfTolerance);

struct InversionCheck {
  double lhs;
  double rhs;
};

/// Weighted inversion with g(x) = (x - m)^2:
///   lhs = (x-m)^2 p_X(x)
///   rhs = (1/2pi) integral_{-pi}^{pi} Re(exp(-itx) * (-phi_Y''(t))) dt,
///   phi_Y''(t) = exp(-itm) (phi''(t) - 2im phi'(t) - m^2 phi(t)).
/// lhs uses the closed-form p.f. when available, inversion otherwise.
InversionCheck generalized_inversion_check(const Distribution& dist,
                                           std::int64_t m, std::int64_t x,
                                           double tol = 1e-12);

}  // namespace cfsampler
