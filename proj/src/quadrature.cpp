#include "cfsampler/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>

#include "cfsampler/errors.hpp"
#include "cfsampler/simd/kernels.hpp"

namespace cfsampler {
namespace {

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  int depth;
};

struct ByError {
  bool operator()(const Panel& a, const Panel& b) const { return a.error < b.error; }
};

class RuleEvaluator {
 public:
  explicit RuleEvaluator(const BatchIntegrand& f) : f_(f) {}

  Panel apply(double lo, double hi, int depth) {
    const double centre = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const auto& nodes = simd::gauss_kronrod_nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) t_[i] = centre + half * nodes[i];
    f_(t_, values_);
    evaluations_ += values_.size();
    for (double v : values_) {
      if (!std::isfinite(v)) {
        throw QuadratureError("integrand is not finite on [" + std::to_string(lo) +
                                  ", " + std::to_string(hi) + "]",
                              0.0, std::numeric_limits<double>::infinity());
      }
    }
    const simd::KronrodSums sums = simd::gauss_kronrod21(values_);
    return {lo, hi, half * sums.kronrod, half * std::fabs(sums.kronrod - sums.gauss), depth};
  }

  std::size_t evaluations() const { return evaluations_; }

 private:
  const BatchIntegrand& f_;
  std::array<double, 21> t_{};
  std::array<double, 21> values_{};
  std::size_t evaluations_ = 0;
};

QuadratureResult refine(RuleEvaluator& rule, Panel first, double target,
                        const QuadratureOptions& options) {
  std::priority_queue<Panel, std::vector<Panel>, ByError> heap;
  double error = first.error;
  heap.push(first);
  while (error > target) {
    Panel worst = heap.top();
    if (worst.depth >= options.max_depth || heap.size() >= options.max_panels) {
      double partial = 0.0;
      double err = 0.0;
      for (; !heap.empty(); heap.pop()) {
        partial += heap.top().value;
        err += heap.top().error;
      }
      throw QuadratureError(
          "quadrature: maximum subdivision exceeded (depth " +
              std::to_string(options.max_depth) + ")",
          partial, err);
    }
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Panel left = rule.apply(worst.lo, mid, worst.depth + 1);
    const Panel right = rule.apply(mid, worst.hi, worst.depth + 1);
    error += (left.error + right.error) - worst.error;
    heap.push(left);
    heap.push(right);
    // Keep the running sum honest against cancellation drift.
    if (error <= target) {
      std::vector<Panel> panels;
      panels.reserve(heap.size());
      error = 0.0;
      for (; !heap.empty(); heap.pop()) {
        panels.push_back(heap.top());
        error += panels.back().error;
      }
      for (const Panel& p : panels) heap.push(p);
    }
  }
  std::vector<Panel> panels;
  panels.reserve(heap.size());
  for (; !heap.empty(); heap.pop()) panels.push_back(heap.top());
  std::sort(panels.begin(), panels.end(),
            [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
  QuadratureResult out;
  for (const Panel& p : panels) {
    out.value += p.value;
    out.abs_error_estimate += p.error;
  }
  return out;
}

}  // namespace

std::vector<double> uniform_breakpoints(double lo, double hi, std::size_t panels) {
  panels = std::max<std::size_t>(panels, 1);
  std::vector<double> points(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i) {
    points[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(panels);
  }
  points.back() = hi;
  return points;
}

QuadratureResult integrate(const BatchIntegrand& f,
                           std::span<const double> breakpoints,
                           const QuadratureOptions& options) {
  if (breakpoints.size() < 2) {
    throw std::invalid_argument("integrate: need at least two breakpoints");
  }
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1]) || !std::isfinite(breakpoints[i + 1]) ||
        !std::isfinite(breakpoints[i])) {
      throw std::invalid_argument("integrate: breakpoints must be finite and increasing");
    }
  }
  RuleEvaluator rule(f);
  const double lo = breakpoints.front();
  const double width = breakpoints.back() - lo;
  QuadratureResult total;

  if (breakpoints.size() == 2) {
    Panel first = rule.apply(breakpoints[0], breakpoints[1], 0);
    const double target = std::max(options.abs_tol, options.rel_tol * std::fabs(first.value));
    // The relative target follows the refined value.
    QuadratureResult r = refine(rule, first, target, options);
    const double final_target =
        std::max(options.abs_tol, options.rel_tol * std::fabs(r.value));
    if (r.abs_error_estimate > final_target) {
      r = refine(rule, rule.apply(breakpoints[0], breakpoints[1], 0), final_target, options);
    }
    r.evaluations = rule.evaluations();
    return r;
  }

  double first_pass = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    first_pass += rule.apply(breakpoints[i], breakpoints[i + 1], 0).value;
  }
  const double budget = std::max(options.abs_tol, options.rel_tol * std::fabs(first_pass));
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    try {
      QuadratureResult r = refine(rule, rule.apply(a, b, 0), budget * (b - a) / width, options);
      total.value += r.value;
      total.abs_error_estimate += r.abs_error_estimate;
    } catch (const QuadratureError& e) {
      throw QuadratureError(e.what(), total.value + e.partial_value(),
                            total.abs_error_estimate + e.abs_error_estimate());
    }
  }
  total.evaluations = rule.evaluations();
  return total;
}

QuadratureResult integrate(const BatchIntegrand& f, double lo, double hi,
                           const QuadratureOptions& options) {
  const std::array<double, 2> points{lo, hi};
  return integrate(f, points, options);
}

namespace {

// Panels of at most ~two periods of exp(-itx) over [0, pi].
std::size_t oscillation_panels(std::int64_t x) {
  const double periods = std::fabs(static_cast<double>(x)) / 2.0;
  return static_cast<std::size_t>(std::ceil(std::max(1.0, periods / 2.0)));
}

}  // namespace

QuadratureResult pf_inversion_raw(const Distribution& dist, std::int64_t x, double tol) {
  const double xd = static_cast<double>(x);
  BatchIntegrand f = [&dist, xd](std::span<const double> t, std::span<double> out) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      out[i] = (std::polar(1.0, -t[i] * xd) * dist.cf(t[i])).real();
    }
  };
  QuadratureOptions options;
  options.abs_tol = tol * std::numbers::pi;
  options.rel_tol = 0.0;
  const auto points = uniform_breakpoints(0.0, std::numbers::pi, oscillation_panels(x));
  QuadratureResult r = integrate(f, points, options);
  r.value /= std::numbers::pi;
  r.abs_error_estimate /= std::numbers::pi;
  return r;
}

double pf_inversion(const Distribution& dist, std::int64_t x, double tol) {
  const double raw = pf_inversion_raw(dist, x, tol).value;
  if (raw < -1e-9) {
    throw ConsistencyError(dist.describe() + ": inverted probability at x=" +
                           std::to_string(x) + " is " + std::to_string(raw) +
                           " (< -1e-9); the characteristic function is inconsistent");
  }
  return std::clamp(raw, 0.0, 1.0);
}

Complex pf_inversion_full_period(const Distribution& dist, std::int64_t x, double tol) {
  const double xd = static_cast<double>(x);
  QuadratureOptions options;
  options.abs_tol = tol * 2.0 * std::numbers::pi;
  options.rel_tol = 0.0;
  const auto points = uniform_breakpoints(-std::numbers::pi, std::numbers::pi,
                                          2 * oscillation_panels(x));
  const auto part = [&](bool imag) {
    BatchIntegrand f = [&dist, xd, imag](std::span<const double> t, std::span<double> out) {
      for (std::size_t i = 0; i < t.size(); ++i) {
        const Complex v = std::polar(1.0, -t[i] * xd) * dist.cf(t[i]);
        out[i] = imag ? v.imag() : v.real();
      }
    };
    return integrate(f, points, options).value / (2.0 * std::numbers::pi);
  };
  return {part(false), part(true)};
}

InversionCheck generalized_inversion_check(const Distribution& dist, std::int64_t m,
                                           std::int64_t x, double tol) {
  if (!dist.square_integrable()) {
    throw InvalidParameters(dist.describe() + ": not square-integrable");
  }
  const double md = static_cast<double>(m);
  const double xd = static_cast<double>(x);
  const double p = dist.pf_closed(x).value_or(pf_inversion(dist, x, tol));
  const double g = (xd - md) * (xd - md);

  // E[(X-m)^2 e^{itX}] = -e^{itm} phi_Y''(t) = -(phi'' - 2im phi' - m^2 phi).
  BatchIntegrand f = [&dist, md, xd](std::span<const double> t, std::span<double> out) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      const Complex phi = dist.cf(t[i]);
      const CfDerivatives d = dist.cf_derivs(t[i]);
      const Complex weighted = -(d.second - Complex(0.0, 2.0 * md) * d.first - md * md * phi);
      out[i] = (std::polar(1.0, -t[i] * xd) * weighted).real();
    }
  };
  QuadratureOptions options;
  options.abs_tol = tol * 2.0 * std::numbers::pi;
  options.rel_tol = 0.0;
  const auto points = uniform_breakpoints(-std::numbers::pi, std::numbers::pi,
                                          2 * oscillation_panels(x));
  const double rhs = integrate(f, points, options).value / (2.0 * std::numbers::pi);
  return {g * p, rhs};
}

}  // namespace cfsampler
