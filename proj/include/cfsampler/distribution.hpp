#pragma once

// Integer-valued distributions described by their characteristic function.
//
// Every built-in family exposes phi(t) = E[exp(itX)] together with its first
// two derivatives in closed form. A closed-form probability function is
// offered where one is standard (Poisson, Binomial, Negative Binomial, finite
// support); Poisson-Tweedie and Discrete Stable are characterised only
// through phi.

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace cfsampler {

using Complex = std::complex<double>;

enum class Family {
  Poisson,
  Binomial,
  NegativeBinomial,
  DiscreteStable,
  PoissonTweedie,
  Custom,
};

std::string_view family_name(Family family);

struct CfDerivatives {
  Complex first;
  Complex second;
};

/// User-supplied characteristic function with optional derivatives.
struct CfTriple {
  std::function<Complex(double)> phi;
  std::function<Complex(double)> dphi;
  std::function<Complex(double)> d2phi;
};

/// Wraps phi with central-difference derivatives (step h). The resulting
/// Distribution reports derivatives_approximate() == true.
CfTriple finite_difference_triple(std::function<Complex(double)> phi,
                                  double step = 1e-5);

struct Moments {
  double mean;
  double second;  // E[X^2]
  double variance() const { return second - mean * mean; }
};

struct CustomOptions {
  /// Substitute central differences when dphi/d2phi are missing.
  bool finite_difference_fallback = true;
  /// Known probability function (e.g. for validation); optional.
  std::function<double(std::int64_t)> pf;
  std::optional<std::int64_t> support_min;
  std::optional<std::int64_t> support_max;
  /// Declared E[X^2] < infinity. Needed for envelope construction.
  bool square_integrable = true;
};

/// Immutable description of an integer-valued distribution. Cheap to copy;
/// safe to share across threads.
class Distribution {
 public:
  static Distribution poisson(double lambda);
  static Distribution binomial(std::int64_t n, double p);
  /// r > 0 "number of successes", q in (0,1] success probability;
  /// phi(t) = (q / (1 - (1-q) e^{it}))^r.
  static Distribution negative_binomial(double r, double q);
  /// phi(t) = exp(-(b/a) (1 - e^{it})^a), a in (0,1], b > 0.
  static Distribution discrete_stable(double a, double b);
  /// phi(t) = exp((b/a) [(1-c)^a - (1 - c e^{it})^a]), with the a -> 0 limit
  /// taken as the Negative Binomial.
  static Distribution poisson_tweedie(double a, double b, double c);
  /// Distribution on {offset, offset+1, ...} with the given probabilities.
  static Distribution finite_support(std::int64_t offset,
                                     std::vector<double> weights);
  static Distribution custom(CfTriple triple, CustomOptions options = {});

  Family family() const { return family_; }
  std::string_view name() const { return family_name(family_); }
  /// Named parameters in canonical order (e.g. {"a", "b", "c"}).
  std::vector<std::pair<std::string, double>> parameters() const;
  std::string describe() const;

  Complex cf(double t) const;
  CfDerivatives cf_derivs(double t) const;
  bool derivatives_approximate() const;

  bool has_closed_pf() const;
  std::optional<double> pf_closed(std::int64_t x) const;

  bool square_integrable() const;
  /// (E[X], E[X^2]) read off phi'(0) and phi''(0).
  Moments moments() const;

  std::optional<std::int64_t> support_min() const;
  std::optional<std::int64_t> support_max() const;

  /// For finite_support() distributions: (offset, weights).
  std::optional<std::pair<std::int64_t, std::vector<double>>>
  finite_support_weights() const;

  struct PoissonParams { double lambda; };
  struct BinomialParams { std::int64_t n; double p; };
  struct NegBinomialParams { double r; double q; };
  struct StableParams { double a; double b; };
  struct TweedieParams { double a; double b; double c; };
  struct CustomModel;

 private:
  using Params = std::variant<PoissonParams, BinomialParams, NegBinomialParams,
                              StableParams, TweedieParams,
                              std::shared_ptr<const CustomModel>>;

  Distribution(Family family, Params params)
      : family_(family), params_(std::move(params)) {}

  Family family_;
  Params params_;
};

/// Complex power z^k on the principal branch, computed in polar form.
/// Returns 0 for z == 0 and k > 0, and 1 for k == 0.
Complex principal_pow(Complex z, double k);

}  // namespace cfsampler
