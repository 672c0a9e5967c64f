#include "cfsampler/distribution.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "cfsampler/errors.hpp"

namespace cfsampler {

struct Distribution::CustomModel {
  CfTriple triple;
  bool approximate = false;
  bool missing_derivatives = false;
  CustomOptions options;
  std::optional<std::pair<std::int64_t, std::vector<double>>> weights;
};

namespace {

constexpr Complex kI{0.0, 1.0};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt_value(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

[[noreturn]] void reject(std::string_view family, const std::string& why) {
  throw InvalidParameters(std::string(family) + ": " + why);
}

// Derivatives of phi = exp(psi) from psi' and psi''.
CfDerivatives from_log_derivs(Complex phi, Complex dpsi, Complex d2psi) {
  return {dpsi * phi, (d2psi + dpsi * dpsi) * phi};
}

// Shared by Poisson-Tweedie and Discrete Stable (c = 1).
Complex tweedie_cf(double a, double b, double c, double t) {
  const Complex u = 1.0 - c * std::polar(1.0, t);
  Complex psi;
  if (a == 0.0) {
    psi = b * (std::log(1.0 - c) - std::log(u));
  } else {
    psi = (b / a) * (std::pow(1.0 - c, a) - principal_pow(u, a));
  }
  return std::exp(psi);
}

CfDerivatives tweedie_derivs(double a, double b, double c, double t) {
  const Complex e = std::polar(1.0, t);
  const Complex u = 1.0 - c * e;
  if (a == 1.0) {
    const Complex dpsi = kI * b * c * e;
    return from_log_derivs(tweedie_cf(a, b, c, t), dpsi, -b * c * e);
  }
  if (std::abs(u) == 0.0) {
    throw std::domain_error(
        "Poisson-Tweedie derivatives are unbounded at t = 0 when c = 1");
  }
  const Complex u_am1 = principal_pow(u, a - 1.0);
  const Complex dpsi = kI * b * c * e * u_am1;
  const Complex d2psi = -b * c * e * u_am1 + b * c * c * (a - 1.0) * e * e * u_am1 / u;
  return from_log_derivs(tweedie_cf(a, b, c, t), dpsi, d2psi);
}

void check_custom(const CfTriple& triple) {
  if (!triple.phi) throw InvalidParameters("custom: phi is required");
  const Complex at_zero = triple.phi(0.0);
  if (!std::isfinite(at_zero.real()) || !std::isfinite(at_zero.imag()) ||
      std::abs(at_zero - 1.0) > 1e-9) {
    reject("custom", "phi(0) must equal 1 (got " + fmt_value(at_zero.real()) +
                         (at_zero.imag() >= 0 ? "+" : "") +
                         fmt_value(at_zero.imag()) + "i)");
  }
  constexpr int kGrid = 256;
  for (int i = 0; i <= kGrid; ++i) {
    const double t = -std::numbers::pi + 2.0 * std::numbers::pi * i / kGrid;
    const double mag = std::abs(triple.phi(t));
    if (!(mag <= 1.0 + 1e-9)) {
      reject("custom", "|phi(t)| <= 1 violated at t=" + fmt_value(t) +
                           " (|phi|=" + fmt_value(mag) + ")");
    }
  }
}

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::Poisson: return "poisson";
    case Family::Binomial: return "binomial";
    case Family::NegativeBinomial: return "negative-binomial";
    case Family::DiscreteStable: return "discrete-stable";
    case Family::PoissonTweedie: return "poisson-tweedie";
    case Family::Custom: return "custom";
  }
  return "unknown";
}

Complex principal_pow(Complex z, double k) {
  if (k == 0.0) return {1.0, 0.0};
  const double r = std::abs(z);
  if (r == 0.0) {
    return k > 0.0 ? Complex{0.0, 0.0}
                   : Complex{std::numeric_limits<double>::infinity(), 0.0};
  }
  return std::polar(std::pow(r, k), k * std::arg(z));
}

CfTriple finite_difference_triple(std::function<Complex(double)> phi,
                                  double step) {
  CfTriple triple;
  triple.phi = phi;
  triple.dphi = [phi, step](double t) {
    return (phi(t + step) - phi(t - step)) / (2.0 * step);
  };
  triple.d2phi = [phi, step](double t) {
    return (phi(t + step) - 2.0 * phi(t) + phi(t - step)) / (step * step);
  };
  return triple;
}

Distribution Distribution::poisson(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    reject("poisson", "lambda must be in (0, inf) (got " + fmt_value(lambda) + ")");
  }
  return Distribution(Family::Poisson, PoissonParams{lambda});
}

Distribution Distribution::binomial(std::int64_t n, double p) {
  if (n < 1) reject("binomial", "n must be an integer >= 1 (got " + std::to_string(n) + ")");
  if (!(p > 0.0 && p < 1.0)) {
    reject("binomial", "p must be in (0, 1) (got " + fmt_value(p) + ")");
  }
  return Distribution(Family::Binomial, BinomialParams{n, p});
}

Distribution Distribution::negative_binomial(double r, double q) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    reject("negative-binomial", "r must be in (0, inf) (got " + fmt_value(r) + ")");
  }
  if (!(q > 0.0 && q <= 1.0)) {
    reject("negative-binomial", "q must be in (0, 1] (got " + fmt_value(q) + ")");
  }
  return Distribution(Family::NegativeBinomial, NegBinomialParams{r, q});
}

Distribution Distribution::discrete_stable(double a, double b) {
  if (!(a > 0.0 && a <= 1.0)) {
    reject("discrete-stable", "a must be in (0, 1] (got " + fmt_value(a) + ")");
  }
  if (!(b > 0.0) || !std::isfinite(b)) {
    reject("discrete-stable", "b must be in (0, inf) (got " + fmt_value(b) + ")");
  }
  return Distribution(Family::DiscreteStable, StableParams{a, b});
}

Distribution Distribution::poisson_tweedie(double a, double b, double c) {
  if (!std::isfinite(a) || a > 1.0) {
    reject("poisson-tweedie", "a must be in (-inf, 1] (got " + fmt_value(a) + ")");
  }
  if (!(b > 0.0) || !std::isfinite(b)) {
    reject("poisson-tweedie", "b must be in (0, inf) (got " + fmt_value(b) + ")");
  }
  if (a <= 0.0) {
    if (!(c >= 0.0 && c < 1.0)) {
      reject("poisson-tweedie",
             "c must be in [0, 1) when a <= 0 (got " + fmt_value(c) + ")");
    }
  } else if (!(c >= 0.0 && c <= 1.0)) {
    reject("poisson-tweedie",
           "c must be in [0, 1] when a in (0, 1] (got " + fmt_value(c) + ")");
  }
  return Distribution(Family::PoissonTweedie, TweedieParams{a, b, c});
}

Distribution Distribution::finite_support(std::int64_t offset,
                                          std::vector<double> weights) {
  if (weights.empty()) reject("custom", "weights must be non-empty");
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      reject("custom", "weights must be finite and non-negative (got " +
                           fmt_value(w) + ")");
    }
  }
  auto shared = std::make_shared<const std::vector<double>>(weights);
  const auto term_sum = [shared, offset](double t, int power) {
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < shared->size(); ++k) {
      const double x = static_cast<double>(offset + static_cast<std::int64_t>(k));
      Complex term = (*shared)[k] * std::polar(1.0, t * x);
      if (power == 1) term *= kI * x;
      if (power == 2) term *= -x * x;
      acc += term;
    }
    return acc;
  };
  CfTriple triple{
      [term_sum](double t) { return term_sum(t, 0); },
      [term_sum](double t) { return term_sum(t, 1); },
      [term_sum](double t) { return term_sum(t, 2); },
  };
  CustomOptions options;
  options.finite_difference_fallback = false;
  options.support_min = offset;
  options.support_max = offset + static_cast<std::int64_t>(weights.size()) - 1;
  options.pf = [shared, offset](std::int64_t x) {
    if (x < offset || x - offset >= static_cast<std::int64_t>(shared->size())) {
      return 0.0;
    }
    return (*shared)[static_cast<std::size_t>(x - offset)];
  };
  check_custom(triple);

  auto model = std::make_shared<CustomModel>();
  model->triple = std::move(triple);
  model->options = std::move(options);
  model->weights = std::make_pair(offset, std::move(weights));
  return Distribution(Family::Custom, std::shared_ptr<const CustomModel>(model));
}

Distribution Distribution::custom(CfTriple triple, CustomOptions options) {
  check_custom(triple);
  auto model = std::make_shared<CustomModel>();
  if (!triple.dphi || !triple.d2phi) {
    if (options.finite_difference_fallback) {
      CfTriple fd = finite_difference_triple(triple.phi);
      if (!triple.dphi) triple.dphi = fd.dphi;
      if (!triple.d2phi) triple.d2phi = fd.d2phi;
      model->approximate = true;
    } else {
      model->missing_derivatives = true;
    }
  }
  model->triple = std::move(triple);
  model->options = std::move(options);
  return Distribution(Family::Custom, std::shared_ptr<const CustomModel>(model));
}

std::vector<std::pair<std::string, double>> Distribution::parameters() const {
  return std::visit(
      Overloaded{
          [](const PoissonParams& p) -> std::vector<std::pair<std::string, double>> {
            return {{"lambda", p.lambda}};
          },
          [](const BinomialParams& p) -> std::vector<std::pair<std::string, double>> {
            return {{"n", static_cast<double>(p.n)}, {"p", p.p}};
          },
          [](const NegBinomialParams& p) -> std::vector<std::pair<std::string, double>> {
            return {{"r", p.r}, {"q", p.q}};
          },
          [](const StableParams& p) -> std::vector<std::pair<std::string, double>> {
            return {{"a", p.a}, {"b", p.b}};
          },
          [](const TweedieParams& p) -> std::vector<std::pair<std::string, double>> {
            return {{"a", p.a}, {"b", p.b}, {"c", p.c}};
          },
          [](const std::shared_ptr<const CustomModel>& m)
              -> std::vector<std::pair<std::string, double>> {
            if (m->weights) return {{"offset", static_cast<double>(m->weights->first)}};
            return {};
          },
      },
      params_);
}

std::string Distribution::describe() const {
  std::ostringstream os;
  os << name() << "(";
  bool first = true;
  for (const auto& [key, value] : parameters()) {
    if (!first) os << ", ";
    first = false;
    os << key << "=" << fmt_value(value);
  }
  if (auto w = finite_support_weights()) {
    if (!first) os << ", ";
    os << "weights=[";
    for (std::size_t i = 0; i < w->second.size(); ++i) {
      os << (i ? "," : "") << fmt_value(w->second[i]);
    }
    os << "]";
  }
  os << ")";
  return os.str();
}

Complex Distribution::cf(double t) const {
  return std::visit(
      Overloaded{
          [t](const PoissonParams& p) {
            return std::exp(p.lambda * (std::polar(1.0, t) - 1.0));
          },
          [t](const BinomialParams& p) {
            const Complex w = (1.0 - p.p) + p.p * std::polar(1.0, t);
            return principal_pow(w, static_cast<double>(p.n));
          },
          [t](const NegBinomialParams& p) {
            const Complex u = 1.0 - (1.0 - p.q) * std::polar(1.0, t);
            return std::exp(p.r * (std::log(p.q) - std::log(u)));
          },
          [t](const StableParams& p) { return tweedie_cf(p.a, p.b, 1.0, t); },
          [t](const TweedieParams& p) { return tweedie_cf(p.a, p.b, p.c, t); },
          [t](const std::shared_ptr<const CustomModel>& m) { return m->triple.phi(t); },
      },
      params_);
}

CfDerivatives Distribution::cf_derivs(double t) const {
  return std::visit(
      Overloaded{
          [t](const PoissonParams& p) {
            const Complex e = std::polar(1.0, t);
            const Complex phi = std::exp(p.lambda * (e - 1.0));
            return from_log_derivs(phi, kI * p.lambda * e, -p.lambda * e);
          },
          [t](const BinomialParams& p) {
            const Complex e = std::polar(1.0, t);
            const Complex w = (1.0 - p.p) + p.p * e;
            const double n = static_cast<double>(p.n);
            const Complex w_nm1 = principal_pow(w, n - 1.0);
            CfDerivatives d;
            d.first = n * kI * p.p * e * w_nm1;
            d.second = -n * p.p * e * w_nm1;
            if (p.n >= 2) {
              d.second -= n * (n - 1.0) * p.p * p.p * e * e * principal_pow(w, n - 2.0);
            }
            return d;
          },
          [t](const NegBinomialParams& p) {
            const double s = 1.0 - p.q;
            const Complex e = std::polar(1.0, t);
            const Complex u = 1.0 - s * e;
            const Complex phi = std::exp(p.r * (std::log(p.q) - std::log(u)));
            return from_log_derivs(phi, kI * p.r * s * e / u, -p.r * s * e / (u * u));
          },
          [t](const StableParams& p) { return tweedie_derivs(p.a, p.b, 1.0, t); },
          [t](const TweedieParams& p) { return tweedie_derivs(p.a, p.b, p.c, t); },
          [t](const std::shared_ptr<const CustomModel>& m) {
            if (m->missing_derivatives) {
              throw MissingDerivatives(
                  "custom distribution has no derivatives and the "
                  "finite-difference fallback is disabled");
            }
            return CfDerivatives{m->triple.dphi(t), m->triple.d2phi(t)};
          },
      },
      params_);
}

bool Distribution::derivatives_approximate() const {
  if (const auto* m = std::get_if<std::shared_ptr<const CustomModel>>(&params_)) {
    return (*m)->approximate;
  }
  return false;
}

bool Distribution::has_closed_pf() const {
  switch (family_) {
    case Family::Poisson:
    case Family::Binomial:
    case Family::NegativeBinomial:
      return true;
    case Family::DiscreteStable:
    case Family::PoissonTweedie:
      return false;
    case Family::Custom:
      return static_cast<bool>(
          std::get<std::shared_ptr<const CustomModel>>(params_)->options.pf);
  }
  return false;
}

std::optional<double> Distribution::pf_closed(std::int64_t x) const {
  return std::visit(
      Overloaded{
          [x](const PoissonParams& p) -> std::optional<double> {
            if (x < 0) return 0.0;
            const double xd = static_cast<double>(x);
            return std::exp(xd * std::log(p.lambda) - p.lambda - std::lgamma(xd + 1.0));
          },
          [x](const BinomialParams& p) -> std::optional<double> {
            if (x < 0 || x > p.n) return 0.0;
            const double n = static_cast<double>(p.n);
            const double xd = static_cast<double>(x);
            return std::exp(std::lgamma(n + 1.0) - std::lgamma(xd + 1.0) -
                            std::lgamma(n - xd + 1.0) + xd * std::log(p.p) +
                            (n - xd) * std::log1p(-p.p));
          },
          [x](const NegBinomialParams& p) -> std::optional<double> {
            if (x < 0) return 0.0;
            if (p.q == 1.0) return x == 0 ? 1.0 : 0.0;
            const double xd = static_cast<double>(x);
            return std::exp(std::lgamma(p.r + xd) - std::lgamma(p.r) -
                            std::lgamma(xd + 1.0) + p.r * std::log(p.q) +
                            xd * std::log1p(-p.q));
          },
          [](const StableParams&) -> std::optional<double> { return std::nullopt; },
          [](const TweedieParams&) -> std::optional<double> { return std::nullopt; },
          [x](const std::shared_ptr<const CustomModel>& m) -> std::optional<double> {
            if (!m->options.pf) return std::nullopt;
            return m->options.pf(x);
          },
      },
      params_);
}

bool Distribution::square_integrable() const {
  return std::visit(
      Overloaded{
          [](const StableParams& p) { return p.a == 1.0; },
          [](const TweedieParams& p) { return p.c < 1.0; },
          [](const std::shared_ptr<const CustomModel>& m) {
            return m->options.square_integrable;
          },
          [](const auto&) { return true; },
      },
      params_);
}

Moments Distribution::moments() const {
  if (!square_integrable()) {
    throw InvalidParameters(describe() + ": not square-integrable (E[X^2] = inf)");
  }
  const CfDerivatives d = cf_derivs(0.0);
  double mean = d.first.imag();
  double second = -d.second.real();
  // Real-valued up to roundoff; anything bigger indicates a bad c.f.
  if (std::abs(d.first.real()) > 1e-10 * std::max(1.0, std::abs(mean)) ||
      std::abs(d.second.imag()) > 1e-10 * std::max(1.0, std::abs(second))) {
    if (!derivatives_approximate()) {
      throw ConsistencyError(describe() + ": phi'(0) / phi''(0) have unexpected components");
    }
  }
  return {mean, second};
}

std::optional<std::int64_t> Distribution::support_min() const {
  if (const auto* m = std::get_if<std::shared_ptr<const CustomModel>>(&params_)) {
    return (*m)->options.support_min;
  }
  return 0;
}

std::optional<std::int64_t> Distribution::support_max() const {
  if (const auto* b = std::get_if<BinomialParams>(&params_)) return b->n;
  if (const auto* m = std::get_if<std::shared_ptr<const CustomModel>>(&params_)) {
    return (*m)->options.support_max;
  }
  if (const auto* t = std::get_if<TweedieParams>(&params_); t && t->c == 0.0) {
    return 0;
  }
  if (const auto* nb = std::get_if<NegBinomialParams>(&params_); nb && nb->q == 1.0) {
    return 0;
  }
  return std::nullopt;
}

std::optional<std::pair<std::int64_t, std::vector<double>>>
Distribution::finite_support_weights() const {
  if (const auto* m = std::get_if<std::shared_ptr<const CustomModel>>(&params_)) {
    return (*m)->weights;
  }
  return std::nullopt;
}

}  // namespace cfsampler
