#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfsampler/cli.hpp"
#include "cfsampler/distribution_json.hpp"
#include "cfsampler/envelope.hpp"
#include "cfsampler/errors.hpp"
#include "cfsampler/gof.hpp"
#include "cfsampler/sampler.hpp"
#include "cfsampler/tables.hpp"

namespace cfsampler::cli {
namespace {

struct Config {
  std::string dist;
  std::size_t n = 1;
  std::string seed = std::to_string(kDefaultSeed);
  std::string m_rule = "star";
  std::string format = "csv";
  double tol = kDefaultPfTolerance;
  std::string family;
  std::string grid = "paper";
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string read_argument(const std::string& value) {
  if (value.empty() || value.front() != '@') return value;
  std::ifstream in(value.substr(1));
  if (!in) throw UsageError("cannot read " + value.substr(1));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t parse_seed(const std::string& text) {
  if (text == "random") {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw UsageError("--seed must be an unsigned 64-bit integer or 'random'");
  }
  return v;
}

AnchorRule parse_rule(const std::string& text) {
  if (text == "star") return AnchorRule::star();
  if (text == "mean") return AnchorRule::mean();
  std::int64_t m = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), m);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw UsageError("--m-rule must be 'star', 'mean' or an integer");
  }
  return AnchorRule::fixed(m);
}

void check_common(const Config& cfg) {
  if (cfg.n < 1) throw UsageError("-n must be >= 1");
  if (!(cfg.tol >= 1e-14 && cfg.tol <= 1e-6)) throw UsageError("--tol must lie in [1e-14, 1e-6]");
  if (cfg.format != "csv" && cfg.format != "json") throw UsageError("--format must be csv or json");
}

nlohmann::json envelope_json(const Envelope& env) {
  return {{"m", env.m},         {"c", env.c},         {"k", env.k},
          {"sigma", env.sigma}, {"alpha", env.alpha}, {"A", env.big_a}};
}

int cmd_sample(const Config& cfg, std::ostream& out) {
  check_common(cfg);
  const Distribution dist = parse_distribution(read_argument(cfg.dist));
  const AnchorRule rule = parse_rule(cfg.m_rule);
  Rng rng(parse_seed(cfg.seed));
  const UniversalSampler sampler(dist, rule, cfg.tol);
  const SampleReport report = sampler.sample(rng, cfg.n);
  const Envelope& env = sampler.envelope();

  if (cfg.format == "json") {
    nlohmann::json j;
    j["samples"] = report.samples;
    j["stats"] = {{"iterations", report.iterations},
                  {"guard_rejections", report.guard_rejections},
                  {"acceptance_rate", report.acceptance_rate()},
                  {"envelope", envelope_json(env)}};
    out << j.dump() << "\n";
  } else {
    std::string buffer;
    for (std::int64_t s : report.samples) {
      buffer += std::to_string(s);
      buffer += '\n';
    }
    out << buffer;
    out << "# iterations=" << report.iterations
        << ",guard_rejections=" << report.guard_rejections
        << ",acceptance_rate=" << format_double(report.acceptance_rate())
        << ",m=" << env.m << ",c=" << format_double(env.c) << ",k=" << format_double(env.k)
        << ",sigma=" << format_double(env.sigma) << ",alpha=" << format_double(env.alpha)
        << ",A=" << format_double(env.big_a) << "\n";
  }
  return kOk;
}

double require_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw UsageError(std::string("grid entry needs numeric \"") + key + "\"");
  }
  return j[key].get<double>();
}

int cmd_table(const Config& cfg, std::ostream& out) {
  check_common(cfg);
  std::string family = cfg.family;
  for (char& ch : family) ch = ch == '_' ? '-' : static_cast<char>(std::tolower(ch));
  std::optional<nlohmann::json> grid;
  if (cfg.grid != "paper") {
    if (cfg.grid.empty() || cfg.grid.front() != '@') {
      throw UsageError("--grid must be 'paper' or @file");
    }
    try {
      grid = nlohmann::json::parse(read_argument(cfg.grid));
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError(std::string("grid file: ") + e.what());
    }
    if (!grid->is_array() || grid->empty()) throw UsageError("grid file must hold a non-empty JSON array");
  }
  TableOptions options;
  options.tol = cfg.tol;

  ComplexityTable table{Family::Poisson, {}, {}};
  if (family == "poisson") {
    std::vector<double> lambdas = published_poisson_lambdas();
    if (grid) {
      lambdas.clear();
      for (const auto& e : *grid) lambdas.push_back(require_number(e, "lambda"));
    }
    table = table_poisson(lambdas, options);
  } else if (family == "binomial") {
    std::vector<BinomialCell> cells = published_binomial_grid();
    if (grid) {
      cells.clear();
      for (const auto& e : *grid) {
        BinomialCell cell{std::nullopt, require_number(e, "p")};
        if (!(e.contains("n") && e["n"].is_string() && e["n"].get<std::string>() == "inf")) {
          const double n = require_number(e, "n");
          if (std::floor(n) != n) throw UsageError("grid entry: n must be an integer or \"inf\"");
          cell.n = static_cast<std::int64_t>(n);
        }
        cells.push_back(cell);
      }
    }
    table = table_binomial(cells, options);
  } else if (family == "poisson-tweedie") {
    std::vector<TweedieCell> cells = published_tweedie_grid();
    if (grid) {
      cells.clear();
      for (const auto& e : *grid) {
        cells.push_back({require_number(e, "a"), require_number(e, "b"), require_number(e, "c")});
      }
    }
    table = table_poisson_tweedie(cells, options);
  } else {
    throw UsageError("--family must be poisson, binomial or poisson-tweedie");
  }

  if (cfg.format == "json") {
    out << table_to_json(table).dump() << "\n";
  } else {
    out << table_to_csv(table);
  }
  return kOk;
}

int cmd_envelope(const Config& cfg, std::ostream& out) {
  check_common(cfg);
  const Distribution dist = parse_distribution(read_argument(cfg.dist));
  const QuadratureOptions quad = envelope_quadrature(cfg.tol);
  const std::int64_t m_star = select_m_star(dist, quad);
  const std::int64_t m_mean = select_m_mean(dist);
  const double c = std::min(compute_c(dist, quad), 1.0);
  const Envelope star = envelope_from_constants(m_star, c, compute_k(dist, double(m_star), quad));
  const Envelope mean = envelope_from_constants(m_mean, c, compute_k(dist, double(m_mean), quad));
  const AnchorRule rule = parse_rule(cfg.m_rule);
  const std::int64_t m_sel = rule.kind == AnchorKind::Star   ? m_star
                             : rule.kind == AnchorKind::Mean ? m_mean
                                                             : rule.m;
  const Envelope selected =
      m_sel == m_star ? star
      : m_sel == m_mean ? mean
                        : envelope_from_constants(m_sel, c, compute_k(dist, double(m_sel), quad));
  const PfEvaluator pf(dist, cfg.tol);

  std::vector<std::pair<std::string, nlohmann::json>> fields = {
      {"distribution", dist.describe()},
      {"strategy", std::string(strategy_name(pf.strategy()))},
      {"m_star", m_star},
      {"m_mean", m_mean},
      {"c", c},
      {"k_star", star.k},
      {"k_mean", mean.k},
      {"A_star", star.big_a},
      {"A_mean", mean.big_a},
      {"m", selected.m},
      {"k", selected.k},
      {"sigma", selected.sigma},
      {"alpha", selected.alpha},
      {"A", selected.big_a},
  };
  if (selected.degenerate) {
    fields.emplace_back("note", "degenerate distribution (point mass): every proposal "
                                "near m is accepted; a sampler is unnecessary");
  }
  if (dist.derivatives_approximate()) {
    fields.emplace_back("note_derivatives", "finite-difference derivatives (approximate)");
  }
  if (cfg.format == "json") {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : fields) j[k] = v;
    out << j.dump() << "\n";
  } else {
    out << "key,value\n";
    for (const auto& [k, v] : fields) {
      out << k << ",";
      if (v.is_string()) out << '"' << v.get<std::string>() << '"';
      else if (v.is_number_float()) out << format_double(v.get<double>());
      else out << v.dump();
      out << "\n";
    }
  }
  return kOk;
}

int cmd_validate(const Config& cfg, std::ostream& out) {
  check_common(cfg);
  const Distribution dist = parse_distribution(read_argument(cfg.dist));
  const AnchorRule rule = parse_rule(cfg.m_rule);
  bool all_ok = true;
  auto report_check = [&](const std::string& name, bool ok, const std::string& detail) {
    out << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
    all_ok = all_ok && ok;
  };

  // 1. Characteristic-function sanity.
  {
    double worst_mag = 0.0;
    double worst_conj = 0.0;
    for (int i = 0; i <= 512; ++i) {
      const double t = -std::numbers::pi + 2.0 * std::numbers::pi * i / 512.0;
      const Complex v = dist.cf(t);
      worst_mag = std::max(worst_mag, std::abs(v));
      worst_conj = std::max(worst_conj, std::abs(dist.cf(-t) - std::conj(v)));
    }
    const double at0 = std::abs(dist.cf(0.0) - 1.0);
    report_check("cf", at0 < 1e-12 && worst_mag <= 1.0 + 1e-12 && worst_conj < 1e-12,
                 "|phi(0)-1|=" + format_double(at0) + " max|phi|=" + format_double(worst_mag) +
                     " max|phi(-t)-conj(phi(t))|=" + format_double(worst_conj));
  }

  const UniversalSampler sampler(dist, rule, cfg.tol);
  const Envelope& env = sampler.envelope();
  const PfEvaluator& pf = sampler.pf();
  out << "INFO strategy=" << strategy_name(pf.strategy()) << " m=" << env.m
      << " A=" << format_double(env.big_a) << "\n";
  if (env.degenerate) out << "INFO degenerate distribution (point mass)\n";

  // 2. Normalisation over mean +- 40 sd.
  {
    const Moments mom = dist.moments();
    const double sd = std::sqrt(std::max(0.0, mom.variance()));
    std::int64_t lo = static_cast<std::int64_t>(std::floor(mom.mean - 40.0 * sd)) - 1;
    std::int64_t hi = static_cast<std::int64_t>(std::ceil(mom.mean + 40.0 * sd)) + 1;
    if (auto s = dist.support_min()) lo = std::max(lo, *s);
    if (auto s = dist.support_max()) hi = std::min(hi, *s);
    double total = 0.0;
    for (std::int64_t x = lo; x <= hi; ++x) total += pf(x);
    const double limit = pf.strategy() == PfStrategy::ClosedForm ? 1e-9 : 1e-7;
    report_check("normalisation", std::fabs(total - 1.0) < limit,
                 "sum p(x) over [" + std::to_string(lo) + ", " + std::to_string(hi) +
                     "] = " + format_double(total));
  }

  // 3. Envelope domination over m +- 12 sigma.
  {
    const auto span = static_cast<std::int64_t>(std::ceil(12.0 * env.sigma));
    double worst = -1.0;
    std::int64_t worst_x = env.m;
    for (std::int64_t x = env.m - span; x <= env.m + span; ++x) {
      const double excess = pf(x) - hat(env, x);
      if (excess > worst) {
        worst = excess;
        worst_x = x;
      }
    }
    report_check("domination", worst <= 1e-12,
                 "max p(x) - h(x) = " + format_double(worst) + " at x=" + std::to_string(worst_x));
  }

  // 4./5. Goodness of fit and acceptance rate.
  Rng rng(parse_seed(cfg.seed));
  const std::size_t n = std::max<std::size_t>(cfg.n, kMinGofSamples);
  const SampleReport report = sampler.sample(rng, n);
  try {
    const GofResult gof = gof_chi_square(report.samples, pf);
    report_check("goodness-of-fit", gof.p_value > 1e-3,
                 "chi2=" + format_double(gof.statistic) + " dof=" + std::to_string(gof.dof) +
                     " p=" + format_double(gof.p_value));
  } catch (const InsufficientData& e) {
    // A point mass leaves a single cell; nothing to test.
    out << "SKIP goodness-of-fit: " << e.what() << "\n";
  }
  {
    const double expected = std::min(1.0, 1.0 / env.big_a);
    const double se = std::sqrt(expected * (1.0 - expected) / double(report.iterations));
    const double rate = report.acceptance_rate();
    report_check("acceptance-rate", std::fabs(rate - expected) <= 3.0 * se + 1e-12,
                 "observed " + format_double(rate) + " vs 1/A = " + format_double(expected) +
                     " (3 s.e. = " + format_double(3.0 * se) + ")");
  }
  return all_ok ? kOk : kCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Universal rejection sampler for integer-valued distributions"};
  app.require_subcommand(1);
  Config cfg;

  auto add_dist = [&](CLI::App* sub) {
    sub->add_option("--dist", cfg.dist, "Distribution JSON or @file")->required();
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.tol, "Quadrature tolerance");
    sub->add_option("--format", cfg.format, "csv or json");
  };

  CLI::App* sample = app.add_subcommand("sample", "Draw variates");
  add_dist(sample);
  add_common(sample);
  sample->add_option("-n", cfg.n, "Number of variates");
  sample->add_option("--seed", cfg.seed, "u64 seed or 'random'");
  sample->add_option("--m-rule", cfg.m_rule, "star, mean or an integer anchor");

  CLI::App* table = app.add_subcommand("table", "Expected-complexity table");
  table->add_option("--family", cfg.family, "poisson, binomial or poisson-tweedie")->required();
  table->add_option("--grid", cfg.grid, "paper or @file");
  add_common(table);

  CLI::App* validate = app.add_subcommand("validate", "Run self-checks for a distribution");
  add_dist(validate);
  add_common(validate);
  cfg.n = 100000;
  validate->add_option("-n", cfg.n, "Number of variates for the fit checks");
  validate->add_option("--seed", cfg.seed, "u64 seed or 'random'");
  validate->add_option("--m-rule", cfg.m_rule, "star, mean or an integer anchor");

  CLI::App* envelope = app.add_subcommand("envelope", "Print the sampler set-up");
  add_dist(envelope);
  add_common(envelope);
  envelope->add_option("--m-rule", cfg.m_rule, "star, mean or an integer anchor");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInvalidInput;
  }
  if (sample->parsed() && cfg.n == 100000 && sample->count("-n") == 0) cfg.n = 1;

  try {
    if (sample->parsed()) return cmd_sample(cfg, out);
    if (table->parsed()) return cmd_table(cfg, out);
    if (validate->parsed()) return cmd_validate(cfg, out);
    if (envelope->parsed()) return cmd_envelope(cfg, out);
  } catch (const InvalidParameters& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const IterationLimitError& e) {
    err << "error: " << e.what() << "\n";
    return kIterationLimit;
  } catch (const ConsistencyError& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return kInvalidInput;
}

}  // namespace cfsampler::cli
