#include "cfsampler/tables.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "cfsampler/envelope.hpp"
#include "cfsampler/errors.hpp"

namespace cfsampler {
namespace {

constexpr double kLimitReference = 1.37;

struct PublishedStadlober {
  std::int64_t n;
  double p;
  double value;
};

// Stadlober (1989, 1990) as printed, n = 10 .. 400.
constexpr PublishedStadlober kStadlober[] = {
    {10, 0.1, 2.21}, {20, 0.1, 1.86}, {40, 0.1, 1.71}, {100, 0.1, 1.60}, {200, 0.1, 1.52}, {400, 0.1, 1.48},
    {10, 0.2, 1.80}, {20, 0.2, 1.73}, {40, 0.2, 1.62}, {100, 0.2, 1.52}, {200, 0.2, 1.47}, {400, 0.2, 1.44},
    {10, 0.3, 1.80}, {20, 0.3, 1.64}, {40, 0.3, 1.57}, {100, 0.3, 1.49}, {200, 0.3, 1.46}, {400, 0.3, 1.43},
    {10, 0.4, 1.74}, {20, 0.4, 1.62}, {40, 0.4, 1.54}, {100, 0.4, 1.47}, {200, 0.4, 1.44}, {400, 0.4, 1.42},
    {10, 0.5, 1.70}, {20, 0.5, 1.60}, {40, 0.5, 1.52}, {100, 0.5, 1.47}, {200, 0.5, 1.44}, {400, 0.5, 1.42},
};

// Ahrens-Dieter (1991) with Stadlober's tuning, as printed.
constexpr std::pair<double, double> kAhrensDieter[] = {
    {1, 2.21}, {2, 1.91}, {5, 1.70}, {10, 1.60}, {20, 1.53}, {50, 1.46}, {100, 1.43},
};

bool same(double a, double b) { return std::fabs(a - b) < 1e-12; }

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  threads = static_cast<unsigned>(std::min<std::size_t>(std::max(threads, 1u), count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
}

ComplexityRow evaluate(const Distribution& dist, const TableOptions& options) {
  const QuadratureOptions quad = envelope_quadrature(options.tol);
  const double c = std::min(compute_c(dist, quad), 1.0);
  ComplexityRow row;
  row.params = dist.parameters();
  row.m_star = select_m_star(dist, quad);
  row.m_mean = select_m_mean(dist);
  const double k_star = compute_k(dist, static_cast<double>(*row.m_star), quad);
  row.a_star = envelope_from_constants(*row.m_star, c, k_star).big_a;
  if (*row.m_mean == *row.m_star) {
    row.a_mean = row.a_star;
  } else {
    const double k_mean = compute_k(dist, static_cast<double>(*row.m_mean), quad);
    row.a_mean = envelope_from_constants(*row.m_mean, c, k_mean).big_a;
  }
  return row;
}

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

}  // namespace

double normal_limit_complexity() {
  return std::pow(512.0 / (std::numbers::e * std::pow(std::numbers::pi, 3)), 0.25);
}

std::vector<double> published_poisson_lambdas() { return {1, 2, 5, 10, 20, 50, 100}; }

std::vector<BinomialCell> published_binomial_grid() {
  std::vector<BinomialCell> grid;
  for (double p : {0.1, 0.2, 0.3, 0.4, 0.5}) {
    for (std::int64_t n : {10, 20, 40, 100, 200, 400}) grid.push_back({n, p});
    grid.push_back({std::nullopt, p});
  }
  return grid;
}

std::vector<TweedieCell> published_tweedie_grid() {
  std::vector<TweedieCell> grid;
  for (double b : {1.0, 5.0}) {
    for (double a : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      for (double c : {0.1, 0.3, 0.5, 0.7, 0.9}) grid.push_back({a, b, c});
    }
  }
  return grid;
}

std::optional<double> published_ahrens_dieter(double lambda) {
  for (const auto& [l, v] : kAhrensDieter) {
    if (same(l, lambda)) return v;
  }
  if (std::isinf(lambda)) return kLimitReference;
  return std::nullopt;
}

std::optional<double> published_stadlober(std::optional<std::int64_t> n, double p) {
  for (const auto& entry : kStadlober) {
    if (!n) {
      if (same(entry.p, p)) return kLimitReference;
      continue;
    }
    if (entry.n == *n && same(entry.p, p)) return entry.value;
  }
  return std::nullopt;
}

unsigned table_threads(unsigned requested) {
  unsigned n = requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CFSAMPLER_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

ComplexityTable table_poisson(std::span<const double> lambdas, const TableOptions& options) {
  ComplexityTable table{Family::Poisson, {"lambda"}, {}};
  table.rows.resize(lambdas.size());
  for (double l : lambdas) (void)Distribution::poisson(l);  // validate up front
  parallel_for(lambdas.size(), table_threads(options.threads), [&](std::size_t i) {
    table.rows[i] = evaluate(Distribution::poisson(lambdas[i]), options);
    table.rows[i].a_reference = published_ahrens_dieter(lambdas[i]);
  });
  return table;
}

ComplexityTable table_binomial(std::span<const BinomialCell> grid, const TableOptions& options) {
  ComplexityTable table{Family::Binomial, {"n", "p"}, {}};
  table.rows.resize(grid.size());
  for (const auto& g : grid) {
    if (g.n) (void)Distribution::binomial(*g.n, g.p);
    else (void)Distribution::binomial(1, g.p);
  }
  parallel_for(grid.size(), table_threads(options.threads), [&](std::size_t i) {
    const BinomialCell& g = grid[i];
    ComplexityRow row;
    if (g.n) {
      row = evaluate(Distribution::binomial(*g.n, g.p), options);
    } else {
      row.params = {{"n", std::numeric_limits<double>::infinity()}, {"p", g.p}};
      row.a_star = row.a_mean = normal_limit_complexity();
      row.limit = true;
    }
    row.a_reference = published_stadlober(g.n, g.p);
    table.rows[i] = std::move(row);
  });
  return table;
}

ComplexityTable table_poisson_tweedie(std::span<const TweedieCell> grid,
                                      const TableOptions& options) {
  ComplexityTable table{Family::PoissonTweedie, {"a", "b", "c"}, {}};
  table.rows.resize(grid.size());
  for (const auto& g : grid) {
    const Distribution d = Distribution::poisson_tweedie(g.a, g.b, g.c);
    if (!d.square_integrable()) {
      throw InvalidParameters(d.describe() + ": table needs c < 1 (square-integrable)");
    }
  }
  parallel_for(grid.size(), table_threads(options.threads), [&](std::size_t i) {
    const TweedieCell& g = grid[i];
    table.rows[i] = evaluate(Distribution::poisson_tweedie(g.a, g.b, g.c), options);
  });
  return table;
}

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string table_to_csv(const ComplexityTable& table) {
  std::ostringstream os;
  for (const auto& name : table.param_names) os << name << ",";
  os << "m_star,m_mean,A_star,A_mean,A_reference\n";
  for (const auto& row : table.rows) {
    for (const auto& [name, value] : row.params) os << format_double(value) << ",";
    os << (row.m_star ? std::to_string(*row.m_star) : "") << ","
       << (row.m_mean ? std::to_string(*row.m_mean) : "") << ","
       << format_double(row.a_star) << "," << format_double(row.a_mean) << ","
       << cell(row.a_reference) << "\n";
  }
  return os.str();
}

nlohmann::json table_to_json(const ComplexityTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r;
    for (const auto& [name, value] : row.params) {
      if (std::isinf(value)) r[name] = "inf";
      else if (name == "n") r[name] = static_cast<std::int64_t>(value);
      else r[name] = value;
    }
    r["m_star"] = row.m_star ? nlohmann::json(*row.m_star) : nlohmann::json(nullptr);
    r["m_mean"] = row.m_mean ? nlohmann::json(*row.m_mean) : nlohmann::json(nullptr);
    r["A_star"] = row.a_star;
    r["A_mean"] = row.a_mean;
    r["A_reference"] = row.a_reference ? nlohmann::json(*row.a_reference) : nlohmann::json(nullptr);
    rows.push_back(std::move(r));
  }
  nlohmann::json columns = table.param_names;
  for (const char* c : {"m_star", "m_mean", "A_star", "A_mean", "A_reference"}) columns.push_back(c);
  return {{"family", std::string(family_name(table.family))},
          {"columns", columns},
          {"rows", rows}};
}

}  // namespace cfsampler
