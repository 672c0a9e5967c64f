#pragma once

// Expected-complexity tables for the Poisson, Binomial and Poisson-Tweedie
// families: A at the k-minimising anchor m* and at the rounded mean m**.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cfsampler/distribution.hpp"

namespace cfsampler {

struct ComplexityRow {
  std::vector<std::pair<std::string, double>> params;
  /// Empty for limit rows (n = infinity).
  std::optional<std::int64_t> m_star;
  std::optional<std::int64_t> m_mean;
  double a_star = 0.0;
  double a_mean = 0.0;
  /// Published complexity of the family-specific competitor algorithm,
  /// reproduced as a reference constant (not computed here).
  std::optional<double> a_reference;
  bool limit = false;

  bool anchors_differ() const { return m_star != m_mean; }
};

struct ComplexityTable {
  Family family;
  std::vector<std::string> param_names;
  std::vector<ComplexityRow> rows;
};

struct BinomialCell {
  std::optional<std::int64_t> n;  // empty: n -> infinity
  double p;
};

struct TweedieCell {
  double a;
  double b;
  double c;
};

struct TableOptions {
  double tol = 1e-10;
  /// 0: CFSAMPLER_THREADS if set, else hardware concurrency.
  unsigned threads = 0;
};

/// (512 / (e pi^3))^{1/4}: the complexity of the same envelope for a Normal
/// target, the large-variance limit of every table.
double normal_limit_complexity();

std::vector<double> published_poisson_lambdas();
std::vector<BinomialCell> published_binomial_grid();
std::vector<TweedieCell> published_tweedie_grid();

/// Ahrens-Dieter Poisson ratio-of-uniforms complexity as published.
std::optional<double> published_ahrens_dieter(double lambda);
/// Stadlober Binomial ratio-of-uniforms complexity as published.
std::optional<double> published_stadlober(std::optional<std::int64_t> n, double p);

ComplexityTable table_poisson(std::span<const double> lambdas, const TableOptions& options = {});
ComplexityTable table_binomial(std::span<const BinomialCell> grid,
                               const TableOptions& options = {});
ComplexityTable table_poisson_tweedie(std::span<const TweedieCell> grid,
                                      const TableOptions& options = {});

/// Columns: params..., m_star, m_mean, A_star, A_mean, A_reference.
std::string table_to_csv(const ComplexityTable& table);
nlohmann::json table_to_json(const ComplexityTable& table);

/// Shortest round-trip decimal form.
std::string format_double(double value);

unsigned table_threads(unsigned requested);

}  // namespace cfsampler
