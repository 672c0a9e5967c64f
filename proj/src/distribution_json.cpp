#include "cfsampler/distribution_json.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <string>

#include "cfsampler/errors.hpp"

namespace cfsampler {
namespace {

std::string normalize_family(std::string name) {
  std::string out;
  for (char ch : name) {
    if (ch == '_' || ch == ' ') ch = '-';
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  if (out == "negativebinomial" || out == "negbinomial" || out == "nb") {
    return "negative-binomial";
  }
  if (out == "poissontweedie") return "poisson-tweedie";
  if (out == "discretestable") return "discrete-stable";
  return out;
}

class ParamReader {
 public:
  ParamReader(std::string family, const nlohmann::json& params)
      : family_(std::move(family)), params_(params) {
    if (!params_.is_object()) {
      throw InvalidParameters(family_ + ": \"params\" must be an object");
    }
  }

  double number(const std::string& key) {
    seen_.insert(key);
    auto it = params_.find(key);
    if (it == params_.end()) {
      throw InvalidParameters(family_ + ": missing parameter \"" + key + "\"");
    }
    if (!it->is_number()) {
      throw InvalidParameters(family_ + ": parameter \"" + key + "\" must be a number");
    }
    return it->get<double>();
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!params_.contains(key)) {
      seen_.insert(key);
      return std::nullopt;
    }
    return number(key);
  }

  std::int64_t integer(const std::string& key) {
    const double v = number(key);
    if (!std::isfinite(v) || std::floor(v) != v || std::abs(v) > 9.0e15) {
      throw InvalidParameters(family_ + ": parameter \"" + key + "\" must be an integer");
    }
    return static_cast<std::int64_t>(v);
  }

  void finish() const {
    for (const auto& item : params_.items()) {
      if (!seen_.count(item.key())) {
        throw InvalidParameters(family_ + ": unknown parameter \"" + item.key() + "\"");
      }
    }
  }

 private:
  std::string family_;
  const nlohmann::json& params_;
  std::set<std::string> seen_;
};

}  // namespace

Distribution distribution_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidParameters("distribution must be a JSON object");
  if (!j.contains("family") || !j["family"].is_string()) {
    throw InvalidParameters("distribution needs a string \"family\"");
  }
  const std::string family = normalize_family(j["family"].get<std::string>());
  static const nlohmann::json kEmpty = nlohmann::json::object();
  const nlohmann::json& params = j.contains("params") ? j["params"] : kEmpty;
  ParamReader reader(family, params);

  auto build = [&]() -> Distribution {
    if (family == "poisson") return Distribution::poisson(reader.number("lambda"));
    if (family == "binomial") {
      const std::int64_t n = reader.integer("n");
      return Distribution::binomial(n, reader.number("p"));
    }
    if (family == "negative-binomial") {
      const double r = reader.number("r");
      return Distribution::negative_binomial(r, reader.number("q"));
    }
    if (family == "discrete-stable") {
      const double a = reader.number("a");
      return Distribution::discrete_stable(a, reader.number("b"));
    }
    if (family == "poisson-tweedie") {
      const double a = reader.number("a");
      const double b = reader.number("b");
      return Distribution::poisson_tweedie(a, b, reader.number("c"));
    }
    if (family == "custom") {
      if (!j.contains("weights") || !j["weights"].is_array()) {
        throw InvalidParameters("custom: needs a \"weights\" array");
      }
      std::vector<double> weights;
      for (const auto& w : j["weights"]) {
        if (!w.is_number()) throw InvalidParameters("custom: weights must be numbers");
        weights.push_back(w.get<double>());
      }
      std::int64_t offset = 0;
      if (params.contains("offset")) offset = reader.integer("offset");
      return Distribution::finite_support(offset, std::move(weights));
    }
    throw InvalidParameters("unknown family \"" + family + "\"");
  };
  Distribution dist = build();
  reader.finish();
  return dist;
}

Distribution parse_distribution(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidParameters(std::string("distribution JSON: ") + e.what());
  }
  return distribution_from_json(j);
}

nlohmann::json distribution_to_json(const Distribution& dist) {
  nlohmann::json j;
  j["family"] = std::string(dist.name());
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [key, value] : dist.parameters()) {
    if (key == "n" || key == "offset") {
      params[key] = static_cast<std::int64_t>(value);
    } else {
      params[key] = value;
    }
  }
  j["params"] = params;
  if (auto w = dist.finite_support_weights()) j["weights"] = w->second;
  return j;
}

}  // namespace cfsampler
