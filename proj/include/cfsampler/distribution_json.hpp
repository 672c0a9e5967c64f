#pragma once

#include <string_view>

#include <json.hpp>

#include "cfsampler/distribution.hpp"

namespace cfsampler {

/// Parses {"family": "...", "params": {...}}. Family names are
/// case-insensitive; '_' and '-' are interchangeable. Parameter names:
/// poisson {lambda}; binomial {n, p}; negative-binomial {r, q};
/// discrete-stable {a, b}; poisson-tweedie {a, b, c}. A custom finite-support
/// distribution is {"family": "custom", "weights": [...],
/// "params": {"offset": k}} (offset defaults to 0).
Distribution distribution_from_json(const nlohmann::json& j);
Distribution parse_distribution(std::string_view text);

nlohmann::json distribution_to_json(const Distribution& dist);

}  // namespace cfsampler
