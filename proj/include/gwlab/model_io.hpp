#pragma once

#include <string>

#include <json.hpp>

#include "gwlab/laws.hpp"
#include "gwlab/model.hpp"

namespace gwlab {

/// Two-type model file:
///
///   { "offspring_type1": <bivariate>, "offspring_type2": <bivariate>,
///     "immigration": <bivariate>, "allow_swap": true }
///
/// Univariate laws: {"kind": "poisson", "mean": m}, {"kind": "geometric", "success": p},
/// {"kind": "bernoulli", "p": p}, {"kind": "deterministic", "value": v},
/// {"kind": "table", "values": [...], "probs": [...]}.
/// Bivariate laws: {"kind": "independent", "first": <univariate>, "second": <univariate>},
/// {"kind": "bivariate_poisson", "common": c, "first_only": a, "second_only": b},
/// {"kind": "table", "outcomes": [[x1, x2], ...], "probs": [...]}.
/// Probabilities may be written as exact rationals, e.g. "1/3". Unknown keys are rejected.
ModelParams parse_model(const nlohmann::json& doc);
ModelParams load_model(const std::string& path);

UnivariateLaw parse_univariate(const nlohmann::json& j, const std::string& where);
BivariateLaw parse_bivariate(const nlohmann::json& j, const std::string& where);

/// Single-type model for the stationary law: {"offspring": <univariate>, "immigration": <univariate>}.
struct SingleTypeModel {
  UnivariateLaw offspring;
  UnivariateLaw immigration;
};
SingleTypeModel parse_single_type(const nlohmann::json& doc);

/// Reads a JSON file; throws ValidationError when unreadable or malformed.
nlohmann::json read_json_file(const std::string& path);

/// Parses "p" or "a/b" into a double.
double parse_probability(const nlohmann::json& j, const std::string& where);

nlohmann::json to_json(const UnivariateLaw& law);
nlohmann::json to_json(const BivariateLaw& law);
/// Laws, derived moments and case label, in the labels of the input.
nlohmann::json to_json(const ModelParams& params);

/// Built-in Poisson model for a case number 1..5.
ModelParams archetype_model(int case_number);

}  // namespace gwlab
