#include "gwlab/model_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "gwlab/error.hpp"

namespace gwlab {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected an object");
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ValidationError(where + ": unknown key \"" + it.key() + "\"");
}

const json& field(const json& j, const std::string& key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(where + ": missing key \"" + key + "\"");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ValidationError(where + ": expected a number");
  return j.get<double>();
}

std::int64_t integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ValidationError(where + ": expected an integer");
  return j.get<std::int64_t>();
}

std::string kind_of(const json& j, const std::string& where) {
  require_object(j, where);
  const json& k = field(j, "kind", where);
  if (!k.is_string()) throw ValidationError(where + ": \"kind\" must be a string");
  return k.get<std::string>();
}

std::vector<double> probability_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected an array of probabilities");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(parse_probability(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

json probability_json(const std::vector<double>& probs) {
  json a = json::array();
  for (double p : probs) a.push_back(p);
  return a;
}

json mat_json(const Mat2& m) { return json::array({json::array({m(0, 0), m(0, 1)}), json::array({m(1, 0), m(1, 1)})}); }

// Restore the input labelling of a matrix stored in swapped coordinates.
Mat2 unswap(const Mat2& m, bool swapped) {
  return swapped ? Mat2(m(1, 1), m(1, 0), m(0, 1), m(0, 0)) : m;
}

}  // namespace

double parse_probability(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw ValidationError(where + ": probability must be a number or \"a/b\"");
  const std::string s = j.get<std::string>();
  const auto slash = s.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    }
    const std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    const long long a = std::stoll(num, &used);
    if (used != num.size()) throw std::invalid_argument(s);
    const long long b = std::stoll(den, &used);
    if (used != den.size() || b <= 0) throw std::invalid_argument(s);
    return static_cast<double>(a) / static_cast<double>(b);
  } catch (const std::exception&) {
    throw ValidationError(where + ": cannot parse probability \"" + s + "\"");
  }
}

UnivariateLaw parse_univariate(const json& j, const std::string& where) {
  const std::string kind = kind_of(j, where);
  if (kind == "poisson") {
    reject_unknown(j, {"kind", "mean"}, where);
    return UnivariateLaw::poisson(number(field(j, "mean", where), where + ".mean"));
  }
  if (kind == "geometric") {
    reject_unknown(j, {"kind", "success"}, where);
    return UnivariateLaw::geometric(parse_probability(field(j, "success", where), where + ".success"));
  }
  if (kind == "bernoulli") {
    reject_unknown(j, {"kind", "p"}, where);
    return UnivariateLaw::bernoulli(parse_probability(field(j, "p", where), where + ".p"));
  }
  if (kind == "deterministic") {
    reject_unknown(j, {"kind", "value"}, where);
    return UnivariateLaw::deterministic(integer(field(j, "value", where), where + ".value"));
  }
  if (kind == "table") {
    reject_unknown(j, {"kind", "values", "probs"}, where);
    const json& vals = field(j, "values", where);
    if (!vals.is_array()) throw ValidationError(where + ".values: expected an array");
    std::vector<std::int64_t> values;
    for (const auto& v : vals) values.push_back(integer(v, where + ".values"));
    return UnivariateLaw::table(std::move(values), probability_list(field(j, "probs", where), where + ".probs"));
  }
  throw ValidationError(where + ": unknown univariate kind \"" + kind + "\"");
}

BivariateLaw parse_bivariate(const json& j, const std::string& where) {
  const std::string kind = kind_of(j, where);
  if (kind == "independent") {
    reject_unknown(j, {"kind", "first", "second"}, where);
    return BivariateLaw::independent(parse_univariate(field(j, "first", where), where + ".first"),
                                     parse_univariate(field(j, "second", where), where + ".second"));
  }
  if (kind == "bivariate_poisson") {
    reject_unknown(j, {"kind", "common", "first_only", "second_only"}, where);
    return BivariateLaw::bivariate_poisson(number(field(j, "common", where), where + ".common"),
                                           number(field(j, "first_only", where), where + ".first_only"),
                                           number(field(j, "second_only", where), where + ".second_only"));
  }
  if (kind == "table") {
    reject_unknown(j, {"kind", "outcomes", "probs"}, where);
    const json& outs = field(j, "outcomes", where);
    if (!outs.is_array()) throw ValidationError(where + ".outcomes: expected an array");
    std::vector<Population> outcomes;
    for (const auto& o : outs) {
      if (!o.is_array() || o.size() != 2)
        throw ValidationError(where + ".outcomes: each outcome must be [x1, x2]");
      outcomes.push_back({integer(o[0], where + ".outcomes"), integer(o[1], where + ".outcomes")});
    }
    return BivariateLaw::table(std::move(outcomes), probability_list(field(j, "probs", where), where + ".probs"));
  }
  throw ValidationError(where + ": unknown bivariate kind \"" + kind + "\"");
}

ModelParams parse_model(const json& doc) {
  require_object(doc, "model");
  reject_unknown(doc, {"offspring_type1", "offspring_type2", "immigration", "allow_swap"}, "model");
  bool allow_swap = true;
  if (auto it = doc.find("allow_swap"); it != doc.end()) {
    if (!it->is_boolean()) throw ValidationError("model.allow_swap: expected a boolean");
    allow_swap = it->get<bool>();
  }
  return build_model(parse_bivariate(field(doc, "offspring_type1", "model"), "offspring_type1"),
                     parse_bivariate(field(doc, "offspring_type2", "model"), "offspring_type2"),
                     parse_bivariate(field(doc, "immigration", "model"), "immigration"), allow_swap);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read file " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON in " + path + ": " + e.what());
  }
}

ModelParams load_model(const std::string& path) { return parse_model(read_json_file(path)); }

SingleTypeModel parse_single_type(const json& doc) {
  require_object(doc, "model");
  reject_unknown(doc, {"offspring", "immigration"}, "model");
  return {parse_univariate(field(doc, "offspring", "model"), "offspring"),
          parse_univariate(field(doc, "immigration", "model"), "immigration")};
}

json to_json(const UnivariateLaw& law) {
  return std::visit(
      [](const auto& l) -> json {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, PoissonLaw>) return {{"kind", "poisson"}, {"mean", l.mean}};
        else if constexpr (std::is_same_v<T, GeometricLaw>) return {{"kind", "geometric"}, {"success", l.success}};
        else if constexpr (std::is_same_v<T, BernoulliLaw>) return {{"kind", "bernoulli"}, {"p", l.p}};
        else if constexpr (std::is_same_v<T, DeterministicLaw>) return {{"kind", "deterministic"}, {"value", l.value}};
        else return {{"kind", "table"}, {"values", l.values}, {"probs", probability_json(l.probs)}};
      },
      law.kind());
}

json to_json(const BivariateLaw& law) {
  return std::visit(
      [](const auto& l) -> json {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, IndependentComponents>)
          return {{"kind", "independent"}, {"first", to_json(l.first)}, {"second", to_json(l.second)}};
        else if constexpr (std::is_same_v<T, BivariatePoisson>)
          return {{"kind", "bivariate_poisson"}, {"common", l.common}, {"first_only", l.first_only},
                  {"second_only", l.second_only}};
        else {
          json outs = json::array();
          for (const auto& o : l.outcomes) outs.push_back(json::array({o.type1, o.type2}));
          return {{"kind", "table"}, {"outcomes", outs}, {"probs", probability_json(l.probs)}};
        }
      },
      law.kind());
}

json to_json(const ModelParams& p) {
  const bool s = p.swapped;
  json j;
  if (s) {
    j["offspring_type1"] = to_json(p.offspring_type2.swapped());
    j["offspring_type2"] = to_json(p.offspring_type1.swapped());
    j["immigration"] = to_json(p.immigration.swapped());
  } else {
    j["offspring_type1"] = to_json(p.offspring_type1);
    j["offspring_type2"] = to_json(p.offspring_type2);
    j["immigration"] = to_json(p.immigration);
  }
  j["swapped"] = s;
  j["case"] = p.case_label.to_string();
  j["A"] = mat_json(unswap(p.A, s));
  j["b"] = s ? json::array({p.b[1], p.b[0]}) : json::array({p.b[0], p.b[1]});
  j["V0"] = mat_json(unswap(p.V0, s));
  j["V1"] = mat_json(unswap(s ? p.V2 : p.V1, s));
  j["V2"] = mat_json(unswap(s ? p.V1 : p.V2, s));
  return j;
}

ModelParams archetype_model(int case_number) {
  using U = UnivariateLaw;
  using B = BivariateLaw;
  const U zero = U::deterministic(0);
  switch (case_number) {
    case 1:
      return build_model(B::independent(U::poisson(1.0), zero), B::independent(zero, U::poisson(1.0)),
                         B::independent(U::poisson(1.0), U::poisson(1.0)));
    case 2:
      return build_model(B::independent(U::poisson(1.0), U::poisson(0.5)),
                         B::independent(zero, U::poisson(1.0)),
                         B::independent(U::poisson(1.0), U::poisson(1.0)));
    case 3:
      return build_model(B::independent(U::poisson(1.0), zero), B::independent(zero, U::poisson(0.5)),
                         B::bivariate_poisson(0.5, 0.5, 0.5));
    case 4:
      return build_model(B::independent(U::poisson(1.0), U::poisson(1.0)),
                         B::independent(zero, U::poisson(0.5)),
                         B::independent(U::poisson(1.0), U::poisson(1.0)));
    case 5:
      return build_model(B::independent(U::poisson(0.5), U::poisson(0.5)),
                         B::independent(zero, U::poisson(1.0)), B::bivariate_poisson(0.5, 0.5, 0.5));
    default:
      throw ValidationError("case number must be in 1..5");
  }
}

}  // namespace gwlab
