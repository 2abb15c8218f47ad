#pragma once

// JSON scenario files:
//
//   {
//     "name": "fig3_symmetric",
//     "params": {"d_bar_i": 100, ..., "o_s": 10},          all eleven keys required
//     "sweep":  {"eps_from": 0.05, "eps_to": 0.95, "eps_step": 0.05},
//     "oracle": {"p_steps": 500, "q_steps": 500, "refinement_rounds": 2,
//                "tolerance_rel": 1e-3, "region_filter": "FcoLoss"}
//   }
//
// "sweep" and "oracle" are optional, as is every key inside "oracle".

#include <array>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

#include "coexist/geometry.hpp"
#include "coexist/market.hpp"
#include "coexist/oracle.hpp"

namespace coexist {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  double eps_from = 0.0;
  double eps_to = 0.0;
  double eps_step = 0.0;
  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct Scenario {
  std::string name;
  MarketParams params;
  std::optional<SweepSpec> sweep;
  std::optional<OracleConfig> oracle;
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

namespace detail {

using json = nlohmann::json;

inline const std::array<std::pair<const char*, double MarketParams::*>, 11> kParamFields = {{
    {"d_bar_i", &MarketParams::d_bar_i},
    {"d_bar_j", &MarketParams::d_bar_j},
    {"alpha_i", &MarketParams::alpha_i},
    {"alpha_j", &MarketParams::alpha_j},
    {"eps", &MarketParams::eps},
    {"c_i", &MarketParams::c_i},
    {"c_j", &MarketParams::c_j},
    {"c_s", &MarketParams::c_s},
    {"o_i", &MarketParams::o_i},
    {"o_j", &MarketParams::o_j},
    {"o_s", &MarketParams::o_s},
}};

inline void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                           const std::string& where) {
  if (!obj.is_object()) throw ScenarioError(where + " must be an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) throw ScenarioError("unknown key '" + item.key() + "' in " + where);
  }
}

inline double number_at(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ScenarioError("missing key '" + std::string(key) + "' in " + where);
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ScenarioError("key '" + std::string(key) + "' in " + where + " must be a number");
  return v.get<double>();
}

inline std::size_t count_at(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number_unsigned()) {
    throw ScenarioError("key '" + std::string(key) + "' in " + where + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

}  // namespace detail

inline Scenario parse_scenario(const std::string& text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError("JSON syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
  }

  detail::reject_unknown(doc, {"name", "params", "sweep", "oracle"}, "scenario");
  Scenario s;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ScenarioError("key 'name' in scenario must be a string");
    s.name = doc["name"].get<std::string>();
  }

  if (!doc.contains("params")) throw ScenarioError("missing key 'params' in scenario");
  const json& p = doc["params"];
  if (!p.is_object()) throw ScenarioError("params must be an object");
  for (const auto& item : p.items()) {
    bool known = false;
    for (const auto& f : detail::kParamFields) known = known || item.key() == f.first;
    if (!known) throw ScenarioError("unknown key '" + item.key() + "' in params");
  }
  for (const auto& [key, member] : detail::kParamFields) {
    s.params.*member = detail::number_at(p, key, "params");
  }
  try {
    check_params(s.params);
  } catch (const InvalidParams& e) {
    throw ScenarioError(e.what());
  }

  if (doc.contains("sweep")) {
    const json& w = doc["sweep"];
    detail::reject_unknown(w, {"eps_from", "eps_to", "eps_step"}, "sweep");
    s.sweep = SweepSpec{detail::number_at(w, "eps_from", "sweep"),
                        detail::number_at(w, "eps_to", "sweep"),
                        detail::number_at(w, "eps_step", "sweep")};
  }

  if (doc.contains("oracle")) {
    const json& o = doc["oracle"];
    detail::reject_unknown(
        o, {"p_steps", "q_steps", "refinement_rounds", "tolerance_rel", "region_filter"}, "oracle");
    OracleConfig cfg;
    if (o.contains("p_steps")) cfg.p_steps = detail::count_at(o, "p_steps", "oracle");
    if (o.contains("q_steps")) cfg.q_steps = detail::count_at(o, "q_steps", "oracle");
    if (o.contains("refinement_rounds")) {
      cfg.refinement_rounds = static_cast<int>(detail::count_at(o, "refinement_rounds", "oracle"));
    }
    if (o.contains("tolerance_rel")) cfg.tolerance_rel = detail::number_at(o, "tolerance_rel", "oracle");
    if (o.contains("region_filter")) {
      const auto& rf = o["region_filter"];
      const auto tag = rf.is_string() ? region_tag_from_string(rf.get<std::string>()) : std::nullopt;
      if (!tag) throw ScenarioError("oracle.region_filter must be one of FcoPlus, FcoLoss, FcoSaturated");
      cfg.region_filter = tag;
    }
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(std::string("oracle: ") + e.what());
    }
    s.oracle = cfg;
  }
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

inline nlohmann::json params_to_json(const MarketParams& m) {
  nlohmann::json p = nlohmann::json::object();
  for (const auto& [key, member] : detail::kParamFields) p[key] = m.*member;
  return p;
}

inline std::string serialize_scenario(const Scenario& s) {
  nlohmann::ordered_json doc;
  doc["name"] = s.name;
  nlohmann::ordered_json p;
  for (const auto& [key, member] : detail::kParamFields) p[key] = s.params.*member;
  doc["params"] = p;
  if (s.sweep) {
    doc["sweep"] = {{"eps_from", s.sweep->eps_from},
                    {"eps_to", s.sweep->eps_to},
                    {"eps_step", s.sweep->eps_step}};
  }
  if (s.oracle) {
    nlohmann::ordered_json o;
    o["p_steps"] = s.oracle->p_steps;
    o["q_steps"] = s.oracle->q_steps;
    o["refinement_rounds"] = s.oracle->refinement_rounds;
    o["tolerance_rel"] = s.oracle->tolerance_rel;
    if (s.oracle->region_filter) o["region_filter"] = std::string(to_string(*s.oracle->region_filter));
    doc["oracle"] = o;
  }
  return doc.dump(2) + "\n";
}

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace coexist
