#pragma once

// JSON and CSV encodings of laws and reports.  Every JSON report carries the
// resolved run configuration under "config".

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ocone/continuous_bridge.hpp"
#include "ocone/counterexamples.hpp"
#include "ocone/mc_harness.hpp"
#include "ocone/path_io.hpp"
#include "ocone/path_law.hpp"
#include "ocone/reflection_solver.hpp"

namespace ocone {

using Json = nlohmann::ordered_json;

/// Default mesh sequence a_n = 2^-n, n = 1..count.
inline std::vector<double> dyadic_meshes(std::size_t count) {
  std::vector<double> out;
  for (std::size_t n = 1; n <= count; ++n) out.push_back(std::ldexp(1.0, -static_cast<int>(n)));
  return out;
}

struct Config {
  std::string subcommand;
  std::size_t law_cap = kDefaultLawCap;
  std::size_t orbit_cap = 12;
  std::vector<double> meshes = dyadic_meshes(10);
  std::uint64_t seed = 0;
  double alpha = 0.01;
  double z = 3.0;
  std::size_t workers = 1;
  std::string format = "json";
  std::string output;  // empty: standard output

  void validate() const {
    if (law_cap == 0 || orbit_cap == 0) throw std::invalid_argument("config: caps must be positive");
    for (std::size_t i = 0; i < meshes.size(); ++i) {
      if (!(meshes[i] > 0.0)) throw std::invalid_argument("config: meshes must be positive");
      if (i > 0 && !(meshes[i] < meshes[i - 1])) throw std::invalid_argument("config: meshes must strictly decrease");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("config: alpha must lie in (0, 1)");
    if (!(z > 0.0)) throw std::invalid_argument("config: z must be positive");
    if (workers == 0) throw std::invalid_argument("config: workers must be positive");
    if (format != "json" && format != "csv") throw std::invalid_argument("config: format must be json or csv");
  }
};

inline Json to_json(const Config& c) {
  return Json{{"subcommand", c.subcommand}, {"law_cap", c.law_cap},   {"orbit_cap", c.orbit_cap},
              {"meshes", c.meshes},         {"seed", c.seed},         {"alpha", c.alpha},
              {"z", c.z},                   {"workers", c.workers},   {"format", c.format},
              {"output", c.output}};
}

// ---------------------------------------------------------------------------
// Rationals and laws

inline Json to_json(const Rational& r) {
  return Json{{"num", boost::multiprecision::numerator(r).str()}, {"den", boost::multiprecision::denominator(r).str()}};
}

inline Rational rational_from_json(const Json& j) {
  auto part = [&](const char* key) -> BigInt {
    const Json& v = j.at(key);
    if (v.is_number_integer()) return BigInt(v.get<long long>());
    if (v.is_string()) return BigInt(v.get<std::string>());
    throw std::invalid_argument(std::string("rational: '") + key + "' must be an integer or a digit string");
  };
  const BigInt den = part("den");
  if (den == 0) throw std::invalid_argument("rational: zero denominator");
  return Rational(part("num"), den);
}

inline Json to_json(const PathLaw& law) {
  Json entries = Json::array();
  for (const auto& [p, w] : law.support()) {
    Json e{{"path", to_text(p)}};
    e.update(to_json(w));
    entries.push_back(std::move(e));
  }
  return Json{{"horizon", law.horizon()}, {"entries", std::move(entries)}};
}

/// Accepts {"horizon": m, "entries": [...]} or a bare entry list.
inline PathLaw law_from_json(const Json& j) {
  try {
    const Json& entries = j.is_array() ? j : j.at("entries");
    std::vector<std::pair<SkipFreePath, Rational>> rows;
    for (const auto& e : entries) {
      const Json& p = e.at("path");
      rows.emplace_back(p.is_string() ? parse_skip_free(p.get<std::string>()) : parse_skip_free(p.dump()),
                        rational_from_json(e));
    }
    std::size_t horizon = 0;
    if (j.is_object() && j.contains("horizon")) horizon = j.at("horizon").get<std::size_t>();
    else if (!rows.empty()) horizon = rows.front().first.horizon();
    return PathLaw::from_entries(horizon, rows);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("law: malformed JSON: ") + e.what());
  }
}

inline std::string law_to_csv(const PathLaw& law) {
  std::ostringstream out;
  out << "path,num,den\n";
  for (const auto& [p, w] : law.support())
    out << to_text(p) << ',' << boost::multiprecision::numerator(w) << ',' << boost::multiprecision::denominator(w)
        << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Reports

inline Json to_json(const LawComparison& c) {
  Json j{{"equal", c.equal}};
  if (c.witness) {
    j["witness"] = {{"path", to_text(c.witness->path)},
                    {"values", to_json_array(c.witness->path)},
                    {"left", to_string(c.witness->left)},
                    {"right", to_string(c.witness->right)}};
  }
  return j;
}

inline Json to_json(const InvarianceReport& r) {
  Json levels = Json::array();
  bool all = true;
  for (const auto& l : r.levels) {
    Json e{{"level", l.level}};
    e.update(to_json(l.comparison));
    levels.push_back(std::move(e));
    all = all && l.comparison.equal;
  }
  return Json{{"process", r.process}, {"m", r.m}, {"invariant", all}, {"levels", std::move(levels)}};
}

inline Json to_json(const OconeReport& r) {
  Json j{{"is_ocone", r.is_ocone()},
         {"is_product", r.is_product},
         {"embedded_uniform", r.embedded_uniform},
         {"pasted", r.pasted},
         {"stagnating_mass", to_string(r.stagnating_mass)},
         {"n_classes", r.n_classes}};
  if (r.witness) {
    const auto& w = *r.witness;
    j["witness"] = {{"kind", to_string(w.kind)},       {"qv_class", to_text(w.qv_class)},
                    {"level", w.level},                {"walk", to_text(w.walk)},
                    {"mass", to_string(w.mass)},       {"reference", to_string(w.reference)}};
  }
  return j;
}

struct SolveReport {
  WalkPath s;
  WalkPath t;
  ReflectionWord word;
  bool verified = false;  // apply_word(s, word) == t with every step effective
};

inline SolveReport solve_and_verify(const WalkPath& s, const WalkPath& t) {
  SolveReport r{s, t, solve(s, t), false};
  r.verified = apply_word(s, r.word) == t && is_effective_word(s, r.word);
  return r;
}

inline Json to_json(const SolveReport& r) {
  return Json{{"m", r.s.horizon()},
              {"s", to_text(r.s)},
              {"t", to_text(r.t)},
              {"word", r.word.levels},
              {"length", r.word.levels.size()},
              {"verified", r.verified}};
}

inline Json to_json(const OrbitReport& r) {
  return Json{{"m", r.m},
              {"levels", r.levels},
              {"n_components", r.n_components()},
              {"component_sizes", r.component_sizes},
              {"max_component_diameter", r.max_component_diameter()}};
}

inline std::string orbit_census_csv_header() { return "m,levels,n_components,max_component_diameter\n"; }

inline std::string orbit_census_csv_row(const OrbitReport& r) {
  std::ostringstream out;
  out << r.m << ',';
  for (std::size_t i = 0; i < r.levels.size(); ++i) out << (i ? ";" : "") << r.levels[i];
  out << ',' << r.n_components() << ',' << r.max_component_diameter() << '\n';
  return out.str();
}

inline Json to_json(const SamplerSpec& s) {
  Json j{{"kind", to_string(s.kind)}, {"seed", s.seed}};
  if (is_discrete(s.kind)) j["horizon"] = s.horizon;
  if (is_continuous(s.kind)) {
    j["time_horizon"] = s.time_horizon;
    if (s.kind == SamplerKind::brownian_walk) j["walk_step"] = s.walk_step;
    else j["grid_steps"] = s.grid_steps;
  }
  if (s.kind == SamplerKind::ocone_time_change) {
    j["stagnation_probability"] = s.stagnation_probability;
    j["rates"] = s.rates;
  }
  return j;
}

inline Json to_json(const TestReport& r) {
  Json cells = Json::array();
  for (const auto& c : r.witness_cells)
    cells.push_back({{"row", c.row},
                     {"column", c.column},
                     {"observed", c.observed},
                     {"expected", c.expected},
                     {"contribution", c.contribution}});
  Json j{{"test", r.test}, {"method", "pearson chi-square on cylinder sets"}, {"spec", to_json(r.spec)}};
  if (r.test == "reflect-two-sample") j["level"] = r.level;
  j.update(Json{{"statistic", r.statistic},
                {"dof", r.dof},
                {"p_value", r.p_value},
                {"n_samples", r.n_samples},
                {"depth", r.depth},
                {"alpha", r.alpha},
                {"rows", r.rows},
                {"columns", r.columns},
                {"decision", r.decision()},
                {"witness_cells", std::move(cells)}});
  return j;
}

inline Json to_json(const StepFunction& h) {
  return Json{{"breaks", h.breakpoints}, {"lambda", h.coefficients}};
}

inline Json to_json(const CfReport& r) {
  return Json{{"lhs", {{"re", r.lhs.real()}, {"im", r.lhs.imag()}}},
              {"rhs", r.rhs},
              {"standard_error", r.standard_error},
              {"distance", r.distance},
              {"z", r.z},
              {"n", r.n},
              {"pass", r.pass}};
}

inline Json to_json(const GapReport& g) {
  return Json{{"gap", g.gap}, {"bound", g.bound}, {"slack", g.slack}, {"within_bound", g.within_bound()}};
}

inline Json to_json(const LatticePath& l) {
  return Json{{"mesh", l.mesh()}, {"horizon", l.horizon()}, {"jump_times", l.jump_times()}, {"jump_signs", l.jump_signs()}};
}

/// Wraps a report body with the run configuration.
inline Json with_config(Json body, const Config& c) {
  body["config"] = to_json(c);
  return body;
}

}  // namespace ocone
