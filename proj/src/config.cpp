#include "lgfrac/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lgfrac/error.hpp"

namespace lgfrac {

using json = nlohmann::ordered_json;

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::deterministic: return "deterministic";
    case RunMode::combinatorial: return "combinatorial";
    case RunMode::monte_carlo: return "monte-carlo";
    case RunMode::benchmark: return "benchmark";
  }
  return "unknown";
}

namespace {

// Walks one JSON object, records every issue under its dotted path and
// flags keys that were never read.
class Reader {
 public:
  Reader(const json* node, std::string path, std::vector<FieldIssue>& issues)
      : node_(node), path_(std::move(path)), issues_(issues) {
    if (node_ && !node_->is_object()) {
      issue("", "must be an object");
      node_ = nullptr;
    }
  }

  bool present() const { return node_ != nullptr; }
  bool has(const std::string& key) const { return node_ && node_->contains(key); }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void issue(const std::string& key, const std::string& message) {
    issues_.push_back({key.empty() ? path_ : at(key), message});
  }

  const json* find(const std::string& key, bool required) {
    seen_.insert(key);
    if (node_ && node_->contains(key)) return &(*node_)[key];
    if (required) issue(key, "is required");
    return nullptr;
  }

  Reader child(const std::string& key, bool required) {
    return Reader(find(key, required), at(key), issues_);
  }

  void number(const std::string& key, double& out, bool required = false) {
    if (const json* v = find(key, required)) {
      if (!v->is_number())
        issue(key, "must be a number");
      else if (!std::isfinite(v->get<double>()))
        issue(key, "must be finite");
      else
        out = v->get<double>();
    }
  }

  void optional_number(const std::string& key, std::optional<double>& out) {
    if (const json* v = find(key, false)) {
      if (v->is_null())
        out.reset();
      else if (!v->is_number())
        issue(key, "must be a number or null");
      else
        out = v->get<double>();
    }
  }

  template <class Int>
  void integer(const std::string& key, Int& out, bool required = false) {
    if (const json* v = find(key, required)) {
      if (!v->is_number_integer())
        issue(key, "must be an integer");
      else if (std::is_unsigned_v<Int> && v->is_number_integer() && !v->is_number_unsigned())
        issue(key, "must be >= 0");
      else
        out = v->get<Int>();
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key, false)) {
      if (!v->is_boolean())
        issue(key, "must be true or false");
      else
        out = v->get<bool>();
    }
  }

  void string(const std::string& key, std::string& out, bool required = false) {
    if (const json* v = find(key, required)) {
      if (!v->is_string())
        issue(key, "must be a string");
      else
        out = v->get<std::string>();
    }
  }

  void choice(const std::string& key, std::string& out, std::initializer_list<const char*> allowed,
              bool required = false) {
    std::string v = out;
    const auto before = issues_.size();
    string(key, v, required);
    if (issues_.size() != before || !has(key)) return;
    for (const char* a : allowed)
      if (v == a) {
        out = v;
        return;
      }
    std::string list;
    for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
    issue(key, "must be one of: " + list);
  }

  void numbers(const std::string& key, std::vector<double>& out, bool required = false) {
    if (const json* v = find(key, required)) {
      if (!v->is_array()) {
        issue(key, "must be an array of numbers");
        return;
      }
      std::vector<double> tmp;
      for (std::size_t i = 0; i < v->size(); ++i) {
        const auto& e = (*v)[i];
        if (!e.is_number()) {
          issues_.push_back({at(key) + "[" + std::to_string(i) + "]", "must be a number"});
          continue;
        }
        tmp.push_back(e.get<double>());
      }
      out = std::move(tmp);
    }
  }

  const json* array(const std::string& key) {
    const json* v = find(key, false);
    if (v && !v->is_array()) {
      issue(key, "must be an array");
      return nullptr;
    }
    return v;
  }

  void finish() {
    if (!node_) return;
    for (const auto& [k, v] : node_->items())
      if (!seen_.count(k)) issue(k, "unknown field");
  }

 private:
  const json* node_;
  std::string path_;
  std::vector<FieldIssue>& issues_;
  std::set<std::string> seen_;
};

void require(std::vector<FieldIssue>& issues, bool ok, std::string path, std::string message) {
  if (!ok) issues.push_back({std::move(path), std::move(message)});
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  std::vector<FieldIssue> issues;
  RunConfig c;
  Reader r(&root, "", issues);

  const auto before_version = issues.size();
  r.integer("schema_version", c.schema_version, true);
  if (issues.size() == before_version && c.schema_version != 1)
    r.issue("schema_version", "unsupported version (expected 1)");

  std::string mode;
  r.choice("mode", mode, {"deterministic", "combinatorial", "monte-carlo", "benchmark"}, true);
  if (mode == "combinatorial") c.mode = RunMode::combinatorial;
  else if (mode == "monte-carlo") c.mode = RunMode::monte_carlo;
  else if (mode == "benchmark") c.mode = RunMode::benchmark;
  else c.mode = RunMode::deterministic;
  const bool needs_laminate = !mode.empty() && c.mode != RunMode::benchmark;

  r.string("name", c.name);
  r.string("comment", c.comment);
  r.number("temperature_c", c.temperature_c);
  if (const json* v = r.find("seed", false)) {
    if (!v->is_number_unsigned())
      r.issue("seed", "must be a non-negative integer");
    else
      c.seed = v->get<std::uint64_t>();
  }
  r.integer("workers", c.workers);
  r.string("output_dir", c.output_dir);

  auto lam = r.child("laminate", needs_laminate);
  lam.numbers("layers_mm", c.laminate.layers_mm, lam.present());
  lam.number("width_mm", c.laminate.width_mm, lam.present());
  lam.number("span_mm", c.laminate.span_mm);
  lam.number("load_offset_mm", c.laminate.load_offset_mm);
  lam.number("overhang_mm", c.laminate.overhang_mm);
  lam.finish();
  if (lam.present()) {
    const auto& L = c.laminate;
    if (lam.has("layers_mm") && (needs_laminate || !L.layers_mm.empty())) {
      require(issues, !L.layers_mm.empty() && L.layers_mm.size() % 2 == 1, lam.at("layers_mm"),
              "must list an odd number of layers (glass/polymer alternating, glass outside)");
      for (std::size_t i = 0; i < L.layers_mm.size(); ++i)
        require(issues, L.layers_mm[i] > 0.0, lam.at("layers_mm") + "[" + std::to_string(i) + "]",
                "must be > 0");
    }
    require(issues, L.width_mm > 0.0, lam.at("width_mm"), "must be > 0");
    require(issues, L.span_mm > 0.0, lam.at("span_mm"), "must be > 0");
    require(issues, L.load_offset_mm > 0.0 && L.load_offset_mm < 0.5 * L.span_mm,
            lam.at("load_offset_mm"), "must satisfy 0 < load_offset_mm < span_mm/2");
    require(issues, L.overhang_mm >= 0.0, lam.at("overhang_mm"), "must be >= 0");
  }

  auto mat = r.child("materials", needs_laminate);
  {
    const bool has_polymer = c.laminate.layers_mm.size() > 1;
    auto g = mat.child("glass", mat.present());
    g.number("young_modulus_mpa", c.glass.young_modulus_mpa);
    g.number("poisson_ratio", c.glass.poisson_ratio);
    g.number("tensile_strength_mpa", c.glass.tensile_strength_mpa);
    g.numbers("strengths_mpa", c.glass.strengths_mpa);
    g.finish();
    if (g.present()) {
      require(issues, c.glass.young_modulus_mpa > 0.0, g.at("young_modulus_mpa"), "must be > 0");
      require(issues, c.glass.poisson_ratio >= 0.0 && c.glass.poisson_ratio < 0.5,
              g.at("poisson_ratio"), "must lie in [0, 0.5)");
      require(issues, c.glass.tensile_strength_mpa > 0.0, g.at("tensile_strength_mpa"),
              "must be > 0");
      const std::size_t ng = (c.laminate.layers_mm.size() + 1) / 2;
      if (!c.glass.strengths_mpa.empty()) {
        require(issues, c.glass.strengths_mpa.size() == ng, g.at("strengths_mpa"),
                "must list one strength per glass layer (" + std::to_string(ng) + ")");
        for (std::size_t i = 0; i < c.glass.strengths_mpa.size(); ++i)
          require(issues, c.glass.strengths_mpa[i] > 0.0,
                  g.at("strengths_mpa") + "[" + std::to_string(i) + "]", "must be > 0");
      }
    }

    auto p = mat.child("polymer", mat.present() && has_polymer);
    auto& P = c.polymer;
    p.choice("model", P.model, {"pvb", "constant", "prony"});
    p.number("poisson_ratio", P.poisson_ratio);
    p.number("shear_modulus_mpa", P.shear_modulus_mpa, p.present() && P.model == "constant");
    p.number("long_term_modulus_mpa", P.long_term_modulus_mpa);
    if (const json* terms = p.array("terms")) {
      P.terms.clear();
      for (std::size_t i = 0; i < terms->size(); ++i) {
        Reader t(&(*terms)[i], p.at("terms") + "[" + std::to_string(i) + "]", issues);
        PronyTermConfig term;
        t.number("modulus_mpa", term.modulus_mpa, true);
        t.number("relaxation_time_s", term.relaxation_time_s, true);
        t.finish();
        require(issues, term.modulus_mpa >= 0.0, t.at("modulus_mpa"), "must be >= 0");
        require(issues, term.relaxation_time_s > 0.0, t.at("relaxation_time_s"), "must be > 0");
        P.terms.push_back(term);
      }
    }
    if (const json* shift = p.array("shift_table")) {
      P.shift_table.clear();
      for (std::size_t i = 0; i < shift->size(); ++i) {
        Reader t(&(*shift)[i], p.at("shift_table") + "[" + std::to_string(i) + "]", issues);
        ShiftEntryConfig e;
        t.number("temperature_c", e.temperature_c, true);
        t.number("factor", e.factor, true);
        t.finish();
        require(issues, e.factor > 0.0, t.at("factor"), "must be > 0");
        P.shift_table.push_back(e);
      }
    }
    p.choice("shift_extrapolation", P.shift_extrapolation, {"error", "clamp"});
    p.finish();
    if (p.present()) {
      require(issues, P.poisson_ratio > -1.0 && P.poisson_ratio < 0.5, p.at("poisson_ratio"),
              "must lie in (-1, 0.5)");
      if (P.model == "constant")
        require(issues, P.shear_modulus_mpa > 0.0, p.at("shear_modulus_mpa"), "must be > 0");
      if (P.model == "prony") {
        require(issues, P.long_term_modulus_mpa >= 0.0, p.at("long_term_modulus_mpa"),
                "must be >= 0");
        double g0 = P.long_term_modulus_mpa;
        for (const auto& t : P.terms) g0 += t.modulus_mpa;
        require(issues, g0 > 0.0, p.at("terms"), "instantaneous modulus must be > 0");
      }
    }
    mat.finish();
  }

  auto prog = r.child("program", false);
  prog.number("rate_mm_per_min", c.program.rate_mm_per_min);
  prog.number("increment_mm", c.program.increment_mm);
  prog.number("max_displacement_mm", c.program.max_displacement_mm);
  prog.boolean("stop_when_all_failed", c.program.stop_when_all_failed);
  prog.finish();
  require(issues, c.program.rate_mm_per_min > 0.0, prog.at("rate_mm_per_min"), "must be > 0");
  require(issues, c.program.increment_mm > 0.0, prog.at("increment_mm"), "must be > 0");
  require(issues, c.program.max_displacement_mm > 0.0, prog.at("max_displacement_mm"),
          "must be > 0");

  auto disc = r.child("discretization", false);
  auto& D = c.discretization;
  disc.number("element_length_mm", D.element_length_mm);
  disc.optional_number("length_scale_mm", D.length_scale_mm);
  disc.integer("thickness_points", D.thickness_points);
  disc.boolean("symmetric_half", D.symmetric_half);
  disc.finish();
  require(issues, D.element_length_mm > 0.0, disc.at("element_length_mm"), "must be > 0");
  if (D.length_scale_mm)
    require(issues, *D.length_scale_mm >= D.element_length_mm, disc.at("length_scale_mm"),
            "must be >= element_length_mm");
  require(issues, D.thickness_points >= 2, disc.at("thickness_points"), "must be >= 2");

  auto sol = r.child("solver", false);
  auto& S = c.solver;
  sol.number("newton_tolerance", S.newton_tolerance);
  sol.integer("newton_max_iterations", S.newton_max_iterations);
  sol.number("staggered_tolerance", S.staggered_tolerance);
  sol.integer("staggered_max_iterations", S.staggered_max_iterations);
  sol.integer("anderson_depth", S.anderson_depth);
  sol.number("vi_tolerance", S.vi_tolerance);
  sol.integer("max_halvings", S.max_halvings);
  sol.boolean("split", S.split);
  sol.number("residual_stiffness", S.residual_stiffness);
  sol.choice("driving_force", S.driving_force, {"rankine", "tensile-energy"});
  sol.number("failure_threshold", S.failure_threshold);
  sol.number("crack_threshold", S.crack_threshold);
  sol.finish();
  for (const char* k : {"newton_tolerance", "staggered_tolerance", "vi_tolerance"}) {
    const double v = std::string(k) == "newton_tolerance"      ? S.newton_tolerance
                     : std::string(k) == "staggered_tolerance" ? S.staggered_tolerance
                                                               : S.vi_tolerance;
    require(issues, v > 0.0, sol.at(k), "must be > 0");
  }
  require(issues, S.newton_max_iterations >= 1, sol.at("newton_max_iterations"), "must be >= 1");
  require(issues, S.staggered_max_iterations >= 1, sol.at("staggered_max_iterations"),
          "must be >= 1");
  require(issues, S.anderson_depth >= 0, sol.at("anderson_depth"), "must be >= 0");
  require(issues, S.max_halvings >= 0, sol.at("max_halvings"), "must be >= 0");
  require(issues, S.residual_stiffness >= 0.0 && S.residual_stiffness < 1.0,
          sol.at("residual_stiffness"), "must lie in [0, 1)");
  require(issues, S.failure_threshold > 0.0 && S.failure_threshold <= 1.0,
          sol.at("failure_threshold"), "must lie in (0, 1]");
  require(issues, S.crack_threshold > 0.0 && S.crack_threshold <= 1.0, sol.at("crack_threshold"),
          "must lie in (0, 1]");

  auto comb = r.child("combinatorial", c.mode == RunMode::combinatorial);
  comb.number("lo_mpa", c.combinatorial.lo_mpa, comb.present());
  comb.number("hi_mpa", c.combinatorial.hi_mpa, comb.present());
  comb.finish();
  if (comb.present()) {
    require(issues, c.combinatorial.lo_mpa > 0.0, comb.at("lo_mpa"), "must be > 0");
    require(issues, c.combinatorial.hi_mpa > c.combinatorial.lo_mpa, comb.at("hi_mpa"),
            "must be > lo_mpa");
  }

  auto mc = r.child("monte_carlo", c.mode == RunMode::monte_carlo);
  auto& M = c.monte_carlo;
  mc.integer("count", M.count, mc.present());
  mc.number("weibull_shape", M.weibull_shape);
  mc.number("weibull_scale_mpa", M.weibull_scale_mpa);
  mc.number("grid_spacing_mm", M.grid_spacing_mm);
  mc.boolean("keep_histories", M.keep_histories);
  mc.finish();
  require(issues, M.count >= 1, mc.at("count"), "must be >= 1");
  require(issues, M.weibull_shape > 0.0, mc.at("weibull_shape"), "must be > 0");
  require(issues, M.weibull_scale_mpa > 0.0, mc.at("weibull_scale_mpa"), "must be > 0");
  require(issues, M.grid_spacing_mm > 0.0, mc.at("grid_spacing_mm"), "must be > 0");

  auto bm = r.child("benchmark", false);
  auto& B = c.benchmark;
  bm.number("increment_mm", B.increment_mm);
  bm.number("max_displacement_mm", B.max_displacement_mm);
  bm.number("element_length_mm", B.element_length_mm);
  bm.number("length_scale_mm", B.length_scale_mm);
  bm.integer("thickness_points", B.thickness_points);
  bm.number("weakening", B.weakening);
  bm.finish();
  require(issues, B.increment_mm > 0.0, bm.at("increment_mm"), "must be > 0");
  require(issues, B.max_displacement_mm > 0.0, bm.at("max_displacement_mm"), "must be > 0");
  require(issues, B.element_length_mm > 0.0, bm.at("element_length_mm"), "must be > 0");
  require(issues, B.length_scale_mm >= B.element_length_mm, bm.at("length_scale_mm"),
          "must be >= element_length_mm");
  require(issues, B.thickness_points >= 2, bm.at("thickness_points"), "must be >= 2");
  require(issues, B.weakening >= 0.0 && B.weakening < 1.0, bm.at("weakening"),
          "must lie in [0, 1)");

  r.finish();
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const RunConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["mode"] = to_string(c.mode);
  j["name"] = c.name;
  j["comment"] = c.comment;
  j["temperature_c"] = c.temperature_c;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["output_dir"] = c.output_dir;
  j["laminate"] = {{"layers_mm", c.laminate.layers_mm},
                   {"width_mm", c.laminate.width_mm},
                   {"span_mm", c.laminate.span_mm},
                   {"load_offset_mm", c.laminate.load_offset_mm},
                   {"overhang_mm", c.laminate.overhang_mm}};
  const auto& P = c.polymer;
  json terms = json::array();
  for (const auto& t : P.terms)
    terms.push_back({{"modulus_mpa", t.modulus_mpa}, {"relaxation_time_s", t.relaxation_time_s}});
  json shift = json::array();
  for (const auto& e : P.shift_table)
    shift.push_back({{"temperature_c", e.temperature_c}, {"factor", e.factor}});
  j["materials"] = {
      {"glass",
       {{"young_modulus_mpa", c.glass.young_modulus_mpa},
        {"poisson_ratio", c.glass.poisson_ratio},
        {"tensile_strength_mpa", c.glass.tensile_strength_mpa},
        {"strengths_mpa", c.glass.strengths_mpa}}},
      {"polymer",
       {{"model", P.model},
        {"poisson_ratio", P.poisson_ratio},
        {"shear_modulus_mpa", P.shear_modulus_mpa},
        {"long_term_modulus_mpa", P.long_term_modulus_mpa},
        {"terms", terms},
        {"shift_table", shift},
        {"shift_extrapolation", P.shift_extrapolation}}}};
  j["program"] = {{"rate_mm_per_min", c.program.rate_mm_per_min},
                  {"increment_mm", c.program.increment_mm},
                  {"max_displacement_mm", c.program.max_displacement_mm},
                  {"stop_when_all_failed", c.program.stop_when_all_failed}};
  const auto& D = c.discretization;
  j["discretization"] = {{"element_length_mm", D.element_length_mm},
                         {"length_scale_mm", D.length_scale_mm ? json(*D.length_scale_mm) : json()},
                         {"thickness_points", D.thickness_points},
                         {"symmetric_half", D.symmetric_half}};
  const auto& S = c.solver;
  j["solver"] = {{"newton_tolerance", S.newton_tolerance},
                 {"newton_max_iterations", S.newton_max_iterations},
                 {"staggered_tolerance", S.staggered_tolerance},
                 {"staggered_max_iterations", S.staggered_max_iterations},
                 {"anderson_depth", S.anderson_depth},
                 {"vi_tolerance", S.vi_tolerance},
                 {"max_halvings", S.max_halvings},
                 {"split", S.split},
                 {"residual_stiffness", S.residual_stiffness},
                 {"driving_force", S.driving_force},
                 {"failure_threshold", S.failure_threshold},
                 {"crack_threshold", S.crack_threshold}};
  j["combinatorial"] = {{"lo_mpa", c.combinatorial.lo_mpa}, {"hi_mpa", c.combinatorial.hi_mpa}};
  const auto& M = c.monte_carlo;
  j["monte_carlo"] = {{"count", M.count},
                      {"weibull_shape", M.weibull_shape},
                      {"weibull_scale_mpa", M.weibull_scale_mpa},
                      {"grid_spacing_mm", M.grid_spacing_mm},
                      {"keep_histories", M.keep_histories}};
  const auto& B = c.benchmark;
  j["benchmark"] = {{"increment_mm", B.increment_mm},
                    {"max_displacement_mm", B.max_displacement_mm},
                    {"element_length_mm", B.element_length_mm},
                    {"length_scale_mm", B.length_scale_mm},
                    {"thickness_points", B.thickness_points},
                    {"weakening", B.weakening}};
  return j.dump(2) + "\n";
}

LaminateSpec RunConfig::to_spec() const {
  GlassMaterial g = presets::float_glass(glass.tensile_strength_mpa * 1e6);
  g.young_modulus = glass.young_modulus_mpa * 1e6;
  g.poisson_ratio = glass.poisson_ratio;
  g.regularization_length = to_discretization().effective_length_scale();

  PronySeries poly;
  if (polymer.model == "pvb") {
    poly = default_pvb();
  } else if (polymer.model == "constant") {
    poly = constant_polymer(polymer.shear_modulus_mpa * 1e6);
  } else {
    poly.long_term_modulus = polymer.long_term_modulus_mpa * 1e6;
    for (const auto& t : polymer.terms) poly.terms.push_back({t.modulus_mpa * 1e6, t.relaxation_time_s});
    std::vector<std::pair<double, double>> table;
    for (const auto& e : polymer.shift_table) table.emplace_back(e.temperature_c, e.factor);
    if (!table.empty())
      poly.shift = TemperatureShift(std::move(table), polymer.shift_extrapolation == "clamp"
                                                          ? ShiftExtrapolation::clamp
                                                          : ShiftExtrapolation::error);
  }
  poly.poisson_ratio = polymer.poisson_ratio;

  LaminateSpec s = presets::stack(laminate.layers_mm, g, poly);
  s.width = laminate.width_mm * 1e-3;
  s.span = laminate.span_mm * 1e-3;
  s.load_offset = laminate.load_offset_mm * 1e-3;
  s.overhang = laminate.overhang_mm * 1e-3;
  if (!glass.strengths_mpa.empty()) {
    std::vector<double> st;
    for (double v : glass.strengths_mpa) st.push_back(v * 1e6);
    s = s.with_strengths(st);
  }
  return s;
}

LoadProgram RunConfig::to_program() const {
  LoadProgram p;
  p.displacement_rate = program.rate_mm_per_min * 1e-3 / 60.0;
  p.increment = program.increment_mm * 1e-3;
  p.max_displacement = program.max_displacement_mm * 1e-3;
  p.stop_when_all_failed = program.stop_when_all_failed;
  return p;
}

Discretization RunConfig::to_discretization() const {
  Discretization d;
  d.element_length = discretization.element_length_mm * 1e-3;
  if (discretization.length_scale_mm) d.length_scale = *discretization.length_scale_mm * 1e-3;
  d.thickness_points = discretization.thickness_points;
  d.symmetric_half = discretization.symmetric_half;
  return d;
}

SolverSettings RunConfig::to_settings() const {
  SolverSettings s;
  s.newton.tolerance = solver.newton_tolerance;
  s.newton.max_iterations = solver.newton_max_iterations;
  s.staggered_tolerance = solver.staggered_tolerance;
  s.staggered_max_iterations = solver.staggered_max_iterations;
  s.anderson_depth = solver.anderson_depth;
  s.vi_tolerance = solver.vi_tolerance;
  s.max_halvings = solver.max_halvings;
  s.split = solver.split;
  s.residual_stiffness = solver.residual_stiffness;
  s.driving_force = solver.driving_force == "tensile-energy" ? DrivingForceKind::tensile_energy
                                                             : DrivingForceKind::rankine;
  s.failure_threshold = solver.failure_threshold;
  s.crack_threshold = solver.crack_threshold;
  s.temperature = temperature_c;
  return s;
}

EnsembleSetup RunConfig::to_setup() const {
  EnsembleSetup e;
  e.program = to_program();
  e.discretization = to_discretization();
  e.settings = to_settings();
  e.workers = workers;
  return e;
}

McConfig RunConfig::to_mc() const {
  McConfig m;
  m.count = monte_carlo.count;
  m.master_seed = seed;
  m.strength = {monte_carlo.weibull_shape, monte_carlo.weibull_scale_mpa * 1e6};
  m.setup = to_setup();
  m.grid_spacing = monte_carlo.grid_spacing_mm * 1e-3;
  return m;
}

}  // namespace lgfrac
