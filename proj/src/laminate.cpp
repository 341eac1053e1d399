#include "lgfrac/laminate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lgfrac/error.hpp"

namespace lgfrac {

namespace {

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

double derive_fracture_energy(double tensile_strength, double regularization_length,
                              double young_modulus) {
  if (!(tensile_strength > 0.0) || !(regularization_length > 0.0) || !(young_modulus > 0.0))
    throw Error(ErrorCode::invalid_argument, "derive_fracture_energy: arguments must be positive");
  return 8.0 / 3.0 * tensile_strength * tensile_strength * regularization_length / young_modulus;
}

double strength_from_fracture_energy(double fracture_energy, double regularization_length,
                                     double young_modulus) {
  if (!(fracture_energy > 0.0) || !(regularization_length > 0.0) || !(young_modulus > 0.0))
    throw Error(ErrorCode::invalid_argument,
                "strength_from_fracture_energy: arguments must be positive");
  return std::sqrt(3.0 * fracture_energy * young_modulus / (8.0 * regularization_length));
}

void GlassMaterial::validate() const {
  std::vector<FieldIssue> issues;
  if (!(young_modulus > 0.0)) issues.push_back({"young_modulus", "must be > 0"});
  if (!(poisson_ratio >= 0.0 && poisson_ratio < 0.5))
    issues.push_back({"poisson_ratio", "must lie in [0, 0.5)"});
  if (!(tensile_strength > 0.0)) issues.push_back({"tensile_strength", "must be > 0"});
  if (!(regularization_length > 0.0))
    issues.push_back({"regularization_length", "must be > 0"});
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

TemperatureShift::TemperatureShift(std::vector<std::pair<double, double>> table,
                                   ShiftExtrapolation policy)
    : table_(std::move(table)), policy_(policy) {
  std::sort(table_.begin(), table_.end());
  for (std::size_t i = 0; i < table_.size(); ++i) {
    if (!(table_[i].second > 0.0))
      throw Error(ErrorCode::invalid_argument, "temperature shift factors must be > 0");
    if (i > 0 && table_[i].first == table_[i - 1].first)
      throw Error(ErrorCode::invalid_argument, "duplicate temperature in shift table");
  }
}

double TemperatureShift::factor(double temperature) const {
  if (table_.empty()) return 1.0;
  const double lo = table_.front().first;
  const double hi = table_.back().first;
  if (temperature < lo || temperature > hi) {
    if (policy_ == ShiftExtrapolation::error)
      throw Error(ErrorCode::out_of_range,
                  "temperature " + format_number(temperature) + " degC outside shift table [" +
                      format_number(lo) + ", " + format_number(hi) + "]");
    temperature = std::clamp(temperature, lo, hi);
  }
  if (table_.size() == 1) return table_.front().second;
  auto it = std::upper_bound(table_.begin(), table_.end(), temperature,
                             [](double t, const auto& e) { return t < e.first; });
  if (it == table_.end()) return table_.back().second;
  if (it == table_.begin()) return table_.front().second;
  const auto& [t1, a1] = *std::prev(it);
  const auto& [t2, a2] = *it;
  const double s = (temperature - t1) / (t2 - t1);
  return std::exp((1.0 - s) * std::log(a1) + s * std::log(a2));
}

double PronySeries::instantaneous_modulus() const {
  double g = long_term_modulus;
  for (const auto& t : terms) g += t.modulus;
  return g;
}

double PronySeries::modulus_at_reduced_time(double reduced_time) const {
  double g = long_term_modulus;
  for (const auto& t : terms) g += t.modulus * std::exp(-reduced_time / t.relaxation_time);
  return g;
}

void PronySeries::validate() const {
  std::vector<FieldIssue> issues;
  if (!(long_term_modulus >= 0.0)) issues.push_back({"long_term_modulus", "must be >= 0"});
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!(terms[i].modulus >= 0.0))
      issues.push_back({"terms[" + std::to_string(i) + "].modulus", "must be >= 0"});
    if (!(terms[i].relaxation_time > 0.0))
      issues.push_back({"terms[" + std::to_string(i) + "].relaxation_time", "must be > 0"});
  }
  if (!(instantaneous_modulus() > 0.0))
    issues.push_back({"terms", "instantaneous modulus must be > 0"});
  if (!(poisson_ratio >= 0.0 && poisson_ratio < 0.5))
    issues.push_back({"poisson_ratio", "must lie in [0, 0.5)"});
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

double quasi_elastic_shear_modulus(const PronySeries& series, double time, double temperature) {
  if (!(time >= 0.0))
    throw Error(ErrorCode::invalid_argument, "quasi_elastic_shear_modulus: time must be >= 0");
  const double a = series.shift.factor(temperature);
  return series.modulus_at_reduced_time(0.5 * time / a);
}

PronySeries default_pvb() {
  PronySeries s;
  s.poisson_ratio = 0.49;
  s.long_term_modulus = 0.232e6;
  // Reference temperature 20 degC; spectrum shaped after published PVB master curves.
  const std::pair<double, double> spectrum[] = {
      {1e-5, 95e6}, {1e-4, 160e6}, {1e-3, 220e6}, {1e-2, 200e6}, {1e-1, 90e6}, {1e0, 25e6},
      {1e1, 6.0e6}, {1e2, 1.5e6},  {1e3, 0.6e6},  {1e4, 0.25e6}, {1e5, 0.08e6},
  };
  for (const auto& [tau, g] : spectrum) s.terms.push_back({g, tau});
  // WLF shift log10(a) = -C1 (T - Tref) / (C2 + T - Tref), tabulated every 5 degC.
  constexpr double c1 = 8.635, c2 = 42.422, tref = 20.0;
  std::vector<std::pair<double, double>> table;
  for (int t = -20; t <= 60; t += 5) {
    const double dt = t - tref;
    table.emplace_back(static_cast<double>(t), std::pow(10.0, -c1 * dt / (c2 + dt)));
  }
  s.shift = TemperatureShift(std::move(table), ShiftExtrapolation::error);
  return s;
}

PronySeries constant_polymer(double shear_modulus, double poisson_ratio) {
  PronySeries s;
  s.long_term_modulus = shear_modulus;
  s.poisson_ratio = poisson_ratio;
  return s;
}

SectionProperties section_properties(double width, double thickness) {
  return {width * thickness, width * thickness * thickness * thickness / 12.0,
          5.0 / 6.0 * width * thickness};
}

double LaminateSpec::total_thickness() const {
  double h = 0.0;
  for (const auto& l : layers) h += l.thickness;
  return h;
}

std::size_t LaminateSpec::glass_count() const {
  return static_cast<std::size_t>(std::count_if(
      layers.begin(), layers.end(), [](const Layer& l) { return l.kind() == LayerKind::glass; }));
}

std::vector<std::size_t> LaminateSpec::glass_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < layers.size(); ++i)
    if (layers[i].kind() == LayerKind::glass) out.push_back(i);
  return out;
}

std::vector<int> LaminateSpec::glass_labels() const {
  std::vector<int> out;
  for (auto i : glass_indices()) out.push_back(static_cast<int>(i) + 1);
  return out;
}

LaminateSpec LaminateSpec::with_strengths(std::span<const double> strengths) const {
  const auto idx = glass_indices();
  if (strengths.size() != idx.size())
    throw Error(ErrorCode::invalid_argument,
                "with_strengths: expected " + std::to_string(idx.size()) + " strengths, got " +
                    std::to_string(strengths.size()));
  LaminateSpec out = *this;
  for (std::size_t g = 0; g < idx.size(); ++g)
    std::get<GlassMaterial>(out.layers[idx[g]].material).tensile_strength = strengths[g];
  return out;
}

LaminateSpec LaminateSpec::with_length_scale(double length) const {
  LaminateSpec out = *this;
  for (auto& l : out.layers)
    if (auto* g = std::get_if<GlassMaterial>(&l.material)) g->regularization_length = length;
  return out;
}

void LaminateSpec::validate() const {
  std::vector<FieldIssue> issues;
  const std::size_t m = layers.size();
  if (m == 0) {
    issues.push_back({"layers", "at least one layer required"});
  } else if (m % 2 == 0) {
    issues.push_back({"layers", "layer count must be odd (glass on both faces)"});
  }
  for (std::size_t i = 0; i < m; ++i) {
    const std::string path = "layers[" + std::to_string(i) + "]";
    const bool want_glass = (i % 2 == 0);
    if ((layers[i].kind() == LayerKind::glass) != want_glass)
      issues.push_back({path + ".kind", want_glass ? "expected glass (stack must alternate, "
                                                     "starting and ending with glass)"
                                                   : "expected polymer (stack must alternate)"});
    if (!(layers[i].thickness > 0.0)) issues.push_back({path + ".thickness", "must be > 0"});
    try {
      if (layers[i].kind() == LayerKind::glass)
        layers[i].glass().validate();
      else
        layers[i].polymer().validate();
    } catch (const ConfigError& e) {
      for (const auto& sub : e.issues()) issues.push_back({path + "." + sub.path, sub.message});
    }
  }
  if (!(width > 0.0)) issues.push_back({"width", "must be > 0"});
  if (!(span > 0.0)) issues.push_back({"span", "must be > 0"});
  if (!(load_offset > 0.0 && load_offset < 0.5 * span))
    issues.push_back({"load_offset", "must satisfy 0 < load_offset < span/2"});
  if (!(overhang >= 0.0)) issues.push_back({"overhang", "must be >= 0"});
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

namespace presets {

GlassMaterial float_glass(double tensile_strength, double regularization_length) {
  GlassMaterial g;
  g.young_modulus = 70e9;
  g.poisson_ratio = 0.22;
  g.tensile_strength = tensile_strength;
  g.regularization_length = regularization_length;
  return g;
}

LaminateSpec stack(std::span<const double> thicknesses_mm, const GlassMaterial& glass,
                   const PronySeries& polymer) {
  LaminateSpec s;
  for (std::size_t i = 0; i < thicknesses_mm.size(); ++i) {
    Layer l{thicknesses_mm[i] * 1e-3, glass};
    if (i % 2 == 1) l.material = polymer;
    s.layers.push_back(std::move(l));
  }
  return s;
}

namespace {

LaminateSpec four_point_setup(LaminateSpec s) {
  s.width = 0.36;
  s.span = 1.0;
  s.load_offset = 0.4;
  s.overhang = 0.05;
  return s;
}

}  // namespace

LaminateSpec five_layer() {
  const double t[] = {5.0, 2.28, 6.0, 0.76, 5.0};
  return four_point_setup(stack(t, float_glass(), default_pvb()));
}

LaminateSpec seven_layer_1() {
  const double t[] = {5.0, 1.52, 8.0, 0.76, 8.0, 0.76, 5.0};
  return four_point_setup(stack(t, float_glass(), default_pvb()));
}

LaminateSpec seven_layer_2() {
  const double t[] = {6.0, 1.52, 6.0, 0.76, 6.0, 1.52, 6.0};
  return four_point_setup(stack(t, float_glass(), default_pvb()));
}

LaminateSpec single_layer_benchmark() {
  LaminateSpec s;
  s.layers.push_back(Layer{0.020, float_glass(45e6, 1e-3)});
  s.width = 0.1;
  s.span = 1.0;
  s.load_offset = 0.4;
  s.overhang = 0.0;
  return s;
}

}  // namespace presets

}  // namespace lgfrac
