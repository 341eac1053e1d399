#pragma once

// Laminate description: glass and polymer materials, layer stack, section
// characteristics and the quasi-elastic interlayer modulus. Internal units are
// SI throughout (m, Pa, N, s).

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace lgfrac {

/// Fracture energy implied by the strength/length-scale coupling of the
/// regularized dissipation: Gc = (8/3) ft^2 l / E.
double derive_fracture_energy(double tensile_strength, double regularization_length,
                              double young_modulus);

/// Inverse of derive_fracture_energy with respect to the tensile strength.
double strength_from_fracture_energy(double fracture_energy, double regularization_length,
                                     double young_modulus);

struct GlassMaterial {
  double young_modulus = 70e9;
  double poisson_ratio = 0.22;
  double tensile_strength = 45e6;
  double regularization_length = 1e-3;

  double shear_modulus() const { return young_modulus / (2.0 * (1.0 + poisson_ratio)); }
  double fracture_energy() const {
    return derive_fracture_energy(tensile_strength, regularization_length, young_modulus);
  }
  void validate() const;
};

enum class ShiftExtrapolation { error, clamp };

/// Tabulated time-temperature shift, log-linear between entries. An empty table
/// means the series is temperature independent (factor 1 everywhere).
class TemperatureShift {
 public:
  TemperatureShift() = default;
  /// Entries are (temperature in degC, shift factor a > 0); sorted on construction.
  TemperatureShift(std::vector<std::pair<double, double>> table,
                   ShiftExtrapolation policy = ShiftExtrapolation::error);

  double factor(double temperature) const;
  const std::vector<std::pair<double, double>>& table() const { return table_; }
  ShiftExtrapolation policy() const { return policy_; }

 private:
  std::vector<std::pair<double, double>> table_;
  ShiftExtrapolation policy_ = ShiftExtrapolation::error;
};

struct PronyTerm {
  double modulus;          // Pa
  double relaxation_time;  // s
};

/// Generalized Maxwell chain for the interlayer shear modulus:
/// G(t) = G_inf + sum_i G_i exp(-t / tau_i).
struct PronySeries {
  double long_term_modulus = 0.0;
  std::vector<PronyTerm> terms;
  TemperatureShift shift;
  double poisson_ratio = 0.49;

  double instantaneous_modulus() const;
  /// Modulus at an already shifted (reduced) time.
  double modulus_at_reduced_time(double reduced_time) const;
  void validate() const;
};

/// G(time/2, temperature): the relaxation modulus evaluated at half of the
/// elapsed loading time, shifted to the reference temperature.
double quasi_elastic_shear_modulus(const PronySeries& series, double time, double temperature);

/// Representative PVB chain (not an identified data set) with a WLF-derived shift table.
PronySeries default_pvb();

/// Temperature- and time-independent interlayer, for tests and verification runs.
PronySeries constant_polymer(double shear_modulus, double poisson_ratio = 0.49);

struct SectionProperties {
  double area;
  double second_moment;
  double shear_area;
};

SectionProperties section_properties(double width, double thickness);

enum class LayerKind { glass, polymer };

struct Layer {
  double thickness;
  std::variant<GlassMaterial, PronySeries> material;

  LayerKind kind() const {
    return std::holds_alternative<GlassMaterial>(material) ? LayerKind::glass : LayerKind::polymer;
  }
  const GlassMaterial& glass() const { return std::get<GlassMaterial>(material); }
  const PronySeries& polymer() const { return std::get<PronySeries>(material); }
};

/// Layers are ordered top to bottom; layer m (1-based) is glass for odd m.
struct LaminateSpec {
  std::vector<Layer> layers;
  double width = 0.36;
  double span = 1.0;
  double load_offset = 0.4;  // distance of a load point from the nearest support
  double overhang = 0.0;     // support inset from the beam end

  double total_length() const { return span + 2.0 * overhang; }
  double total_thickness() const;
  std::size_t glass_count() const;
  /// Indices into `layers` of the glass layers, top to bottom.
  std::vector<std::size_t> glass_indices() const;
  /// 1-based stack position of each glass layer (1, 3, 5, ...).
  std::vector<int> glass_labels() const;

  /// Copy with per-glass-layer tensile strengths replaced (top to bottom).
  LaminateSpec with_strengths(std::span<const double> strengths) const;
  /// Copy with the damage regularization length set on every glass layer.
  LaminateSpec with_length_scale(double length) const;

  /// Throws ConfigError listing every violated invariant.
  void validate() const;
};

namespace presets {

/// Glass with the given strength, E = 70 GPa, nu = 0.22.
GlassMaterial float_glass(double tensile_strength = 45e6, double regularization_length = 1e-3);

/// Stack from thicknesses in mm, glass/polymer alternating from the top.
LaminateSpec stack(std::span<const double> thicknesses_mm, const GlassMaterial& glass,
                   const PronySeries& polymer);

LaminateSpec five_layer();     // 5LG:   5/2.28/6/0.76/5 mm
LaminateSpec seven_layer_1();  // 7LG-1: 5/1.52/8/0.76/8/0.76/5 mm
LaminateSpec seven_layer_2();  // 7LG-2: 6/1.52/6/0.76/6/1.52/6 mm
/// Monolithic 20 mm beam, span 1000 mm, load offset 400 mm, no overhang.
LaminateSpec single_layer_benchmark();

}  // namespace presets

}  // namespace lgfrac
