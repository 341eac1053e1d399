#pragma once

// Run configuration file (JSON, schema_version 1). Values are held in the
// file's units (mm, MPa, degC, mm/min, s) so a dumped configuration parses
// back to the identical value set; conversion to SI happens in to_spec() and
// friends.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lgfrac/laminate.hpp"
#include "lgfrac/staggered.hpp"
#include "lgfrac/stochastic.hpp"

namespace lgfrac {

enum class RunMode { deterministic, combinatorial, monte_carlo, benchmark };

std::string to_string(RunMode m);

struct GlassConfig {
  double young_modulus_mpa = 70000.0;
  double poisson_ratio = 0.22;
  double tensile_strength_mpa = 45.0;
  std::vector<double> strengths_mpa;  // optional per glass layer, top to bottom

  bool operator==(const GlassConfig&) const = default;
};

struct PronyTermConfig {
  double modulus_mpa = 0.0;
  double relaxation_time_s = 1.0;

  bool operator==(const PronyTermConfig&) const = default;
};

struct ShiftEntryConfig {
  double temperature_c = 20.0;
  double factor = 1.0;

  bool operator==(const ShiftEntryConfig&) const = default;
};

struct PolymerConfig {
  std::string model = "pvb";  // pvb | constant | prony
  double poisson_ratio = 0.49;
  double shear_modulus_mpa = 0.0;  // constant
  double long_term_modulus_mpa = 0.0;  // prony
  std::vector<PronyTermConfig> terms;  // prony
  std::vector<ShiftEntryConfig> shift_table;  // prony; empty: no temperature shift
  std::string shift_extrapolation = "error";  // error | clamp

  bool operator==(const PolymerConfig&) const = default;
};

struct LaminateConfig {
  std::vector<double> layers_mm;
  double width_mm = 360.0;
  double span_mm = 1000.0;
  double load_offset_mm = 400.0;
  double overhang_mm = 50.0;

  bool operator==(const LaminateConfig&) const = default;
};

struct ProgramConfig {
  double rate_mm_per_min = 1.0;
  double increment_mm = 0.05;
  double max_displacement_mm = 50.0;
  bool stop_when_all_failed = true;

  bool operator==(const ProgramConfig&) const = default;
};

struct DiscretizationConfig {
  double element_length_mm = 0.5;
  std::optional<double> length_scale_mm;  // default 2 * element length
  int thickness_points = 40;
  bool symmetric_half = true;

  bool operator==(const DiscretizationConfig&) const = default;
};

struct SolverConfig {
  double newton_tolerance = 1e-12;
  int newton_max_iterations = 60;
  double staggered_tolerance = 1e-6;
  int staggered_max_iterations = 500;
  int anderson_depth = 5;
  double vi_tolerance = 1e-10;
  int max_halvings = 4;
  bool split = true;
  double residual_stiffness = 1e-8;
  std::string driving_force = "rankine";  // rankine | tensile-energy
  double failure_threshold = 0.999;
  double crack_threshold = 0.95;

  bool operator==(const SolverConfig&) const = default;
};

struct CombinatorialConfig {
  double lo_mpa = 25.6;
  double hi_mpa = 61.4;

  bool operator==(const CombinatorialConfig&) const = default;
};

struct MonteCarloConfig {
  std::size_t count = 200;
  double weibull_shape = 4.64;
  double weibull_scale_mpa = 48.47;
  double grid_spacing_mm = 1.0 / 30.0;
  bool keep_histories = true;

  bool operator==(const MonteCarloConfig&) const = default;
};

struct BenchmarkConfig {
  double increment_mm = 0.005;
  double max_displacement_mm = 8.0;
  double element_length_mm = 0.5;
  double length_scale_mm = 1.0;
  int thickness_points = 40;
  double weakening = 1e-3;  // relative modulus reduction of the central element

  bool operator==(const BenchmarkConfig&) const = default;
};

struct RunConfig {
  int schema_version = 1;
  RunMode mode = RunMode::deterministic;
  std::string name;
  std::string comment;  // free text, carried through unchanged
  LaminateConfig laminate;
  GlassConfig glass;
  PolymerConfig polymer;
  ProgramConfig program;
  DiscretizationConfig discretization;
  SolverConfig solver;
  double temperature_c = 20.0;
  CombinatorialConfig combinatorial;
  MonteCarloConfig monte_carlo;
  BenchmarkConfig benchmark;
  std::uint64_t seed = 20240101;
  unsigned workers = 0;  // 0: available cores
  std::string output_dir = "out";

  LaminateSpec to_spec() const;
  LoadProgram to_program() const;
  Discretization to_discretization() const;
  SolverSettings to_settings() const;
  EnsembleSetup to_setup() const;
  McConfig to_mc() const;

  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates; every violation is reported in one ConfigError with
/// its dotted field path. Unknown keys are violations too.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// Effective configuration with every default filled in, pretty-printed JSON.
std::string dump_config(const RunConfig& cfg);

}  // namespace lgfrac
