#pragma once

// Single-layer four-point bending verification: failure displacement and the
// mid-span horizontal jump after fracture, with and without the
// tension/compression split.

#include <optional>

#include "lgfrac/laminate.hpp"
#include "lgfrac/staggered.hpp"

namespace lgfrac {

struct BenchmarkSettings {
  double increment = 0.005e-3;        // m
  double max_displacement = 8e-3;     // m
  double element_length = 0.5e-3;    // m
  double length_scale = 1e-3;        // m
  int thickness_points = 40;
  double weakening = 1e-3;  // relative modulus reduction of the central element
  SolverSettings solver;
};

/// Load-point deflection at which the thin-beam extreme fiber stress reaches ft:
/// l^2 / (3 E h) * (3 a/l - 4 (a/l)^2) * ft.
double analytic_failure_displacement(double young_modulus, double thickness, double span,
                                     double load_offset, double tensile_strength);

struct BenchmarkCase {
  bool split = true;
  std::optional<double> failure_displacement;  // m
  double jump = 0.0;  // mid-span horizontal jump at the failure step, m
  SolveHistory history;
  double seconds = 0.0;
};

struct BenchmarkReport {
  double analytic_failure_displacement = 0.0;  // m
  double analytic_rotation = 0.0;              // rad, arctan(w_f / a)
  double analytic_jump = 0.0;                  // m, h sin(alpha)
  BenchmarkCase with_split;
  BenchmarkCase without_split;
};

BenchmarkCase run_benchmark_case(const BenchmarkSettings& settings, bool split);
BenchmarkReport run_benchmark(const BenchmarkSettings& settings = {});

}  // namespace lgfrac
