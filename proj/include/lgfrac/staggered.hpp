#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lgfrac/beam_fem.hpp"
#include "lgfrac/damage.hpp"
#include "lgfrac/laminate.hpp"

namespace lgfrac {

/// Monotone displacement-controlled loading, w(t) = rate * t.
struct LoadProgram {
  double displacement_rate = 1e-3 / 60.0;  // m/s (1 mm/min)
  double increment = 0.05e-3;              // displacement per step, m
  double max_displacement = 50e-3;         // m
  bool stop_when_all_failed = true;
  std::size_t max_steps = 1000000;

  double time_step() const { return increment / displacement_rate; }
};

struct Discretization {
  double element_length = 0.5e-3;
  std::optional<double> length_scale;  // defaults to 2 * element_length
  int thickness_points = 40;
  bool symmetric_half = true;

  double effective_length_scale() const { return length_scale.value_or(2.0 * element_length); }
};

struct SolverSettings {
  NewtonSettings newton;
  double staggered_tolerance = 1e-6;
  int staggered_max_iterations = 500;
  /// Anderson mixing depth on the damage iterates of the staggered loop;
  /// 0 gives plain alternating minimization. Fixed point and error measure
  /// are the same either way.
  int anderson_depth = 5;
  double vi_tolerance = 1e-10;
  int max_halvings = 4;
  bool split = true;
  double residual_stiffness = 1e-8;
  DrivingForceKind driving_force = DrivingForceKind::rankine;
  double failure_threshold = 0.999;  // d at any node marking a fully cracked layer
  double crack_threshold = 0.95;     // d marking a crack interval
  double temperature = 20.0;         // degC
};

/// Per-run pins used by the benchmark and the stochastic drivers.
struct RunOverrides {
  std::vector<double> strengths;  // per glass layer, Pa; empty keeps the spec values
  std::vector<std::vector<double>> modulus_scaling;  // per glass layer, per element
};

struct HistoryRow {
  std::size_t step = 0;
  double time = 0.0;          // s
  double displacement = 0.0;  // m
  double reaction = 0.0;      // N
  std::vector<double> max_damage;  // per glass layer
  std::vector<int> crack_count;    // per glass layer
  int staggered_iterations = 0;
  double stored_energy = 0.0;      // J, full beam
  double dissipated_energy = 0.0;  // J, full beam
  double support_reaction = 0.0;   // N
};

struct SolveHistory {
  std::vector<int> glass_labels;  // 1-based stack positions, top to bottom
  std::vector<HistoryRow> rows;
  bool complete = true;
  std::string abort_reason;
  int halvings = 0;
  /// Audit of the accepted steps: smallest nodal damage change between
  /// consecutive steps (negative would break irreversibility) and largest
  /// excursion outside [floor, 1].
  double min_damage_increment = 0.0;
  double max_bound_violation = 0.0;
};

/// Called after every converged step with the converged fields.
using StepObserver =
    std::function<void(const HistoryRow&, const BeamModel&, const StateFields&)>;

/// Mesh, boundary conditions and solver options assembled from the run inputs.
BeamModel make_model(const LaminateSpec& spec, const Discretization& disc,
                     const SolverSettings& settings, const RunOverrides& overrides = {});

/// Element index of the model's mid-span element (adjacent to the symmetry node
/// on the half model).
std::size_t central_element(const Mesh1D& mesh);

SolveHistory run_quasi_static(const LaminateSpec& spec, const LoadProgram& program,
                              const Discretization& disc, const SolverSettings& settings,
                              const RunOverrides& overrides = {},
                              const StepObserver& observer = {});

/// max(|w - w_prev| / |w|, |d - d_prev| / |d|); a zero denominator gives 0
/// when the numerator is zero and +inf otherwise.
double staggered_error(std::span<const double> deflection, std::span<const double> damage,
                       std::span<const double> previous_deflection,
                       std::span<const double> previous_damage);

struct FailureGroup {
  std::size_t step = 0;
  double displacement = 0.0;
  std::vector<int> layers;  // stack labels failing at this step
};

struct FailureSummary {
  std::vector<FailureGroup> groups;
  std::optional<double> initial_displacement;  // first fully cracked layer
  std::optional<double> final_displacement;    // every glass layer cracked
  std::string sequence;                        // e.g. "5 -> 1+3"

  bool all_failed() const { return final_displacement.has_value(); }
};

FailureSummary extract_failure_events(const SolveHistory& history, double threshold = 0.999);

/// "5 -> 1+3" style rendering of failure groups.
std::string format_sequence(const std::vector<FailureGroup>& groups);

/// Number of cracks in the full beam: intervals with d > threshold, merged
/// across gaps shorter than 2 * length_scale. On a half model an interval
/// touching the symmetry node is one crack, any other interval stands for a
/// mirrored pair.
int count_cracks(std::span<const double> damage, double element_length, double length_scale,
                 bool symmetric_half, double threshold = 0.95);

}  // namespace lgfrac
