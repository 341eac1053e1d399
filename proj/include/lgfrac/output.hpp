#pragma once

// Result files. Every writer renders to a string first (fixed decimal
// formatting, '.' separator, LF endings) so repeated runs give identical bytes.

#include <filesystem>
#include <string>
#include <vector>

#include "lgfrac/benchmark.hpp"
#include "lgfrac/config.hpp"
#include "lgfrac/staggered.hpp"
#include "lgfrac/stochastic.hpp"

namespace lgfrac {

/// step, t_s, w_mm, R_N, d_max_<label>..., cracks_<label>..., staggered_iterations,
/// stored_energy_J, dissipated_energy_J
std::string history_csv(const SolveHistory& history);
/// w_mm, R_N
std::string fd_curve_csv(const SolveHistory& history);
std::string events_json(const SolveHistory& history, const FailureSummary& events);

/// w_mm, R_p05, R_p50, R_p95, defined
std::string quantiles_csv(const McSummary& summary);
/// bin_lo_mm, bin_hi_mm, count, density_per_mm, fitted_density_per_mm
std::string displacement_histogram_csv(const SampleStatistics& stats);
/// sequence, count, frequency
std::string sequences_csv(const McSummary& summary);
/// sequence, layer, bin_lo_mpa, bin_hi_mpa, count, density_per_mpa, fitted_density_per_mpa
std::string sequence_strengths_csv(const McSummary& summary);
/// index, strength_<label>_mpa..., sequence, w_i_mm, w_f_mm, failed
std::string realizations_csv(const std::vector<Realization>& realizations,
                             const std::vector<int>& glass_labels);
std::string summary_json(const McSummary& summary);

/// assignment, class, flagged, w_fail_<label>_mm..., max_cracks_<label>...
/// (empty w_fail cell: the layer did not fail)
std::string integrity_csv(const std::vector<CombinatorialRow>& rows, double threshold = 0.999);
std::string combinatorial_json(const std::vector<CombinatorialRow>& rows);

std::string benchmark_json(const BenchmarkReport& report);

/// First displacement at which each glass layer reached the threshold.
std::vector<std::optional<double>> layer_failure_displacements(const SolveHistory& history,
                                                               double threshold);

/// Numeric first column of a CSV file; lines whose first field is not a
/// number (headers, comments) are skipped.
std::vector<double> read_samples_csv(const std::filesystem::path& path);
/// rank, value, hazen_probability, fitted_probability over the sorted samples.
std::string probability_plot_csv(std::vector<double> samples, const WeibullParams& fit);

enum class PlotKind { fd_curve, quantiles, histograms, sequences, integrity };

/// Parses "fd-curve", "quantiles", "histograms", "sequences", "integrity";
/// anything else is a usage error (ErrorCode::invalid_argument).
PlotKind parse_plot_kind(const std::string& name);

void write_text(const std::filesystem::path& path, const std::string& content);

/// Artifacts of one mode, written under `dir` (created if missing). Returns the
/// list of files written, relative to `dir`.
std::vector<std::string> write_deterministic(const std::filesystem::path& dir,
                                             const SolveHistory& history, double threshold);
std::vector<std::string> write_combinatorial(const std::filesystem::path& dir,
                                             const std::vector<CombinatorialRow>& rows,
                                             double threshold = 0.999);
std::vector<std::string> write_monte_carlo(const std::filesystem::path& dir, const McResult& result,
                                           bool keep_histories);
std::vector<std::string> write_benchmark(const std::filesystem::path& dir,
                                         const BenchmarkReport& report);

}  // namespace lgfrac
