#pragma once

// Weibull strength model, lo/hi combinatorial tables and seeded Monte-Carlo
// ensembles over per-layer glass strengths.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lgfrac/laminate.hpp"
#include "lgfrac/staggered.hpp"

namespace lgfrac {

/// Two-parameter Weibull distribution. The scale carries the unit of the
/// samples (Pa for strengths, m for displacements).
struct WeibullParams {
  double shape = 4.64;
  double scale = 48.47e6;

  void validate() const;
};

double weibull_cdf(const WeibullParams& p, double x);
double weibull_pdf(const WeibullParams& p, double x);
/// scale * (-ln(1 - prob))^(1 / shape); throws out_of_range outside (0, 1).
double weibull_quantile(const WeibullParams& p, double prob);
double weibull_mean(const WeibullParams& p);
/// Most likely value; 0 for shape <= 1.
double weibull_mode(const WeibullParams& p);

/// Inverse-CDF transform of a uniform draw u in [0, 1).
double weibull_from_uniform(const WeibullParams& p, double u);
double weibull_sample(const WeibullParams& p, std::mt19937_64& rng);

/// Uniform double in [0, 1) from the top 53 bits of one engine output.
double uniform01(std::mt19937_64& rng);

/// Independent stream per (master seed, realization, layer).
std::mt19937_64 strength_stream(std::uint64_t master_seed, std::uint64_t realization,
                                std::uint64_t layer);

/// Maximum-likelihood fit. Throws ErrorCode::fit for fewer than 3 samples,
/// non-positive or non-finite values, or all samples equal.
WeibullParams weibull_fit_mle(std::span<const double> samples);

/// Hazen plotting-position quantile, (i - 1/2) / n with linear interpolation,
/// clamped to the extreme order statistics. `sorted` must be ascending.
double hazen_quantile(std::span<const double> sorted, double prob);

enum class FailureClass {
  none,  // no glass layer failed
  brittle_simultaneous,
  progressive,
  progressive_with_fragmentation,
};

std::string to_string(FailureClass c);

/// Classification of a failure summary: all layers in the first group is
/// brittle; otherwise progressive, with fragmentation when some layer reached
/// `fragmentation_cracks` cracks.
FailureClass classify_failure(const FailureSummary& events, std::span<const int> max_cracks,
                              std::size_t glass_layers, int fragmentation_cracks = 3);

/// Largest crack count per glass layer over the history.
std::vector<int> max_crack_counts(const SolveHistory& history);

/// Run inputs shared by every realization or table row.
struct EnsembleSetup {
  LoadProgram program;
  Discretization discretization;
  SolverSettings settings;
  unsigned workers = 0;  // 0: hardware concurrency
};

struct CombinatorialRow {
  std::string assignment;  // "lo-hi-hi", top to bottom
  std::vector<double> strengths;
  SolveHistory history;
  FailureSummary events;
  std::vector<int> max_cracks;
  FailureClass failure_class = FailureClass::none;
  /// Set when the run raised or stopped incomplete; the class is then taken
  /// from the partial history.
  bool flagged = false;
  std::string error;
};

/// One deterministic run per lo/hi assignment, rows in binary order with the
/// top layer as the most significant digit (lo = 0).
std::vector<CombinatorialRow> run_combinatorial(const LaminateSpec& spec, double lo, double hi,
                                                const EnsembleSetup& setup);

struct McConfig {
  std::size_t count = 200;
  std::uint64_t master_seed = 20240101;
  WeibullParams strength;
  EnsembleSetup setup;
  double grid_spacing = 1e-3 / 30.0;  // m
};

struct Realization {
  std::size_t index = 0;
  std::vector<double> strengths;  // Pa, top to bottom
  SolveHistory history;
  FailureSummary events;
  std::vector<int> max_cracks;
  bool failed = false;  // solver error or incomplete history
  std::string error;
};

struct Histogram {
  std::vector<double> edges;  // bins + 1 ascending edges
  std::vector<std::size_t> counts;
};

/// Equal-width bins over [min, max]; ceil(sqrt(n)) bins clamped to [5, 30].
Histogram make_histogram(std::span<const double> values);

struct SampleStatistics {
  std::vector<double> values;  // realization order
  Histogram histogram;
  std::optional<WeibullParams> fit;
  std::optional<double> mode;
};

struct SequenceStats {
  std::string sequence;
  std::size_t count = 0;
  double frequency = 0.0;
  /// Per glass layer, the strengths (Pa) of the realizations with this sequence.
  std::vector<std::vector<double>> strengths;
};

struct McSummary {
  std::size_t count = 0;
  std::size_t failed = 0;       // solver errors, excluded
  std::size_t never_failed = 0;  // completed without any failure event
  bool valid = true;             // at most 5% failed
  std::vector<int> glass_labels;

  std::vector<double> grid;  // m
  std::vector<std::size_t> defined;
  std::vector<double> p05, p50, p95;  // N; NaN where no realization is defined

  SampleStatistics initial;  // w_i over realizations with a failure event
  SampleStatistics final;    // w_f over realizations with all layers failed
  std::optional<double> modal_ratio;

  std::vector<SequenceStats> sequences;  // by descending count, then name
  double bottom_initiation_frequency = 0.0;
};

struct McResult {
  std::vector<Realization> realizations;
  McSummary summary;
};

/// Per-layer i.i.d. strengths of one realization.
std::vector<double> sample_strengths(const McConfig& cfg, std::size_t realization,
                                     std::size_t glass_layers);

McResult run_monte_carlo(const LaminateSpec& spec, const McConfig& cfg);

/// Summary statistics from finished realizations, reduced in index order.
McSummary summarize(const std::vector<Realization>& realizations,
                    std::span<const int> glass_labels, double grid_spacing);

/// Reaction at w by linear interpolation of the history rows; nullopt past
/// the last row.
std::optional<double> reaction_at(const SolveHistory& history, double displacement);

/// Runs f(i) for i in [0, n) on `workers` threads (0: hardware concurrency).
/// The first exception is rethrown after all workers stop.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& f);

}  // namespace lgfrac
