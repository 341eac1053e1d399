#include "lgfrac/stochastic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "lgfrac/error.hpp"

namespace lgfrac {

void WeibullParams::validate() const {
  std::vector<FieldIssue> issues;
  if (!(shape > 0.0) || !std::isfinite(shape)) issues.push_back({"shape", "must be > 0"});
  if (!(scale > 0.0) || !std::isfinite(scale)) issues.push_back({"scale", "must be > 0"});
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

double weibull_cdf(const WeibullParams& p, double x) {
  if (x <= 0.0) return 0.0;
  return -std::expm1(-std::pow(x / p.scale, p.shape));
}

double weibull_pdf(const WeibullParams& p, double x) {
  if (x < 0.0) return 0.0;
  if (x == 0.0) return p.shape == 1.0 ? 1.0 / p.scale : (p.shape < 1.0 ? HUGE_VAL : 0.0);
  const double r = x / p.scale;
  return p.shape / p.scale * std::pow(r, p.shape - 1.0) * std::exp(-std::pow(r, p.shape));
}

double weibull_quantile(const WeibullParams& p, double prob) {
  p.validate();
  if (!(prob > 0.0 && prob < 1.0))
    throw Error(ErrorCode::out_of_range, "probability must lie in (0, 1)");
  return p.scale * std::pow(-std::log1p(-prob), 1.0 / p.shape);
}

double weibull_mean(const WeibullParams& p) { return p.scale * std::tgamma(1.0 + 1.0 / p.shape); }

double weibull_mode(const WeibullParams& p) {
  if (p.shape <= 1.0) return 0.0;
  return p.scale * std::pow((p.shape - 1.0) / p.shape, 1.0 / p.shape);
}

double weibull_from_uniform(const WeibullParams& p, double u) {
  return p.scale * std::pow(-std::log1p(-u), 1.0 / p.shape);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double weibull_sample(const WeibullParams& p, std::mt19937_64& rng) {
  return weibull_from_uniform(p, uniform01(rng));
}

std::mt19937_64 strength_stream(std::uint64_t master_seed, std::uint64_t realization,
                                std::uint64_t layer) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(master_seed), hi(master_seed), lo(realization),
                    hi(realization), lo(layer),       hi(layer)};
  return std::mt19937_64(seq);
}

WeibullParams weibull_fit_mle(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 3) throw Error(ErrorCode::fit, "Weibull fit needs at least 3 samples");
  double xmax = 0.0, xmin = HUGE_VAL;
  for (double x : samples) {
    if (!(x > 0.0) || !std::isfinite(x))
      throw Error(ErrorCode::fit, "Weibull fit needs positive finite samples");
    xmax = std::max(xmax, x);
    xmin = std::min(xmin, x);
  }
  if (xmin == xmax) throw Error(ErrorCode::fit, "Weibull fit needs samples that are not all equal");

  // Profile equation in the scaled variable y = x / xmax (no overflow):
  //   f(k) = sum y^k ln y / sum y^k - 1/k - mean(ln y) = 0,
  // increasing in k, f -> -inf as k -> 0 and f -> -mean(ln y) > 0 as k -> inf.
  std::vector<double> ly(n);
  double mean_ly = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ly[i] = std::log(samples[i] / xmax);
    mean_ly += ly[i];
  }
  mean_ly /= static_cast<double>(n);
  auto eval = [&](double k, double& f, double& df) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (double l : ly) {
      const double w = std::exp(k * l);
      s0 += w;
      s1 += w * l;
      s2 += w * l * l;
    }
    const double m1 = s1 / s0;
    f = m1 - 1.0 / k - mean_ly;
    df = s2 / s0 - m1 * m1 + 1.0 / (k * k);
  };

  double lo = 1.0, hi = 1.0, f, df;
  eval(lo, f, df);
  while (f > 0.0) {
    lo *= 0.5;
    eval(lo, f, df);
  }
  eval(hi, f, df);
  while (f < 0.0) {
    hi *= 2.0;
    if (hi > 1e8) throw Error(ErrorCode::fit, "Weibull shape does not bracket");
    eval(hi, f, df);
  }
  double k = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    eval(k, f, df);
    if (f < 0.0)
      lo = k;
    else
      hi = k;
    double next = k - f / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const bool done = std::abs(next - k) <= 1e-10 * k || hi - lo <= 1e-12 * k;
    k = next;
    if (done) break;
  }
  double mean_pow = 0.0;
  for (double l : ly) mean_pow += std::exp(k * l);
  mean_pow /= static_cast<double>(n);
  return {k, xmax * std::pow(mean_pow, 1.0 / k)};
}

double hazen_quantile(std::span<const double> sorted, double prob) {
  const std::size_t n = sorted.size();
  if (n == 0) throw Error(ErrorCode::invalid_argument, "quantile of an empty sample");
  const double h = static_cast<double>(n) * prob + 0.5;
  if (h <= 1.0) return sorted.front();
  if (h >= static_cast<double>(n)) return sorted.back();
  const auto i = static_cast<std::size_t>(std::floor(h));
  const double t = h - static_cast<double>(i);
  return sorted[i - 1] + t * (sorted[i] - sorted[i - 1]);
}

std::string to_string(FailureClass c) {
  switch (c) {
    case FailureClass::none: return "none";
    case FailureClass::brittle_simultaneous: return "brittle-simultaneous";
    case FailureClass::progressive: return "progressive";
    case FailureClass::progressive_with_fragmentation: return "progressive-with-fragmentation";
  }
  return "unknown";
}

FailureClass classify_failure(const FailureSummary& events, std::span<const int> max_cracks,
                              std::size_t glass_layers, int fragmentation_cracks) {
  if (events.groups.empty()) return FailureClass::none;
  if (events.groups.front().layers.size() == glass_layers)
    return FailureClass::brittle_simultaneous;
  for (int c : max_cracks)
    if (c >= fragmentation_cracks) return FailureClass::progressive_with_fragmentation;
  return FailureClass::progressive;
}

std::vector<int> max_crack_counts(const SolveHistory& history) {
  std::vector<int> out(history.glass_labels.size(), 0);
  for (const auto& row : history.rows)
    for (std::size_t g = 0; g < out.size() && g < row.crack_count.size(); ++g)
      out[g] = std::max(out[g], row.crack_count[g]);
  return out;
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& f) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex guard;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(guard);
        if (!first) first = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

namespace {

void run_one(const LaminateSpec& spec, const EnsembleSetup& setup,
             const std::vector<double>& strengths, SolveHistory& history, bool& failed,
             std::string& error) {
  RunOverrides ov;
  ov.strengths = strengths;
  try {
    history = run_quasi_static(spec, setup.program, setup.discretization, setup.settings, ov);
    if (!history.complete) {
      failed = true;
      error = history.abort_reason;
    }
  } catch (const std::exception& e) {
    failed = true;
    error = e.what();
  }
}

}  // namespace

std::vector<CombinatorialRow> run_combinatorial(const LaminateSpec& spec, double lo, double hi,
                                                const EnsembleSetup& setup) {
  if (!(lo < hi)) throw Error(ErrorCode::invalid_argument, "combinatorial table needs lo < hi");
  spec.validate();
  const std::size_t ng = spec.glass_count();
  const std::size_t cases = std::size_t{1} << ng;
  std::vector<CombinatorialRow> rows(cases);
  for (std::size_t c = 0; c < cases; ++c) {
    auto& row = rows[c];
    for (std::size_t g = 0; g < ng; ++g) {
      const bool high = (c >> (ng - 1 - g)) & 1u;
      row.strengths.push_back(high ? hi : lo);
      if (g) row.assignment += '-';
      row.assignment += high ? "hi" : "lo";
    }
  }
  parallel_for(cases, setup.workers, [&](std::size_t c) {
    auto& row = rows[c];
    run_one(spec, setup, row.strengths, row.history, row.flagged, row.error);
    if (row.history.glass_labels.empty()) row.history.glass_labels = spec.glass_labels();
    row.events = extract_failure_events(row.history, setup.settings.failure_threshold);
    row.max_cracks = max_crack_counts(row.history);
    row.failure_class = classify_failure(row.events, row.max_cracks, ng);
  });
  return rows;
}

std::vector<double> sample_strengths(const McConfig& cfg, std::size_t realization,
                                     std::size_t glass_layers) {
  std::vector<double> out(glass_layers);
  for (std::size_t g = 0; g < glass_layers; ++g) {
    auto rng = strength_stream(cfg.master_seed, realization, g);
    out[g] = weibull_sample(cfg.strength, rng);
  }
  return out;
}

Histogram make_histogram(std::span<const double> values) {
  Histogram h;
  if (values.empty()) return h;
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  double a = *mn, b = *mx;
  if (a == b) {
    const double pad = a == 0.0 ? 0.5 : 0.5e-3 * std::abs(a);
    a -= pad;
    b += pad;
  }
  const auto bins = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(values.size())))), 5, 30);
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
    h.edges[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(bins);
  h.counts.assign(bins, 0);
  for (double v : values) {
    auto i = static_cast<std::size_t>((v - a) / (b - a) * static_cast<double>(bins));
    ++h.counts[std::min(i, bins - 1)];
  }
  return h;
}

std::optional<double> reaction_at(const SolveHistory& history, double w) {
  const auto& rows = history.rows;
  if (rows.empty() || w > rows.back().displacement) return std::nullopt;
  // Last row at or below w; with a repeated abscissa the later row wins.
  auto it = std::upper_bound(rows.begin(), rows.end(), w,
                             [](double x, const HistoryRow& r) { return x < r.displacement; });
  if (it == rows.begin()) return rows.front().reaction;
  const auto& a = *(it - 1);
  if (it == rows.end() || a.displacement == w) return a.reaction;
  const auto& b = *it;
  const double t = (w - a.displacement) / (b.displacement - a.displacement);
  return a.reaction + t * (b.reaction - a.reaction);
}

namespace {

SampleStatistics sample_statistics(std::vector<double> values) {
  SampleStatistics s;
  s.values = std::move(values);
  s.histogram = make_histogram(s.values);
  try {
    s.fit = weibull_fit_mle(s.values);
    s.mode = weibull_mode(*s.fit);
  } catch (const Error&) {
    // Too few or identical values: no fit, mode from the histogram peak.
    if (!s.values.empty()) {
      const auto& h = s.histogram;
      const auto peak = static_cast<std::size_t>(
          std::max_element(h.counts.begin(), h.counts.end()) - h.counts.begin());
      s.mode = 0.5 * (h.edges[peak] + h.edges[peak + 1]);
      if (std::all_of(s.values.begin(), s.values.end(),
                      [&](double v) { return v == s.values.front(); }))
        s.mode = s.values.front();
    }
  }
  return s;
}

}  // namespace

McSummary summarize(const std::vector<Realization>& realizations,
                    std::span<const int> glass_labels, double grid_spacing) {
  McSummary out;
  out.count = realizations.size();
  out.glass_labels.assign(glass_labels.begin(), glass_labels.end());
  const std::size_t ng = glass_labels.size();

  std::vector<const Realization*> ok;
  for (const auto& r : realizations) {
    if (r.failed)
      ++out.failed;
    else
      ok.push_back(&r);
  }
  out.valid = out.count > 0 && 20 * out.failed <= out.count;

  double w_end = 0.0;
  for (const auto* r : ok)
    if (!r->history.rows.empty()) w_end = std::max(w_end, r->history.rows.back().displacement);
  const auto points = static_cast<std::size_t>(std::floor(w_end / grid_spacing + 1e-9)) + 1;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t j = 0; j < points && !ok.empty(); ++j) {
    const double w = static_cast<double>(j) * grid_spacing;
    std::vector<double> rs;
    for (const auto* r : ok)
      if (auto v = reaction_at(r->history, w)) rs.push_back(*v);
    std::sort(rs.begin(), rs.end());
    out.grid.push_back(w);
    out.defined.push_back(rs.size());
    if (rs.empty()) {
      out.p05.push_back(nan);
      out.p50.push_back(nan);
      out.p95.push_back(nan);
    } else {
      out.p05.push_back(hazen_quantile(rs, 0.05));
      out.p50.push_back(hazen_quantile(rs, 0.50));
      out.p95.push_back(hazen_quantile(rs, 0.95));
    }
  }

  std::vector<double> wi, wf;
  std::map<std::string, SequenceStats> seq;
  std::size_t with_events = 0, bottom = 0;
  for (const auto* r : ok) {
    if (!r->events.initial_displacement) {
      ++out.never_failed;
      continue;
    }
    wi.push_back(*r->events.initial_displacement);
    if (r->events.final_displacement) wf.push_back(*r->events.final_displacement);
    ++with_events;
    const auto& first = r->events.groups.front().layers;
    if (ng && std::find(first.begin(), first.end(), glass_labels[ng - 1]) != first.end()) ++bottom;
    auto& s = seq[r->events.sequence];
    s.sequence = r->events.sequence;
    ++s.count;
    s.strengths.resize(ng);
    for (std::size_t g = 0; g < ng && g < r->strengths.size(); ++g)
      s.strengths[g].push_back(r->strengths[g]);
  }
  out.initial = sample_statistics(std::move(wi));
  out.final = sample_statistics(std::move(wf));
  if (out.initial.mode && out.final.mode && *out.final.mode > 0.0)
    out.modal_ratio = *out.initial.mode / *out.final.mode;

  for (auto& [name, s] : seq) {
    s.frequency = static_cast<double>(s.count) / static_cast<double>(with_events);
    out.sequences.push_back(std::move(s));
  }
  std::stable_sort(out.sequences.begin(), out.sequences.end(),
                   [](const SequenceStats& a, const SequenceStats& b) { return a.count > b.count; });
  if (with_events)
    out.bottom_initiation_frequency = static_cast<double>(bottom) / static_cast<double>(with_events);
  return out;
}

McResult run_monte_carlo(const LaminateSpec& spec, const McConfig& cfg) {
  if (cfg.count < 1) throw ConfigError("monte_carlo.count", "must be >= 1");
  if (!(cfg.grid_spacing > 0.0)) throw ConfigError("monte_carlo.grid_spacing_mm", "must be > 0");
  cfg.strength.validate();
  spec.validate();
  const std::size_t ng = spec.glass_count();
  McResult out;
  out.realizations.resize(cfg.count);
  parallel_for(cfg.count, cfg.setup.workers, [&](std::size_t i) {
    auto& r = out.realizations[i];
    r.index = i;
    r.strengths = sample_strengths(cfg, i, ng);
    run_one(spec, cfg.setup, r.strengths, r.history, r.failed, r.error);
    if (r.history.glass_labels.empty()) r.history.glass_labels = spec.glass_labels();
    r.events = extract_failure_events(r.history, cfg.setup.settings.failure_threshold);
    r.max_cracks = max_crack_counts(r.history);
  });
  out.summary = summarize(out.realizations, spec.glass_labels(), cfg.grid_spacing);
  return out;
}

}  // namespace lgfrac
