#include "lgfrac/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "lgfrac/error.hpp"

namespace lgfrac {

using json = nlohmann::ordered_json;

namespace {

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s = buf;
  // "-0.000" -> "0.000"
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) return s.substr(1);
  return s;
}

std::string mm(double m) { return fixed(m * 1e3, 6); }

json optional_mm(const std::optional<double>& v) { return v ? json(*v * 1e3) : json(); }

json layers_json(const std::vector<int>& labels) {
  json a = json::array();
  for (int l : labels) a.push_back(l);
  return a;
}

json events_object(const SolveHistory& history, const FailureSummary& events) {
  json groups = json::array();
  for (const auto& g : events.groups)
    groups.push_back({{"step", g.step}, {"w_mm", g.displacement * 1e3}, {"layers", layers_json(g.layers)}});
  return {{"complete", history.complete},
          {"abort_reason", history.abort_reason},
          {"halvings", history.halvings},
          {"glass_labels", layers_json(history.glass_labels)},
          {"sequence", events.sequence},
          {"w_i_mm", optional_mm(events.initial_displacement)},
          {"w_f_mm", optional_mm(events.final_displacement)},
          {"groups", groups}};
}

std::string histogram_rows(const Histogram& h, double unit, const std::optional<WeibullParams>& fit,
                           std::size_t n, const std::string& prefix) {
  std::string out;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double a = h.edges[i], b = h.edges[i + 1];
    const double width = (b - a) / unit;
    const double density = n ? static_cast<double>(h.counts[i]) / (static_cast<double>(n) * width) : 0.0;
    const double fitted = fit ? (weibull_cdf(*fit, b) - weibull_cdf(*fit, a)) / width : NAN;
    out += prefix + fixed(a / unit, 6) + "," + fixed(b / unit, 6) + "," +
           std::to_string(h.counts[i]) + "," + fixed(density, 8) + "," + fixed(fitted, 8) + "\n";
  }
  return out;
}

json fit_json(const SampleStatistics& s, double unit) {
  json j = {{"count", s.values.size()}};
  j["weibull_shape"] = s.fit ? json(s.fit->shape) : json();
  j["weibull_scale"] = s.fit ? json(s.fit->scale / unit) : json();
  j["mode"] = s.mode ? json(*s.mode / unit) : json();
  return j;
}

}  // namespace

std::string history_csv(const SolveHistory& h) {
  std::string out = "step,t_s,w_mm,R_N";
  for (int l : h.glass_labels) out += ",d_max_" + std::to_string(l);
  for (int l : h.glass_labels) out += ",cracks_" + std::to_string(l);
  out += ",staggered_iterations,stored_energy_J,dissipated_energy_J\n";
  for (const auto& r : h.rows) {
    out += std::to_string(r.step) + "," + fixed(r.time, 6) + "," + mm(r.displacement) + "," +
           fixed(r.reaction, 6);
    for (double d : r.max_damage) out += "," + fixed(d, 8);
    for (int c : r.crack_count) out += "," + std::to_string(c);
    out += "," + std::to_string(r.staggered_iterations) + "," + fixed(r.stored_energy, 9) + "," +
           fixed(r.dissipated_energy, 9) + "\n";
  }
  return out;
}

std::string fd_curve_csv(const SolveHistory& h) {
  std::string out = "w_mm,R_N\n";
  for (const auto& r : h.rows) out += mm(r.displacement) + "," + fixed(r.reaction, 6) + "\n";
  return out;
}

std::string events_json(const SolveHistory& history, const FailureSummary& events) {
  return events_object(history, events).dump(2) + "\n";
}

std::string quantiles_csv(const McSummary& s) {
  std::string out = "w_mm,R_p05,R_p50,R_p95,defined\n";
  for (std::size_t j = 0; j < s.grid.size(); ++j)
    out += mm(s.grid[j]) + "," + fixed(s.p05[j], 6) + "," + fixed(s.p50[j], 6) + "," +
           fixed(s.p95[j], 6) + "," + std::to_string(s.defined[j]) + "\n";
  return out;
}

std::string displacement_histogram_csv(const SampleStatistics& stats) {
  return "bin_lo_mm,bin_hi_mm,count,density_per_mm,fitted_density_per_mm\n" +
         histogram_rows(stats.histogram, 1e-3, stats.fit, stats.values.size(), "");
}

std::string sequences_csv(const McSummary& s) {
  std::string out = "sequence,count,frequency\n";
  for (const auto& q : s.sequences)
    out += "\"" + q.sequence + "\"," + std::to_string(q.count) + "," + fixed(q.frequency, 6) + "\n";
  return out;
}

std::string sequence_strengths_csv(const McSummary& s) {
  std::string out =
      "sequence,layer,bin_lo_mpa,bin_hi_mpa,count,density_per_mpa,fitted_density_per_mpa\n";
  for (const auto& q : s.sequences) {
    for (std::size_t g = 0; g < q.strengths.size() && g < s.glass_labels.size(); ++g) {
      const auto& v = q.strengths[g];
      std::optional<WeibullParams> fit;
      try {
        fit = weibull_fit_mle(v);
      } catch (const Error&) {
      }
      out += histogram_rows(make_histogram(v), 1e6, fit, v.size(),
                            "\"" + q.sequence + "\"," + std::to_string(s.glass_labels[g]) + ",");
    }
  }
  return out;
}

std::string realizations_csv(const std::vector<Realization>& rs, const std::vector<int>& labels) {
  std::string out = "index";
  for (int l : labels) out += ",strength_" + std::to_string(l) + "_mpa";
  out += ",sequence,w_i_mm,w_f_mm,failed\n";
  for (const auto& r : rs) {
    out += std::to_string(r.index);
    for (double s : r.strengths) out += "," + fixed(s * 1e-6, 6);
    out += ",\"" + r.events.sequence + "\"," +
           (r.events.initial_displacement ? mm(*r.events.initial_displacement) : "") + "," +
           (r.events.final_displacement ? mm(*r.events.final_displacement) : "") + "," +
           (r.failed ? "1" : "0") + "\n";
  }
  return out;
}

std::string summary_json(const McSummary& s) {
  json seq = json::array();
  for (const auto& q : s.sequences)
    seq.push_back({{"sequence", q.sequence}, {"count", q.count}, {"frequency", q.frequency}});
  json j = {{"count", s.count},
            {"failed", s.failed},
            {"never_failed", s.never_failed},
            {"valid", s.valid},
            {"glass_labels", layers_json(s.glass_labels)},
            {"grid_points", s.grid.size()},
            {"grid_spacing_mm", s.grid.size() > 1 ? json((s.grid[1] - s.grid[0]) * 1e3) : json()},
            {"initial_displacement", fit_json(s.initial, 1e-3)},
            {"final_displacement", fit_json(s.final, 1e-3)},
            {"modal_ratio", s.modal_ratio ? json(*s.modal_ratio) : json()},
            {"bottom_initiation_frequency", s.bottom_initiation_frequency},
            {"sequences", seq}};
  return j.dump(2) + "\n";
}

std::vector<std::optional<double>> layer_failure_displacements(const SolveHistory& h,
                                                               double threshold) {
  std::vector<std::optional<double>> out(h.glass_labels.size());
  for (const auto& r : h.rows)
    for (std::size_t g = 0; g < out.size() && g < r.max_damage.size(); ++g)
      if (!out[g] && r.max_damage[g] >= threshold) out[g] = r.displacement;
  return out;
}

std::string integrity_csv(const std::vector<CombinatorialRow>& rows, double threshold) {
  std::string out = "assignment,class,flagged";
  const auto labels = rows.empty() ? std::vector<int>{} : rows.front().history.glass_labels;
  for (int l : labels) out += ",w_fail_" + std::to_string(l) + "_mm";
  for (int l : labels) out += ",max_cracks_" + std::to_string(l);
  out += "\n";
  for (const auto& r : rows) {
    out += r.assignment + "," + to_string(r.failure_class) + "," + (r.flagged ? "1" : "0");
    for (const auto& w : layer_failure_displacements(r.history, threshold)) out += "," + (w ? mm(*w) : "");
    for (int c : r.max_cracks) out += "," + std::to_string(c);
    out += "\n";
  }
  return out;
}

std::string combinatorial_json(const std::vector<CombinatorialRow>& rows) {
  json a = json::array();
  for (const auto& r : rows) {
    json st = json::array();
    for (double s : r.strengths) st.push_back(s * 1e-6);
    json cracks = json::array();
    for (int c : r.max_cracks) cracks.push_back(c);
    a.push_back({{"assignment", r.assignment},
                 {"strengths_mpa", st},
                 {"class", to_string(r.failure_class)},
                 {"flagged", r.flagged},
                 {"error", r.error},
                 {"max_cracks", cracks},
                 {"events", events_object(r.history, r.events)}});
  }
  return json{{"rows", a}}.dump(2) + "\n";
}

std::string benchmark_json(const BenchmarkReport& r) {
  auto one = [](const BenchmarkCase& c) {
    return json{{"split", c.split},
                {"complete", c.history.complete},
                {"w_f_mm", optional_mm(c.failure_displacement)},
                {"jump_mm", c.jump * 1e3}};
  };
  return json{{"analytic",
               {{"w_f_mm", r.analytic_failure_displacement * 1e3},
                {"alpha_rad", r.analytic_rotation},
                {"jump_mm", r.analytic_jump * 1e3}}},
              {"split_on", one(r.with_split)},
              {"split_off", one(r.without_split)}}
             .dump(2) +
         "\n";
}

std::vector<double> read_samples_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
  std::vector<double> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto field = line.substr(0, line.find_first_of(",;\t"));
    const char* b = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(b, &end);
    if (end == b) continue;
    while (*end == ' ' || *end == '\r') ++end;
    if (*end == '\0' && std::isfinite(v)) out.push_back(v);
  }
  return out;
}

std::string probability_plot_csv(std::vector<double> samples, const WeibullParams& fit) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  std::string out = "rank,value,hazen_probability,fitted_probability\n";
  for (std::size_t i = 0; i < samples.size(); ++i)
    out += std::to_string(i + 1) + "," + fixed(samples[i], 6) + "," +
           fixed((static_cast<double>(i) + 0.5) / n, 8) + "," +
           fixed(weibull_cdf(fit, samples[i]), 8) + "\n";
  return out;
}

PlotKind parse_plot_kind(const std::string& name) {
  if (name == "fd-curve") return PlotKind::fd_curve;
  if (name == "quantiles") return PlotKind::quantiles;
  if (name == "histograms") return PlotKind::histograms;
  if (name == "sequences") return PlotKind::sequences;
  if (name == "integrity") return PlotKind::integrity;
  throw Error(ErrorCode::invalid_argument, "unknown plot data kind: " + name);
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::io, "write failed: " + path.string());
}

namespace {

struct Writer {
  std::filesystem::path dir;
  std::vector<std::string> files;
  void operator()(const std::string& name, const std::string& content) {
    write_text(dir / name, content);
    files.push_back(name);
  }
};

}  // namespace

std::vector<std::string> write_deterministic(const std::filesystem::path& dir,
                                             const SolveHistory& history, double threshold) {
  Writer w{dir, {}};
  w("history.csv", history_csv(history));
  w("fd_curve.csv", fd_curve_csv(history));
  w("events.json", events_json(history, extract_failure_events(history, threshold)));
  return w.files;
}

std::vector<std::string> write_combinatorial(const std::filesystem::path& dir,
                                             const std::vector<CombinatorialRow>& rows,
                                             double threshold) {
  Writer w{dir, {}};
  w("combinatorial.json", combinatorial_json(rows));
  w("integrity.csv", integrity_csv(rows, threshold));
  for (const auto& r : rows) {
    const std::string sub = "case-" + r.assignment + "/";
    w(sub + "history.csv", history_csv(r.history));
    w(sub + "fd_curve.csv", fd_curve_csv(r.history));
    w(sub + "events.json", events_json(r.history, r.events));
  }
  return w.files;
}

std::vector<std::string> write_monte_carlo(const std::filesystem::path& dir, const McResult& result,
                                           bool keep_histories) {
  Writer w{dir, {}};
  const auto& s = result.summary;
  w("summary.json", summary_json(s));
  w("quantiles.csv", quantiles_csv(s));
  w("histogram_w_i.csv", displacement_histogram_csv(s.initial));
  w("histogram_w_f.csv", displacement_histogram_csv(s.final));
  w("sequences.csv", sequences_csv(s));
  w("sequence_strengths.csv", sequence_strengths_csv(s));
  w("realizations.csv", realizations_csv(result.realizations, s.glass_labels));
  if (keep_histories)
    for (const auto& r : result.realizations) {
      const std::string sub = "run-" + std::to_string(r.index) + "/";
      w(sub + "history.csv", history_csv(r.history));
      w(sub + "events.json", events_json(r.history, r.events));
    }
  return w.files;
}

std::vector<std::string> write_benchmark(const std::filesystem::path& dir,
                                         const BenchmarkReport& report) {
  Writer w{dir, {}};
  w("benchmark.json", benchmark_json(report));
  w("fd_curve_split_on.csv", fd_curve_csv(report.with_split.history));
  w("fd_curve_split_off.csv", fd_curve_csv(report.without_split.history));
  return w.files;
}

}  // namespace lgfrac
