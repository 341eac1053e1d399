#include "lgfrac.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <new>
#include <string>

#include <json.hpp>

#include "lgfrac/benchmark.hpp"
#include "lgfrac/config.hpp"
#include "lgfrac/error.hpp"
#include "lgfrac/output.hpp"
#include "lgfrac/stochastic.hpp"

struct lgfrac_config {
  lgfrac::RunConfig cfg;
};

struct lgfrac_result {
  std::string digest;
  std::string json;
};

namespace {

using json = nlohmann::ordered_json;

thread_local std::string last_error;
thread_local std::string last_error_json = "{}";

lgfrac_status status_of(lgfrac::ErrorCode c) {
  switch (c) {
    case lgfrac::ErrorCode::invalid_argument: return LGFRAC_E_INVALID_ARGUMENT;
    case lgfrac::ErrorCode::config: return LGFRAC_E_CONFIG;
    case lgfrac::ErrorCode::io: return LGFRAC_E_IO;
    case lgfrac::ErrorCode::out_of_range: return LGFRAC_E_OUT_OF_RANGE;
    case lgfrac::ErrorCode::nonconvergence: return LGFRAC_E_NONCONVERGENCE;
    case lgfrac::ErrorCode::assembly: return LGFRAC_E_ASSEMBLY;
    case lgfrac::ErrorCode::fit: return LGFRAC_E_FIT;
  }
  return LGFRAC_E_INTERNAL;
}

lgfrac_status fail(lgfrac_status s, const std::string& message, json issues = json()) {
  last_error = message;
  json j = {{"code", lgfrac_status_name(s)}, {"status", static_cast<int>(s)}, {"message", message}};
  if (!issues.is_null()) j["issues"] = std::move(issues);
  last_error_json = j.dump();
  return s;
}

template <class F>
lgfrac_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    last_error_json = "{}";
    return LGFRAC_OK;
  } catch (const lgfrac::ConfigError& e) {
    json issues = json::array();
    std::string text = "invalid configuration:";
    for (const auto& i : e.issues()) {
      issues.push_back({{"path", i.path}, {"message", i.message}});
      text += " " + (i.path.empty() ? std::string("<root>") : i.path) + ": " + i.message + ";";
    }
    if (!text.empty() && text.back() == ';') text.pop_back();
    return fail(LGFRAC_E_CONFIG, text, issues);
  } catch (const lgfrac::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(LGFRAC_E_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LGFRAC_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LGFRAC_E_INTERNAL, e.what());
  }
}

char* duplicate(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

std::string format(const char* fmt, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, a);
  return buf;
}

std::string mm_or_none(const std::optional<double>& v) {
  return v ? format("%.3f", *v * 1e3) + " mm" : std::string("none");
}

json files_json(const std::vector<std::string>& files) {
  json a = json::array();
  for (const auto& f : files) a.push_back(f);
  return a;
}

lgfrac_result* benchmark_result(const lgfrac::BenchmarkSettings& bs, const std::string& dir) {
  const auto report = lgfrac::run_benchmark(bs);
  auto* r = new lgfrac_result;
  std::vector<std::string> files;
  if (!dir.empty()) files = lgfrac::write_benchmark(dir, report);
  r->digest = "benchmark: split on w_f=" + mm_or_none(report.with_split.failure_displacement) +
              " jump=" + format("%.4f", report.with_split.jump * 1e3) +
              " mm; split off w_f=" + mm_or_none(report.without_split.failure_displacement) +
              " jump=" + format("%.4f", report.without_split.jump * 1e3) +
              " mm; analytic w_f=" + format("%.3f", report.analytic_failure_displacement * 1e3) +
              " mm alpha=" + format("%.4e", report.analytic_rotation) +
              " rad jump=" + format("%.4f", report.analytic_jump * 1e3) + " mm";
  json j = json::parse(lgfrac::benchmark_json(report));
  j["mode"] = "benchmark";
  j["files"] = files_json(files);
  r->json = j.dump(2);
  return r;
}

lgfrac::BenchmarkSettings benchmark_settings(const lgfrac::RunConfig& c) {
  lgfrac::BenchmarkSettings bs;
  bs.increment = c.benchmark.increment_mm * 1e-3;
  bs.max_displacement = c.benchmark.max_displacement_mm * 1e-3;
  bs.element_length = c.benchmark.element_length_mm * 1e-3;
  bs.length_scale = c.benchmark.length_scale_mm * 1e-3;
  bs.thickness_points = c.benchmark.thickness_points;
  bs.weakening = c.benchmark.weakening;
  bs.solver = c.to_settings();
  return bs;
}

lgfrac_result* run_config(const lgfrac::RunConfig& c) {
  using namespace lgfrac;
  const std::filesystem::path dir = c.output_dir;
  if (c.mode == RunMode::benchmark) {
    auto* r = benchmark_result(benchmark_settings(c), dir.string());
    write_text(dir / "effective_config.json", dump_config(c));
    return r;
  }
  const LaminateSpec spec = c.to_spec();
  spec.validate();
  const auto setup = c.to_setup();
  auto r = new lgfrac_result;
  json j = {{"mode", to_string(c.mode)}, {"name", c.name}};
  std::vector<std::string> files;
  try {
    switch (c.mode) {
      case RunMode::deterministic: {
        const auto history = run_quasi_static(spec, setup.program, setup.discretization,
                                              setup.settings);
        const auto events = extract_failure_events(history, setup.settings.failure_threshold);
        files = write_deterministic(dir, history, setup.settings.failure_threshold);
        r->digest = "deterministic: sequence=" +
                    (events.sequence.empty() ? std::string("none") : events.sequence) +
                    " w_i=" + mm_or_none(events.initial_displacement) +
                    " w_f=" + mm_or_none(events.final_displacement) +
                    " steps=" + std::to_string(history.rows.size()) +
                    (history.complete ? "" : " INCOMPLETE: " + history.abort_reason);
        j["events"] = json::parse(events_json(history, events));
        break;
      }
      case RunMode::combinatorial: {
        const auto rows = run_combinatorial(spec, c.combinatorial.lo_mpa * 1e6,
                                            c.combinatorial.hi_mpa * 1e6, setup);
        files = write_combinatorial(dir, rows, setup.settings.failure_threshold);
        r->digest = "combinatorial:";
        json a = json::array();
        for (const auto& row : rows) {
          r->digest += " " + row.assignment + "=" + to_string(row.failure_class) +
                       (row.flagged ? "(flagged)" : "");
          a.push_back({{"assignment", row.assignment},
                       {"class", to_string(row.failure_class)},
                       {"sequence", row.events.sequence},
                       {"flagged", row.flagged}});
        }
        j["rows"] = a;
        break;
      }
      case RunMode::monte_carlo: {
        const auto result = run_monte_carlo(spec, c.to_mc());
        files = write_monte_carlo(dir, result, c.monte_carlo.keep_histories);
        const auto& s = result.summary;
        r->digest = "monte-carlo: count=" + std::to_string(s.count) +
                    " failed=" + std::to_string(s.failed) +
                    " top=" + (s.sequences.empty() ? std::string("none") : s.sequences[0].sequence) +
                    (s.sequences.empty() ? "" : format(" (%.3f)", s.sequences[0].frequency)) +
                    " bottom_initiation=" + format("%.3f", s.bottom_initiation_frequency) +
                    " modal_ratio=" + (s.modal_ratio ? format("%.3f", *s.modal_ratio) : "none") +
                    (s.valid ? "" : " INVALID (more than 5% failed)");
        j["summary"] = json::parse(summary_json(s));
        break;
      }
      case RunMode::benchmark: break;
    }
    write_text(dir / "effective_config.json", dump_config(c));
    files.push_back("effective_config.json");
  } catch (...) {
    delete r;
    throw;
  }
  j["output_dir"] = dir.string();
  j["files"] = files_json(files);
  r->json = j.dump(2);
  return r;
}

}  // namespace

extern "C" {

const char* lgfrac_version(void) { return "0.1.0"; }

const char* lgfrac_status_name(lgfrac_status s) {
  switch (s) {
    case LGFRAC_OK: return "ok";
    case LGFRAC_E_INVALID_ARGUMENT: return "invalid_argument";
    case LGFRAC_E_CONFIG: return "config";
    case LGFRAC_E_IO: return "io";
    case LGFRAC_E_OUT_OF_RANGE: return "out_of_range";
    case LGFRAC_E_NONCONVERGENCE: return "nonconvergence";
    case LGFRAC_E_ASSEMBLY: return "assembly";
    case LGFRAC_E_FIT: return "fit";
    case LGFRAC_E_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* lgfrac_last_error(void) { return last_error.c_str(); }
const char* lgfrac_last_error_json(void) { return last_error_json.c_str(); }
void lgfrac_string_free(char* s) { std::free(s); }

lgfrac_status lgfrac_config_load(const char* path, lgfrac_config** out) {
  if (!path || !out) return fail(LGFRAC_E_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new lgfrac_config{lgfrac::load_config(path)}; });
}

lgfrac_status lgfrac_config_parse(const char* text, lgfrac_config** out) {
  if (!text || !out) return fail(LGFRAC_E_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new lgfrac_config{lgfrac::parse_config(text)}; });
}

lgfrac_status lgfrac_config_dump(const lgfrac_config* cfg, char** out) {
  if (!cfg || !out) return fail(LGFRAC_E_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = duplicate(lgfrac::dump_config(cfg->cfg)); });
}

lgfrac_status lgfrac_config_set_output_dir(lgfrac_config* cfg, const char* dir) {
  if (!cfg || !dir) return fail(LGFRAC_E_INVALID_ARGUMENT, "null argument");
  if (!*dir) return fail(LGFRAC_E_INVALID_ARGUMENT, "empty output directory");
  return guarded([&] { cfg->cfg.output_dir = dir; });
}

lgfrac_status lgfrac_config_set_workers(lgfrac_config* cfg, unsigned workers) {
  if (!cfg) return fail(LGFRAC_E_INVALID_ARGUMENT, "null argument");
  cfg->cfg.workers = workers;
  return LGFRAC_OK;
}

void lgfrac_config_free(lgfrac_config* cfg) { delete cfg; }

lgfrac_status lgfrac_run(const lgfrac_config* cfg, lgfrac_result** out) {
  if (!cfg || !out) return fail(LGFRAC_E_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = run_config(cfg->cfg); });
}

lgfrac_status lgfrac_run_benchmark(const char* output_dir, lgfrac_result** out) {
  if (!out) return fail(LGFRAC_E_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = benchmark_result({}, output_dir ? output_dir : ""); });
}

lgfrac_status lgfrac_result_digest(const lgfrac_result* r, char** out) {
  if (!r || !out) return fail(LGFRAC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = duplicate(r->digest); });
}

lgfrac_status lgfrac_result_json(const lgfrac_result* r, char** out) {
  if (!r || !out) return fail(LGFRAC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = duplicate(r->json); });
}

void lgfrac_result_free(lgfrac_result* r) { delete r; }

lgfrac_status lgfrac_weibull_quantile(double shape, double scale, double p, double* out) {
  if (!out) return fail(LGFRAC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const lgfrac::WeibullParams w{shape, scale};
    w.validate();
    *out = lgfrac::weibull_quantile(w, p);
  });
}

lgfrac_status lgfrac_weibull_fit(const double* samples, size_t n, double* shape, double* scale) {
  if ((!samples && n) || !shape || !scale) return fail(LGFRAC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto w = lgfrac::weibull_fit_mle(std::span<const double>(samples, n));
    *shape = w.shape;
    *scale = w.scale;
  });
}

lgfrac_status lgfrac_fit_weibull_csv(const char* csv_path, const char* plot_csv_path,
                                     double* shape, double* scale) {
  if (!csv_path || !shape || !scale) return fail(LGFRAC_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto samples = lgfrac::read_samples_csv(csv_path);
    const auto w = lgfrac::weibull_fit_mle(samples);
    if (plot_csv_path) lgfrac::write_text(plot_csv_path, lgfrac::probability_plot_csv(samples, w));
    *shape = w.shape;
    *scale = w.scale;
  });
}

}  // extern "C"
