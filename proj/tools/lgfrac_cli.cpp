// lgfrac command-line front end; talks to the library only through lgfrac.h.

#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "lgfrac.h"

namespace {

int exit_code(lgfrac_status s) {
  switch (s) {
    case LGFRAC_OK: return 0;
    case LGFRAC_E_CONFIG:
    case LGFRAC_E_INVALID_ARGUMENT: return 2;
    case LGFRAC_E_IO: return 3;
    default: return 1;
  }
}

int report(lgfrac_status s) {
  std::fprintf(stderr, "%s\n", lgfrac_last_error_json());
  return exit_code(s);
}

std::string take(char* s) {
  std::string out = s ? s : "";
  lgfrac_string_free(s);
  return out;
}

int print_result(lgfrac_result* r, bool as_json) {
  char* text = nullptr;
  const auto s = as_json ? lgfrac_result_json(r, &text) : lgfrac_result_digest(r, &text);
  lgfrac_result_free(r);
  if (s != LGFRAC_OK) return report(s);
  std::printf("%s\n", take(text).c_str());
  return 0;
}

// Flag beats environment beats config file.
std::string output_override(const std::string& flag) {
  if (!flag.empty()) return flag;
  const char* env = std::getenv("LGFRAC_OUTPUT_DIR");
  return env && *env ? env : "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-field fracture of laminated glass beams in four-point bending"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lgfrac_version()));

  std::string config_path, output_dir, csv_path, plot_path;
  unsigned workers = 0;
  bool workers_set = false, as_json = false;

  auto* run = app.add_subcommand("run", "Run the mode selected in a configuration file");
  run->add_option("config", config_path, "Configuration file (JSON)")->required();
  run->add_option("-o,--output-dir", output_dir,
                  "Output directory (overrides LGFRAC_OUTPUT_DIR and the config)");
  run->add_option("-j,--workers", workers, "Parallel runs, 0 = available cores")
      ->each([&](const std::string&) { workers_set = true; });
  run->add_flag("--json", as_json, "Print the result as JSON instead of the digest line");

  auto* bench = app.add_subcommand("benchmark", "Built-in single-layer verification benchmark");
  bench->add_option("-o,--output-dir", output_dir, "Directory for benchmark.json and curves");
  bench->add_flag("--json", as_json, "Print the result as JSON instead of the digest line");

  auto* fit = app.add_subcommand("fit-weibull", "Fit a Weibull law to a strength-sample CSV");
  fit->add_option("samples", csv_path, "CSV with samples in the first column")->required();
  fit->add_option("--plot", plot_path, "Write probability-plot data to this CSV");

  auto* dump = app.add_subcommand("dump-effective-config",
                                  "Print the configuration with all defaults filled in");
  dump->add_option("config", config_path, "Configuration file (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*run || *dump) {
    lgfrac_config* cfg = nullptr;
    if (auto s = lgfrac_config_load(config_path.c_str(), &cfg); s != LGFRAC_OK) return report(s);
    if (*dump) {
      char* text = nullptr;
      const auto s = lgfrac_config_dump(cfg, &text);
      lgfrac_config_free(cfg);
      if (s != LGFRAC_OK) return report(s);
      std::fputs(take(text).c_str(), stdout);
      return 0;
    }
    const std::string dir = output_override(output_dir);
    lgfrac_status s = LGFRAC_OK;
    if (!dir.empty()) s = lgfrac_config_set_output_dir(cfg, dir.c_str());
    if (s == LGFRAC_OK && workers_set) s = lgfrac_config_set_workers(cfg, workers);
    lgfrac_result* r = nullptr;
    if (s == LGFRAC_OK) s = lgfrac_run(cfg, &r);
    lgfrac_config_free(cfg);
    if (s != LGFRAC_OK) return report(s);
    return print_result(r, as_json);
  }

  if (*bench) {
    const std::string dir = output_override(output_dir);
    lgfrac_result* r = nullptr;
    if (auto s = lgfrac_run_benchmark(dir.empty() ? nullptr : dir.c_str(), &r); s != LGFRAC_OK)
      return report(s);
    return print_result(r, as_json);
  }

  if (*fit) {
    double k = 0.0, lambda = 0.0;
    const auto s = lgfrac_fit_weibull_csv(csv_path.c_str(),
                                          plot_path.empty() ? nullptr : plot_path.c_str(), &k,
                                          &lambda);
    if (s != LGFRAC_OK) return report(s);
    std::printf("shape=%.6f scale=%.6f\n", k, lambda);
    return 0;
  }
  return 2;
}
