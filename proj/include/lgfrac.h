/* C interface of liblgfrac: phase-field fracture of laminated glass beams in
 * four-point bending.
 *
 * All functions return an lgfrac_status. On failure the calling thread's last
 * error is set and can be read with lgfrac_last_error() (text) or
 * lgfrac_last_error_json() (object with "code", "message" and, for
 * configuration errors, "issues": [{"path", "message"}]). Strings returned
 * through char** are owned by the caller and released with lgfrac_string_free.
 * Handles are not thread-safe; distinct handles may be used concurrently.
 */
#ifndef LGFRAC_H
#define LGFRAC_H

#include <stddef.h>

#if defined(_WIN32)
#define LGFRAC_API __declspec(dllexport)
#else
#define LGFRAC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lgfrac_status {
  LGFRAC_OK = 0,
  LGFRAC_E_INVALID_ARGUMENT = 1,
  LGFRAC_E_CONFIG = 2,
  LGFRAC_E_IO = 3,
  LGFRAC_E_OUT_OF_RANGE = 4,
  LGFRAC_E_NONCONVERGENCE = 5,
  LGFRAC_E_ASSEMBLY = 6,
  LGFRAC_E_FIT = 7,
  LGFRAC_E_INTERNAL = 8
} lgfrac_status;

typedef struct lgfrac_config lgfrac_config;
typedef struct lgfrac_result lgfrac_result;

LGFRAC_API const char* lgfrac_version(void);
LGFRAC_API const char* lgfrac_status_name(lgfrac_status status);
LGFRAC_API const char* lgfrac_last_error(void);
LGFRAC_API const char* lgfrac_last_error_json(void);
LGFRAC_API void lgfrac_string_free(char* s);

/* Configuration (JSON, schema_version 1). */
LGFRAC_API lgfrac_status lgfrac_config_load(const char* path, lgfrac_config** out);
LGFRAC_API lgfrac_status lgfrac_config_parse(const char* json_text, lgfrac_config** out);
/* Effective configuration with all defaults filled in. */
LGFRAC_API lgfrac_status lgfrac_config_dump(const lgfrac_config* cfg, char** out_json);
LGFRAC_API lgfrac_status lgfrac_config_set_output_dir(lgfrac_config* cfg, const char* dir);
/* 0 selects the number of available cores. */
LGFRAC_API lgfrac_status lgfrac_config_set_workers(lgfrac_config* cfg, unsigned workers);
LGFRAC_API void lgfrac_config_free(lgfrac_config* cfg);

/* Runs the configured mode and writes its artifacts under the output
 * directory. A result is returned even when individual runs were flagged;
 * see the result JSON. */
LGFRAC_API lgfrac_status lgfrac_run(const lgfrac_config* cfg, lgfrac_result** out);
/* Built-in single-layer verification benchmark; output_dir may be NULL (no files). */
LGFRAC_API lgfrac_status lgfrac_run_benchmark(const char* output_dir, lgfrac_result** out);
/* One-line human-readable digest. */
LGFRAC_API lgfrac_status lgfrac_result_digest(const lgfrac_result* result, char** out);
/* Machine-readable summary of the run. */
LGFRAC_API lgfrac_status lgfrac_result_json(const lgfrac_result* result, char** out);
LGFRAC_API void lgfrac_result_free(lgfrac_result* result);

/* Weibull helpers; stresses in the caller's unit. */
LGFRAC_API lgfrac_status lgfrac_weibull_quantile(double shape, double scale, double probability,
                                                 double* out);
LGFRAC_API lgfrac_status lgfrac_weibull_fit(const double* samples, size_t count, double* shape,
                                            double* scale);
/* Fits a strength-sample CSV (first column, non-numeric lines skipped) and,
 * when plot_csv_path is not NULL, writes the probability-plot data
 * (rank, strength, hazen_probability, fitted_probability). */
LGFRAC_API lgfrac_status lgfrac_fit_weibull_csv(const char* csv_path, const char* plot_csv_path,
                                                double* shape, double* scale);

#ifdef __cplusplus
}
#endif

#endif /* LGFRAC_H */
