/*
 * C interface to the Friedman + Nemenyi model comparison library.
 *
 * Every function returns an fnp_status. On failure the message of the most
 * recent error on the calling thread is available from fnp_last_error().
 * Strings returned through char** out-parameters are owned by the caller and
 * must be released with fnp_string_free().
 */
#ifndef FNP_FNP_H
#define FNP_FNP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FNP_BUILDING_LIBRARY)
#    define FNP_API __declspec(dllexport)
#  else
#    define FNP_API __declspec(dllimport)
#  endif
#else
#  define FNP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fnp_status {
  FNP_OK = 0,
  FNP_ERR_INVALID_ARGUMENT = 1, /* null pointer or bad enum value */
  FNP_ERR_VALIDATION = 2,       /* malformed input, incomplete design */
  FNP_ERR_UNSUPPORTED_DESIGN = 3,
  FNP_ERR_NUMERICAL = 4,
  FNP_ERR_DOMAIN = 5,
  FNP_ERR_INTERNAL = 6
} fnp_status;

typedef enum fnp_direction { FNP_MAXIMIZE = 0, FNP_MINIMIZE = 1 } fnp_direction;

typedef enum fnp_variant { FNP_FRIEDMAN = 0, FNP_IMAN_DAVENPORT = 1 } fnp_variant;

typedef enum fnp_csv_format { FNP_CSV_AUTO = 0, FNP_CSV_LONG = 1, FNP_CSV_WIDE = 2 } fnp_csv_format;

typedef struct fnp_matrix fnp_matrix;
typedef struct fnp_analysis fnp_analysis;

typedef struct fnp_summary {
  double statistic;
  unsigned df;
  double p_value;
  double alpha;
  double cd;
  int reject_null;
  int posthoc_licensed;
  size_t num_datasets;
  size_t num_models;
} fnp_summary;

typedef struct fnp_render_options {
  int width_px;
  int row_height_px;
  int font_size_px;
  int decimals_for_rank;
} fnp_render_options;

typedef struct fnp_sim_config {
  size_t num_datasets;
  size_t num_models;
  const double* effect; /* num_models entries; NULL means all zero */
  double noise_sd;
  size_t trials;
  uint64_t seed;
  double alpha;
  unsigned threads; /* 0 = hardware concurrency */
} fnp_sim_config;

FNP_API const char* fnp_version(void);
FNP_API const char* fnp_last_error(void);
FNP_API void fnp_string_free(char* s);

/* Performance matrices */

/* manifest_json may be NULL: models then sort by label and the metric is
 * maximized. With drop_incomplete set, datasets missing any model are
 * dropped instead of failing. */
FNP_API fnp_status fnp_matrix_from_csv(const char* csv_text, const char* manifest_json, fnp_csv_format format,
                                       int drop_incomplete, fnp_matrix** out);
/* values is row-major num_datasets x num_models. */
FNP_API fnp_status fnp_matrix_create(size_t num_datasets, size_t num_models, const double* values,
                                     const char* const* dataset_ids, const char* const* model_labels,
                                     fnp_direction direction, fnp_matrix** out);
FNP_API void fnp_matrix_free(fnp_matrix* m);
FNP_API size_t fnp_matrix_num_datasets(const fnp_matrix* m);
FNP_API size_t fnp_matrix_num_models(const fnp_matrix* m);
/* Metric alpha declared in the manifest, 0.05 when there was none. */
FNP_API double fnp_matrix_manifest_alpha(const fnp_matrix* m);
/* Writes num_models average ranks. */
FNP_API fnp_status fnp_matrix_average_ranks(const fnp_matrix* m, double* out, size_t len);

/* Analysis */

FNP_API fnp_status fnp_analyze(const fnp_matrix* m, double alpha, fnp_variant variant, fnp_analysis** out);
FNP_API void fnp_analysis_free(fnp_analysis* a);
FNP_API fnp_status fnp_analysis_summary(const fnp_analysis* a, fnp_summary* out);
FNP_API fnp_status fnp_analysis_report_json(const fnp_analysis* a, char** out);

/* Diagrams */

FNP_API fnp_render_options fnp_render_options_default(void);
FNP_API fnp_status fnp_analysis_svg(const fnp_analysis* a, const fnp_render_options* opts, char** out);
FNP_API fnp_status fnp_report_svg(const char* report_json, const fnp_render_options* opts, char** out);

/* Numerics */

FNP_API fnp_status fnp_chi_square_sf(double x, unsigned df, double* out);
FNP_API fnp_status fnp_f_sf(double x, unsigned d1, unsigned d2, double* out);
FNP_API fnp_status fnp_studentized_range_cdf(double q, unsigned k, double* out);
FNP_API fnp_status fnp_q_alpha(unsigned k, double alpha, double* out);
FNP_API fnp_status fnp_nemenyi_cd(size_t k, size_t num_datasets, double alpha, double* out);
FNP_API fnp_status fnp_friedman_statistic(const double* average_ranks, size_t k, size_t num_datasets, double* out);

/* Simulation: Type-I calibration for a zero effect, power otherwise. */
FNP_API fnp_status fnp_simulate(const fnp_sim_config* cfg, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* FNP_FNP_H */
