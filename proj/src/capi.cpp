#include "fnp/fnp.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "fnp/distributions.hpp"
#include "fnp/error.hpp"
#include "fnp/ingest.hpp"
#include "fnp/report.hpp"
#include "fnp/simulate.hpp"

struct fnp_matrix {
  fnp::PerformanceMatrix matrix;
  std::string metric_name;
  double manifest_alpha;
  std::vector<std::string> dropped;
};

struct fnp_analysis {
  fnp::Analysis analysis;
};

namespace {

thread_local std::string g_last_error;

fnp_status fail(fnp_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs f, translating exceptions into status codes.
template <class F>
fnp_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return FNP_OK;
  } catch (const fnp::UnsupportedDesignError& e) {
    return fail(FNP_ERR_UNSUPPORTED_DESIGN, e.what());
  } catch (const fnp::DomainError& e) {
    return fail(FNP_ERR_DOMAIN, e.what());
  } catch (const fnp::ValidationError& e) {
    return fail(FNP_ERR_VALIDATION, e.what());
  } catch (const fnp::NumericalError& e) {
    return fail(FNP_ERR_NUMERICAL, e.what());
  } catch (const std::exception& e) {
    return fail(FNP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FNP_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

fnp::RenderOptions to_options(const fnp_render_options* opts) {
  fnp::RenderOptions o;
  if (opts != nullptr) {
    o.width_px = opts->width_px;
    o.row_height_px = opts->row_height_px;
    o.font_size_px = opts->font_size_px;
    o.decimals_for_rank = opts->decimals_for_rank;
  }
  return o;
}

#define FNP_REQUIRE(cond)                                                 \
  do {                                                                    \
    if (!(cond)) return fail(FNP_ERR_INVALID_ARGUMENT, "null argument: " #cond); \
  } while (0)

}  // namespace

extern "C" {

const char* fnp_version(void) { return FNP_VERSION; }

const char* fnp_last_error(void) { return g_last_error.c_str(); }

void fnp_string_free(char* s) { std::free(s); }

fnp_status fnp_matrix_from_csv(const char* csv_text, const char* manifest_json, fnp_csv_format format,
                               int drop_incomplete, fnp_matrix** out) {
  FNP_REQUIRE(csv_text != nullptr);
  FNP_REQUIRE(out != nullptr);
  if (format != FNP_CSV_AUTO && format != FNP_CSV_LONG && format != FNP_CSV_WIDE) {
    return fail(FNP_ERR_INVALID_ARGUMENT, "unknown CSV format");
  }
  *out = nullptr;
  return guarded([&] {
    std::optional<fnp::ExperimentManifest> manifest;
    if (manifest_json != nullptr) manifest = fnp::parse_manifest(manifest_json);

    fnp::CsvFormat fmt = format == FNP_CSV_LONG   ? fnp::CsvFormat::long_format
                         : format == FNP_CSV_WIDE ? fnp::CsvFormat::wide_format
                                                  : fnp::detect_csv_format(csv_text);
    if (fmt == fnp::CsvFormat::long_format) {
      auto records = fnp::parse_long_csv(csv_text);
      if (!manifest) {
        std::set<std::string> labels;
        for (const auto& r : records) labels.insert(r.model_label);
        manifest = fnp::default_manifest({labels.begin(), labels.end()});
      }
      auto result = fnp::aggregate_folds(records, *manifest, {drop_incomplete != 0});
      *out = new fnp_matrix{std::move(result.matrix), manifest->metric_name, manifest->alpha,
                            std::move(result.dropped_datasets)};
    } else {
      auto table = fnp::parse_wide_csv(csv_text);
      if (!manifest) manifest = fnp::default_manifest(table.models);
      *out = new fnp_matrix{fnp::to_performance_matrix(table, *manifest), manifest->metric_name, manifest->alpha, {}};
    }
  });
}

fnp_status fnp_matrix_create(size_t num_datasets, size_t num_models, const double* values,
                             const char* const* dataset_ids, const char* const* model_labels,
                             fnp_direction direction, fnp_matrix** out) {
  FNP_REQUIRE(values != nullptr);
  FNP_REQUIRE(dataset_ids != nullptr);
  FNP_REQUIRE(model_labels != nullptr);
  FNP_REQUIRE(out != nullptr);
  *out = nullptr;
  return guarded([&] {
    std::vector<std::string> datasets(dataset_ids, dataset_ids + num_datasets);
    std::vector<fnp::ModelId> models;
    for (size_t j = 0; j < num_models; ++j) models.push_back({model_labels[j], {}});
    std::vector<double> cells(values, values + num_datasets * num_models);
    auto dir = direction == FNP_MINIMIZE ? fnp::Direction::minimize : fnp::Direction::maximize;
    *out = new fnp_matrix{fnp::PerformanceMatrix(std::move(datasets), std::move(models), std::move(cells), dir),
                          {}, 0.05, {}};
  });
}

void fnp_matrix_free(fnp_matrix* m) { delete m; }

size_t fnp_matrix_num_datasets(const fnp_matrix* m) { return m ? m->matrix.num_datasets() : 0; }

size_t fnp_matrix_num_models(const fnp_matrix* m) { return m ? m->matrix.num_models() : 0; }

double fnp_matrix_manifest_alpha(const fnp_matrix* m) { return m ? m->manifest_alpha : 0.05; }

fnp_status fnp_matrix_average_ranks(const fnp_matrix* m, double* out, size_t len) {
  FNP_REQUIRE(m != nullptr);
  FNP_REQUIRE(out != nullptr);
  if (len < m->matrix.num_models()) return fail(FNP_ERR_INVALID_ARGUMENT, "output buffer shorter than k");
  return guarded([&] {
    const auto r = fnp::average_ranks(m->matrix);
    std::copy(r.begin(), r.end(), out);
  });
}

fnp_status fnp_analyze(const fnp_matrix* m, double alpha, fnp_variant variant, fnp_analysis** out) {
  FNP_REQUIRE(m != nullptr);
  FNP_REQUIRE(out != nullptr);
  if (variant != FNP_FRIEDMAN && variant != FNP_IMAN_DAVENPORT) return fail(FNP_ERR_INVALID_ARGUMENT, "unknown variant");
  *out = nullptr;
  return guarded([&] {
    auto v = variant == FNP_IMAN_DAVENPORT ? fnp::FriedmanVariant::iman_davenport : fnp::FriedmanVariant::friedman;
    auto a = fnp::analyze(m->matrix, alpha, v, m->metric_name);
    a.dropped_datasets = m->dropped;
    *out = new fnp_analysis{std::move(a)};
  });
}

void fnp_analysis_free(fnp_analysis* a) { delete a; }

fnp_status fnp_analysis_summary(const fnp_analysis* a, fnp_summary* out) {
  FNP_REQUIRE(a != nullptr);
  FNP_REQUIRE(out != nullptr);
  const auto& an = a->analysis;
  *out = fnp_summary{an.friedman.statistic, an.friedman.df,        an.friedman.p_value,
                     an.friedman.alpha,     an.nemenyi.cd,         an.friedman.reject_null ? 1 : 0,
                     an.posthoc_licensed ? 1 : 0, an.num_datasets, an.models.size()};
  return FNP_OK;
}

fnp_status fnp_analysis_report_json(const fnp_analysis* a, char** out) {
  FNP_REQUIRE(a != nullptr);
  FNP_REQUIRE(out != nullptr);
  *out = nullptr;
  return guarded([&] { *out = dup_string(fnp::report_json(a->analysis)); });
}

fnp_render_options fnp_render_options_default(void) {
  const fnp::RenderOptions d;
  return {d.width_px, d.row_height_px, d.font_size_px, d.decimals_for_rank};
}

fnp_status fnp_analysis_svg(const fnp_analysis* a, const fnp_render_options* opts, char** out) {
  FNP_REQUIRE(a != nullptr);
  FNP_REQUIRE(out != nullptr);
  *out = nullptr;
  return guarded([&] {
    fnp::ReportView view;
    for (const auto& m : a->analysis.models) view.labels.push_back(m.label);
    view.ranks = a->analysis.ranks;
    view.cd = a->analysis.nemenyi.cd;
    view.posthoc_licensed = a->analysis.posthoc_licensed;
    *out = dup_string(fnp::render_svg(fnp::diagram_from_report(view), to_options(opts)));
  });
}

fnp_status fnp_report_svg(const char* report_json, const fnp_render_options* opts, char** out) {
  FNP_REQUIRE(report_json != nullptr);
  FNP_REQUIRE(out != nullptr);
  *out = nullptr;
  return guarded([&] {
    const auto view = fnp::parse_report(report_json);
    *out = dup_string(fnp::render_svg(fnp::diagram_from_report(view), to_options(opts)));
  });
}

fnp_status fnp_chi_square_sf(double x, unsigned df, double* out) {
  FNP_REQUIRE(out != nullptr);
  return guarded([&] { *out = fnp::chi_square_sf(x, df); });
}

fnp_status fnp_f_sf(double x, unsigned d1, unsigned d2, double* out) {
  FNP_REQUIRE(out != nullptr);
  return guarded([&] { *out = fnp::f_sf(x, d1, d2); });
}

fnp_status fnp_studentized_range_cdf(double q, unsigned k, double* out) {
  FNP_REQUIRE(out != nullptr);
  return guarded([&] { *out = fnp::studentized_range_cdf(q, k); });
}

fnp_status fnp_q_alpha(unsigned k, double alpha, double* out) {
  FNP_REQUIRE(out != nullptr);
  return guarded([&] { *out = fnp::q_alpha(k, alpha); });
}

fnp_status fnp_nemenyi_cd(size_t k, size_t num_datasets, double alpha, double* out) {
  FNP_REQUIRE(out != nullptr);
  return guarded([&] { *out = fnp::nemenyi_cd(k, num_datasets, alpha); });
}

fnp_status fnp_friedman_statistic(const double* average_ranks, size_t k, size_t num_datasets, double* out) {
  FNP_REQUIRE(average_ranks != nullptr);
  FNP_REQUIRE(out != nullptr);
  return guarded([&] { *out = fnp::friedman_statistic({average_ranks, average_ranks + k}, num_datasets); });
}

fnp_status fnp_simulate(const fnp_sim_config* cfg, char** out_json) {
  FNP_REQUIRE(cfg != nullptr);
  FNP_REQUIRE(out_json != nullptr);
  *out_json = nullptr;
  return guarded([&] {
    fnp::SimConfig c;
    c.num_datasets = cfg->num_datasets;
    c.num_models = cfg->num_models;
    c.effect = cfg->effect ? std::vector<double>(cfg->effect, cfg->effect + cfg->num_models)
                           : std::vector<double>(cfg->num_models, 0.0);
    c.noise_sd = cfg->noise_sd;
    c.trials = cfg->trials;
    c.seed = cfg->seed;
    c.alpha = cfg->alpha;
    c.threads = cfg->threads;
    if (fnp::is_null_effect(c)) {
      *out_json = dup_string(fnp::calibration_json(c, fnp::estimate_type1(c)));
    } else {
      *out_json = dup_string(fnp::power_json(c, fnp::estimate_power(c)));
    }
  });
}

}  // extern "C"
