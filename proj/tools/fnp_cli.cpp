// fnp: compare k models over N datasets with the Friedman + Nemenyi procedure.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fnp/fnp.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDesign = 3;
constexpr int kExitNumerical = 4;

const char* const kFormatsHelp = R"(Input formats:
  Long CSV (one row per cross-validation fold, folds are averaged):
    dataset,model,fold,value
    courseA,adaboost_click,3,0.912
  Wide CSV (one row per dataset, pre-aggregated):
    dataset,<model1>,...,<modelk>
  The format is detected from the header: exactly the four long-format
  columns means long, anything else is read as wide (override: --format).
  UTF-8, LF or CRLF line endings. Values are plain or scientific decimals.

Manifest (JSON, optional):
  {"metric_name": "accuracy", "direction": "maximize" | "minimize",
   "alpha": 0.05,
   "models": [{"label": "adaboost_click",
               "tags": {"feature_set": "clickstream", "algorithm": "adaboost"}}]}
  Models appear in reports in manifest order. Every tag key carried by all
  models is summarised in the report's tag_summaries.

Exit codes: 0 success, 2 input/validation error, 3 unsupported statistical
design, 4 numerical failure.
)";

int exit_code(fnp_status s) {
  switch (s) {
    case FNP_OK: return kExitOk;
    case FNP_ERR_UNSUPPORTED_DESIGN: return kExitDesign;
    case FNP_ERR_NUMERICAL:
    case FNP_ERR_INTERNAL: return kExitNumerical;
    default: return kExitInput;
  }
}

struct CliError {
  int code;
  std::string message;
};

void check(fnp_status s) {
  if (s != FNP_OK) throw CliError{exit_code(s), fnp_last_error()};
}

struct FreeString {
  void operator()(char* s) const { fnp_string_free(s); }
};
using OwnedString = std::unique_ptr<char, FreeString>;

struct FreeMatrix {
  void operator()(fnp_matrix* m) const { fnp_matrix_free(m); }
};
struct FreeAnalysis {
  void operator()(fnp_analysis* a) const { fnp_analysis_free(a); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kExitInput, "cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{kExitInput, "cannot write " + path};
  out << text;
  if (!out) throw CliError{kExitInput, "failed writing " + path};
}

struct InputOptions {
  std::string input;
  std::string manifest;
  std::string format = "auto";
  std::string variant = "friedman";
  std::optional<double> alpha;
  bool drop_incomplete = false;
};

void add_input_options(CLI::App* cmd, InputOptions& o) {
  cmd->add_option("--manifest", o.manifest, "Manifest JSON (model order, tags, direction, alpha)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--format", o.format, "CSV layout")
      ->check(CLI::IsMember({"auto", "long", "wide"}))
      ->capture_default_str();
  cmd->add_option("--variant", o.variant, "Omnibus test form")
      ->check(CLI::IsMember({"friedman", "iman_davenport"}))
      ->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "Significance level (default: manifest alpha, else 0.05)");
  cmd->add_flag("--drop-incomplete", o.drop_incomplete, "Drop datasets missing any model instead of failing");
}

std::unique_ptr<fnp_analysis, FreeAnalysis> run_analysis(const InputOptions& o) {
  const std::string csv = read_file(o.input);
  const std::string manifest = o.manifest.empty() ? std::string{} : read_file(o.manifest);
  const fnp_csv_format format = o.format == "long" ? FNP_CSV_LONG : o.format == "wide" ? FNP_CSV_WIDE : FNP_CSV_AUTO;

  fnp_matrix* raw = nullptr;
  check(fnp_matrix_from_csv(csv.c_str(), o.manifest.empty() ? nullptr : manifest.c_str(), format,
                            o.drop_incomplete ? 1 : 0, &raw));
  std::unique_ptr<fnp_matrix, FreeMatrix> matrix(raw);

  const double alpha = o.alpha.value_or(fnp_matrix_manifest_alpha(matrix.get()));
  fnp_analysis* analysis = nullptr;
  check(fnp_analyze(matrix.get(), alpha, o.variant == "iman_davenport" ? FNP_IMAN_DAVENPORT : FNP_FRIEDMAN,
                    &analysis));
  return std::unique_ptr<fnp_analysis, FreeAnalysis>(analysis);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Friedman + Nemenyi comparison of k models over N datasets, with critical difference diagrams"};
  app.footer(kFormatsHelp);
  app.set_version_flag("--version", fnp_version());
  app.require_subcommand(1);

  InputOptions analyze_opts;
  std::string analyze_out;
  auto* analyze = app.add_subcommand("analyze", "Run the Friedman test and the Nemenyi post-hoc test; emit a JSON report");
  analyze->add_option("input", analyze_opts.input, "Results CSV (long or wide)")->required()->check(CLI::ExistingFile);
  add_input_options(analyze, analyze_opts);
  analyze->add_option("--out", analyze_out, "Write the report here instead of stdout");

  InputOptions diagram_opts;
  std::string report_path;
  std::string diagram_out;
  fnp_render_options render = fnp_render_options_default();
  auto* diagram = app.add_subcommand("diagram", "Render a critical difference diagram as SVG");
  auto* report_opt = diagram->add_option("--report", report_path, "Report JSON produced by analyze")
                         ->check(CLI::ExistingFile);
  auto* input_opt = diagram->add_option("--input", diagram_opts.input, "Results CSV; analyzed inline")
                        ->check(CLI::ExistingFile);
  report_opt->excludes(input_opt);
  add_input_options(diagram, diagram_opts);
  diagram->add_option("--out", diagram_out, "Write the SVG here instead of stdout");
  diagram->add_option("--width", render.width_px, "Document width in px")->check(CLI::PositiveNumber)->capture_default_str();
  diagram->add_option("--row-height", render.row_height_px, "Label row height in px")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  diagram->add_option("--font-size", render.font_size_px, "Font size in px")->check(CLI::PositiveNumber)->capture_default_str();
  diagram->add_option("--decimals", render.decimals_for_rank, "Decimals printed for ranks")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  std::size_t sim_n = 31;
  std::size_t sim_k = 8;
  double sim_alpha = 0.05;
  std::size_t sim_trials = 10000;
  std::uint64_t sim_seed = 0;
  double sim_noise = 1.0;
  unsigned sim_threads = 0;
  std::vector<double> sim_effect;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo Type-I error (zero effect) or power (nonzero effect)");
  simulate->add_option("--n", sim_n, "Datasets per trial")->capture_default_str();
  simulate->add_option("--k", sim_k, "Models per trial")->capture_default_str();
  simulate->add_option("--alpha", sim_alpha, "Significance level")->capture_default_str();
  simulate->add_option("--trials", sim_trials, "Monte Carlo trials")->capture_default_str();
  simulate->add_option("--seed", sim_seed, "Generator seed")->capture_default_str();
  simulate->add_option("--noise-sd", sim_noise, "Gaussian noise standard deviation")->capture_default_str();
  simulate->add_option("--effect", sim_effect, "Comma-separated per-model mean offsets (default: all zero)")
      ->delimiter(',');
  simulate->add_option("--threads", sim_threads, "Worker threads, 0 = all cores (results do not depend on it)")
      ->capture_default_str();
  simulate->add_option("--out", sim_out, "Write the JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*analyze) {
      auto analysis = run_analysis(analyze_opts);
      char* json = nullptr;
      check(fnp_analysis_report_json(analysis.get(), &json));
      write_output(analyze_out, OwnedString(json).get());
    } else if (*diagram) {
      char* svg = nullptr;
      if (!report_path.empty()) {
        const std::string report = read_file(report_path);
        check(fnp_report_svg(report.c_str(), &render, &svg));
      } else if (!diagram_opts.input.empty()) {
        auto analysis = run_analysis(diagram_opts);
        check(fnp_analysis_svg(analysis.get(), &render, &svg));
      } else {
        throw CliError{kExitInput, "diagram needs --report or --input"};
      }
      write_output(diagram_out, OwnedString(svg).get());
    } else if (*simulate) {
      if (!sim_effect.empty() && sim_effect.size() != sim_k) {
        throw CliError{kExitInput, "--effect needs exactly k = " + std::to_string(sim_k) + " values"};
      }
      fnp_sim_config cfg{sim_n,  sim_k,      sim_effect.empty() ? nullptr : sim_effect.data(),
                         sim_noise, sim_trials, sim_seed, sim_alpha, sim_threads};
      char* json = nullptr;
      check(fnp_simulate(&cfg, &json));
      write_output(sim_out, OwnedString(json).get());
    }
  } catch (const CliError& e) {
    std::cerr << "fnp: " << e.message << "\n";
    return e.code;
  }
  return kExitOk;
}
