#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fnp/error.hpp"
#include "fnp/friedman_nemenyi.hpp"
#include "fnp/ranks.hpp"

namespace fnp {

// One cross-validation fold score.
struct FoldRecord {
  std::string dataset_id;
  std::string model_label;
  std::string fold_id;
  double metric_value = 0.0;

  bool operator==(const FoldRecord&) const = default;
};

struct ExperimentManifest {
  std::string metric_name;
  Direction direction = Direction::maximize;
  std::vector<ModelId> models;
  double alpha = 0.05;
};

// Pre-aggregated dataset x model table exactly as read from a wide CSV.
// Cells are finite and ids unique, but the design size is not checked.
struct ResultTable {
  std::vector<std::string> datasets;
  std::vector<std::string> models;
  std::vector<double> values;  // row-major
};

struct AggregateOptions {
  // Drop datasets that miss any model instead of failing.
  bool drop_incomplete = false;
};

struct AggregateResult {
  PerformanceMatrix matrix;
  std::vector<std::string> dropped_datasets;
};

// Raised when (dataset, model) pairs have no observations.
class IncompleteDesignError : public ValidationError {
 public:
  using MissingPair = std::pair<std::string, std::string>;

  explicit IncompleteDesignError(std::vector<MissingPair> missing);

  const std::vector<MissingPair>& missing() const noexcept { return missing_; }

 private:
  std::vector<MissingPair> missing_;
};

enum class CsvFormat { automatic, long_format, wide_format };

// Header `dataset,model,fold,value`. Errors carry 1-based line numbers.
std::vector<FoldRecord> parse_long_csv(std::string_view text);

// Header `dataset,<model1>,...,<modelk>`.
ResultTable parse_wide_csv(std::string_view text);

// Long when the header is exactly the four long-format columns.
CsvFormat detect_csv_format(std::string_view text);

// Mean of each (dataset, model) pair's folds. Datasets are sorted
// lexicographically; models follow the manifest.
AggregateResult aggregate_folds(const std::vector<FoldRecord>& records, const ExperimentManifest& manifest,
                                const AggregateOptions& opts = {});

// Reorders columns per the manifest, sorts datasets, attaches tags and
// direction, then validates the design.
PerformanceMatrix to_performance_matrix(const ResultTable& table, const ExperimentManifest& manifest);

// Manifest listing the given labels in lexicographic order, maximize, alpha 0.05.
ExperimentManifest default_manifest(std::vector<std::string> labels);

ExperimentManifest parse_manifest(std::string_view json_text);
std::string serialize_manifest(const ExperimentManifest& manifest);

std::string to_long_csv(const std::vector<FoldRecord>& records);
std::string to_wide_csv(const ResultTable& table);
ResultTable to_result_table(const PerformanceMatrix& m);

struct TagSummary {
  std::string tag_value;
  std::vector<std::string> members;
  double mean_rank = 0.0;
  double best_rank = 0.0;
  // Every (member, non-member) pair is Nemenyi-significant. False when the
  // tag value covers every model, since there is nothing to separate from.
  bool fully_separated = false;
};

// Groups models by the value of tag_key. Summaries are ordered by mean rank.
// Throws ValidationError naming the first model without the tag.
std::vector<TagSummary> summarize_by_tag(const AverageRanks& ranks, const SignificanceMatrix& significant,
                                         const std::vector<ModelId>& models, const std::string& tag_key);

// Tag keys carried by every model, sorted.
std::vector<std::string> common_tag_keys(const std::vector<ModelId>& models);

}  // namespace fnp
