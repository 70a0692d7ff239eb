#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fnp/cd_diagram.hpp"
#include "fnp/friedman_nemenyi.hpp"
#include "fnp/ingest.hpp"
#include "fnp/ranks.hpp"

namespace fnp {

// Both stages of the procedure on one matrix.
struct Analysis {
  std::string metric_name;
  Direction direction = Direction::maximize;
  std::size_t num_datasets = 0;
  std::vector<ModelId> models;
  AverageRanks ranks;
  FriedmanResult friedman;
  NemenyiResult nemenyi;
  // The post-hoc comparison is only licensed once the omnibus test rejects.
  bool posthoc_licensed = false;
  std::map<std::string, std::vector<TagSummary>> tag_summaries;
  std::vector<std::string> dropped_datasets;
};

// Runs the Friedman test, then the Nemenyi test (always computed, licensed
// only on rejection), and summarises every tag key shared by all models.
Analysis analyze(const PerformanceMatrix& m, double alpha, FriedmanVariant variant = FriedmanVariant::friedman,
                 std::string metric_name = {});

std::string report_json(const Analysis& a);

// Fields of a report needed to draw its diagram.
struct ReportView {
  std::vector<std::string> labels;
  AverageRanks ranks;
  double cd = 0.0;
  bool posthoc_licensed = false;
};

ReportView parse_report(std::string_view json_text);

inline constexpr const char* kUnlicensedNote = "no significant differences (Friedman test did not reject)";

// Layout of a report's diagram, stamped when the post-hoc test is not licensed.
DiagramSpec diagram_from_report(const ReportView& report);

}  // namespace fnp
