#include "fnp/report.hpp"

#include <nlohmann/json.hpp>

#include "fnp/error.hpp"

namespace fnp {

Analysis analyze(const PerformanceMatrix& m, double alpha, FriedmanVariant variant, std::string metric_name) {
  Analysis a;
  a.metric_name = std::move(metric_name);
  a.direction = m.direction();
  a.num_datasets = m.num_datasets();
  a.models = m.models();
  a.ranks = average_ranks(m);
  a.friedman = friedman_test(a.ranks, m.num_datasets(), alpha, variant);

  std::vector<std::string> labels;
  for (const auto& id : a.models) labels.push_back(id.label);
  a.nemenyi = nemenyi_test(a.ranks, labels, m.num_datasets(), alpha);
  a.posthoc_licensed = a.friedman.reject_null;

  for (const auto& key : common_tag_keys(a.models)) {
    a.tag_summaries[key] = summarize_by_tag(a.ranks, a.nemenyi.significant, a.models, key);
  }
  return a;
}

std::string report_json(const Analysis& a) {
  using json = nlohmann::ordered_json;
  json j;
  j["statistic"] = a.friedman.statistic;
  j["df"] = a.friedman.df;
  if (a.friedman.variant == FriedmanVariant::iman_davenport) j["df2"] = a.friedman.df2;
  j["p_value"] = a.friedman.p_value;
  j["alpha"] = a.friedman.alpha;
  j["reject_null"] = a.friedman.reject_null;
  j["variant"] = to_string(a.friedman.variant);
  j["cd"] = a.nemenyi.cd;
  j["posthoc_licensed"] = a.posthoc_licensed;
  j["n_datasets"] = a.num_datasets;
  j["k_models"] = a.models.size();
  j["metric_name"] = a.metric_name;
  j["direction"] = to_string(a.direction);

  json ranks = json::array();
  for (std::size_t i = 0; i < a.models.size(); ++i) {
    ranks.push_back({{"label", a.models[i].label}, {"tags", a.models[i].tags}, {"rank", a.ranks[i]}});
  }
  j["average_ranks"] = ranks;

  json pairs = json::array();
  for (std::size_t x = 0; x < a.models.size(); ++x) {
    for (std::size_t y = x + 1; y < a.models.size(); ++y) {
      if (a.nemenyi.significant(x, y)) pairs.push_back({a.models[x].label, a.models[y].label});
    }
  }
  j["significant_pairs"] = pairs;

  json groups = json::array();
  for (const auto& g : a.nemenyi.groups) {
    json members = json::array();
    for (std::size_t idx : g) members.push_back(a.models[idx].label);
    groups.push_back(members);
  }
  j["groups"] = groups;

  json summaries = json::object();
  for (const auto& [key, rows] : a.tag_summaries) {
    json list = json::array();
    for (const auto& s : rows) {
      list.push_back({{"value", s.tag_value},
                      {"members", s.members},
                      {"mean_rank", s.mean_rank},
                      {"best_rank", s.best_rank},
                      {"fully_separated", s.fully_separated}});
    }
    summaries[key] = list;
  }
  j["tag_summaries"] = summaries;
  j["dropped_datasets"] = a.dropped_datasets;
  j["warnings"] = a.friedman.warnings;
  return j.dump(2) + "\n";
}

ReportView parse_report(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("report: invalid JSON: ") + e.what());
  }
  ReportView view;
  try {
    view.cd = j.at("cd").get<double>();
    view.posthoc_licensed = j.value("posthoc_licensed", j.value("reject_null", false));
    for (const auto& entry : j.at("average_ranks")) {
      view.labels.push_back(entry.at("label").get<std::string>());
      view.ranks.push_back(entry.at("rank").get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("report: ") + e.what());
  }
  if (!(view.cd > 0.0)) throw ValidationError("report: cd must be positive");
  if (view.labels.size() < 2) throw ValidationError("report: at least 2 models required");
  return view;
}

DiagramSpec diagram_from_report(const ReportView& report) {
  DiagramSpec spec = layout(report.ranks, report.labels, report.cd);
  if (!report.posthoc_licensed) spec.note = kUnlicensedNote;
  return spec;
}

}  // namespace fnp
