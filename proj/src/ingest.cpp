#include "fnp/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <nlohmann/json.hpp>

namespace fnp {

namespace {

using Row = std::vector<std::string>;

struct CsvLine {
  std::size_t number;  // 1-based
  Row fields;
};

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

Row split_fields(std::string_view line, std::size_t number) {
  Row fields;
  std::string current;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"' && trim(current).empty()) {
      current.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? current : trim(current));
      current.clear();
      was_quoted = false;
    } else {
      if (was_quoted && c != ' ' && c != '\t') {
        throw ValidationError(at_line(number) + "unexpected character after closing quote");
      }
      current += c;
    }
  }
  if (quoted) throw ValidationError(at_line(number) + "unterminated quoted field");
  fields.push_back(was_quoted ? current : trim(current));
  return fields;
}

// Splits into lines (LF or CRLF), dropping blank lines and a leading BOM.
std::vector<CsvLine> read_csv(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<CsvLine> lines;
  std::size_t number = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++number;
    if (line.ends_with('\r')) line.remove_suffix(1);
    if (trim(line).empty()) continue;
    lines.push_back({number, split_fields(line, number)});
  }
  return lines;
}

double parse_number(const std::string& field, const std::string& where) {
  std::string_view s = field;
  if (s.starts_with('+')) s.remove_prefix(1);
  double value = 0.0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, value, std::chars_format::general);
  if (s.empty() || ec != std::errc{} || ptr != end) {
    throw ValidationError(where + "cannot parse \"" + field + "\" as a number");
  }
  if (!std::isfinite(value)) throw ValidationError(where + "non-finite value \"" + field + "\"");
  return value;
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  const bool needs_quotes = s.find_first_of(",\"") != std::string::npos || s != trim(s) || s.empty();
  if (!needs_quotes) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

const Row kLongHeader{"dataset", "model", "fold", "value"};

void check_manifest(const ExperimentManifest& manifest) {
  std::set<std::string> labels;
  for (const auto& m : manifest.models) {
    if (m.label.empty()) throw ValidationError("manifest: model labels must be non-empty");
    if (!labels.insert(m.label).second) throw ValidationError("manifest: duplicate model label \"" + m.label + "\"");
  }
  if (!(manifest.alpha > 0.0 && manifest.alpha < 1.0)) throw ValidationError("manifest: alpha must lie in (0, 1)");
}

std::string describe_missing(const std::vector<IncompleteDesignError::MissingPair>& missing) {
  std::string msg = "incomplete design: " + std::to_string(missing.size()) + " missing (dataset, model) pair" +
                    (missing.size() == 1 ? "" : "s") + ":";
  for (const auto& [d, m] : missing) msg += " (" + d + ", " + m + ")";
  return msg;
}

}  // namespace

IncompleteDesignError::IncompleteDesignError(std::vector<MissingPair> missing)
    : ValidationError(describe_missing(missing)), missing_(std::move(missing)) {}

CsvFormat detect_csv_format(std::string_view text) {
  const auto lines = read_csv(text);
  if (lines.empty()) throw ValidationError("empty CSV document");
  return lines.front().fields == kLongHeader ? CsvFormat::long_format : CsvFormat::wide_format;
}

std::vector<FoldRecord> parse_long_csv(std::string_view text) {
  const auto lines = read_csv(text);
  if (lines.empty()) throw ValidationError("empty CSV document");
  if (lines.front().fields != kLongHeader) {
    throw ValidationError(at_line(lines.front().number) + "expected header \"dataset,model,fold,value\"");
  }

  std::vector<FoldRecord> records;
  std::set<std::tuple<std::string, std::string, std::string>> keys;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [number, f] = lines[i];
    if (f.size() != 4) {
      throw ValidationError(at_line(number) + "expected 4 fields, got " + std::to_string(f.size()));
    }
    if (f[0].empty() || f[1].empty()) throw ValidationError(at_line(number) + "empty dataset or model");
    FoldRecord r{f[0], f[1], f[2], parse_number(f[3], at_line(number))};
    if (!keys.emplace(r.dataset_id, r.model_label, r.fold_id).second) {
      throw ValidationError(at_line(number) + "duplicate record (" + r.dataset_id + ", " + r.model_label + ", " +
                            r.fold_id + ")");
    }
    records.push_back(std::move(r));
  }
  return records;
}

ResultTable parse_wide_csv(std::string_view text) {
  const auto lines = read_csv(text);
  if (lines.empty()) throw ValidationError("empty CSV document");
  const auto& header = lines.front().fields;
  if (header.front() != "dataset") {
    throw ValidationError(at_line(lines.front().number) + "first header column must be \"dataset\"");
  }
  if (header.size() < 2) throw ValidationError(at_line(lines.front().number) + "no model columns");

  ResultTable table;
  table.models.assign(header.begin() + 1, header.end());
  std::set<std::string> seen;
  for (const auto& m : table.models) {
    if (m.empty()) throw ValidationError(at_line(lines.front().number) + "empty model label");
    if (!seen.insert(m).second) throw ValidationError(at_line(lines.front().number) + "duplicate model \"" + m + "\"");
  }

  seen.clear();
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [number, f] = lines[i];
    if (f.size() != header.size()) {
      throw ValidationError(at_line(number) + "expected " + std::to_string(header.size()) + " fields, got " +
                            std::to_string(f.size()));
    }
    if (f[0].empty()) throw ValidationError(at_line(number) + "empty dataset id");
    if (!seen.insert(f[0]).second) throw ValidationError(at_line(number) + "duplicate dataset \"" + f[0] + "\"");
    table.datasets.push_back(f[0]);
    for (std::size_t c = 1; c < f.size(); ++c) {
      table.values.push_back(parse_number(f[c], at_line(number) + "column \"" + header[c] + "\": "));
    }
  }
  return table;
}

AggregateResult aggregate_folds(const std::vector<FoldRecord>& records, const ExperimentManifest& manifest,
                                const AggregateOptions& opts) {
  check_manifest(manifest);
  if (records.empty()) throw ValidationError("no fold records");

  std::map<std::string, std::size_t> model_index;
  for (std::size_t j = 0; j < manifest.models.size(); ++j) model_index[manifest.models[j].label] = j;

  // std::map keeps datasets in lexicographic order
  std::map<std::string, std::vector<std::vector<double>>> folds;
  for (const auto& r : records) {
    auto it = model_index.find(r.model_label);
    if (it == model_index.end()) {
      throw ValidationError("model \"" + r.model_label + "\" is not listed in the manifest");
    }
    if (!std::isfinite(r.metric_value)) {
      throw ValidationError("non-finite value for (" + r.dataset_id + ", " + r.model_label + ", " + r.fold_id + ")");
    }
    auto& row = folds[r.dataset_id];
    row.resize(manifest.models.size());
    row[it->second].push_back(r.metric_value);
  }

  std::vector<IncompleteDesignError::MissingPair> missing;
  std::vector<std::string> datasets;
  std::vector<std::string> dropped;
  std::vector<double> values;
  for (auto& [dataset, row] : folds) {
    bool complete = true;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j].empty()) {
        missing.emplace_back(dataset, manifest.models[j].label);
        complete = false;
      }
    }
    if (!complete) {
      dropped.push_back(dataset);
      continue;
    }
    datasets.push_back(dataset);
    for (auto& v : row) {
      // summing in sorted order makes the mean independent of record order
      std::sort(v.begin(), v.end());
      double sum = 0.0;
      for (double x : v) sum += x;
      values.push_back(sum / static_cast<double>(v.size()));
    }
  }

  if (!missing.empty() && !opts.drop_incomplete) throw IncompleteDesignError(std::move(missing));
  return {PerformanceMatrix(std::move(datasets), manifest.models, std::move(values), manifest.direction),
          std::move(dropped)};
}

PerformanceMatrix to_performance_matrix(const ResultTable& table, const ExperimentManifest& manifest) {
  check_manifest(manifest);
  const std::size_t k = table.models.size();
  std::map<std::string, std::size_t> column;
  for (std::size_t c = 0; c < k; ++c) column[table.models[c]] = c;

  std::vector<std::size_t> source;  // manifest position -> table column
  for (const auto& m : manifest.models) {
    auto it = column.find(m.label);
    if (it == column.end()) throw ValidationError("manifest model \"" + m.label + "\" has no column in the table");
    source.push_back(it->second);
  }
  if (manifest.models.size() != k) {
    for (const auto& label : table.models) {
      const bool listed = std::any_of(manifest.models.begin(), manifest.models.end(),
                                      [&](const ModelId& m) { return m.label == label; });
      if (!listed) throw ValidationError("model \"" + label + "\" is not listed in the manifest");
    }
  }

  std::vector<std::size_t> rows(table.datasets.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) { return table.datasets[a] < table.datasets[b]; });

  std::vector<std::string> datasets;
  std::vector<double> values;
  for (std::size_t r : rows) {
    datasets.push_back(table.datasets[r]);
    for (std::size_t c : source) values.push_back(table.values[r * k + c]);
  }
  return PerformanceMatrix(std::move(datasets), manifest.models, std::move(values), manifest.direction);
}

ExperimentManifest default_manifest(std::vector<std::string> labels) {
  std::sort(labels.begin(), labels.end());
  ExperimentManifest m;
  for (auto& l : labels) m.models.push_back({std::move(l), {}});
  return m;
}

ExperimentManifest parse_manifest(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("manifest: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("manifest: top level must be an object");

  ExperimentManifest m;
  try {
    m.metric_name = j.value("metric_name", std::string{});
    m.direction = parse_direction(j.value("direction", std::string{"maximize"}));
    m.alpha = j.value("alpha", 0.05);
    if (!j.contains("models") || !j["models"].is_array()) throw ValidationError("manifest: \"models\" array required");
    for (const auto& entry : j["models"]) {
      ModelId id;
      id.label = entry.at("label").get<std::string>();
      if (entry.contains("tags")) {
        for (const auto& [key, value] : entry["tags"].items()) id.tags[key] = value.get<std::string>();
      }
      m.models.push_back(std::move(id));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("manifest: ") + e.what());
  }
  check_manifest(m);
  return m;
}

std::string serialize_manifest(const ExperimentManifest& manifest) {
  nlohmann::ordered_json j;
  j["metric_name"] = manifest.metric_name;
  j["direction"] = to_string(manifest.direction);
  j["alpha"] = manifest.alpha;
  j["models"] = nlohmann::ordered_json::array();
  for (const auto& m : manifest.models) j["models"].push_back({{"label", m.label}, {"tags", m.tags}});
  return j.dump(2) + "\n";
}

std::string to_long_csv(const std::vector<FoldRecord>& records) {
  std::string out = "dataset,model,fold,value\n";
  for (const auto& r : records) {
    out += csv_field(r.dataset_id) + "," + csv_field(r.model_label) + "," + csv_field(r.fold_id) + "," +
           format_number(r.metric_value) + "\n";
  }
  return out;
}

std::string to_wide_csv(const ResultTable& table) {
  std::string out = "dataset";
  for (const auto& m : table.models) out += "," + csv_field(m);
  out += "\n";
  const std::size_t k = table.models.size();
  for (std::size_t i = 0; i < table.datasets.size(); ++i) {
    out += csv_field(table.datasets[i]);
    for (std::size_t j = 0; j < k; ++j) out += "," + format_number(table.values[i * k + j]);
    out += "\n";
  }
  return out;
}

ResultTable to_result_table(const PerformanceMatrix& m) {
  ResultTable t;
  t.datasets = m.datasets();
  for (const auto& id : m.models()) t.models.push_back(id.label);
  t.values = m.values();
  return t;
}

std::vector<TagSummary> summarize_by_tag(const AverageRanks& ranks, const SignificanceMatrix& significant,
                                         const std::vector<ModelId>& models, const std::string& tag_key) {
  if (ranks.size() != models.size() || significant.k != models.size()) {
    throw ValidationError("ranks, significance matrix and models differ in size");
  }
  std::map<std::string, std::vector<std::size_t>> by_value;
  for (std::size_t j = 0; j < models.size(); ++j) {
    auto it = models[j].tags.find(tag_key);
    if (it == models[j].tags.end()) {
      throw ValidationError("model \"" + models[j].label + "\" has no tag \"" + tag_key + "\"");
    }
    by_value[it->second].push_back(j);
  }

  std::vector<TagSummary> out;
  for (const auto& [value, members] : by_value) {
    TagSummary s;
    s.tag_value = value;
    s.best_rank = ranks[members.front()];
    double sum = 0.0;
    for (std::size_t j : members) {
      s.members.push_back(models[j].label);
      sum += ranks[j];
      s.best_rank = std::min(s.best_rank, ranks[j]);
    }
    s.mean_rank = sum / static_cast<double>(members.size());

    bool any_cross = false;
    bool all_significant = true;
    for (std::size_t a : members) {
      for (std::size_t b = 0; b < models.size(); ++b) {
        if (std::find(members.begin(), members.end(), b) != members.end()) continue;
        any_cross = true;
        all_significant = all_significant && significant(a, b);
      }
    }
    s.fully_separated = any_cross && all_significant;
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const TagSummary& a, const TagSummary& b) { return a.mean_rank < b.mean_rank; });
  return out;
}

std::vector<std::string> common_tag_keys(const std::vector<ModelId>& models) {
  if (models.empty()) return {};
  std::vector<std::string> keys;
  for (const auto& [key, value] : models.front().tags) {
    const bool everywhere =
        std::all_of(models.begin(), models.end(), [&](const ModelId& m) { return m.tags.contains(key); });
    if (everywhere) keys.push_back(key);
  }
  return keys;
}

}  // namespace fnp
