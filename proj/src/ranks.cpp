#include "fnp/ranks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "fnp/error.hpp"

namespace fnp {

const char* to_string(Direction d) noexcept {
  return d == Direction::maximize ? "maximize" : "minimize";
}

Direction parse_direction(const std::string& text) {
  if (text == "maximize") return Direction::maximize;
  if (text == "minimize") return Direction::minimize;
  throw ValidationError("direction must be \"maximize\" or \"minimize\", got \"" + text + "\"");
}

PerformanceMatrix::PerformanceMatrix(std::vector<std::string> datasets, std::vector<ModelId> models,
                                     std::vector<double> values, Direction direction)
    : datasets_(std::move(datasets)),
      models_(std::move(models)),
      values_(std::move(values)),
      direction_(direction) {
  if (models_.size() < 3) {
    throw UnsupportedDesignError("at least 3 models are required, got " + std::to_string(models_.size()));
  }
  if (datasets_.size() < 2) {
    throw UnsupportedDesignError("at least 2 datasets are required, got " + std::to_string(datasets_.size()));
  }
  if (values_.size() != datasets_.size() * models_.size()) {
    throw ValidationError("matrix has " + std::to_string(values_.size()) + " cells, expected " +
                          std::to_string(datasets_.size()) + " x " + std::to_string(models_.size()));
  }

  std::set<std::string> seen;
  for (const auto& m : models_) {
    if (m.label.empty()) throw ValidationError("model labels must be non-empty");
    if (!seen.insert(m.label).second) throw ValidationError("duplicate model label \"" + m.label + "\"");
  }
  seen.clear();
  for (const auto& d : datasets_) {
    if (!seen.insert(d).second) throw ValidationError("duplicate dataset \"" + d + "\"");
  }

  for (std::size_t i = 0; i < datasets_.size(); ++i) {
    for (std::size_t j = 0; j < models_.size(); ++j) {
      if (!std::isfinite(at(i, j))) {
        throw ValidationError("non-finite value for dataset \"" + datasets_[i] + "\", model \"" +
                              models_[j].label + "\"");
      }
    }
  }
}

std::vector<double> rank_row(std::span<const double> values, Direction direction) {
  const std::size_t k = values.size();
  for (std::size_t i = 0; i < k; ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError("non-finite value at index " + std::to_string(i));
    }
  }

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const bool maximize = direction == Direction::maximize;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return maximize ? values[a] > values[b] : values[a] < values[b];
  });

  std::vector<double> ranks(k);
  std::size_t start = 0;
  while (start < k) {
    std::size_t end = start + 1;
    while (end < k && values[order[end]] == values[order[start]]) ++end;
    // positions start+1 .. end (1-based) share their mean
    const double mid = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t p = start; p < end; ++p) ranks[order[p]] = mid;
    start = end;
  }
  return ranks;
}

RankMatrix rank_matrix(const PerformanceMatrix& m) {
  RankMatrix out;
  out.rows = m.num_datasets();
  out.cols = m.num_models();
  out.ranks.reserve(out.rows * out.cols);
  for (std::size_t i = 0; i < out.rows; ++i) {
    std::vector<double> r;
    try {
      r = rank_row(m.row(i), m.direction());
    } catch (const ValidationError& e) {
      throw ValidationError("dataset \"" + m.datasets()[i] + "\": " + e.what());
    }
    out.ranks.insert(out.ranks.end(), r.begin(), r.end());
  }
  return out;
}

AverageRanks average_ranks(const RankMatrix& ranks) {
  AverageRanks avg(ranks.cols, 0.0);
  for (std::size_t i = 0; i < ranks.rows; ++i) {
    auto row = ranks.row(i);
    for (std::size_t j = 0; j < ranks.cols; ++j) avg[j] += row[j];
  }
  for (auto& v : avg) v /= static_cast<double>(ranks.rows);
  return avg;
}

AverageRanks average_ranks(const PerformanceMatrix& m) { return average_ranks(rank_matrix(m)); }

}  // namespace fnp
