#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace fnp {

enum class Direction { maximize, minimize };

const char* to_string(Direction d) noexcept;
Direction parse_direction(const std::string& text);

struct ModelId {
  std::string label;
  std::map<std::string, std::string> tags;

  bool operator==(const ModelId&) const = default;
};

// N x k grid of metric values: one row per dataset, one column per model.
// Construction validates the complete-block design (N >= 2, k >= 3, every
// cell finite, unique dataset ids and model labels).
class PerformanceMatrix {
 public:
  PerformanceMatrix(std::vector<std::string> datasets, std::vector<ModelId> models,
                    std::vector<double> values, Direction direction);

  std::size_t num_datasets() const noexcept { return datasets_.size(); }
  std::size_t num_models() const noexcept { return models_.size(); }

  const std::vector<std::string>& datasets() const noexcept { return datasets_; }
  const std::vector<ModelId>& models() const noexcept { return models_; }
  Direction direction() const noexcept { return direction_; }

  double at(std::size_t dataset, std::size_t model) const { return values_[dataset * models_.size() + model]; }
  std::span<const double> row(std::size_t dataset) const {
    return {values_.data() + dataset * models_.size(), models_.size()};
  }
  // Row-major N*k values.
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<std::string> datasets_;
  std::vector<ModelId> models_;
  std::vector<double> values_;
  Direction direction_;
};

// Per-dataset mid-ranks, row-major N x k, 1 = best.
struct RankMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> ranks;

  std::span<const double> row(std::size_t i) const { return {ranks.data() + i * cols, cols}; }
};

// Column means of a RankMatrix.
using AverageRanks = std::vector<double>;

// Ranks one dataset's values. The best value gets rank 1, tied values share
// the mean of the positions they span. Throws ValidationError naming the
// index of the first non-finite value.
std::vector<double> rank_row(std::span<const double> values, Direction direction);

RankMatrix rank_matrix(const PerformanceMatrix& m);

AverageRanks average_ranks(const PerformanceMatrix& m);
AverageRanks average_ranks(const RankMatrix& ranks);

}  // namespace fnp
