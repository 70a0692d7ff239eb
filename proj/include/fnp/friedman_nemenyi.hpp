#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fnp/ranks.hpp"

namespace fnp {

enum class FriedmanVariant { friedman, iman_davenport };

const char* to_string(FriedmanVariant v) noexcept;
FriedmanVariant parse_variant(const std::string& text);

struct FriedmanResult {
  double statistic = 0.0;  // chi-square form, or F form for iman_davenport
  unsigned df = 0;         // k - 1 (numerator df for iman_davenport)
  unsigned df2 = 0;        // (k - 1)(N - 1) for iman_davenport, 0 otherwise
  double p_value = 1.0;
  double alpha = 0.05;
  bool reject_null = false;
  FriedmanVariant variant = FriedmanVariant::friedman;
  std::vector<std::string> warnings;
};

// Boolean k x k matrix, row-major.
struct SignificanceMatrix {
  std::size_t k = 0;
  std::vector<bool> cells;

  bool operator()(std::size_t a, std::size_t b) const { return cells[a * k + b]; }
};

// A set of models whose pairwise average-rank gaps are all below the CD.
// Members are model indices in rank order.
using Group = std::vector<std::size_t>;

struct NemenyiResult {
  double cd = 0.0;
  double alpha = 0.05;
  SignificanceMatrix significant;
  std::vector<Group> groups;
};

// Below this many datasets the chi-square approximation is flagged.
inline constexpr std::size_t kSmallSampleDatasets = 15;

// 12N / (k(k+1)) * (sum_j R_j^2 - k(k+1)^2 / 4), clamped at zero against
// rounding. Throws UnsupportedDesignError for k < 3 or N < 2.
double friedman_statistic(const AverageRanks& ranks, std::size_t num_datasets);

FriedmanResult friedman_test(const PerformanceMatrix& m, double alpha,
                             FriedmanVariant variant = FriedmanVariant::friedman);

// Same test from precomputed average ranks.
FriedmanResult friedman_test(const AverageRanks& ranks, std::size_t num_datasets, double alpha,
                             FriedmanVariant variant = FriedmanVariant::friedman);

// q_alpha(k, alpha) * sqrt(k(k+1) / (6N)).
double nemenyi_cd(std::size_t k, std::size_t num_datasets, double alpha);

// (a, b) is significant iff |r_a - r_b| >= cd.
SignificanceMatrix pairwise_significance(const AverageRanks& ranks, double cd);

// Model indices ordered by (rank, label). Ties in rank are broken by label so
// every downstream output is deterministic.
std::vector<std::size_t> rank_order(const AverageRanks& ranks, const std::vector<std::string>& labels);

// Maximal runs of rank-adjacent models whose rank spread is < cd, plus
// singletons for models that belong to no longer run. Groups come out ordered
// by their lowest rank.
std::vector<Group> indistinguishable_groups(const AverageRanks& ranks, const std::vector<std::string>& labels,
                                            double cd);

NemenyiResult nemenyi_test(const AverageRanks& ranks, const std::vector<std::string>& labels,
                           std::size_t num_datasets, double alpha);

}  // namespace fnp
