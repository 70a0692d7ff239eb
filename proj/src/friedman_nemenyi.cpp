#include "fnp/friedman_nemenyi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fnp/distributions.hpp"
#include "fnp/error.hpp"

namespace fnp {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
}

void check_cd(double cd) {
  if (!(cd > 0.0) || !std::isfinite(cd)) throw DomainError("critical difference must be positive and finite");
}

}  // namespace

const char* to_string(FriedmanVariant v) noexcept {
  return v == FriedmanVariant::friedman ? "friedman" : "iman_davenport";
}

FriedmanVariant parse_variant(const std::string& text) {
  if (text == "friedman") return FriedmanVariant::friedman;
  if (text == "iman_davenport") return FriedmanVariant::iman_davenport;
  throw ValidationError("variant must be \"friedman\" or \"iman_davenport\", got \"" + text + "\"");
}

double friedman_statistic(const AverageRanks& ranks, std::size_t num_datasets) {
  const auto k = static_cast<double>(ranks.size());
  if (ranks.size() < 3) {
    throw UnsupportedDesignError("the Friedman test needs at least 3 models, got " + std::to_string(ranks.size()));
  }
  if (num_datasets < 2) {
    throw UnsupportedDesignError("the Friedman test needs at least 2 datasets, got " + std::to_string(num_datasets));
  }
  const double n = static_cast<double>(num_datasets);
  double sum_sq = 0.0;
  for (double r : ranks) sum_sq += r * r;
  const double stat = 12.0 * n / (k * (k + 1.0)) * (sum_sq - k * (k + 1.0) * (k + 1.0) / 4.0);
  return std::max(stat, 0.0);
}

FriedmanResult friedman_test(const AverageRanks& ranks, std::size_t num_datasets, double alpha,
                             FriedmanVariant variant) {
  check_alpha(alpha);
  const double chi2 = friedman_statistic(ranks, num_datasets);
  const auto k = static_cast<unsigned>(ranks.size());
  const auto n = static_cast<unsigned>(num_datasets);

  FriedmanResult result;
  result.alpha = alpha;
  result.variant = variant;
  result.df = k - 1;

  if (variant == FriedmanVariant::friedman) {
    result.statistic = chi2;
    result.p_value = chi_square_sf(chi2, k - 1);
  } else {
    const double denom = static_cast<double>(n) * (k - 1) - chi2;
    // chi2 reaches N(k-1) exactly when every dataset ranks the models identically.
    if (!(denom > 1e-12 * static_cast<double>(n) * (k - 1))) {
      throw UnsupportedDesignError(
          "Iman-Davenport statistic is undefined: rankings are identical on every dataset");
    }
    result.statistic = (static_cast<double>(n) - 1.0) * chi2 / denom;
    result.df2 = (k - 1) * (n - 1);
    result.p_value = f_sf(result.statistic, result.df, result.df2);
  }
  result.reject_null = result.p_value < alpha;
  if (num_datasets < kSmallSampleDatasets) {
    result.warnings.push_back("N = " + std::to_string(num_datasets) + " < " + std::to_string(kSmallSampleDatasets) +
                              ": the chi-square approximation to the Friedman statistic may be inaccurate");
  }
  return result;
}

FriedmanResult friedman_test(const PerformanceMatrix& m, double alpha, FriedmanVariant variant) {
  return friedman_test(average_ranks(m), m.num_datasets(), alpha, variant);
}

double nemenyi_cd(std::size_t k, std::size_t num_datasets, double alpha) {
  if (num_datasets < 2) {
    throw UnsupportedDesignError("the Nemenyi test needs at least 2 datasets, got " + std::to_string(num_datasets));
  }
  const double q = q_alpha(static_cast<unsigned>(k), alpha);
  const auto kk = static_cast<double>(k);
  return q * std::sqrt(kk * (kk + 1.0) / (6.0 * static_cast<double>(num_datasets)));
}

SignificanceMatrix pairwise_significance(const AverageRanks& ranks, double cd) {
  check_cd(cd);
  SignificanceMatrix out;
  out.k = ranks.size();
  out.cells.assign(out.k * out.k, false);
  for (std::size_t a = 0; a < out.k; ++a) {
    for (std::size_t b = 0; b < out.k; ++b) {
      if (a != b) out.cells[a * out.k + b] = std::abs(ranks[a] - ranks[b]) >= cd;
    }
  }
  return out;
}

std::vector<std::size_t> rank_order(const AverageRanks& ranks, const std::vector<std::string>& labels) {
  if (labels.size() != ranks.size()) throw ValidationError("labels and ranks differ in length");
  std::vector<std::size_t> order(ranks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (ranks[a] != ranks[b]) return ranks[a] < ranks[b];
    if (labels[a] != labels[b]) return labels[a] < labels[b];
    return a < b;
  });
  return order;
}

std::vector<Group> indistinguishable_groups(const AverageRanks& ranks, const std::vector<std::string>& labels,
                                            double cd) {
  check_cd(cd);
  const auto order = rank_order(ranks, labels);
  const std::size_t k = order.size();

  // end[i]: one past the last sorted position reachable from i with spread < cd
  std::vector<std::size_t> end(k);
  for (std::size_t i = 0, j = 0; i < k; ++i) {
    j = std::max(j, i + 1);
    while (j < k && ranks[order[j]] - ranks[order[i]] < cd) ++j;
    end[i] = j;
  }

  std::vector<Group> groups;
  std::size_t covered_to = 0;  // sorted positions below this lie in an emitted run
  for (std::size_t i = 0; i < k; ++i) {
    // a run starting at i is maximal iff it reaches further than the run from i-1
    if (i > 0 && end[i] <= end[i - 1]) continue;
    const bool multi = end[i] - i > 1;
    if (!multi && i < covered_to) continue;
    Group g;
    for (std::size_t p = i; p < end[i]; ++p) g.push_back(order[p]);
    groups.push_back(std::move(g));
    covered_to = std::max(covered_to, end[i]);
  }
  return groups;
}

NemenyiResult nemenyi_test(const AverageRanks& ranks, const std::vector<std::string>& labels,
                           std::size_t num_datasets, double alpha) {
  NemenyiResult out;
  out.alpha = alpha;
  out.cd = nemenyi_cd(ranks.size(), num_datasets, alpha);
  out.significant = pairwise_significance(ranks, out.cd);
  out.groups = indistinguishable_groups(ranks, labels, out.cd);
  return out;
}

}  // namespace fnp
