#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "fnp/distributions.hpp"
#include "fnp/error.hpp"
#include "fnp/friedman_nemenyi.hpp"
#include "oracles.hpp"

using fnp::FriedmanVariant;

namespace {

fnp::PerformanceMatrix make_matrix(std::size_t n, std::size_t k, std::vector<double> values) {
  std::vector<std::string> datasets;
  for (std::size_t i = 0; i < n; ++i) datasets.push_back("d" + std::to_string(i));
  std::vector<fnp::ModelId> models;
  for (std::size_t j = 0; j < k; ++j) models.push_back({"m" + std::to_string(j), {}});
  return fnp::PerformanceMatrix(datasets, models, std::move(values), fnp::Direction::maximize);
}

std::vector<std::string> labels_for(std::size_t k) {
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < k; ++j) labels.push_back("model" + std::to_string(j + 1));
  return labels;
}

std::set<std::set<std::size_t>> as_sets(const std::vector<fnp::Group>& groups) {
  std::set<std::set<std::size_t>> out;
  for (const auto& g : groups) out.insert(std::set<std::size_t>(g.begin(), g.end()));
  return out;
}

}  // namespace

TEST(FriedmanStatistic, EqualRanksGiveZero) {
  EXPECT_EQ(fnp::friedman_statistic({2, 2, 2}, 3), 0.0);
  EXPECT_EQ(fnp::friedman_statistic({2, 2, 2}, 50), 0.0);
}

TEST(FriedmanStatistic, HandExamples) {
  EXPECT_NEAR(fnp::friedman_statistic({1, 2, 3}, 3), 6.0, 1e-12);
  EXPECT_NEAR(fnp::friedman_statistic({1, 2, 3, 4, 5, 6, 7, 8}, 31), 217.0, 1e-9);
}

TEST(FriedmanStatistic, UnsupportedDesigns) {
  EXPECT_THROW(fnp::friedman_statistic({1, 2}, 10), fnp::UnsupportedDesignError);
  EXPECT_THROW(fnp::friedman_statistic({1, 2, 3}, 1), fnp::UnsupportedDesignError);
}

TEST(FriedmanTest, ConsistentRankingRejects) {
  auto m = make_matrix(3, 3, {0.9, 0.8, 0.7, 0.95, 0.6, 0.5, 3, 2, 1});
  const auto r = fnp::friedman_test(m, 0.05);
  EXPECT_NEAR(r.statistic, 6.0, 1e-12);
  EXPECT_EQ(r.df, 2u);
  EXPECT_NEAR(r.p_value, std::exp(-3.0), 1e-9);
  EXPECT_TRUE(r.reject_null);
  EXPECT_EQ(r.variant, FriedmanVariant::friedman);
  ASSERT_EQ(r.warnings.size(), 1u);  // N = 3 < 15
}

TEST(FriedmanTest, ConstantMatrix) {
  auto m = make_matrix(4, 5, std::vector<double>(20, 0.7));
  const auto r = fnp::friedman_test(m, 0.05);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_FALSE(r.reject_null);
}

TEST(FriedmanTest, RejectIffPBelowAlpha) {
  auto m = make_matrix(3, 3, {0.9, 0.8, 0.7, 0.95, 0.6, 0.5, 3, 2, 1});
  // p = e^-3 ~ 0.0498
  EXPECT_TRUE(fnp::friedman_test(m, 0.05).reject_null);
  EXPECT_FALSE(fnp::friedman_test(m, 0.04).reject_null);
  EXPECT_THROW(fnp::friedman_test(m, 0.0), fnp::ValidationError);
  EXPECT_THROW(fnp::friedman_test(m, 1.0), fnp::ValidationError);
}

TEST(FriedmanTest, NoWarningFromFifteenDatasets) {
  std::vector<double> values;
  for (int i = 0; i < 15; ++i) values.insert(values.end(), {0.1 * (i % 3), 0.5, 0.3});
  EXPECT_TRUE(fnp::friedman_test(make_matrix(15, 3, values), 0.05).warnings.empty());
}

TEST(ImanDavenport, DegenerateWhenRankingsIdentical) {
  auto m = make_matrix(3, 3, {0.9, 0.8, 0.7, 0.95, 0.6, 0.5, 3, 2, 1});
  EXPECT_THROW(fnp::friedman_test(m, 0.05, FriedmanVariant::iman_davenport), fnp::UnsupportedDesignError);
}

TEST(ImanDavenport, FFormOfChiSquare) {
  // rows rank (1,2,3,4), (1,2,3,4), (2,1,3,4), (1,3,2,4), (4,3,2,1)
  auto m = make_matrix(5, 4, {4, 3, 2, 1, 4, 3, 2, 1, 3, 4, 2, 1, 4, 2, 3, 1, 1, 2, 3, 4});
  const auto chi = fnp::friedman_test(m, 0.05, FriedmanVariant::friedman);
  const auto id = fnp::friedman_test(m, 0.05, FriedmanVariant::iman_davenport);
  // average ranks (1.8, 2.2, 2.6, 3.4): chi2 = 12*5/20 * (25.2 - 25) ... by hand
  const double sum_sq = 1.8 * 1.8 + 2.2 * 2.2 + 2.6 * 2.6 + 3.4 * 3.4;
  const double chi2 = 12.0 * 5 / (4 * 5) * (sum_sq - 4 * 25 / 4.0);
  EXPECT_NEAR(chi.statistic, chi2, 1e-12);
  const double ff = 4.0 * chi2 / (5.0 * 3 - chi2);
  EXPECT_NEAR(id.statistic, ff, 1e-12);
  EXPECT_EQ(id.df, 3u);
  EXPECT_EQ(id.df2, 12u);
  EXPECT_NEAR(id.p_value, oracle::f_sf(ff, 3, 12), 1e-7);
  EXPECT_EQ(id.reject_null, id.p_value < 0.05);
}

TEST(ImanDavenport, ConstantMatrixNotDegenerate) {
  auto m = make_matrix(4, 3, std::vector<double>(12, 1.0));
  const auto r = fnp::friedman_test(m, 0.05, FriedmanVariant::iman_davenport);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
}

TEST(Variant, ParseRoundTrip) {
  EXPECT_EQ(fnp::parse_variant(fnp::to_string(FriedmanVariant::iman_davenport)), FriedmanVariant::iman_davenport);
  EXPECT_EQ(fnp::parse_variant(fnp::to_string(FriedmanVariant::friedman)), FriedmanVariant::friedman);
  EXPECT_THROW(fnp::parse_variant("anova"), fnp::ValidationError);
}

TEST(NemenyiCd, EightModelsThirtyOneDatasets) {
  EXPECT_NEAR(fnp::nemenyi_cd(8, 31, 0.05), 1.886, 1e-3);
  EXPECT_NEAR(fnp::nemenyi_cd(8, 31, 0.05), fnp::q_alpha(8, 0.05) * std::sqrt(72.0 / 186.0), 1e-15);
}

TEST(NemenyiCd, TwoModelsClosedForm) { EXPECT_NEAR(fnp::nemenyi_cd(2, 100, 0.05), 0.196, 1e-4); }

TEST(NemenyiCd, QuadruplingDatasetsHalvesCd) {
  for (std::size_t k = 2; k <= 20; ++k) {
    for (std::size_t n : {2u, 7u, 31u, 100u}) {
      EXPECT_EQ(fnp::nemenyi_cd(k, 4 * n, 0.05), fnp::nemenyi_cd(k, n, 0.05) / 2.0);
    }
  }
}

TEST(NemenyiCd, Errors) {
  EXPECT_THROW(fnp::nemenyi_cd(21, 31, 0.05), fnp::UnsupportedDesignError);
  EXPECT_THROW(fnp::nemenyi_cd(8, 31, 0.2), fnp::UnsupportedDesignError);
  EXPECT_THROW(fnp::nemenyi_cd(8, 1, 0.05), fnp::UnsupportedDesignError);
}

TEST(PairwiseSignificance, Example) {
  const auto s = fnp::pairwise_significance({1.5, 2.0, 3.9, 4.6}, 1.0);
  const bool expected[4][4] = {{false, false, true, true},
                               {false, false, true, true},
                               {true, true, false, false},
                               {true, true, false, false}};
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) EXPECT_EQ(s(a, b), expected[a][b]) << a << "," << b;
  }
}

TEST(PairwiseSignificance, LargeCdAndBoundary) {
  const auto none = fnp::pairwise_significance({1, 2, 3, 4}, 3.5);
  EXPECT_TRUE(std::none_of(none.cells.begin(), none.cells.end(), [](bool b) { return b; }));
  const auto edge = fnp::pairwise_significance({1.0, 2.5, 3.0}, 1.5);
  EXPECT_TRUE(edge(0, 1));
  EXPECT_TRUE(edge(1, 0));
  EXPECT_FALSE(edge(1, 2));
  EXPECT_THROW(fnp::pairwise_significance({1, 2, 3}, 0.0), fnp::DomainError);
}

TEST(IndistinguishableGroups, Examples) {
  const auto labels = labels_for(4);
  auto g = fnp::indistinguishable_groups({1.5, 2.0, 3.9, 4.6}, labels, 1.0);
  EXPECT_EQ(g, (std::vector<fnp::Group>{{0, 1}, {2, 3}}));

  g = fnp::indistinguishable_groups({1.5, 2.0, 3.9, 4.6}, labels, 3.2);
  EXPECT_EQ(g, (std::vector<fnp::Group>{{0, 1, 2, 3}}));

  g = fnp::indistinguishable_groups({4.0, 1.0, 3.0, 2.0}, labels, 0.5);
  EXPECT_EQ(g, (std::vector<fnp::Group>{{1}, {3}, {2}, {0}}));
}

TEST(IndistinguishableGroups, OverlappingRunsAndSingletons) {
  const auto labels = labels_for(5);
  // sorted: 1.0, 1.8, 2.5, 4.0, 6.0 with cd 1.0 -> {0,1}, {1,2}, {3}, {4}
  const auto g = fnp::indistinguishable_groups({1.0, 1.8, 2.5, 4.0, 6.0}, labels, 1.0);
  EXPECT_EQ(g, (std::vector<fnp::Group>{{0, 1}, {1, 2}, {3}, {4}}));
}

TEST(IndistinguishableGroups, TiedRanksOrderedByLabel) {
  const std::vector<std::string> labels{"zeta", "alpha", "mid"};
  const auto g = fnp::indistinguishable_groups({2.0, 2.0, 2.0}, labels, 0.1);
  EXPECT_EQ(g, (std::vector<fnp::Group>{{1, 2, 0}}));
}

class GroupOracle : public ::testing::Test {
 protected:
  std::mt19937_64 rng{777};
};

TEST_F(GroupOracle, MatchesExhaustiveEnumeration) {
  int checked = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t k = 2 + trial % 5;  // 2..6
    // ranks on a coarse grid so ties and exact-CD gaps both occur
    std::uniform_int_distribution<int> grid(0, static_cast<int>(4 * (k - 1)));
    std::vector<double> ranks(k);
    for (auto& r : ranks) r = 1.0 + 0.25 * grid(rng);
    std::uniform_int_distribution<int> cd_grid(1, static_cast<int>(4 * k));
    const double cd = 0.25 * cd_grid(rng);
    const auto labels = labels_for(k);

    const auto groups = fnp::indistinguishable_groups(ranks, labels, cd);
    const auto order = fnp::rank_order(ranks, labels);
    EXPECT_EQ(as_sets(groups), oracle::maximal_contiguous_groups(ranks, order, cd))
        << "k=" << k << " cd=" << cd;
    ++checked;

    const auto sig = fnp::pairwise_significance(ranks, cd);
    std::set<std::size_t> covered;
    for (const auto& g : groups) {
      covered.insert(g.begin(), g.end());
      for (std::size_t a : g) {
        for (std::size_t b : g) EXPECT_FALSE(sig(a, b));
      }
    }
    EXPECT_EQ(covered.size(), k);
  }
  EXPECT_GE(checked, 1000);
}

TEST(FriedmanInvariance, ColumnPermutation) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> noise;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 5 + trial % 20;
    const std::size_t k = 3 + trial % 6;
    std::vector<double> values(n * k);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < k; ++j) values[i * k + j] = 0.3 * j + noise(rng);
    }
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> permuted(n * k);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < k; ++j) permuted[i * k + j] = values[i * k + perm[j]];
    }
    const auto a = fnp::friedman_test(make_matrix(n, k, values), 0.05);
    const auto b = fnp::friedman_test(make_matrix(n, k, permuted), 0.05);
    EXPECT_NEAR(a.statistic, b.statistic, 1e-9);
    EXPECT_NEAR(a.p_value, b.p_value, 1e-12);

    const auto ra = fnp::average_ranks(make_matrix(n, k, values));
    const auto rb = fnp::average_ranks(make_matrix(n, k, permuted));
    const double cd = fnp::nemenyi_cd(k, n, 0.05);
    const auto sa = fnp::pairwise_significance(ra, cd);
    const auto sb = fnp::pairwise_significance(rb, cd);
    for (std::size_t x = 0; x < k; ++x) {
      for (std::size_t y = 0; y < k; ++y) EXPECT_EQ(sb(x, y), sa(perm[x], perm[y]));
    }
  }
}

TEST(NemenyiTest, BundlesCdSignificanceAndGroups) {
  const auto labels = labels_for(4);
  const auto r = fnp::nemenyi_test({1.5, 2.0, 3.9, 4.6}, labels, 31, 0.05);
  EXPECT_NEAR(r.cd, fnp::nemenyi_cd(4, 31, 0.05), 0.0);
  EXPECT_EQ(r.significant.k, 4u);
  EXPECT_EQ(r.groups, fnp::indistinguishable_groups({1.5, 2.0, 3.9, 4.6}, labels, r.cd));
}
