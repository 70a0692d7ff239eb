#include <gtest/gtest.h>

#include <cmath>

#include "fnp/error.hpp"
#include "fnp/friedman_nemenyi.hpp"
#include "fnp/simulate.hpp"

namespace {

fnp::SimConfig null_config(std::size_t n, std::size_t k, std::size_t trials, std::uint64_t seed) {
  fnp::SimConfig cfg;
  cfg.num_datasets = n;
  cfg.num_models = k;
  cfg.effect.assign(k, 0.0);
  cfg.trials = trials;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST(GenerateMatrix, Deterministic) {
  const auto cfg = null_config(31, 8, 10, 42);
  EXPECT_EQ(fnp::generate_matrix(cfg, 3).values(), fnp::generate_matrix(cfg, 3).values());
  EXPECT_NE(fnp::generate_matrix(cfg, 3).values(), fnp::generate_matrix(cfg, 4).values());
  auto other_seed = cfg;
  other_seed.seed = 43;
  EXPECT_NE(fnp::generate_matrix(cfg, 3).values(), fnp::generate_matrix(other_seed, 3).values());
}

TEST(GenerateMatrix, CellsDependOnlyOnTheirCoordinates) {
  // growing the design does not change the cells already there
  const auto small = fnp::generate_matrix(null_config(5, 3, 2, 9), 1);
  const auto large = fnp::generate_matrix(null_config(8, 6, 2, 9), 1);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(small.at(i, j), large.at(i, j));
  }
}

TEST(GenerateMatrix, NullColumnsConvergeAsNGrows) {
  const auto m = fnp::generate_matrix(null_config(20000, 3, 1, 1), 0);
  for (std::size_t j = 0; j < 3; ++j) {
    double sum = 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < m.num_datasets(); ++i) {
      sum += m.at(i, j);
      sq += m.at(i, j) * m.at(i, j);
    }
    const double mean = sum / 20000.0;
    EXPECT_NEAR(mean, 0.0, 4.0 / std::sqrt(20000.0));
    EXPECT_NEAR(sq / 20000.0 - mean * mean, 1.0, 0.05);
  }
}

TEST(GenerateMatrix, NoiseFreeLimitRanksEffectFirst) {
  auto cfg = null_config(31, 8, 1, 3);
  cfg.effect[0] = 1.0;
  cfg.noise_sd = 1e-6;
  const auto ranks = fnp::average_ranks(fnp::generate_matrix(cfg, 0));
  EXPECT_EQ(ranks[0], 1.0);
}

TEST(GenerateMatrix, Errors) {
  auto cfg = null_config(31, 8, 2, 3);
  EXPECT_THROW(fnp::generate_matrix(cfg, 2), fnp::ValidationError);
  cfg.noise_sd = 0.0;
  EXPECT_THROW(fnp::validate(cfg), fnp::ValidationError);
  cfg = null_config(31, 8, 0, 3);
  EXPECT_THROW(fnp::validate(cfg), fnp::ValidationError);
  cfg = null_config(31, 8, 10, 3);
  cfg.effect.pop_back();
  EXPECT_THROW(fnp::validate(cfg), fnp::ValidationError);
  EXPECT_THROW(fnp::validate(null_config(31, 2, 10, 3)), fnp::UnsupportedDesignError);
}

TEST(BinomialEstimate, WilsonInterval) {
  const auto e = fnp::binomial_estimate(50, 1000);
  EXPECT_DOUBLE_EQ(e.rate, 0.05);
  // statsmodels proportion_confint(50, 1000, method="wilson")
  EXPECT_NEAR(e.ci_low, 0.0381302624, 1e-9);
  EXPECT_NEAR(e.ci_high, 0.0653138202, 1e-9);
  const auto zero = fnp::binomial_estimate(0, 10);
  EXPECT_EQ(zero.ci_low, 0.0);
  EXPECT_GT(zero.ci_high, 0.0);
}

TEST(EstimateType1, SingleTrialIsZeroOrOne) {
  const auto r = fnp::estimate_type1(null_config(31, 8, 1, 5));
  EXPECT_TRUE(r.rejection.rate == 0.0 || r.rejection.rate == 1.0);
  EXPECT_EQ(r.rejection.trials, 1u);
}

TEST(EstimateType1, HalfAlphaRejectsHalf) {
  auto cfg = null_config(31, 8, 4000, 17);
  cfg.alpha = 0.5;
  const auto r = fnp::estimate_type1(cfg);
  EXPECT_EQ(r.tied_rows, 0u);
  EXPECT_NEAR(r.rejection.rate, 0.5, 0.04);
}

TEST(EstimateType1, RequiresNullEffect) {
  auto cfg = null_config(31, 8, 10, 1);
  cfg.effect[2] = 0.5;
  EXPECT_THROW(fnp::estimate_type1(cfg), fnp::ValidationError);
  EXPECT_THROW(fnp::estimate_power(null_config(31, 8, 10, 1)), fnp::ValidationError);
}

TEST(EstimateType1, ThreadCountDoesNotChangeResult) {
  auto cfg = null_config(31, 8, 3000, 2024);
  cfg.threads = 1;
  const auto serial = fnp::estimate_type1(cfg);
  for (unsigned t : {2u, 3u, 8u, 0u}) {
    cfg.threads = t;
    const auto parallel = fnp::estimate_type1(cfg);
    EXPECT_EQ(parallel.rejection.successes, serial.rejection.successes);
    EXPECT_EQ(fnp::calibration_json(cfg, parallel), fnp::calibration_json(cfg, serial));
  }
}

TEST(EstimateType1, ConvergesTowardNominalWithMoreDatasets) {
  // |rate - alpha| at N = 100 no worse than at N = 5, averaged over seeds
  double small_gap = 0.0;
  double large_gap = 0.0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto cfg = null_config(5, 4, 3000, seed);
    cfg.threads = 0;
    small_gap += std::abs(fnp::estimate_type1(cfg).rejection.rate - 0.05);
    cfg.num_datasets = 100;
    large_gap += std::abs(fnp::estimate_type1(cfg).rejection.rate - 0.05);
  }
  EXPECT_LE(large_gap, small_gap);
}

TEST(EstimatePower, HugeGapAlwaysRejects) {
  auto cfg = null_config(31, 8, 200, 8);
  for (std::size_t j = 0; j < 8; ++j) cfg.effect[j] = 10.0 * static_cast<double>(j);
  cfg.noise_sd = 0.01;
  const auto p = fnp::estimate_power(cfg);
  EXPECT_EQ(p.omnibus.rate, 1.0);
  EXPECT_EQ(p.detection(0, 7), 1.0);
  EXPECT_EQ(p.detection(0, 0), 0.0);
}

TEST(EstimatePower, ZeroGapPairStaysNearAlpha) {
  auto cfg = null_config(31, 8, 2000, 99);
  cfg.effect = {0.0, 0.0, 0.5, 0.5, 1.0, 1.0, 1.5, 1.5};
  cfg.threads = 0;
  const auto p = fnp::estimate_power(cfg);
  const auto ci = fnp::binomial_estimate(static_cast<std::size_t>(std::lround(p.detection(0, 1) * 2000)), 2000);
  EXPECT_LE(ci.ci_low, 0.05);
  EXPECT_LE(p.detection(6, 7), 0.05 + (ci.ci_high - ci.rate));
  EXPECT_GT(p.detection(0, 7), 0.5);
  EXPECT_EQ(p.tied_rows, 0u);
}

TEST(SimulationJson, FieldsAndDeterminism) {
  const auto cfg = null_config(10, 4, 50, 7);
  const auto a = fnp::calibration_json(cfg, fnp::estimate_type1(cfg));
  const auto b = fnp::calibration_json(cfg, fnp::estimate_type1(cfg));
  EXPECT_EQ(a, b);
  for (const char* field : {"\"config\"", "\"rejection_rate\"", "\"ci_low\"", "\"ci_high\"", "\"trials\""}) {
    EXPECT_NE(a.find(field), std::string::npos) << field;
  }
}
