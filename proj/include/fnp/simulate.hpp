#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fnp/ranks.hpp"

namespace fnp {

struct SimConfig {
  std::size_t num_datasets = 31;
  std::size_t num_models = 8;
  // Per-model mean offset in metric units; all zeros is the null hypothesis.
  std::vector<double> effect = std::vector<double>(8, 0.0);
  double noise_sd = 1.0;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  // Worker threads; 0 picks the hardware concurrency. Results do not depend on it.
  unsigned threads = 1;
};

// Throws ValidationError when the config cannot be simulated.
void validate(const SimConfig& cfg);

bool is_null_effect(const SimConfig& cfg) noexcept;

// Standard normal draw for one cell of one trial. Each (seed, trial, dataset,
// model) tuple maps to its own counter-based stream, so draws never depend on
// evaluation order.
double cell_noise(std::uint64_t seed, std::uint64_t trial, std::uint64_t dataset, std::uint64_t model);

// cell (i, j) = effect[j] + noise_sd * cell_noise(seed, trial, i, j), maximize.
PerformanceMatrix generate_matrix(const SimConfig& cfg, std::size_t trial_index);

struct RateEstimate {
  double rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t successes = 0;
  std::size_t trials = 0;
};

// 95% Wilson score interval.
RateEstimate binomial_estimate(std::size_t successes, std::size_t trials);

struct CalibrationResult {
  RateEstimate rejection;
  // Rows with tied values seen across all trials; nonzero means the noise
  // generator is broken, since continuous noise ties with probability zero.
  std::size_t tied_rows = 0;
};

struct PowerResult {
  RateEstimate omnibus;
  // k x k row-major; fraction of trials marking (a, b) Nemenyi-significant.
  std::vector<double> pairwise_detection;
  std::size_t num_models = 0;
  double cd = 0.0;
  std::size_t tied_rows = 0;

  double detection(std::size_t a, std::size_t b) const { return pairwise_detection[a * num_models + b]; }
};

// Rejection rate of the Friedman test at cfg.alpha. Requires a zero effect.
CalibrationResult estimate_type1(const SimConfig& cfg);

// Requires a nonzero effect and a tabulated (k, alpha) for the CD.
PowerResult estimate_power(const SimConfig& cfg);

std::string calibration_json(const SimConfig& cfg, const CalibrationResult& result);
std::string power_json(const SimConfig& cfg, const PowerResult& result);

}  // namespace fnp
