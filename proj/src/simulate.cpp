#include "fnp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>
#include <nlohmann/json.hpp>

#include "fnp/error.hpp"
#include "fnp/friedman_nemenyi.hpp"

namespace fnp {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform on the open interval (0, 1) from the top 53 bits.
double to_unit(std::uint64_t w) { return (static_cast<double>(w >> 11) + 0.5) * 0x1.0p-53; }

struct TrialOutcome {
  bool reject = false;
  std::size_t tied_rows = 0;
  std::vector<bool> significant;  // k x k, only filled for power runs
};

std::vector<double> generate_values(const SimConfig& cfg, std::size_t trial) {
  const std::size_t n = cfg.num_datasets;
  const std::size_t k = cfg.num_models;
  std::vector<double> values(n * k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      values[i * k + j] = cfg.effect[j] + cfg.noise_sd * cell_noise(cfg.seed, trial, i, j);
    }
  }
  return values;
}

TrialOutcome run_trial(const SimConfig& cfg, std::size_t trial, double cd) {
  const std::size_t n = cfg.num_datasets;
  const std::size_t k = cfg.num_models;
  const auto values = generate_values(cfg, trial);

  TrialOutcome out;
  AverageRanks avg(k, 0.0);
  std::vector<double> sorted(k);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<const double> row(values.data() + i * k, k);
    sorted.assign(row.begin(), row.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) ++out.tied_rows;
    const auto r = rank_row(row, Direction::maximize);
    for (std::size_t j = 0; j < k; ++j) avg[j] += r[j];
  }
  for (auto& v : avg) v /= static_cast<double>(n);

  out.reject = friedman_test(avg, n, cfg.alpha).reject_null;
  if (cd > 0.0) out.significant = pairwise_significance(avg, cd).cells;
  return out;
}

// Outcomes land in trial order, so any thread count yields the same vector.
std::vector<TrialOutcome> run_trials(const SimConfig& cfg, double cd) {
  std::vector<TrialOutcome> outcomes(cfg.trials);
  unsigned threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cfg.trials));

  auto work = [&](unsigned worker) {
    for (std::size_t t = worker; t < cfg.trials; t += threads) outcomes[t] = run_trial(cfg, t, cd);
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  return outcomes;
}

nlohmann::ordered_json config_json(const SimConfig& cfg) {
  nlohmann::ordered_json j;
  j["n"] = cfg.num_datasets;
  j["k"] = cfg.num_models;
  j["effect"] = cfg.effect;
  j["noise_sd"] = cfg.noise_sd;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["alpha"] = cfg.alpha;
  return j;
}

}  // namespace

void validate(const SimConfig& cfg) {
  if (cfg.num_models < 3) throw UnsupportedDesignError("simulation needs k >= 3");
  if (cfg.num_datasets < 2) throw UnsupportedDesignError("simulation needs N >= 2");
  if (cfg.trials < 1) throw ValidationError("trials must be at least 1");
  if (!(cfg.noise_sd > 0.0) || !std::isfinite(cfg.noise_sd)) throw ValidationError("noise_sd must be positive");
  if (cfg.effect.size() != cfg.num_models) {
    throw ValidationError("effect has " + std::to_string(cfg.effect.size()) + " entries, expected k = " +
                          std::to_string(cfg.num_models));
  }
  for (double e : cfg.effect) {
    if (!std::isfinite(e)) throw ValidationError("effect entries must be finite");
  }
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
}

bool is_null_effect(const SimConfig& cfg) noexcept {
  return std::all_of(cfg.effect.begin(), cfg.effect.end(), [](double e) { return e == 0.0; });
}

double cell_noise(std::uint64_t seed, std::uint64_t trial, std::uint64_t dataset, std::uint64_t model) {
  std::uint64_t key = splitmix64(seed);
  key = splitmix64(key ^ trial);
  key = splitmix64(key ^ dataset);
  key = splitmix64(key ^ model);
  const double u1 = to_unit(splitmix64(key));
  const double u2 = to_unit(splitmix64(key ^ 0xd1b54a32d192ed03ULL));
  // Box-Muller, cosine branch
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

PerformanceMatrix generate_matrix(const SimConfig& cfg, std::size_t trial_index) {
  validate(cfg);
  if (trial_index >= cfg.trials) throw ValidationError("trial index out of range");
  std::vector<std::string> datasets;
  for (std::size_t i = 0; i < cfg.num_datasets; ++i) datasets.push_back("dataset_" + std::to_string(i + 1));
  std::vector<ModelId> models;
  for (std::size_t j = 0; j < cfg.num_models; ++j) models.push_back({"model_" + std::to_string(j + 1), {}});
  return PerformanceMatrix(std::move(datasets), std::move(models), generate_values(cfg, trial_index),
                           Direction::maximize);
}

RateEstimate binomial_estimate(std::size_t successes, std::size_t trials) {
  if (trials == 0) throw ValidationError("binomial estimate needs at least one trial");
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n));
  return {p, std::max(0.0, centre - half), std::min(1.0, centre + half), successes, trials};
}

CalibrationResult estimate_type1(const SimConfig& cfg) {
  validate(cfg);
  if (!is_null_effect(cfg)) throw ValidationError("Type-I calibration requires an all-zero effect");
  const auto outcomes = run_trials(cfg, 0.0);
  std::size_t rejections = 0;
  CalibrationResult result;
  for (const auto& o : outcomes) {
    rejections += o.reject ? 1 : 0;
    result.tied_rows += o.tied_rows;
  }
  result.rejection = binomial_estimate(rejections, cfg.trials);
  return result;
}

PowerResult estimate_power(const SimConfig& cfg) {
  validate(cfg);
  if (is_null_effect(cfg)) throw ValidationError("power estimation requires a nonzero effect");
  const std::size_t k = cfg.num_models;
  PowerResult result;
  result.num_models = k;
  result.cd = nemenyi_cd(k, cfg.num_datasets, cfg.alpha);

  const auto outcomes = run_trials(cfg, result.cd);
  std::size_t rejections = 0;
  std::vector<std::size_t> counts(k * k, 0);
  for (const auto& o : outcomes) {
    rejections += o.reject ? 1 : 0;
    result.tied_rows += o.tied_rows;
    for (std::size_t c = 0; c < k * k; ++c) counts[c] += o.significant[c] ? 1 : 0;
  }
  result.omnibus = binomial_estimate(rejections, cfg.trials);
  result.pairwise_detection.resize(k * k);
  for (std::size_t c = 0; c < k * k; ++c) {
    result.pairwise_detection[c] = static_cast<double>(counts[c]) / static_cast<double>(cfg.trials);
  }
  return result;
}

std::string calibration_json(const SimConfig& cfg, const CalibrationResult& result) {
  nlohmann::ordered_json j;
  j["config"] = config_json(cfg);
  j["rejection_rate"] = result.rejection.rate;
  j["ci_low"] = result.rejection.ci_low;
  j["ci_high"] = result.rejection.ci_high;
  j["trials"] = result.rejection.trials;
  return j.dump(2) + "\n";
}

std::string power_json(const SimConfig& cfg, const PowerResult& result) {
  nlohmann::ordered_json j;
  j["config"] = config_json(cfg);
  j["rejection_rate"] = result.omnibus.rate;
  j["ci_low"] = result.omnibus.ci_low;
  j["ci_high"] = result.omnibus.ci_high;
  j["trials"] = result.omnibus.trials;
  j["omnibus_rate"] = result.omnibus.rate;
  j["cd"] = result.cd;
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < result.num_models; ++a) {
    std::vector<double> row(result.pairwise_detection.begin() + a * result.num_models,
                            result.pairwise_detection.begin() + (a + 1) * result.num_models);
    rows.push_back(row);
  }
  j["pairwise_detection"] = rows;
  return j.dump(2) + "\n";
}

}  // namespace fnp
