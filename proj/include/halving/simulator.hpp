#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "halving/hashrate.hpp"
#include "halving/statistics.hpp"
#include "halving/units.hpp"

namespace halving {

/// Hashes per unit of difficulty: a hash meets difficulty D with probability 1 / (2^32 D).
inline constexpr double kHashesPerDifficulty = 4294967296.0;

/// Difficulty at which `h` finds blocks every `block_target` on average.
constexpr double matched_difficulty(Hashrate h, Duration block_target = kBlockTarget) {
  return h.per_minute * block_target.minutes / kHashesPerDifficulty;
}

inline constexpr std::uint64_t kDefaultSeed = 20160;

enum class Granularity {
  per_block,     // one exponential draw per block at rate H / (2^32 D)
  per_interval,  // one Erlang draw per interval
};

std::string_view to_string(Granularity g);
Granularity parse_granularity(std::string_view s);

/// Multiplies the hashrate by `factor` from the start of counted interval
/// `interval` (1-based) onwards.
struct HashrateStep {
  std::uint64_t interval = 1;
  double factor = 1.0;
};

/// One simulated experiment: an uncounted interval 0 of k blocks sets the
/// difficulty, then intervals 1..n are timed; interval n holds M blocks.
/// With retarget disabled interval 0 is skipped and D never changes.
struct SimulationConfig {
  std::uint32_t k = 2016;
  std::uint64_t n = 1;
  std::uint32_t M = 2016;
  Hashrate hashrate{kHashesPerDifficulty / kBlockTarget.minutes};
  double initial_difficulty = 1.0;
  Duration block_target = kBlockTarget;
  std::uint64_t trials = 1;
  std::uint64_t seed = kDefaultSeed;
  Granularity granularity = Granularity::per_interval;
  bool retarget = true;
  std::optional<HashrateStep> step;
  unsigned threads = 0;  // 0: hardware concurrency; never changes results

  Duration retarget_target() const { return static_cast<double>(k) * block_target; }
  std::uint64_t total_blocks() const { return (n - 1) * k + M; }
};

/// Throws std::invalid_argument for an unusable config.
void validate(const SimulationConfig& config);

struct SimulatedInterval {
  Duration expected;  // s_i
  Duration actual;    // t_i
  double ratio = 0.0; // r_i = t_i / s_i
  double difficulty = 0.0;
};

struct SimulationSummary {
  Duration mean_T;
  double var_T = 0.0;
  Duration se_mean;
  double se_var = 0.0;
  /// Sample Cov(t_1, t_2) / (2 weeks)^2; present when n >= 3.
  std::optional<double> cov_adjacent;
  std::optional<double> se_cov;
  std::uint64_t trials = 0;
};

using Rng = std::mt19937_64;

/// Simulates one trial, returning intervals 0..n (or 1..n without retarget).
std::vector<SimulatedInterval> simulate_trial(const SimulationConfig& config, Rng& rng);

/// Per-trial halving times T in trial order. Trials are seeded in fixed-size
/// chunks from (seed, chunk index), so the output is identical for any
/// number of worker threads.
std::vector<double> simulate_totals(const SimulationConfig& config);

/// Runs all trials and summarizes T. Requires trials >= 2.
SimulationSummary run(const SimulationConfig& config);

/// Pooled sample covariance of (t_1, t_{1+lag}) / (2 weeks)^2, one pair per
/// trial. Requires n >= 2 + lag so both are full intervals, and trials >= 2.
CovarianceEstimate estimate_covariance(const SimulationConfig& config, std::uint64_t lag = 1);

/// `count` Erlang(shape, rate) samples from a dedicated stream.
std::vector<double> sample_erlang(std::uint32_t shape, double rate, std::size_t count, std::uint64_t seed);

/// A mined block from simulate_chain; time is minutes since the start.
struct SimulatedBlock {
  std::uint64_t height = 0;
  double time_minutes = 0.0;
  double difficulty = 0.0;
};

/// Per-block chain at a fixed hashrate with retargets at multiples of k,
/// starting from `start_height` with the first block at time 0.
std::vector<SimulatedBlock> simulate_chain(std::uint32_t k, Hashrate hashrate, double initial_difficulty,
                                           std::uint64_t start_height, std::size_t blocks, std::uint64_t seed,
                                           Duration block_target = kBlockTarget);

}  // namespace halving
