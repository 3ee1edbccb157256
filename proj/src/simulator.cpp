#include "halving/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

namespace halving {

namespace {

constexpr std::uint64_t kChunkTrials = 4096;

Rng chunk_rng(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return Rng{seq};
}

// Runs fn(trial, rng) for every trial. Chunk c always owns trials
// [c * kChunkTrials, (c + 1) * kChunkTrials) and the stream seeded by (seed, c).
template <class Fn>
void for_each_trial(const SimulationConfig& cfg, Fn&& fn) {
  const std::uint64_t chunks = (cfg.trials + kChunkTrials - 1) / kChunkTrials;
  unsigned workers = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));

  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      Rng rng = chunk_rng(cfg.seed, c);
      const std::uint64_t end = std::min(cfg.trials, (c + 1) * kChunkTrials);
      for (std::uint64_t t = c * kChunkTrials; t < end; ++t) fn(t, rng);
    }
  };
  if (workers <= 1) {
    work();
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
}

// Time to mine `blocks` blocks at per-block rate `rate` (blocks / minute).
double draw_interval(std::uint64_t blocks, double rate, Granularity g, Rng& rng) {
  if (g == Granularity::per_block) {
    std::exponential_distribution<double> block_time(rate);
    double t = 0.0;
    for (std::uint64_t b = 0; b < blocks; ++b) t += block_time(rng);
    return t;
  }
  const double shape = static_cast<double>(blocks);
  std::gamma_distribution<double> ratio(shape, 1.0 / shape);
  return ratio(rng) * shape / rate;
}

// Simulates one trial and returns T; on_interval(index, interval) sees every
// simulated interval including the uncounted interval 0.
template <class Visit>
double trial(const SimulationConfig& cfg, Rng& rng, Visit&& on_interval) {
  const double target = cfg.retarget_target().minutes;
  double difficulty = cfg.initial_difficulty;
  double hashrate = cfg.hashrate.per_minute;

  auto mine = [&](std::uint64_t index, std::uint64_t blocks) {
    const double rate = hashrate / (kHashesPerDifficulty * difficulty);
    const double expected = static_cast<double>(blocks) / rate;
    const double actual = draw_interval(blocks, rate, cfg.granularity, rng);
    on_interval(index, SimulatedInterval{Duration{expected}, Duration{actual}, actual / expected, difficulty});
    return actual;
  };

  if (cfg.retarget) {
    const double t0 = mine(0, cfg.k);
    difficulty *= target / t0;
  }
  double total = 0.0;
  for (std::uint64_t i = 1; i <= cfg.n; ++i) {
    if (cfg.step && cfg.step->interval == i) hashrate *= cfg.step->factor;
    const double t = mine(i, i < cfg.n ? cfg.k : cfg.M);
    total += t;
    if (cfg.retarget) difficulty *= target / t;
  }
  return total;
}

}  // namespace

std::string_view to_string(Granularity g) { return g == Granularity::per_block ? "per_block" : "per_interval"; }

Granularity parse_granularity(std::string_view s) {
  if (s == "per_block" || s == "block") return Granularity::per_block;
  if (s == "per_interval" || s == "interval") return Granularity::per_interval;
  throw std::invalid_argument("unknown granularity: " + std::string(s));
}

void validate(const SimulationConfig& c) {
  if (c.k < 1) throw std::invalid_argument("k must be >= 1");
  if (c.n < 1) throw std::invalid_argument("n must be >= 1");
  if (c.M < 1 || c.M > c.k) throw std::invalid_argument("M must be in [1, k]");
  if (c.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (!(c.hashrate.per_minute > 0.0) || !std::isfinite(c.hashrate.per_minute))
    throw std::invalid_argument("hashrate must be positive");
  if (!(c.initial_difficulty > 0.0) || !std::isfinite(c.initial_difficulty))
    throw std::invalid_argument("initial difficulty must be positive");
  if (!(c.block_target.minutes > 0.0)) throw std::invalid_argument("block target must be positive");
  if (c.step && !(c.step->factor > 0.0)) throw std::invalid_argument("hashrate step factor must be positive");
}

std::vector<SimulatedInterval> simulate_trial(const SimulationConfig& config, Rng& rng) {
  validate(config);
  std::vector<SimulatedInterval> out;
  out.reserve(config.n + 1);
  trial(config, rng, [&](std::uint64_t, const SimulatedInterval& s) { out.push_back(s); });
  return out;
}

std::vector<double> simulate_totals(const SimulationConfig& config) {
  validate(config);
  std::vector<double> totals(config.trials);
  for_each_trial(config, [&](std::uint64_t t, Rng& rng) {
    totals[t] = trial(config, rng, [](std::uint64_t, const SimulatedInterval&) {});
  });
  return totals;
}

SimulationSummary run(const SimulationConfig& config) {
  validate(config);
  if (config.trials < 2) throw std::invalid_argument("a summary needs at least two trials");
  const bool pairs = config.n >= 3;
  const double target = config.retarget_target().minutes;

  std::vector<double> totals(config.trials);
  std::vector<double> first, second;
  if (pairs) {
    first.resize(config.trials);
    second.resize(config.trials);
  }
  for_each_trial(config, [&](std::uint64_t t, Rng& rng) {
    totals[t] = trial(config, rng, [&](std::uint64_t i, const SimulatedInterval& s) {
      if (!pairs) return;
      if (i == 1) first[t] = s.actual.minutes / target;
      if (i == 2) second[t] = s.actual.minutes / target;
    });
  });

  const auto m = sample_moments(totals);
  SimulationSummary out{Duration{m.mean}, m.variance, Duration{m.se_mean}, m.se_variance, {}, {}, config.trials};
  if (pairs) {
    const auto cov = sample_covariance(first, second);
    out.cov_adjacent = cov.value;
    out.se_cov = cov.standard_error;
  }
  return out;
}

CovarianceEstimate estimate_covariance(const SimulationConfig& config, std::uint64_t lag) {
  validate(config);
  if (lag < 1) throw std::invalid_argument("lag must be >= 1");
  if (config.n < 2 + lag) throw std::invalid_argument("covariance needs n >= 2 + lag full intervals");
  if (config.trials < 2) throw std::invalid_argument("covariance needs at least two trials");
  const double target = config.retarget_target().minutes;

  std::vector<double> xs(config.trials), ys(config.trials);
  for_each_trial(config, [&](std::uint64_t t, Rng& rng) {
    trial(config, rng, [&](std::uint64_t i, const SimulatedInterval& s) {
      if (i == 1) xs[t] = s.actual.minutes / target;
      if (i == 1 + lag) ys[t] = s.actual.minutes / target;
    });
  });
  return sample_covariance(xs, ys);
}

std::vector<double> sample_erlang(std::uint32_t shape, double rate, std::size_t count, std::uint64_t seed) {
  if (shape < 1) throw std::invalid_argument("Erlang shape must be >= 1");
  if (!(rate > 0.0)) throw std::invalid_argument("Erlang rate must be positive");
  Rng rng = chunk_rng(seed, 0);
  std::gamma_distribution<double> dist(static_cast<double>(shape), 1.0 / rate);
  std::vector<double> out(count);
  for (auto& x : out) x = dist(rng);
  return out;
}

std::vector<SimulatedBlock> simulate_chain(std::uint32_t k, Hashrate hashrate, double initial_difficulty,
                                           std::uint64_t start_height, std::size_t blocks, std::uint64_t seed,
                                           Duration block_target) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (!(hashrate.per_minute > 0.0) || !(initial_difficulty > 0.0))
    throw std::invalid_argument("hashrate and difficulty must be positive");
  Rng rng = chunk_rng(seed, 0);
  const double target = static_cast<double>(k) * block_target.minutes;

  std::vector<SimulatedBlock> chain;
  chain.reserve(blocks);
  double difficulty = initial_difficulty;
  double now = 0.0;
  std::optional<double> window_start;  // time of the last boundary block
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::uint64_t height = start_height + b;
    if (b > 0) {
      std::exponential_distribution<double> block_time(hashrate.per_minute / (kHashesPerDifficulty * difficulty));
      now += block_time(rng);
    }
    chain.push_back({height, now, difficulty});
    // Blocks after a boundary use a difficulty set from the k blocks ending at it.
    if (height % k == 0) {
      if (window_start) difficulty *= target / (now - *window_start);
      window_start = now;
    }
  }
  return chain;
}

}  // namespace halving
