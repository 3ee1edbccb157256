#include <doctest.h>

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "halving/retarget.hpp"
#include "halving/simulator.hpp"

using namespace halving;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool identical(const SimulationSummary& a, const SimulationSummary& b) {
  return same_bits(a.mean_T.minutes, b.mean_T.minutes) && same_bits(a.var_T, b.var_T) &&
         same_bits(a.se_mean.minutes, b.se_mean.minutes) && same_bits(a.se_var, b.se_var) &&
         a.cov_adjacent.has_value() == b.cov_adjacent.has_value() &&
         (!a.cov_adjacent || same_bits(*a.cov_adjacent, *b.cov_adjacent)) && a.trials == b.trials;
}

}  // namespace

TEST_CASE("identical configs give bit-identical summaries for any thread count") {
  SimulationConfig c;
  c.k = 10;
  c.n = 3;
  c.M = 10;
  c.trials = 50000;
  c.seed = 42;
  c.threads = 1;
  const auto one = run(c);
  c.threads = 7;
  const auto seven = run(c);
  c.threads = 0;
  const auto all = run(c);
  CHECK(identical(one, seven));
  CHECK(identical(one, all));
  CHECK(identical(one, run(c)));
  c.seed = 43;
  CHECK_FALSE(identical(one, run(c)));
}

TEST_CASE("per-block and per-interval granularity agree") {
  SimulationConfig c;
  c.k = 50;
  c.n = 3;
  c.M = 25;
  c.trials = 60000;
  c.seed = 1;
  c.granularity = Granularity::per_block;
  const auto block = run(c);
  c.seed = 2;
  c.granularity = Granularity::per_interval;
  const auto interval = run(c);
  const double pooled = std::hypot(block.se_mean.minutes, interval.se_mean.minutes);
  CHECK(std::abs(block.mean_T.minutes - interval.mean_T.minutes) < 4 * pooled);
  CHECK(std::abs(block.var_T - interval.var_T) < 4 * std::hypot(block.se_var, interval.se_var));
}

TEST_CASE("one interval at fixed difficulty reduces to the naive model") {
  SimulationConfig c;
  c.k = 2016;
  c.n = 1;
  c.M = 2016;
  c.retarget = false;
  c.granularity = Granularity::per_block;
  c.trials = 20000;
  c.seed = 5;
  const auto s = run(c);
  CHECK(std::abs(s.mean_T.minutes - 20160.0) < 3 * s.se_mean.minutes);
  CHECK(std::abs(s.var_T - 201600.0) < 3 * s.se_var);
}

TEST_CASE("fixed difficulty over several intervals keeps naive variance") {
  for (std::uint32_t blocks : {10u, 100u}) {
    SimulationConfig c;
    c.k = 4;
    c.n = (blocks + 3) / 4;
    c.M = blocks - static_cast<std::uint32_t>(c.n - 1) * 4;
    c.retarget = false;
    c.trials = 200000;
    c.seed = blocks;
    REQUIRE(c.total_blocks() == blocks);
    const auto s = run(c);
    CHECK(std::abs(s.var_T - 100.0 * blocks) < 3 * s.se_var);
    CHECK(std::abs(s.mean_T.minutes - 10.0 * blocks) < 3 * s.se_mean.minutes);
  }
}

TEST_CASE("trial intervals follow the rate and retarget laws") {
  SimulationConfig c;
  c.k = 20;
  c.n = 4;
  c.M = 7;
  c.hashrate = Hashrate{3.0e12};
  c.initial_difficulty = 123.0;  // deliberately not matched to the hashrate
  c.granularity = Granularity::per_block;
  Rng rng(9);
  const auto path = simulate_trial(c, rng);
  REQUIRE(path.size() == 5);
  const double target = c.retarget_target().minutes;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const auto& s = path[i];
    const double blocks = i + 1 < path.size() ? 20.0 : 7.0;
    CHECK(s.actual.minutes > 0.0);
    CHECK(s.ratio == s.actual.minutes / s.expected.minutes);
    CHECK(s.expected.minutes == doctest::Approx(blocks * kHashesPerDifficulty * s.difficulty / c.hashrate.per_minute));
    if (i > 0) CHECK(s.difficulty == doctest::Approx(path[i - 1].difficulty * target / path[i - 1].actual.minutes));
  }
  // after the first retarget the expected interval is 2wk / r_{i-1}
  CHECK(path[1].expected.minutes == doctest::Approx(target / path[0].ratio));
}

TEST_CASE("analytic mean matches simulation at k = 10, n = 3") {
  SimulationConfig c;
  c.k = 10;
  c.n = 3;
  c.M = 10;
  c.trials = 300000;
  c.seed = 77;
  const auto s = run(c);
  CHECK(std::abs(s.mean_T.minutes - retarget_eta({3, 10}, RetargetParams{10}).minutes) < 3 * s.se_mean.minutes);
  REQUIRE(s.cov_adjacent);
  CHECK(std::abs(*s.cov_adjacent - covariance_coefficient(10, CovarianceMode::derived)) < 3 * *s.se_cov);
}

TEST_CASE("Erlang sampler") {
  const auto expo = sample_erlang(1, 0.1, 200000, 1);
  const auto m1 = sample_moments(expo);
  CHECK(std::abs(m1.mean - 10.0) < 3 * m1.se_mean);
  const auto e10 = sample_erlang(10, 10.0, 200000, 2);
  const auto m10 = sample_moments(e10);
  CHECK(std::abs(m10.mean - 1.0) < 3 * m10.se_mean);
  CHECK(std::abs(m10.variance - 0.1) < 3 * m10.se_variance);
  CHECK(sample_erlang(1, 1.0, 0, 3).empty());
  CHECK(sample_erlang(3, 2.0, 10, 4) == sample_erlang(3, 2.0, 10, 4));
  CHECK_THROWS(sample_erlang(0, 1.0, 1, 1));
  CHECK_THROWS(sample_erlang(2, 0.0, 1, 1));
}

TEST_CASE("covariance estimation preconditions") {
  SimulationConfig c;
  c.k = 10;
  c.n = 2;
  c.M = 10;
  c.trials = 100;
  CHECK_THROWS_AS(estimate_covariance(c), std::invalid_argument);
  c.n = 3;
  c.trials = 1;
  CHECK_THROWS_AS(estimate_covariance(c), std::invalid_argument);
  c.trials = 100;
  CHECK_THROWS_AS(estimate_covariance(c, 2), std::invalid_argument);
  CHECK_NOTHROW(estimate_covariance(c, 1));
}

TEST_CASE("config validation") {
  SimulationConfig c;
  c.M = 0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.M = 2017;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.M = 1;
  c.trials = 0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.trials = 1;
  c.initial_difficulty = -1;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.initial_difficulty = 1;
  CHECK_NOTHROW(validate(c));
  CHECK_THROWS_AS(run(c), std::invalid_argument);  // one trial has no variance
}

TEST_CASE("simulated chain retargets at multiples of k") {
  const Hashrate h{1e15};
  const auto chain = simulate_chain(10, h, matched_difficulty(h) * 2, 95, 40, 3);
  REQUIRE(chain.size() == 40);
  for (std::size_t i = 1; i < chain.size(); ++i) {
    CHECK(chain[i].height == chain[i - 1].height + 1);
    CHECK(chain[i].time_minutes >= chain[i - 1].time_minutes);
    const bool after_full_window = chain[i - 1].height % 10 == 0 && chain[i - 1].height >= 110;
    if (after_full_window) {
      const double window = chain[i - 1].time_minutes - chain[i - 11].time_minutes;
      CHECK(chain[i].difficulty == doctest::Approx(chain[i - 1].difficulty * 100.0 / window));
    } else {
      CHECK(chain[i].difficulty == chain[i - 1].difficulty);
    }
  }
}

TEST_CASE("granularity names") {
  CHECK(parse_granularity("per_block") == Granularity::per_block);
  CHECK(to_string(Granularity::per_interval) == "per_interval");
  CHECK_THROWS(parse_granularity("per_hash"));
}
