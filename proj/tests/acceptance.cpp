// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "halving/cli.hpp"
#include "halving/hashrate.hpp"
#include "halving/ingest.hpp"
#include "halving/naive.hpp"
#include "halving/retarget.hpp"
#include "halving/simulator.hpp"

using namespace halving;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back((ok ? "ok   " : "FAIL ") + what);
  }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

long minutes_between(Timestamp a, Timestamp b) { return std::labs(static_cast<long>((a - b).count())); }

SimulationConfig retarget_config(std::uint32_t k, std::uint64_t n, std::uint32_t M, std::uint64_t trials,
                                 std::uint64_t seed) {
  SimulationConfig c;
  c.k = k;
  c.n = n;
  c.M = M;
  c.trials = trials;
  c.seed = seed;
  return c;
}

constexpr std::uint64_t kTrials = 1000000;

Outcome worked_example_dates() {
  Outcome o;
  const auto start = parse_timestamp("2016-06-02 23:50");
  const auto p = naive_prediction(5476);
  o.check(add_duration(start, p.eta) == parse_timestamp("2016-07-11 00:30"),
          "ETA " + format_timestamp(add_duration(start, p.eta)) + " == 2016-07-11 00:30");
  o.check(p.stddev.minutes == 740.0, fmt("sigma %.6f == 740", p.stddev.minutes));
  const auto c68 = confidence_interval(p.eta, p.stddev, 0.683);
  const auto c95 = confidence_interval(p.eta, p.stddev, 0.955);
  const std::pair<Duration, const char*> ends[] = {{c68.lower, "2016-07-10 12:10"},
                                                   {c68.upper, "2016-07-11 12:50"},
                                                   {c95.lower, "2016-07-09 23:50"},
                                                   {c95.upper, "2016-07-12 01:10"}};
  for (const auto& [offset, expected] : ends) {
    const auto got = add_duration(start, offset);
    o.check(minutes_between(got, parse_timestamp(expected)) <= 5,
            "CI endpoint " + format_timestamp(got) + " within 5 min of " + expected);
  }
  return o;
}

Outcome sigma_from_eta() {
  Outcome o;
  const double sd = naive_stddev_from_eta(minutes(57600)).minutes;
  o.check(std::abs(sd - 759.0) <= 1.0, fmt("sigma %.3f within 1 of 759", sd));
  return o;
}

Outcome drift() {
  Outcome o;
  o.check(schedule_drift_factor(RetargetParams{}) == 2016.0 / 2015.0, "drift(2016) == 2016/2015 exactly");
  const auto s = run(retarget_config(10, 3, 10, kTrials, 3));
  const double naive = 300.0;
  const double ratio = s.mean_T.minutes / naive;
  const double se = s.se_mean.minutes / naive;
  o.check(std::abs(ratio - 10.0 / 9.0) < 3 * se, fmt("E[T]/naive %.6f vs 10/9 (se %.2g)", ratio, se));
  return o;
}

Outcome headline_numbers() {
  Outcome o;
  const RetargetParams p{};
  const double v = simplified_variance(672, p);
  o.check(std::abs(v - 493000.0) <= 0.005 * 493000.0, fmt("simplified V %.1f within 0.5%% of 493000", v));
  o.check(std::abs(std::sqrt(v) - 702.0) <= 1.0, fmt("sigma %.2f within 1 of 702", std::sqrt(v)));
  const double marginal = marginal_variance_per_interval(p, CovarianceMode::paper_printed);
  o.check(std::abs(marginal - 1100.0) <= 0.01 * 1100.0, fmt("marginal (printed) %.2f within 1%% of 1100", marginal));
  o.check(201600.0 / marginal >= 180.0, fmt("ratio vs naive %.1f >= 180", 201600.0 / marginal));
  const double derived = marginal_variance_per_interval(p, CovarianceMode::derived);
  o.check(201600.0 / derived >= 180.0, fmt("ratio vs naive (derived, %.1f min^2) %.1f >= 180", derived, 201600.0 / derived));
  return o;
}

Outcome covariance_adjudication() {
  Outcome o;
  const auto cov = estimate_covariance(retarget_config(10, 3, 10, kTrials, 5));
  const double derived = covariance_coefficient(10, CovarianceMode::derived);
  const double printed = covariance_coefficient(10, CovarianceMode::paper_printed);
  const double z_derived = std::abs(cov.value - derived) / cov.standard_error;
  const double z_printed = std::abs(cov.value - printed) / cov.standard_error;
  o.notes.push_back(fmt("cov %.5f se %.2g; |z| derived %.2f, printed %.1f", cov.value, cov.standard_error, z_derived,
                        z_printed));
  const bool derived_only = z_derived < 3 && z_printed >= 10;
  const bool printed_only = z_printed < 3 && z_derived >= 10;
  o.check(derived_only || printed_only, "exactly one mode within 3 se, other excluded by >= 10 se");
  o.check(derived_only == (kDefaultCovarianceMode == CovarianceMode::derived), "library default is the selected mode");
  return o;
}

Outcome oracle_grid() {
  Outcome o;
  bool derived_all = true, printed_all = true;
  std::uint64_t seed = 600;
  for (std::uint32_t k : {5u, 10u, 50u}) {
    for (std::uint64_t n : {2ull, 3ull, 5ull}) {
      for (std::uint32_t M : {1u, k / 2, k}) {
        const auto s = run(retarget_config(k, n, M, kTrials, seed++));
        const RetargetParams p{k};
        const RetargetPosition pos{n, M};
        const double eta = retarget_eta(pos, p).minutes;
        const double vd = retarget_variance(pos, p, CovarianceMode::derived);
        const double vp = retarget_variance(pos, p, CovarianceMode::paper_printed);
        const double z_mean = (s.mean_T.minutes - eta) / s.se_mean.minutes;
        const double z_d = (s.var_T - vd) / s.se_var;
        const double z_p = (s.var_T - vp) / s.se_var;
        const bool mean_ok = std::abs(z_mean) < 3;
        derived_all = derived_all && mean_ok && std::abs(z_d) < 3;
        printed_all = printed_all && mean_ok && std::abs(z_p) < 3;
        char buf[160];
        std::snprintf(buf, sizeof buf, "k=%-2u n=%llu M=%-2u  z(mean)=%+.2f  z(var derived)=%+.2f  z(var printed)=%+.1f", k,
                      static_cast<unsigned long long>(n), M, z_mean, z_d, z_p);
        o.check(mean_ok && std::abs(z_d) < 3, buf);
      }
    }
  }
  o.check(derived_all != printed_all, "exactly one covariance mode fits the whole grid");
  return o;
}

Outcome hashrate_examples() {
  Outcome o;
  const double step = step_shift_far(0.10).shift.minutes;
  o.check(std::abs(step + 33.6 * 60) < 1e-9, fmt("10%% step shift %.6f min == -33.6 hr", step));
  const double gradual = gradual_shift(Hashrate{1.0}, Hashrate{1.5}).minutes;
  const double target = -(5 * 1440.0 + 16 * 60.0);
  o.check(std::abs(gradual - target) <= 10.0,
          fmt("gradual 1.5x shift %.1f min within 10 of %.0f (5day+16hr)", gradual, target));
  const double near = step_shift_near(0.05, 300).minutes;
  o.check(std::abs(near + 150.0) < 1e-9, fmt("5%% at 300 blocks shift %.6f == -150", near));
  const auto moved = apply_shift(parse_timestamp("2016-07-11 01:00"), Duration{gradual});
  o.check(minutes_between(moved, parse_timestamp("2016-07-06 09:00")) <= 10,
          "July 11 01:00 shifted -> " + format_timestamp(moved) + " within 10 min of 2016-07-06 09:00");
  return o;
}

Outcome naive_consistency() {
  Outcome o;
  for (std::uint32_t blocks : {10u, 100u}) {
    SimulationConfig c;
    c.k = blocks;
    c.n = 1;
    c.M = blocks;
    c.retarget = false;
    c.granularity = Granularity::per_block;
    c.trials = kTrials;
    c.seed = 800 + blocks;
    const auto s = run(c);
    o.check(std::abs(s.var_T - 100.0 * blocks) < 3 * s.se_var,
            fmt("N=%.0f: var %.2f vs %.0f (se %.2f)", blocks, s.var_T, 100.0 * blocks, s.se_var));
  }
  return o;
}

Outcome coverage() {
  Outcome o;
  SimulationConfig c;
  c.k = 5476;
  c.n = 1;
  c.M = 5476;
  c.retarget = false;
  c.trials = 100000;
  c.seed = 900;
  const auto totals = simulate_totals(c);
  const auto ci = confidence_interval(naive_eta(5476), naive_stddev(5476), 0.683);
  std::size_t inside = 0;
  for (double t : totals) inside += ci.contains(minutes(t)) ? 1 : 0;
  const double frac = static_cast<double>(inside) / static_cast<double>(totals.size());
  o.check(std::abs(frac - 0.683) <= 0.02, fmt("coverage %.4f within 0.02 of 0.683", frac));
  return o;
}

Outcome determinism() {
  Outcome o;
  auto invoke = [](std::vector<std::string> extra) {
    std::vector<std::string> args{"halving", "simulate", "--k", "10", "--n", "3", "--M", "10", "--trials", "200000",
                                  "--seed", "42", "--json", "--covariance-lag", "1"};
    args.insert(args.end(), extra.begin(), extra.end());
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return std::make_pair(code, out.str());
  };
  const auto a = invoke({"--threads", "1"});
  const auto b = invoke({"--threads", "8"});
  const auto c = invoke({});
  o.check(a.first == 0 && !a.second.empty(), "simulate succeeds");
  o.check(a.second == b.second && a.second == c.second, "JSON byte-identical across runs and thread counts");
  return o;
}

Outcome ingestion() {
  Outcome o;
  const Hashrate h{1.4e18};
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto blocks = simulate_chain(2016, h, matched_difficulty(h), 408000, 2016, seed);
    const auto snap = snapshot_from_simulation(blocks, std::chrono::sys_seconds{std::chrono::seconds{1450000000}});
    const double rel = std::abs(estimate_hashrate(snap).per_minute / h.per_minute - 1.0);
    o.check(rel <= 0.10, fmt("seed %.0f: hashrate relative error %.4f <= 0.10", static_cast<double>(seed), rel));
  }
  const auto mi = model_inputs(419328, RetargetParams{});
  o.check(mi.blocks_remaining == 672 && mi.position == RetargetPosition{1, 672}, "tip 419328 -> N=672, n=1, M=672");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1  constant-difficulty worked example", worked_example_dates},
      {"2  sigma from ETA 57600 min", sigma_from_eta},
      {"3  schedule drift factor", drift},
      {"4  retarget headline numbers", headline_numbers},
      {"5  covariance adjudication", covariance_adjudication},
      {"6  oracle equivalence grid", oracle_grid},
      {"7  hashrate-change examples", hashrate_examples},
      {"8  fixed difficulty reproduces naive variance", naive_consistency},
      {"9  68.3% interval coverage", coverage},
      {"10 simulate determinism", determinism},
      {"11 ingestion", ingestion},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      out.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s (%.1fs)\n", out.pass ? "PASS" : "FAIL", name, secs);
    for (const auto& n : out.notes) std::printf("       %s\n", n.c_str());
    std::fflush(stdout);
    failed += out.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
