#include "halving/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "halving/hashrate.hpp"
#include "halving/ingest.hpp"
#include "halving/naive.hpp"
#include "halving/report.hpp"
#include "halving/retarget.hpp"
#include "halving/schedule.hpp"
#include "halving/simulator.hpp"

namespace halving {

namespace {

using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Options shared by predict and adjust.
struct BaseOptions {
  std::optional<std::uint64_t> height;
  std::optional<std::uint64_t> blocks_remaining;
  std::string snapshot;
  bool fetch = false;
  std::string endpoint;
  double timeout_s = 10.0;
  std::size_t window = 2016;
  std::string model = "retarget";
  std::string covariance = std::string(to_string(kDefaultCovarianceMode));
  std::string variance = "full";
  std::uint32_t k = 2016;
  std::vector<double> levels{0.683, 0.955};
  std::string now;
  bool json_out = false;
};

void add_base_options(CLI::App& cmd, BaseOptions& o) {
  cmd.add_option("--height", o.height, "Current chain height");
  cmd.add_option("--blocks-remaining", o.blocks_remaining, "Blocks left until the halving");
  cmd.add_option("--snapshot", o.snapshot, "Line-delimited JSON header snapshot");
  cmd.add_flag("--fetch", o.fetch, "Fetch recent headers from the HTTP endpoint");
  cmd.add_option("--endpoint", o.endpoint, "Header endpoint base URL")->envname("HALVING_ENDPOINT");
  cmd.add_option("--timeout", o.timeout_s, "HTTP timeout in seconds")->envname("HALVING_TIMEOUT");
  cmd.add_option("--window", o.window, "Headers to fetch");
  cmd.add_option("--model", o.model, "naive | retarget")->check(CLI::IsMember({"naive", "retarget"}));
  cmd.add_option("--covariance", o.covariance, "paper | derived")->check(CLI::IsMember({"paper", "derived"}));
  cmd.add_option("--variance", o.variance, "full | simplified")->check(CLI::IsMember({"full", "simplified"}));
  cmd.add_option("--k", o.k, "Blocks per retarget interval");
  cmd.add_option("--level", o.levels, "Confidence level(s) in (0,1)");
  cmd.add_option("--now", o.now, "Reference time (YYYY-MM-DDTHH:MM[Z]) or 'now' for the wall clock");
  cmd.add_flag("--json", o.json_out, "Emit a JSON report");
}

Timestamp parse_now(const std::string& s) {
  if (s == "now") return std::chrono::floor<std::chrono::minutes>(std::chrono::system_clock::now());
  return parse_timestamp(s);
}

OutputReport base_report(const BaseOptions& o, bool allow_none) {
  const int sources = (o.height ? 1 : 0) + (o.blocks_remaining ? 1 : 0) + (!o.snapshot.empty() ? 1 : 0) + (o.fetch ? 1 : 0);
  if (sources > 1) throw UsageError("choose exactly one of --height, --blocks-remaining, --snapshot, --fetch");
  if (sources == 0 && !allow_none)
    throw UsageError("an input is required: --height, --blocks-remaining, --snapshot or --fetch");

  OutputReport r;
  r.model = parse_model(o.model);
  const RetargetParams params{o.k};
  const auto mode = parse_covariance_mode(o.covariance);
  const auto form = parse_variance_form(o.variance);
  if (r.model == Model::retarget && o.k < 3) throw UsageError("--k must be >= 3");
  if (!o.now.empty()) r.now = parse_now(o.now);

  json& in = r.inputs;
  std::uint64_t blocks = 0;
  std::optional<BlockHeight> current;
  if (o.blocks_remaining) {
    in["source"] = "blocks_remaining";
    blocks = *o.blocks_remaining;
  } else {
    if (o.height) {
      in["source"] = "height";
      current = *o.height;
    } else {
      ChainSnapshot snap = [&] {
        if (o.fetch) {
          if (o.endpoint.empty()) throw UsageError("--fetch needs --endpoint or HALVING_ENDPOINT");
          in["source"] = "endpoint";
          in["endpoint"] = o.endpoint;
          in["window"] = o.window;
          return fetch_snapshot_http(o.endpoint, o.window,
                                     std::chrono::milliseconds{std::llround(o.timeout_s * 1000.0)});
        }
        in["source"] = "snapshot";
        in["snapshot"] = o.snapshot;
        return load_snapshot_file(o.snapshot);
      }();
      current = snap.tip().height;
      if (!r.now) r.now = std::chrono::floor<std::chrono::minutes>(snap.tip().time);
      if (snap.size() >= 2) in["hashrate_estimate"] = estimate_hashrate(snap).per_minute;
    }
    const auto mi = model_inputs(*current, params);
    blocks = mi.blocks_remaining;
    in["height"] = *current;
    in["halving_height"] = mi.halving_height;
  }
  in["blocks_remaining"] = blocks;
  in["model"] = to_string(r.model);

  Prediction p;
  if (r.model == Model::naive) {
    const auto np = naive_prediction(blocks);
    p.eta = np.eta;
    p.variance = np.variance;
    p.stddev = np.stddev;
  } else {
    in["k"] = o.k;
    in["covariance"] = to_string(mode);
    in["variance_form"] = to_string(form);
    if (blocks > 0) {
      const auto pos = current ? position_from_heights(*current, *current + blocks, params)
                               : position_from_blocks(blocks, params);
      in["n"] = pos.n;
      in["M"] = pos.M;
      p = current ? retarget_prediction(*current, *current + blocks, params, mode, form)
                  : retarget_prediction(blocks, params, mode, form);
    }
  }
  r.eta = p.eta;
  r.variance = p.variance;
  r.stddev = p.stddev;
  r.intervals = confidence_intervals(r.eta, r.stddev, o.levels);
  if (blocks > 0 && blocks < 30)
    r.warnings.push_back("only " + std::to_string(blocks) + " blocks remaining; normal intervals are rough");
  in["levels"] = o.levels;
  in["now"] = r.now ? json(format_timestamp(*r.now)) : json(nullptr);
  return r;
}

std::string render(const OutputReport& r, bool as_json) {
  return as_json ? to_json(r).dump(2) + "\n" : render_text(r);
}

std::string cmd_predict(const BaseOptions& o) { return render(base_report(o, false), o.json_out); }

struct AdjustOptions {
  std::optional<double> step;
  std::vector<double> gradual;
  std::vector<double> step_near;
  std::string eta;
  double stddev = 0.0;
};

std::string cmd_adjust(const BaseOptions& o, const AdjustOptions& a) {
  const int kinds = (a.step ? 1 : 0) + (!a.gradual.empty() ? 1 : 0) + (!a.step_near.empty() ? 1 : 0);
  if (kinds != 1) throw UsageError("choose exactly one of --step, --gradual, --step-near");

  OutputReport r;
  if (!a.eta.empty()) {
    // Base ETA given directly; minutes are measured from --now, or from the ETA itself.
    if (o.height || o.blocks_remaining || !o.snapshot.empty() || o.fetch)
      throw UsageError("--eta cannot be combined with another prediction source");
    const Timestamp eta = parse_timestamp(a.eta);
    r.now = o.now.empty() ? eta : parse_now(o.now);
    r.eta = Duration{static_cast<double>((eta - *r.now).count())};
    r.stddev = Duration{a.stddev};
    r.variance = a.stddev * a.stddev;
    r.intervals = confidence_intervals(r.eta, r.stddev, o.levels);
    r.inputs["source"] = "eta";
    r.inputs["eta"] = format_timestamp(eta);
    r.inputs["stddev_minutes"] = a.stddev;
    r.inputs["levels"] = o.levels;
    r.inputs["now"] = format_timestamp(*r.now);
  } else {
    r = base_report(o, false);
  }

  const RetargetParams params{o.k};
  Duration shift;
  json spec;
  if (a.step) {
    auto res = step_shift_far(*a.step, params.retarget_target());
    shift = res.shift;
    if (res.warning) r.warnings.push_back(*res.warning);
    spec = {{"kind", "step"}, {"x", *a.step}};
  } else if (!a.gradual.empty()) {
    shift = gradual_shift(Hashrate{a.gradual[0]}, Hashrate{a.gradual[1]}, params.retarget_target());
    spec = {{"kind", "gradual"}, {"h1", a.gradual[0]}, {"h2", a.gradual[1]}};
  } else {
    const double blocks = a.step_near[1];
    if (blocks < 0 || blocks != std::floor(blocks)) throw UsageError("--step-near blocks must be a whole number");
    shift = step_shift_near(a.step_near[0], static_cast<std::uint64_t>(blocks), o.k);
    spec = {{"kind", "step_near"}, {"x", a.step_near[0]}, {"blocks_remaining", static_cast<std::uint64_t>(blocks)}};
  }
  r.inputs["adjustment"] = spec;

  Prediction p{r.eta, r.variance, r.stddev, r.intervals};
  p = apply_shift(p, shift);
  r.eta = p.eta;
  r.intervals = p.intervals;
  r.shift = shift;
  return render(r, o.json_out);
}

struct SimulateOptions {
  std::uint32_t k = 2016;
  std::uint64_t n = 1;
  std::optional<std::uint32_t> M;
  std::uint64_t trials = 100000;
  std::uint64_t seed = kDefaultSeed;
  std::string granularity = "per_interval";
  bool no_retarget = false;
  unsigned threads = 0;
  std::optional<double> hashrate;
  std::optional<double> difficulty;
  std::vector<double> hashrate_step;
  std::string emit_raw;
  std::optional<std::uint64_t> covariance_lag;
  bool json_out = false;
};

std::string cmd_simulate(const SimulateOptions& s) {
  if (s.k < 3) throw UsageError("--k must be >= 3");
  if (s.trials < 2) throw UsageError("--trials must be >= 2");
  SimulationConfig cfg;
  cfg.k = s.k;
  cfg.n = s.n;
  cfg.M = s.M.value_or(s.k);
  cfg.trials = s.trials;
  cfg.seed = s.seed;
  cfg.granularity = parse_granularity(s.granularity);
  cfg.retarget = !s.no_retarget;
  cfg.threads = s.threads;
  if (s.hashrate) cfg.hashrate = Hashrate{*s.hashrate};
  cfg.initial_difficulty = s.difficulty.value_or(matched_difficulty(cfg.hashrate));
  if (!s.hashrate_step.empty()) {
    if (s.hashrate_step[0] < 1 || s.hashrate_step[0] != std::floor(s.hashrate_step[0]))
      throw UsageError("--hashrate-step interval must be a positive whole number");
    cfg.step = HashrateStep{static_cast<std::uint64_t>(s.hashrate_step[0]), s.hashrate_step[1]};
  }
  validate(cfg);

  if (!s.emit_raw.empty()) {
    const auto totals = simulate_totals(cfg);
    std::ostringstream raw;
    raw.precision(17);
    for (double t : totals) raw << t << '\n';
    if (s.emit_raw == "-") return raw.str();
    std::ofstream f(s.emit_raw);
    if (!f || !(f << raw.str())) throw std::runtime_error("cannot write " + s.emit_raw);
  }

  const auto summary = run(cfg);
  std::optional<CovarianceEstimate> cov;
  if (s.covariance_lag) cov = estimate_covariance(cfg, *s.covariance_lag);

  json j;
  j["inputs"] = {{"k", cfg.k},           {"n", cfg.n},
                 {"M", cfg.M},           {"trials", cfg.trials},
                 {"seed", cfg.seed},     {"granularity", to_string(cfg.granularity)},
                 {"retarget", cfg.retarget}, {"hashrate", cfg.hashrate.per_minute},
                 {"initial_difficulty", cfg.initial_difficulty}};
  if (cfg.step) j["inputs"]["hashrate_step"] = {{"interval", cfg.step->interval}, {"factor", cfg.step->factor}};
  j["mean_T"] = summary.mean_T.minutes;
  j["var_T"] = summary.var_T;
  j["se_mean"] = summary.se_mean.minutes;
  j["se_var"] = summary.se_var;
  j["cov_adjacent"] = summary.cov_adjacent ? json(*summary.cov_adjacent) : json(nullptr);
  j["se_cov"] = summary.se_cov ? json(*summary.se_cov) : json(nullptr);
  j["trials"] = summary.trials;
  if (cov) j["covariance"] = {{"lag", *s.covariance_lag}, {"value", cov->value}, {"standard_error", cov->standard_error}};

  json analytic;
  if (cfg.retarget) {
    const RetargetParams params{cfg.k, cfg.block_target};
    const RetargetPosition pos{cfg.n, cfg.M};
    analytic = {{"eta", retarget_eta(pos, params).minutes},
                {"variance_derived", retarget_variance(pos, params, CovarianceMode::derived)},
                {"variance_paper", retarget_variance(pos, params, CovarianceMode::paper_printed)}};
  } else {
    const auto np = naive_prediction(cfg.total_blocks());
    analytic = {{"eta", np.eta.minutes}, {"variance", np.variance}};
  }
  if (!cfg.step) j["analytic"] = analytic;

  if (s.json_out) return j.dump(2) + "\n";

  std::ostringstream o;
  o.precision(10);
  o << "trials:  " << summary.trials << " (seed " << cfg.seed << ", " << to_string(cfg.granularity)
    << (cfg.retarget ? "" : ", retarget off") << ")\n";
  o << "mean T:  " << summary.mean_T.minutes << " min  (se " << summary.se_mean.minutes << ")\n";
  o << "var T:   " << summary.var_T << " min^2  (se " << summary.se_var << ")\n";
  if (summary.cov_adjacent)
    o << "cov(t1,t2)/(2wk)^2: " << *summary.cov_adjacent << "  (se " << *summary.se_cov << ")\n";
  if (cov) o << "cov lag " << *s.covariance_lag << ": " << cov->value << "  (se " << cov->standard_error << ")\n";
  if (!cfg.step) {
    o << "analytic eta: " << analytic["eta"].get<double>() << " min\n";
    if (cfg.retarget) {
      o << "analytic var (derived): " << analytic["variance_derived"].get<double>() << " min^2\n";
      o << "analytic var (paper):   " << analytic["variance_paper"].get<double>() << " min^2\n";
    } else {
      o << "analytic var: " << analytic["variance"].get<double>() << " min^2\n";
    }
  }
  return o.str();
}

std::string cmd_schedule(unsigned epochs, bool json_out) {
  const auto rows = schedule_table(epochs);
  if (json_out) {
    json j;
    j["supply_limit"] = total_supply_limit();
    j["rows"] = json::array();
    for (const auto& r : rows)
      j["rows"].push_back({{"epoch", r.epoch},
                           {"height", r.start_height},
                           {"subsidy", r.subsidy},
                           {"cumulative_supply", r.cumulative_supply}});
    return j.dump(2) + "\n";
  }
  std::ostringstream o;
  char line[128];
  std::snprintf(line, sizeof line, "%5s %12s %22s %20s\n", "epoch", "height", "subsidy (BTC)", "cumulative (BTC)");
  o << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%5u %12llu %22.10g %20.8f\n", r.epoch,
                  static_cast<unsigned long long>(r.start_height), r.subsidy, r.cumulative_supply);
    o << line;
  }
  o << "limit: " << std::fixed << total_supply_limit() << " BTC\n";
  return o.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bitcoin halving time estimator"};
  app.name(args.empty() ? "halving" : args.front());
  app.require_subcommand(1);

  BaseOptions predict_opts;
  auto* predict = app.add_subcommand("predict", "Estimate the halving time and its spread");
  add_base_options(*predict, predict_opts);

  BaseOptions adjust_opts;
  AdjustOptions adjust_extra;
  auto* adjust = app.add_subcommand("adjust", "Shift a prediction for a hashrate change");
  add_base_options(*adjust, adjust_opts);
  adjust->add_option("--step", adjust_extra.step, "Step change x (fraction) well before the halving");
  adjust->add_option("--gradual", adjust_extra.gradual, "Gradual change from H1 to H2")->expected(2);
  adjust->add_option("--step-near", adjust_extra.step_near, "Step change x with B blocks remaining")->expected(2);
  adjust->add_option("--eta", adjust_extra.eta, "Base ETA timestamp instead of a prediction source");
  adjust->add_option("--stddev", adjust_extra.stddev, "Standard deviation (minutes) for --eta");

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo simulation of the retarget process");
  simulate->add_option("--k", sim.k, "Blocks per retarget interval");
  simulate->add_option("--n", sim.n, "Interval containing the halving (current = 1)");
  simulate->add_option("--M", sim.M, "Blocks into interval n (default k)");
  simulate->add_option("--trials", sim.trials, "Number of trials");
  simulate->add_option("--seed", sim.seed, "Master seed");
  simulate->add_option("--granularity", sim.granularity, "per_interval | per_block")
      ->check(CLI::IsMember({"per_interval", "per_block"}));
  simulate->add_flag("--no-retarget", sim.no_retarget, "Keep the difficulty fixed");
  simulate->add_option("--threads", sim.threads, "Worker threads (0 = all cores); results do not depend on it");
  simulate->add_option("--hashrate", sim.hashrate, "Hashes per minute");
  simulate->add_option("--difficulty", sim.difficulty, "Initial difficulty (default: matched to the hashrate)");
  simulate->add_option("--hashrate-step", sim.hashrate_step, "INTERVAL FACTOR: scale hashrate from that interval")
      ->expected(2);
  simulate->add_option("--emit-raw", sim.emit_raw, "Write per-trial T values (minutes) to a file, or '-' for stdout");
  simulate->add_option("--covariance-lag", sim.covariance_lag, "Also estimate Cov(t_1, t_{1+lag})");
  simulate->add_flag("--json", sim.json_out, "Emit JSON");

  unsigned epochs = 4;
  bool schedule_json = false;
  auto* schedule = app.add_subcommand("schedule", "Halving heights, subsidies and cumulative supply");
  schedule->add_option("--epochs", epochs, "Last epoch to list");
  schedule->add_flag("--json", schedule_json, "Emit JSON");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return e.get_exit_code() != 0 ? e.get_exit_code() : 2;
  }

  try {
    std::string text;
    if (*predict) text = cmd_predict(predict_opts);
    else if (*adjust) text = cmd_adjust(adjust_opts, adjust_extra);
    else if (*simulate) text = cmd_simulate(sim);
    else if (*schedule) text = cmd_schedule(epochs, schedule_json);
    out << text;
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace halving
