#include "halving/retarget.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace halving {

namespace {

void require_k(const RetargetParams& p, std::uint32_t min_k) {
  if (p.k < min_k) throw std::invalid_argument("retarget period k must be >= " + std::to_string(min_k));
  if (!(p.block_target.minutes > 0.0)) throw std::invalid_argument("block target must be positive");
}

// M = 0 means the halving sits on the boundary closing interval n - 1.
RetargetPosition normalized(RetargetPosition pos, const RetargetParams& p) {
  if (pos.M == 0) {
    if (pos.n < 2) throw std::invalid_argument("position (n=1, M=0) has no blocks remaining");
    pos = {pos.n - 1, p.k};
  }
  if (pos.n < 1) throw std::invalid_argument("position n must be >= 1");
  if (pos.M > p.k) throw std::invalid_argument("position M must be <= k");
  return pos;
}

// V[r_i / r_{i-1}] for independent Erlang(k, k) ratios.
double full_ratio_variance(double k) { return k * (2 * k - 1) / ((k - 2) * (k - 1) * (k - 1)); }

// V[t_n] / block_target^2 for the final interval of M blocks.
double final_ratio_variance(double k, double M) { return M * k * k * (k + M - 1) / ((k - 2) * (k - 1) * (k - 1)); }

}  // namespace

std::string_view to_string(CovarianceMode m) {
  return m == CovarianceMode::paper_printed ? "paper" : "derived";
}

CovarianceMode parse_covariance_mode(std::string_view s) {
  if (s == "paper" || s == "paper_printed") return CovarianceMode::paper_printed;
  if (s == "derived") return CovarianceMode::derived;
  throw std::invalid_argument("unknown covariance mode: " + std::string(s));
}

std::string_view to_string(VarianceForm f) { return f == VarianceForm::full ? "full" : "simplified"; }

VarianceForm parse_variance_form(std::string_view s) {
  if (s == "full") return VarianceForm::full;
  if (s == "simplified") return VarianceForm::simplified;
  throw std::invalid_argument("unknown variance form: " + std::string(s));
}

double covariance_coefficient(std::uint32_t k, CovarianceMode mode) {
  const double kk = k;
  return mode == CovarianceMode::paper_printed ? -kk / ((kk + 1) * (kk + 1)) : -kk / ((kk - 1) * (kk - 1));
}

ErlangMoments erlang_moments(std::uint32_t shape, double rate) {
  if (shape < 3) throw std::invalid_argument("E[1/r^2] is undefined for Erlang shape < 3");
  if (!(rate > 0.0)) throw std::invalid_argument("Erlang rate must be positive");
  const double a = shape;
  return {
      .mean = a / rate,
      .mean_inv = rate / (a - 1),
      .second = a * (a + 1) / (rate * rate),
      .second_inv = rate * rate / ((a - 1) * (a - 2)),
      .variance = a / (rate * rate),
  };
}

double schedule_drift_factor(const RetargetParams& params) {
  require_k(params, 2);
  const double k = params.k;
  return k / (k - 1);
}

Duration retarget_eta(const RetargetPosition& position, const RetargetParams& params) {
  require_k(params, 3);
  const auto pos = normalized(position, params);
  const Duration naive = static_cast<double>(pos.n - 1) * params.retarget_target() +
                         static_cast<double>(pos.M) * params.block_target;
  return schedule_drift_factor(params) * naive;
}

double retarget_variance(const RetargetPosition& position, const RetargetParams& params, CovarianceMode mode) {
  require_k(params, 3);
  const auto pos = normalized(position, params);
  const double k = params.k;
  const double M = pos.M;
  const double n = static_cast<double>(pos.n);
  const double W = params.retarget_target().minutes;
  const double b = params.block_target.minutes;
  const double C = covariance_coefficient(params.k, mode);

  const double full_intervals = n - 1;
  const double full_pairs = std::max(n - 2, 0.0);
  const double final_pairs = pos.n >= 2 ? 1.0 : 0.0;
  const double cross_scale = mode == CovarianceMode::derived ? M : 1.0;

  return W * W * (full_ratio_variance(k) * full_intervals + 2 * full_pairs * C) +
         final_pairs * 2 * W * b * cross_scale * C + b * b * final_ratio_variance(k, M);
}

double marginal_variance_per_interval(const RetargetParams& params, CovarianceMode mode) {
  require_k(params, 3);
  const double W = params.retarget_target().minutes;
  return W * W * (full_ratio_variance(params.k) + 2 * covariance_coefficient(params.k, mode));
}

double simplified_variance(std::uint32_t M, const RetargetParams& params) {
  require_k(params, 1);
  if (M < 1 || M > params.k) throw std::invalid_argument("M must be in [1, k]");
  const double k = params.k;
  const double m = M;
  const double b = params.block_target.minutes;
  return b * b * (m + m * m / k + 8133000.0 / k);
}

RetargetPosition position_from_heights(BlockHeight current, BlockHeight halving, const RetargetParams& params) {
  require_k(params, 1);
  if (current >= halving) throw std::invalid_argument("current height must be below the halving height");
  const BlockHeight k = params.k;
  BlockHeight boundary = halving / k * k;
  std::uint32_t M = static_cast<std::uint32_t>(halving - boundary);
  if (M == 0) {
    M = params.k;
    boundary -= k;
  }
  const BlockHeight current_boundary = current / k * k;
  return {(boundary - current_boundary) / k + 1, M};
}

RetargetPosition position_from_blocks(std::uint64_t blocks, const RetargetParams& params) {
  require_k(params, 1);
  if (blocks == 0) throw std::invalid_argument("no blocks remaining");
  const std::uint64_t n = (blocks + params.k - 1) / params.k;
  return {n, static_cast<std::uint32_t>(blocks - (n - 1) * params.k)};
}

namespace {

Prediction finish(std::uint64_t blocks, RetargetPosition pos, const RetargetParams& params, CovarianceMode mode,
                  VarianceForm form) {
  Prediction p;
  p.eta = schedule_drift_factor(params) * (static_cast<double>(blocks) * params.block_target);
  p.variance = form == VarianceForm::full ? retarget_variance(pos, params, mode) : simplified_variance(pos.M, params);
  p.stddev = Duration{std::sqrt(p.variance)};
  return p;
}

}  // namespace

Prediction retarget_prediction(BlockHeight current, BlockHeight halving, const RetargetParams& params,
                               CovarianceMode mode, VarianceForm form) {
  require_k(params, 3);
  auto pos = position_from_heights(current, halving, params);
  const std::uint64_t blocks = halving - current;
  if (pos.n == 1) pos.M = static_cast<std::uint32_t>(blocks);
  return finish(blocks, pos, params, mode, form);
}

Prediction retarget_prediction(std::uint64_t blocks, const RetargetParams& params, CovarianceMode mode,
                               VarianceForm form) {
  require_k(params, 3);
  if (blocks == 0) return {};
  return finish(blocks, position_from_blocks(blocks, params), params, mode, form);
}

}  // namespace halving
