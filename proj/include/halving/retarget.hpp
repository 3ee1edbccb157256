#pragma once

#include <cstdint>
#include <string_view>

#include "halving/naive.hpp"
#include "halving/schedule.hpp"
#include "halving/units.hpp"

namespace halving {

/// Retarget period and its targets. retarget_target() is always
/// k * block_target, so only k and the block target are stored.
struct RetargetParams {
  std::uint32_t k = 2016;
  Duration block_target = kBlockTarget;

  Duration retarget_target() const { return static_cast<double>(k) * block_target; }
};

/// Where the halving sits relative to upcoming retargets: it lands M blocks
/// into interval n, the current interval being interval 1.
struct RetargetPosition {
  std::uint64_t n = 1;
  std::uint32_t M = 1;

  friend bool operator==(const RetargetPosition&, const RetargetPosition&) = default;
};

/// Moments of r ~ Erlang(shape, rate).
struct ErlangMoments {
  double mean = 0.0;
  double mean_inv = 0.0;    // E[1/r]
  double second = 0.0;      // E[r^2]
  double second_inv = 0.0;  // E[1/r^2]
  double variance = 0.0;
};

/// Adjacent-interval covariance coefficient used by retarget_variance.
///  - paper_printed: Cov(r_i/r_{i-1}, r_{i+1}/r_i) = -k/(k+1)^2 and the final
///    cross term without the factor M, exactly as the closed form is printed.
///  - derived: -k/(k-1)^2, which is what k/(k-1) - (k/(k-1))^2 reduces to, with
///    the final cross term scaled by M. This is the mode the simulator confirms.
enum class CovarianceMode { paper_printed, derived };

inline constexpr CovarianceMode kDefaultCovarianceMode = CovarianceMode::derived;

std::string_view to_string(CovarianceMode m);
/// Accepts "paper", "paper_printed", "derived".
CovarianceMode parse_covariance_mode(std::string_view s);

double covariance_coefficient(std::uint32_t k, CovarianceMode mode);

/// Closed-form Erlang moments. Throws std::invalid_argument when shape < 3
/// (E[1/r^2] diverges) or rate <= 0.
ErlangMoments erlang_moments(std::uint32_t shape, double rate);

/// k / (k - 1). Requires k >= 2.
double schedule_drift_factor(const RetargetParams& params);

/// (k/(k-1)) * [(n-1) * retarget_target + M * block_target].
Duration retarget_eta(const RetargetPosition& pos, const RetargetParams& params);

/// Full V[T] in min^2: per-interval variances plus adjacent covariances.
/// At n = 1 only the final partial interval contributes.
double retarget_variance(const RetargetPosition& pos, const RetargetParams& params,
                         CovarianceMode mode = kDefaultCovarianceMode);

/// dV[T]/dn: variance added by one more full retarget interval.
double marginal_variance_per_interval(const RetargetParams& params, CovarianceMode mode = kDefaultCovarianceMode);

/// First-plus-last interval approximation, 100 min^2 * (M + M^2/k + 8133000/k),
/// with the constant 8133000 taken verbatim from the published closed form.
/// Scaled by (block_target / 10 min)^2 for non-default block targets.
double simplified_variance(std::uint32_t M, const RetargetParams& params);

/// Derives (n, M) from the current height and the halving height. M is the
/// halving's offset past the last retarget boundary at or below it (M = k when
/// the halving is itself on a boundary). A partially elapsed current interval
/// counts as interval 1.
RetargetPosition position_from_heights(BlockHeight current, BlockHeight halving, const RetargetParams& params);

/// Position for N remaining blocks when only the count is known, assuming the
/// current interval starts now: n = ceil(N / k), M = N - (n-1) k.
RetargetPosition position_from_blocks(std::uint64_t blocks_remaining, const RetargetParams& params);

/// Which variance expression a retarget prediction reports.
enum class VarianceForm { full, simplified };

std::string_view to_string(VarianceForm f);
VarianceForm parse_variance_form(std::string_view s);

/// ETA and spread from heights. The mean is drift * N * block_target, which is
/// exact for any starting point in the unconditional model. The variance uses
/// position_from_heights, except that at n = 1 M is replaced by the blocks
/// actually remaining.
Prediction retarget_prediction(BlockHeight current, BlockHeight halving, const RetargetParams& params,
                               CovarianceMode mode = kDefaultCovarianceMode, VarianceForm form = VarianceForm::full);

/// Same, for a bare block count (see position_from_blocks).
Prediction retarget_prediction(std::uint64_t blocks_remaining, const RetargetParams& params,
                               CovarianceMode mode = kDefaultCovarianceMode, VarianceForm form = VarianceForm::full);

}  // namespace halving
