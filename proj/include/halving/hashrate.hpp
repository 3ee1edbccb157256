#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "halving/naive.hpp"
#include "halving/units.hpp"

namespace halving {

/// Network hashing throughput in hashes per minute.
struct Hashrate {
  double per_minute = 0.0;

  constexpr explicit Hashrate(double h) : per_minute(h) {}
};

/// Largest |x| for which the linear step rule is used.
inline constexpr double kLinearStepLimit = 0.15;

/// Signed schedule shift; negative means the halving comes sooner.
struct ShiftResult {
  Duration shift;
  std::optional<std::string> warning;
};

/// A hashrate step of fraction x well before the halving moves the schedule
/// by -x * 2 weeks. Beyond |x| = 0.15 the logarithmic rule is used instead
/// and the result carries a warning. Throws std::invalid_argument for x <= -1.
ShiftResult step_shift_far(double x, Duration retarget_target = weeks(2));

/// -ln(h2 / h1) * 2 weeks, for a change spread over many retarget intervals.
Duration gradual_shift(Hashrate h1, Hashrate h2, Duration retarget_target = weeks(2));

/// A step inside the final retarget interval: -x * blocks_remaining * 10 min.
/// Throws std::invalid_argument when blocks_remaining >= k.
Duration step_shift_near(double x, std::uint64_t blocks_remaining, std::uint32_t k = 2016,
                         Duration block_target = kBlockTarget);

/// Translates the ETA and every interval by `shift`; the variance is left
/// unchanged since no variance model exists for hashrate changes.
Prediction apply_shift(Prediction p, Duration shift);

Timestamp apply_shift(Timestamp eta, Duration shift);

}  // namespace halving
