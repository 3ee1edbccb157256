#include "halving/hashrate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace halving {

ShiftResult step_shift_far(double x, Duration retarget_target) {
  if (!std::isfinite(x) || x <= -1.0) throw std::invalid_argument("hashrate change must be > -100%");
  if (std::abs(x) <= kLinearStepLimit) return {-x * retarget_target, std::nullopt};
  return {-std::log1p(x) * retarget_target,
          "hashrate change of " + std::to_string(x * 100) +
              "% exceeds the linear step rule (|x| <= 15%); logarithmic rule applied"};
}

Duration gradual_shift(Hashrate h1, Hashrate h2, Duration retarget_target) {
  if (!(h1.per_minute > 0.0) || !(h2.per_minute > 0.0)) throw std::invalid_argument("hashrates must be positive");
  // Difference of logs keeps gradual_shift(a, b) == -gradual_shift(b, a) bit for bit.
  return -(std::log(h2.per_minute) - std::log(h1.per_minute)) * retarget_target;
}

Duration step_shift_near(double x, std::uint64_t blocks_remaining, std::uint32_t k, Duration block_target) {
  if (blocks_remaining >= k)
    throw std::invalid_argument("step_shift_near needs fewer than k blocks remaining; use step_shift_far");
  return -x * static_cast<double>(blocks_remaining) * block_target;
}

Prediction apply_shift(Prediction p, Duration shift) {
  p.eta += shift;
  for (auto& ci : p.intervals) {
    ci.lower += shift;
    ci.upper += shift;
  }
  return p;
}

Timestamp apply_shift(Timestamp eta, Duration shift) { return add_duration(eta, shift); }

}  // namespace halving
