#include "halving/naive.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace halving {

Duration naive_eta(std::uint64_t n) { return static_cast<double>(n) * kBlockTarget; }

Duration naive_stddev(std::uint64_t n) { return std::sqrt(static_cast<double>(n)) * kBlockTarget; }

Duration naive_stddev_from_eta(Duration eta) {
  if (!(eta.minutes >= 0.0)) throw std::invalid_argument("eta must be non-negative");
  return Duration{std::sqrt(kBlockTarget.minutes * eta.minutes)};
}

NaivePrediction naive_prediction(std::uint64_t n) {
  const Duration sd = naive_stddev(n);
  return {naive_eta(n), kBlockTarget.minutes * kBlockTarget.minutes * static_cast<double>(n), sd, n};
}

double two_sided_z(double level) {
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("confidence level must be in (0, 1), got " + std::to_string(level));
  return std::numbers::sqrt2 * boost::math::erf_inv(level);
}

ConfidenceInterval confidence_interval(Duration eta, Duration stddev, double level) {
  if (!(stddev.minutes >= 0.0)) throw std::invalid_argument("stddev must be non-negative");
  const double z = two_sided_z(level);
  return {level, eta - z * stddev, eta + z * stddev};
}

std::vector<ConfidenceInterval> confidence_intervals(Duration eta, Duration stddev, std::span<const double> levels) {
  std::vector<ConfidenceInterval> out;
  out.reserve(levels.size());
  for (double level : levels) out.push_back(confidence_interval(eta, stddev, level));
  return out;
}

}  // namespace halving
