#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "halving/units.hpp"

namespace halving {

inline constexpr Duration kBlockTarget{10.0};

struct ConfidenceInterval {
  double level = 0.0;
  Duration lower;
  Duration upper;

  bool contains(Duration t) const { return lower <= t && t <= upper; }
};

/// Point estimate of the time until the halving plus its spread.
struct Prediction {
  Duration eta;
  double variance = 0.0;  // min^2
  Duration stddev;
  std::vector<ConfidenceInterval> intervals;
};

/// Constant-difficulty estimate for N remaining blocks.
struct NaivePrediction {
  Duration eta;
  double variance = 0.0;  // min^2
  Duration stddev;
  std::uint64_t blocks_remaining = 0;
};

/// 10 min * N.
Duration naive_eta(std::uint64_t blocks_remaining);

/// 10 min * sqrt(N).
Duration naive_stddev(std::uint64_t blocks_remaining);

/// sqrt(10 min * eta). Throws std::invalid_argument for negative eta.
Duration naive_stddev_from_eta(Duration eta);

NaivePrediction naive_prediction(std::uint64_t blocks_remaining);

/// Two-sided standard normal quantile: P(|Z| <= z) = level, via sqrt(2) * erf^-1(level).
/// Throws std::invalid_argument unless 0 < level < 1.
double two_sided_z(double level);

/// [eta - z sigma, eta + z sigma] under the normal approximation. The
/// approximation is poor for a handful of remaining blocks (roughly N < 30);
/// no model switch happens there.
ConfidenceInterval confidence_interval(Duration eta, Duration stddev, double level);

std::vector<ConfidenceInterval> confidence_intervals(Duration eta, Duration stddev, std::span<const double> levels);

}  // namespace halving
