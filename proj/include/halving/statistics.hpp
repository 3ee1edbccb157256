#pragma once

#include <cstddef>
#include <span>

namespace halving {

/// Sample mean and unbiased variance, each with its standard error. The
/// variance standard error uses the sample fourth central moment:
/// se^2 = (m4 - s^4 (N-3)/(N-1)) / N.
struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;
  double se_mean = 0.0;
  double se_variance = 0.0;
  std::size_t count = 0;
};

/// Two-pass, sequential; results depend only on the order of `xs`.
/// Requires at least two samples.
SampleMoments sample_moments(std::span<const double> xs);

struct CovarianceEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t count = 0;
};

/// Unbiased sample covariance; the standard error is the sample standard
/// deviation of the centered products over sqrt(N).
CovarianceEstimate sample_covariance(std::span<const double> xs, std::span<const double> ys);

}  // namespace halving
