#include "halving/statistics.hpp"

#include <cmath>
#include <stdexcept>

namespace halving {

namespace {

double mean_of(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

}  // namespace

SampleMoments sample_moments(std::span<const double> xs) {
  if (xs.size() < 2) throw std::invalid_argument("sample moments need at least two samples");
  const double n = static_cast<double>(xs.size());
  const double mean = mean_of(xs);
  double m2 = 0.0;
  double m4 = 0.0;
  for (double x : xs) {
    const double d2 = (x - mean) * (x - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  const double var = m2 / (n - 1);
  m4 /= n;
  const double var_of_var = std::max(0.0, (m4 - var * var * (n - 3) / (n - 1)) / n);
  return {mean, var, std::sqrt(var / n), std::sqrt(var_of_var), xs.size()};
}

CovarianceEstimate sample_covariance(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("covariance inputs differ in length");
  if (xs.size() < 2) throw std::invalid_argument("covariance needs at least two samples");
  const double n = static_cast<double>(xs.size());
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) sum += (xs[i] - mx) * (ys[i] - my);
  const double cov = sum / (n - 1);
  const double mean_product = sum / n;
  double spread = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = (xs[i] - mx) * (ys[i] - my) - mean_product;
    spread += d * d;
  }
  return {cov, std::sqrt(spread / (n - 1) / n), xs.size()};
}

}  // namespace halving
