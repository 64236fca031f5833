#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace pursuit {

// Neumaier-compensated accumulator. Summation order is fixed by the caller,
// so results are reproducible regardless of how the terms were produced.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Fixed-order pairwise reduction; independent of chunking decisions made by
// callers as long as the element order is the same.
inline double pairwise_sum(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n == 0) return 0.0;
  if (n <= 16) {
    CompensatedSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
  }
  const std::size_t half = n / 2;
  return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& xs) {
  return pairwise_sum(std::span<const double>(xs));
}

inline double sqr(double x) { return x * x; }

inline double clamp(double x, double lo, double hi) {
  return x < lo ? lo : (x > hi ? hi : x);
}

inline void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

// Standard normal pdf/cdf and their scaled versions.  The quantile uses the
// Acklam initial guess polished with two Halley steps, which lands within a
// few ulp over (0,1); the suite cross-checks it against the cdf.
namespace normal {

inline double pdf(double z) {
  static const double inv_sqrt_2pi = 0.3989422804014326779;
  return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

inline double cdf(double z) { return 0.5 * std::erfc(-z * 0.7071067811865475244); }

double quantile(double p);

inline double pdf_scaled(double x, double sigma) { return pdf(x / sigma) / sigma; }
inline double cdf_scaled(double x, double sigma) { return cdf(x / sigma); }

// Antiderivative of cdf_scaled: d/dx [x*Phi(x/s) + s^2*phi_s(x)] = Phi(x/s).
inline double cdf_antideriv(double x, double sigma) {
  return x * cdf_scaled(x, sigma) + sigma * sigma * pdf_scaled(x, sigma);
}

}  // namespace normal

}  // namespace pursuit

#include <boost/math/distributions/normal.hpp>

namespace pursuit::normal {

inline double quantile(double p) {
  require(p > 0.0 && p < 1.0, "normal::quantile: p must be in (0,1)");
  static const boost::math::normal_distribution<double> dist(0.0, 1.0);
  return boost::math::quantile(dist, p);
}

}  // namespace pursuit::normal
