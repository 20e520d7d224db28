#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

/// |sum_j x_j exp(-i 2 pi k (j+1) / n)|^2 / n for k = 1 .. n/2 - 1, by direct summation.
inline std::vector<double> direct_periodogram(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> out;
  for (std::size_t k = 1; k < n / 2; ++k) {
    long double re = 0.0L;
    long double im = 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t r = (k * (j + 1)) % n;
      const long double ang = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>(r) /
                              static_cast<long double>(n);
      re += x[j] * std::cos(ang);
      im += x[j] * std::sin(ang);
    }
    out.push_back(static_cast<double>((re * re + im * im) / static_cast<long double>(n)));
  }
  return out;
}

inline std::vector<double> white(std::size_t n, std::uint64_t seed, double sigma = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sigma);
  std::vector<double> x(n);
  for (double& v : x) v = g(rng);
  return x;
}

/// Composite Simpson rule on [a, b] with m (even) panels.
template <class F>
double simpson(F f, double a, double b, std::size_t m) {
  const double h = (b - a) / static_cast<double>(m);
  long double s = f(a) + f(b);
  for (std::size_t i = 1; i < m; ++i) {
    s += (i % 2 ? 4.0L : 2.0L) * f(a + h * static_cast<double>(i));
  }
  return static_cast<double>(s * h / 3.0L);
}

/// One-sample Kolmogorov-Smirnov statistic of `samples` against `cdf`.
template <class F>
double ks_statistic(std::vector<double> samples, F cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double c = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - c, c - static_cast<double>(i) / n});
  }
  return d;
}

} // namespace oracle
