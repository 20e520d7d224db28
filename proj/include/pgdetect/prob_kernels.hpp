#pragma once

// Spectral-window kernels, the per-bin noncentrality of a sinusoid set, and
// the central / noncentral F(2, 2L) laws of the standardized periodogram.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pgdetect/core_model.hpp"
#include "pgdetect/error.hpp"

namespace pgdetect {

namespace detail {

// sin(pi * x) with exact zeros at integers.
inline double sinpi(double x) {
  const double r = x - 2.0 * std::round(0.5 * x); // r in [-1, 1]
  if (r == 0.0 || std::abs(r) == 1.0) return 0.0;
  return std::sin(std::numbers::pi * r);
}

inline constexpr double kKernelSingularity = 1e-12;

} // namespace detail

/// sin(N pi nu) / (N sin(pi nu)), with the limit (-1)^{m(N-1)} at integer nu = m.
inline double dirichlet_ratio(double nu, std::size_t n) {
  if (n < 1) throw InvalidInput("dirichlet_ratio: n must be >= 1");
  const double m = std::round(nu);
  const double delta = nu - m; // in [-1/2, 1/2]
  const auto big_n = static_cast<double>(n);
  // (-1)^{m(N-1)}: odd only when both m and N-1 are odd.
  const bool m_odd = std::fmod(std::abs(m), 2.0) == 1.0;
  const double sign = (m_odd && (n - 1) % 2 == 1) ? -1.0 : 1.0;
  const double den = detail::sinpi(delta);
  if (std::abs(den) < detail::kKernelSingularity) return sign;
  return sign * detail::sinpi(big_n * delta) / (big_n * den);
}

/// Fejer kernel K_N(nu) = (sin(N pi nu) / (N sin(pi nu)))^2; even and 1-periodic.
inline double fejer_kernel(double nu, std::size_t n) {
  const double d = dirichlet_ratio(nu, n);
  return d * d;
}

/// Per-bin noncentrality lambda_k of the sinusoid set.
class NoncentralitySpectrum {
public:
  NoncentralitySpectrum(FourierGrid grid, std::vector<double> lambda)
      : grid_(grid), lambda_(std::move(lambda)) {
    if (lambda_.size() != grid_.size()) {
      throw InvalidInput("NoncentralitySpectrum: size does not match grid");
    }
    for (double v : lambda_) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InvalidInput("NoncentralitySpectrum: lambda must be finite and >= 0");
      }
    }
  }

  static NoncentralitySpectrum zero(FourierGrid grid) {
    return {grid, std::vector<double>(grid.size(), 0.0)};
  }

  [[nodiscard]] const FourierGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return lambda_; }
  [[nodiscard]] double operator[](std::size_t pos) const noexcept { return lambda_[pos]; }
  [[nodiscard]] std::size_t size() const noexcept { return lambda_.size(); }
  [[nodiscard]] bool all_zero() const noexcept {
    return std::all_of(lambda_.begin(), lambda_.end(), [](double v) { return v == 0.0; });
  }

private:
  FourierGrid grid_;
  std::vector<double> lambda_;
};

/// lambda_k = N / (2 S_k) * sum_i a_i^2 [K(f_i - nu_k) + K(f_i + nu_k)
///            - 2 D(f_i - nu_k) D(f_i + nu_k) cos(2 pi (N+1) f_i + 2 phi_i)]
/// in normalized frequency, for samples at t_j = j dt, j = 1..N. This equals
/// 2 / S_k times the exact periodogram of the noiseless sinusoid sum.
inline NoncentralitySpectrum noncentrality_lambda(const SinusoidSet& sines, const NoisePsd& psd,
                                                  const FourierGrid& grid) {
  if (!(psd.grid() == grid)) {
    throw InvalidInput("noncentrality_lambda: PSD grid differs from the Fourier grid");
  }
  sines.check_below_nyquist(grid.dt());
  const std::size_t n = grid.n();
  const auto big_n = static_cast<double>(n);
  std::vector<double> lambda(grid.size(), 0.0);
  for (const auto& s : sines.components()) {
    if (s.amplitude == 0.0) continue;
    const double f = s.frequency * grid.dt();
    const double cycles = std::fmod((big_n + 1.0) * f, 1.0);
    const double cross = std::cos(2.0 * std::numbers::pi * cycles + 2.0 * s.phase);
    const double a2 = s.amplitude * s.amplitude;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double nu = grid.normalized(i);
      const double dm = dirichlet_ratio(f - nu, n);
      const double dp = dirichlet_ratio(f + nu, n);
      lambda[i] += a2 * (dm * dm + dp * dp - 2.0 * dm * dp * cross);
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    lambda[i] = std::max(0.0, lambda[i] * big_n / (2.0 * psd[i]));
  }
  return {grid, std::move(lambda)};
}

namespace detail {

inline void check_gamma_l(double gamma, std::size_t l, const char* who) {
  if (!(gamma >= 0.0)) throw InvalidInput(std::string(who) + ": gamma must be >= 0");
  if (l < 1) throw InvalidInput(std::string(who) + ": L must be >= 1");
}

// L * log(L / (gamma + L)), i.e. log of the central survival function.
inline double log_central_sf(double gamma, std::size_t l) {
  const auto big_l = static_cast<double>(l);
  return -big_l * std::log1p(gamma / big_l);
}

inline double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

} // namespace detail

/// Density of F(2, 2L) scaled as (chi2_2/2)/(chi2_2L/2L): (1 + gamma/L)^{-L-1}.
inline double f_pdf(double gamma, std::size_t l) {
  detail::check_gamma_l(gamma, l, "f_pdf");
  const auto big_l = static_cast<double>(l);
  return std::exp(-(big_l + 1.0) * std::log1p(gamma / big_l));
}

/// Survival function (L / (gamma + L))^L.
inline double f_sf(double gamma, std::size_t l) {
  detail::check_gamma_l(gamma, l, "f_sf");
  return std::exp(detail::log_central_sf(gamma, l));
}

/// CDF 1 - (L / (gamma + L))^L.
inline double f_cdf(double gamma, std::size_t l) {
  detail::check_gamma_l(gamma, l, "f_cdf");
  return -std::expm1(detail::log_central_sf(gamma, l));
}

struct Tail {
  double cdf;
  double sf;
};

inline constexpr double kSeriesTolerance = 1e-17;
inline constexpr std::size_t kSeriesMaxTerms = 100000;

/// CDF and survival function at gamma of (chi2_{2,lambda}/2) / (chi2_{2L}/2L).
///
/// Poisson(lambda/2) mixture over j of central ratios with 2 + 2j numerator
/// degrees of freedom. For integer L the j-th survival term is a negative
/// binomial CDF, H(j) = sum_{m<=j} C(m+L-1, m) q^L x^m with q = L/(gamma+L)
/// and x = 1 - q, and the j-th CDF term is the finite binomial sum
/// sum_{i<L} C(j+L, i) q^i x^{j+L-i}. Both are sums of positive terms, so
/// neither tail loses precision near 0 or 1. The Poisson window grows from the
/// mode until a geometric bound on the excluded Poisson mass is below
/// kSeriesTolerance.
inline Tail noncentral_f(double gamma, double lambda, std::size_t l) {
  detail::check_gamma_l(gamma, l, "noncentral_f");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidInput("noncentral_f: lambda must be finite and >= 0");
  }
  if (lambda == 0.0) return {f_cdf(gamma, l), f_sf(gamma, l)};
  if (gamma == 0.0) return {0.0, 1.0};

  const auto big_l = static_cast<double>(l);
  const double mu = 0.5 * lambda;
  const double log_mu = std::log(mu);
  const double log_q = -std::log1p(gamma / big_l);
  const double log_x = std::log(gamma / (gamma + big_l));

  // Poisson window [lo, hi] around the mode.
  const double mode = std::floor(mu);
  const double log_w_mode = -mu + mode * log_mu - std::lgamma(mode + 1.0);
  const auto mode_j = static_cast<std::size_t>(mode);
  std::size_t lo = mode_j;
  std::size_t hi = mode_j;
  double w_lo = std::exp(log_w_mode);
  double w_hi = w_lo;
  std::size_t terms = 1;
  for (;;) {
    const double next_up = w_hi * mu / static_cast<double>(hi + 1);
    const double next_down = lo > 0 ? w_lo * static_cast<double>(lo) / mu : 0.0;
    // Beyond the window the weights fall at least geometrically.
    const double r_up = mu / static_cast<double>(hi + 2);
    const double r_down = lo > 0 ? static_cast<double>(lo - 1) / mu : 0.0;
    const double excluded = (r_up < 1.0 ? next_up / (1.0 - r_up)
                                        : std::numeric_limits<double>::infinity()) +
                            next_down / (1.0 - r_down);
    if (excluded < kSeriesTolerance) break;
    if (lo > 0 && next_down >= next_up) {
      --lo;
      w_lo = next_down;
    } else {
      ++hi;
      w_hi = next_up;
    }
    if (++terms > kSeriesMaxTerms) {
      throw NumericError("noncentral_f: Poisson series did not converge (lambda=" +
                         std::to_string(lambda) + ", gamma=" + std::to_string(gamma) +
                         ", L=" + std::to_string(l) + ", excluded mass bound=" +
                         std::to_string(excluded) + ")");
    }
  }

  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  double cdf = 0.0;
  double sf = 0.0;
  double log_c = big_l * log_q; // log C(m+L-1, m) q^L x^m at m = 0
  double log_h = neg_inf;       // log H(m)
  for (std::size_t j = 0; j <= hi; ++j) {
    const auto dj = static_cast<double>(j);
    if (j > 0) log_c += log_x + std::log((dj - 1.0 + big_l) / dj);
    log_h = detail::log_add(log_h, log_c);
    if (j < lo) continue;
    const double w = std::exp(-mu + dj * log_mu - std::lgamma(dj + 1.0));
    const double h = std::exp(log_h);
    double g;
    if (h < 0.5) {
      g = 1.0 - h;
    } else {
      // sum_{i<L} C(j+L, i) q^i x^{j+L-i}, ratio between terms (j+L-i)/(i+1) * q/x.
      double log_t = (dj + big_l) * log_x;
      double log_g = log_t;
      for (std::size_t i = 0; i + 1 < l; ++i) {
        const auto di = static_cast<double>(i);
        log_t += std::log((dj + big_l - di) / (di + 1.0)) + log_q - log_x;
        log_g = detail::log_add(log_g, log_t);
      }
      g = std::exp(log_g);
    }
    cdf += w * g;
    sf += w * h;
  }
  return {cdf, sf};
}

inline double noncentral_f_cdf(double gamma, double lambda, std::size_t l) {
  return noncentral_f(gamma, lambda, l).cdf;
}

inline double noncentral_f_sf(double gamma, double lambda, std::size_t l) {
  return noncentral_f(gamma, lambda, l).sf;
}

} // namespace pgdetect
