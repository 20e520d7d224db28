#pragma once

// Closed-form false-alarm and detection probabilities of the maximum and
// N_c-th largest standardized ordinate, their threshold inversions, and
// analytic ROC curves.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "pgdetect/error.hpp"
#include "pgdetect/prob_kernels.hpp"
#include "pgdetect/test_kind.hpp"

namespace pgdetect {

namespace detail {

inline void check_eta(std::size_t eta, const char* who) {
  if (eta < 1) throw InvalidInput(std::string(who) + ": eta must be >= 1");
}

inline void check_pfa(double pfa, const char* who) {
  if (!(pfa > 0.0 && pfa < 1.0)) {
    throw InvalidInput(std::string(who) + ": pfa must lie in (0, 1), got " +
                       std::to_string(pfa));
  }
}

inline double log_binomial(std::size_t n, std::size_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

// Pr(Bin(eta, s) >= n_c), summed over the upper tail in log space.
inline double binomial_upper_tail(std::size_t eta, double s, std::size_t n_c) {
  if (n_c == 0 || s >= 1.0) return 1.0;
  if (s <= 0.0) return 0.0;
  const double log_s = std::log(s);
  const double log_1ms = std::log1p(-s);
  const double mode = std::floor(static_cast<double>(eta + 1) * s);
  double log_sum = -std::numeric_limits<double>::infinity();
  for (std::size_t i = n_c; i <= eta; ++i) {
    const double log_t = log_binomial(eta, i) + static_cast<double>(i) * log_s +
                         static_cast<double>(eta - i) * log_1ms;
    log_sum = log_add(log_sum, log_t);
    if (static_cast<double>(i) > mode && log_t < log_sum - 40.0) break;
  }
  return std::exp(log_sum);
}

} // namespace detail

/// Pr(max of eta i.i.d. F(2,2L) ordinates > gamma) = 1 - (1 - (L/(gamma+L))^L)^eta.
inline double pfa_t_tilde(double gamma, std::size_t l, std::size_t eta) {
  detail::check_gamma_l(gamma, l, "pfa_t_tilde");
  detail::check_eta(eta, "pfa_t_tilde");
  const double sf = f_sf(gamma, l);
  return -std::expm1(static_cast<double>(eta) * std::log1p(-sf));
}

/// Exact inverse of pfa_t_tilde: L [(1 - (1 - pfa)^{1/eta})^{-1/L} - 1].
inline double threshold_from_pfa(double pfa, std::size_t l, std::size_t eta) {
  detail::check_pfa(pfa, "threshold_from_pfa");
  detail::check_eta(eta, "threshold_from_pfa");
  if (l < 1) throw InvalidInput("threshold_from_pfa: L must be >= 1");
  const auto big_l = static_cast<double>(l);
  // Per-bin survival probability s = 1 - (1 - pfa)^{1/eta}.
  const double s = -std::expm1(std::log1p(-pfa) / static_cast<double>(eta));
  return big_l * std::expm1(-std::log(s) / big_l);
}

/// Pr(at least n_c of eta i.i.d. F(2,2L) ordinates exceed gamma).
inline double pfa_t_tilde_nc(double gamma, std::size_t l, std::size_t eta, std::size_t n_c) {
  detail::check_gamma_l(gamma, l, "pfa_t_tilde_nc");
  detail::check_eta(eta, "pfa_t_tilde_nc");
  if (n_c < 1 || n_c > eta) {
    throw InvalidInput("pfa_t_tilde_nc: n_c must lie in [1, eta]");
  }
  if (n_c == 1) return pfa_t_tilde(gamma, l, eta);
  return detail::binomial_upper_tail(eta, f_sf(gamma, l), n_c);
}

/// Pr(at least n_c successes) for independent Bernoulli trials with success
/// probabilities p and complements q = 1 - p (passed separately so that both
/// can be accurate). Dynamic program over the count truncated at n_c, with
/// the last state absorbing, O(size * n_c).
inline double poisson_binomial_tail(std::span<const double> p, std::span<const double> q,
                                    std::size_t n_c) {
  if (p.size() != q.size()) throw InvalidInput("poisson_binomial_tail: size mismatch");
  if (n_c == 0) return 1.0;
  std::vector<double> dp(n_c + 1, 0.0); // dp[n_c] = Pr(count >= n_c)
  dp[0] = 1.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    dp[n_c] += dp[n_c - 1] * p[k];
    for (std::size_t i = n_c - 1; i > 0; --i) dp[i] = dp[i] * q[k] + dp[i - 1] * p[k];
    dp[0] *= q[k];
  }
  return dp[n_c];
}

namespace detail {

struct BinTails {
  std::vector<double> cdf;
  std::vector<double> sf;
};

inline BinTails per_bin_tails(double gamma, const NoncentralitySpectrum& lambdas, std::size_t l) {
  BinTails t{std::vector<double>(lambdas.size()), std::vector<double>(lambdas.size())};
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const Tail tail = noncentral_f(gamma, lambdas[k], l);
    t.cdf[k] = tail.cdf;
    t.sf[k] = tail.sf;
  }
  return t;
}

} // namespace detail

/// 1 - prod_k Pr(F_{lambda_k}(2,2L) <= gamma), accumulated in log space.
inline double pdet_t_tilde(double gamma, const NoncentralitySpectrum& lambdas, std::size_t l) {
  detail::check_gamma_l(gamma, l, "pdet_t_tilde");
  if (lambdas.all_zero()) return pfa_t_tilde(gamma, l, lambdas.size());
  double log_prod = 0.0;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const Tail tail = noncentral_f(gamma, lambdas[k], l);
    log_prod += tail.sf < 0.5 ? std::log1p(-tail.sf) : std::log(tail.cdf);
  }
  return -std::expm1(log_prod);
}

inline double pdet_vs_pfa(double pfa, const NoncentralitySpectrum& lambdas, std::size_t l) {
  return pdet_t_tilde(threshold_from_pfa(pfa, l, lambdas.size()), lambdas, l);
}

/// Pr(at least n_c standardized ordinates exceed gamma) under the noncentral
/// laws. The exceedance count is Poisson-binomial; summing its law over
/// index combinations is replaced by the equivalent dynamic program.
inline double pdet_t_tilde_nc(double gamma, const NoncentralitySpectrum& lambdas, std::size_t l,
                              std::size_t n_c) {
  detail::check_gamma_l(gamma, l, "pdet_t_tilde_nc");
  const std::size_t eta = lambdas.size();
  if (n_c < 1 || n_c > eta) throw InvalidInput("pdet_t_tilde_nc: n_c must lie in [1, eta]");
  if (n_c == 1) return pdet_t_tilde(gamma, lambdas, l);
  if (lambdas.all_zero()) return pfa_t_tilde_nc(gamma, l, eta, n_c);
  const auto tails = detail::per_bin_tails(gamma, lambdas, l);
  return poisson_binomial_tail(tails.sf, tails.cdf, n_c);
}

inline constexpr double kBisectionPfaTolerance = 1e-10;
inline constexpr int kBisectionMaxIterations = 200;

/// Threshold gamma with pfa_t_tilde_nc(gamma) = pfa, by bisection on
/// [0, threshold_from_pfa(pfa)] (the N_c-th largest never exceeds the max).
inline double threshold_from_pfa_nc(double pfa, std::size_t l, std::size_t eta,
                                    std::size_t n_c) {
  detail::check_pfa(pfa, "threshold_from_pfa_nc");
  if (n_c == 1) return threshold_from_pfa(pfa, l, eta);
  double lo = 0.0;
  double hi = threshold_from_pfa(pfa, l, eta);
  const double f_lo = pfa_t_tilde_nc(lo, l, eta, n_c) - pfa;
  const double f_hi = pfa_t_tilde_nc(hi, l, eta, n_c) - pfa;
  if (f_lo < 0.0 || f_hi > 0.0) {
    throw NumericError("threshold_from_pfa_nc: bracket [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "] does not contain pfa=" + std::to_string(pfa));
  }
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < kBisectionMaxIterations; ++it) {
    mid = 0.5 * (lo + hi);
    const double f = pfa_t_tilde_nc(mid, l, eta, n_c) - pfa;
    if (std::abs(f) < kBisectionPfaTolerance) return mid;
    (f > 0.0 ? lo : hi) = mid;
  }
  return mid;
}

/// Threshold at the requested false-alarm probability for tests with a
/// closed-form law.
inline double analytic_threshold(const TestKind& test, double pfa, std::size_t l,
                                 std::size_t eta) {
  switch (test.family) {
  case TestFamily::TTilde: return threshold_from_pfa(pfa, l, eta);
  case TestFamily::TTildeNc: return threshold_from_pfa_nc(pfa, l, eta, test.n_c);
  default: throw InvalidInput("analytic_threshold: no closed form for " + test.name());
  }
}

inline double analytic_pfa(const TestKind& test, double gamma, std::size_t l, std::size_t eta) {
  switch (test.family) {
  case TestFamily::TTilde: return pfa_t_tilde(gamma, l, eta);
  case TestFamily::TTildeNc: return pfa_t_tilde_nc(gamma, l, eta, test.n_c);
  default: throw InvalidInput("analytic_pfa: no closed form for " + test.name());
  }
}

inline double analytic_pdet(const TestKind& test, double gamma,
                            const NoncentralitySpectrum& lambdas, std::size_t l) {
  switch (test.family) {
  case TestFamily::TTilde: return pdet_t_tilde(gamma, lambdas, l);
  case TestFamily::TTildeNc: return pdet_t_tilde_nc(gamma, lambdas, l, test.n_c);
  default: throw InvalidInput("analytic_pdet: no closed form for " + test.name());
  }
}

struct RocPoint {
  double pfa = 0.0;
  double pdet = 0.0;
  double pfa_stderr = 0.0;
  double pdet_stderr = 0.0;
  double threshold = 0.0;
};

struct RocCurve {
  TestKind test;
  std::size_t training_size = 0;
  std::size_t n = 0;
  std::vector<RocPoint> points;

  /// Trapezoidal area, closed with (0, 0) and (1, 1).
  [[nodiscard]] double auc() const {
    double area = 0.0;
    double px = 0.0;
    double py = 0.0;
    for (const auto& p : points) {
      area += (p.pfa - px) * (p.pdet + py) * 0.5;
      px = p.pfa;
      py = p.pdet;
    }
    area += (1.0 - px) * (1.0 + py) * 0.5;
    return area;
  }
};

inline RocCurve roc_curve_analytic(const TestKind& test, const NoncentralitySpectrum& lambdas,
                                   std::size_t l, std::span<const double> pfa_grid) {
  if (!test.has_analytic_pfa()) {
    throw InvalidInput("roc_curve_analytic: no closed form for " + test.name());
  }
  test.validate(lambdas.size());
  for (std::size_t i = 0; i < pfa_grid.size(); ++i) {
    detail::check_pfa(pfa_grid[i], "roc_curve_analytic");
    if (i > 0 && !(pfa_grid[i] > pfa_grid[i - 1])) {
      throw InvalidInput("roc_curve_analytic: pfa grid must be strictly increasing");
    }
  }
  RocCurve curve{test, l, 2 * (lambdas.size() + 1), {}};
  curve.points.reserve(pfa_grid.size());
  for (double pfa : pfa_grid) {
    const double gamma = analytic_threshold(test, pfa, l, lambdas.size());
    curve.points.push_back({pfa, analytic_pdet(test, gamma, lambdas, l), 0.0, 0.0, gamma});
  }
  return curve;
}

} // namespace pgdetect
