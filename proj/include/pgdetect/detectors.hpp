#pragma once

// The six test statistics and the threshold decision.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pgdetect/analytic.hpp"
#include "pgdetect/error.hpp"
#include "pgdetect/spectral.hpp"
#include "pgdetect/test_kind.hpp"

namespace pgdetect {

/// Ascending copy; equal values keep their frequency order.
inline std::vector<double> order_statistics(std::span<const double> v) {
  if (v.empty()) throw InvalidInput("order_statistics: empty input");
  std::vector<double> out(v.begin(), v.end());
  std::stable_sort(out.begin(), out.end());
  return out;
}

inline std::vector<double> order_statistics(const PeriodogramVec& p) {
  return order_statistics(p.ordinates());
}

/// Position of the largest ordinate, lowest position on ties.
inline std::size_t argmax_position(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

namespace detail {

inline void require_kind(const PeriodogramVec& p, PeriodogramKind kind, const char* who) {
  if (p.kind() != kind) {
    throw InvalidInput(std::string(who) + ": expected a " + to_string(kind) +
                       " periodogram, got " + to_string(p.kind()));
  }
}

inline void require_n_c(std::size_t n_c, std::size_t hi, const char* who) {
  if (n_c < 1 || n_c > hi) {
    throw InvalidInput(std::string(who) + ": n_c=" + std::to_string(n_c) + " outside [1, " +
                       std::to_string(hi) + "]");
  }
}

inline double max_over_sum(std::span<const double> v, const char* who) {
  if (v.size() < 2) throw InvalidInput(std::string(who) + ": need at least 2 ordinates");
  const double sum = std::accumulate(v.begin(), v.end(), 0.0);
  if (!(sum > 0.0)) throw DegenerateInput(std::string(who) + ": all ordinates are zero");
  return *std::max_element(v.begin(), v.end()) / sum;
}

// Sum of the (size - n_c) smallest values of an ascending sequence.
inline double trimmed_sum(std::span<const double> sorted, std::size_t n_c, const char* who) {
  const double sum =
      std::accumulate(sorted.begin(), sorted.end() - static_cast<std::ptrdiff_t>(n_c), 0.0);
  if (!(sum > 0.0)) throw DegenerateInput(std::string(who) + ": trimmed sum is zero");
  return sum;
}

} // namespace detail

/// max_k P_k / sum_k P_k.
inline double fisher_stat(const PeriodogramVec& p) {
  detail::require_kind(p, PeriodogramKind::Classical, "fisher_stat");
  return detail::max_over_sum(p.ordinates(), "fisher_stat");
}

/// Multiplier b_r (N/2 - 1) r of the robust Fisher statistic, with
/// r = (eta - n_c) / eta and b_r = 1 + r^{-1} (1 - r) log(1 - r).
inline double robust_fisher_factor(std::size_t eta, std::size_t n_c) {
  const double r = static_cast<double>(eta - n_c) / static_cast<double>(eta);
  const double b_r = 1.0 + (1.0 - r) * std::log(1.0 - r) / r;
  return b_r * static_cast<double>(eta) * r;
}

/// b_r (N/2 - 1) r max_k P_k / (sum of the eta - n_c smallest ordinates).
inline double robust_fisher_stat(const PeriodogramVec& p, std::size_t n_c) {
  detail::require_kind(p, PeriodogramKind::Classical, "robust_fisher_stat");
  detail::require_n_c(n_c, p.size() - 1, "robust_fisher_stat");
  const auto sorted = order_statistics(p);
  return robust_fisher_factor(p.size(), n_c) * sorted.back() /
         detail::trimmed_sum(sorted, n_c, "robust_fisher_stat");
}

/// n_c-th largest ordinate over the sum of the eta - n_c smallest.
inline double chiu_stat(const PeriodogramVec& p, std::size_t n_c) {
  detail::require_kind(p, PeriodogramKind::Classical, "chiu_stat");
  detail::require_n_c(n_c, p.size() - 1, "chiu_stat");
  const auto sorted = order_statistics(p);
  return sorted[sorted.size() - n_c] / detail::trimmed_sum(sorted, n_c, "chiu_stat");
}

inline double t_tilde(const PeriodogramVec& p) {
  detail::require_kind(p, PeriodogramKind::Standardized, "t_tilde");
  const auto v = p.ordinates();
  return *std::max_element(v.begin(), v.end());
}

inline double t_tilde_fisher(const PeriodogramVec& p) {
  detail::require_kind(p, PeriodogramKind::Standardized, "t_tilde_fisher");
  return detail::max_over_sum(p.ordinates(), "t_tilde_fisher");
}

/// n_c-th largest standardized ordinate.
inline double t_tilde_nc(const PeriodogramVec& p, std::size_t n_c) {
  detail::require_kind(p, PeriodogramKind::Standardized, "t_tilde_nc");
  detail::require_n_c(n_c, p.size(), "t_tilde_nc");
  std::vector<double> v(p.ordinates().begin(), p.ordinates().end());
  const auto nth = v.end() - static_cast<std::ptrdiff_t>(n_c);
  std::nth_element(v.begin(), nth, v.end());
  return *nth;
}

enum class Decision { H0, H1 };

inline const char* to_string(Decision d) { return d == Decision::H1 ? "H1" : "H0"; }

struct TestReport {
  TestKind kind;
  double statistic = 0.0;
  double threshold = 0.0;
  Decision decision = Decision::H0;
  std::size_t argmax_index = 0; // Fourier index k of the dominant ordinate
  std::optional<double> analytic_pfa;
};

/// Statistic value and the Fourier index of the dominant ordinate.
struct Evaluation {
  double statistic = 0.0;
  std::size_t argmax_index = 0;
};

/// Evaluates a test. Standardized tests read `standardized`, the classical
/// ones read `classical`; the other argument may be null.
inline Evaluation evaluate(const TestKind& test, const PeriodogramVec* classical,
                           const PeriodogramVec* standardized) {
  const PeriodogramVec* p = test.standardized() ? standardized : classical;
  if (p == nullptr) {
    throw InvalidInput(test.name() + ": required periodogram was not supplied");
  }
  Evaluation e;
  e.argmax_index = p->grid().index(argmax_position(p->ordinates()));
  switch (test.family) {
  case TestFamily::Fisher: e.statistic = fisher_stat(*p); break;
  case TestFamily::RobustFisher: e.statistic = robust_fisher_stat(*p, test.n_c); break;
  case TestFamily::Chiu: e.statistic = chiu_stat(*p, test.n_c); break;
  case TestFamily::TTilde: e.statistic = t_tilde(*p); break;
  case TestFamily::TTildeFisher: e.statistic = t_tilde_fisher(*p); break;
  case TestFamily::TTildeNc: e.statistic = t_tilde_nc(*p, test.n_c); break;
  }
  return e;
}

/// H1 iff statistic > threshold. For TTilde / TTildeNc the closed-form false
/// alarm probability at the threshold is attached; it needs the training size
/// L and the grid size eta.
inline TestReport decide(const TestKind& kind, double statistic, double threshold,
                         std::size_t argmax_index, std::size_t l = 0, std::size_t eta = 0) {
  if (!std::isfinite(statistic) || !std::isfinite(threshold)) {
    throw InvalidInput("decide: statistic and threshold must be finite");
  }
  TestReport r{kind, statistic, threshold,
               statistic > threshold ? Decision::H1 : Decision::H0, argmax_index, std::nullopt};
  if (kind.has_analytic_pfa()) {
    if (l < 1 || eta < 1) {
      throw InvalidInput("decide: " + kind.name() + " needs L and eta for its analytic P_FA");
    }
    r.analytic_pfa = analytic_pfa(kind, std::max(threshold, 0.0), l, eta);
  }
  return r;
}

} // namespace pgdetect
