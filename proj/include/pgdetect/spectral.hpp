#pragma once

// Classical, training-averaged and standardized periodograms on the
// positive Fourier grid.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pgdetect/core_model.hpp"
#include "pgdetect/error.hpp"
#include "pgdetect/fft.hpp"

namespace pgdetect {

enum class PeriodogramKind { Classical, Averaged, Standardized };

inline const char* to_string(PeriodogramKind k) {
  switch (k) {
  case PeriodogramKind::Classical: return "classical";
  case PeriodogramKind::Averaged: return "averaged";
  case PeriodogramKind::Standardized: return "standardized";
  }
  return "?";
}

/// Ordinates over the grid, position i <-> Fourier index i + 1.
/// training_size is L for averaged/standardized periodograms and 0 otherwise.
class PeriodogramVec {
public:
  PeriodogramVec(FourierGrid grid, std::vector<double> ordinates, PeriodogramKind kind,
                 std::size_t training_size = 0)
      : grid_(grid), ordinates_(std::move(ordinates)), kind_(kind),
        training_size_(training_size) {
    if (ordinates_.size() != grid_.size()) {
      throw InvalidInput("PeriodogramVec: ordinate count does not match the grid");
    }
    for (double v : ordinates_) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InvalidInput("PeriodogramVec: ordinates must be finite and >= 0");
      }
    }
    if (kind_ == PeriodogramKind::Classical) {
      training_size_ = 0;
    } else if (training_size_ < 1) {
      throw InvalidInput("PeriodogramVec: averaged/standardized kinds need L >= 1");
    }
  }

  [[nodiscard]] const FourierGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] std::span<const double> ordinates() const noexcept { return ordinates_; }
  [[nodiscard]] double operator[](std::size_t pos) const noexcept { return ordinates_[pos]; }
  [[nodiscard]] std::size_t size() const noexcept { return ordinates_.size(); }
  [[nodiscard]] PeriodogramKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::size_t training_size() const noexcept { return training_size_; }

  /// Same grid and kind, ordinates multiplied by c > 0.
  [[nodiscard]] PeriodogramVec scaled(double c) const {
    std::vector<double> o(ordinates_);
    for (double& v : o) v *= c;
    return {grid_, std::move(o), kind_, training_size_};
  }

private:
  FourierGrid grid_;
  std::vector<double> ordinates_;
  PeriodogramKind kind_;
  std::size_t training_size_;
};

inline PeriodogramVec classical_periodogram(const TimeSeries& x) {
  const FourierGrid grid = grid_of(x);
  std::vector<double> out(grid.size());
  detail::periodogram_ordinates(x.samples(), out);
  return {grid, std::move(out), PeriodogramKind::Classical};
}

namespace detail {

// Pairwise sum of rows [lo, hi) of a row-major (rows x cols) matrix into acc.
inline void pairwise_row_sum(std::span<const double> rows, std::size_t cols, std::size_t lo,
                             std::size_t hi, std::span<double> acc) {
  if (hi - lo == 1) {
    std::copy_n(rows.begin() + static_cast<std::ptrdiff_t>(lo * cols), cols, acc.begin());
    return;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  std::vector<double> right(cols);
  pairwise_row_sum(rows, cols, lo, mid, acc);
  pairwise_row_sum(rows, cols, mid, hi, right);
  for (std::size_t c = 0; c < cols; ++c) acc[c] += right[c];
}

} // namespace detail

/// Pointwise mean of the members' classical periodograms.
inline PeriodogramVec averaged_periodogram(const TrainingSet& training) {
  const FourierGrid grid = training.grid();
  const std::size_t l = training.size();
  const std::size_t m = grid.size();
  std::vector<double> rows(l * m);
  for (std::size_t i = 0; i < l; ++i) {
    detail::periodogram_ordinates(training.members()[i].samples(),
                                  std::span<double>(rows).subspan(i * m, m));
  }
  std::vector<double> mean(m);
  detail::pairwise_row_sum(rows, m, 0, l, mean);
  const double inv_l = 1.0 / static_cast<double>(l);
  for (double& v : mean) v *= inv_l;
  return {grid, std::move(mean), PeriodogramKind::Averaged, l};
}

/// Denominator ordinates below this fraction of their mean count as zero.
inline constexpr double kDegenerateDenominatorRatio = 1e-30;

inline PeriodogramVec standardized_periodogram(const PeriodogramVec& p,
                                               const PeriodogramVec& pbar) {
  if (p.kind() != PeriodogramKind::Classical) {
    throw InvalidInput("standardized_periodogram: numerator must be classical");
  }
  if (pbar.kind() != PeriodogramKind::Averaged) {
    throw InvalidInput("standardized_periodogram: denominator must be averaged");
  }
  if (!(p.grid() == pbar.grid())) {
    throw InvalidInput("standardized_periodogram: numerator and denominator grids differ");
  }
  const auto den = pbar.ordinates();
  const double mean = std::accumulate(den.begin(), den.end(), 0.0) /
                      static_cast<double>(den.size());
  const double floor = kDegenerateDenominatorRatio * mean;
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(den[i] > floor) || den[i] == 0.0) {
      throw DegenerateTraining("standardized_periodogram: training ordinate at k=" +
                               std::to_string(p.grid().index(i)) + " is zero");
    }
    out[i] = p[i] / den[i];
  }
  return {p.grid(), std::move(out), PeriodogramKind::Standardized, pbar.training_size()};
}

} // namespace pgdetect
