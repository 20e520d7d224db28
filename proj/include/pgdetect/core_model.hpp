#pragma once

// Sampled-data model: evenly sampled series, the positive Fourier grid,
// sinusoid sets for the alternative hypothesis and noise-only training sets.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pgdetect/error.hpp"

namespace pgdetect {

/// Evenly sampled real series. Sample j sits at t_j = (j + 1) * dt.
class TimeSeries {
public:
  TimeSeries(std::vector<double> samples, double dt)
      : samples_(std::move(samples)), dt_(dt) {
    const auto n = samples_.size();
    if (n < 4 || n % 2 != 0) {
      throw InvalidInput("TimeSeries: length must be even and >= 4, got " +
                         std::to_string(n));
    }
    if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
      throw InvalidInput("TimeSeries: dt must be finite and > 0");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(samples_[j])) {
        throw InvalidInput("TimeSeries: non-finite sample at index " +
                           std::to_string(j));
      }
    }
  }

  [[nodiscard]] std::span<const double> samples() const noexcept { return samples_; }
  [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
  [[nodiscard]] double dt() const noexcept { return dt_; }
  [[nodiscard]] double time(std::size_t j) const noexcept {
    return static_cast<double>(j + 1) * dt_;
  }

  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
  std::vector<double> samples_;
  double dt_;
};

/// Fourier indices k = 1 .. n/2 - 1 (DC and Nyquist excluded) and their
/// frequencies k / (n dt) in Hz. Position i in every per-bin vector of the
/// library corresponds to index k = i + 1.
class FourierGrid {
public:
  FourierGrid(std::size_t n, double dt) : n_(n), dt_(dt) {
    if (n < 4 || n % 2 != 0) {
      throw InvalidInput("fourier_grid: n must be even and >= 4, got " +
                         std::to_string(n));
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
      throw InvalidInput("fourier_grid: dt must be finite and > 0");
    }
  }

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] double dt() const noexcept { return dt_; }
  /// |Omega| = n/2 - 1.
  [[nodiscard]] std::size_t size() const noexcept { return n_ / 2 - 1; }
  [[nodiscard]] std::size_t index(std::size_t pos) const noexcept { return pos + 1; }
  [[nodiscard]] double freq(std::size_t pos) const noexcept {
    return static_cast<double>(pos + 1) / (static_cast<double>(n_) * dt_);
  }
  /// Normalized frequency nu * dt in (0, 1/2).
  [[nodiscard]] double normalized(std::size_t pos) const noexcept {
    return static_cast<double>(pos + 1) / static_cast<double>(n_);
  }
  [[nodiscard]] double nyquist() const noexcept { return 0.5 / dt_; }

  [[nodiscard]] std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = index(i);
    return out;
  }
  [[nodiscard]] std::vector<double> freqs() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = freq(i);
    return out;
  }

  friend bool operator==(const FourierGrid&, const FourierGrid&) = default;

private:
  std::size_t n_;
  double dt_;
};

inline FourierGrid fourier_grid(std::size_t n, double dt) { return {n, dt}; }

inline FourierGrid grid_of(const TimeSeries& x) { return {x.size(), x.dt()}; }

struct Sinusoid {
  double amplitude = 0.0; // signal units
  double frequency = 0.0; // Hz
  double phase = 0.0;     // radians

  friend bool operator==(const Sinusoid&, const Sinusoid&) = default;
};

/// The N_s components of the alternative hypothesis. May be empty.
class SinusoidSet {
public:
  SinusoidSet() = default;
  explicit SinusoidSet(std::vector<Sinusoid> components)
      : components_(std::move(components)) {
    for (const auto& s : components_) {
      if (!(s.amplitude >= 0.0) || !std::isfinite(s.amplitude) ||
          !std::isfinite(s.frequency) || !std::isfinite(s.phase)) {
        throw InvalidInput("SinusoidSet: amplitudes must be finite and >= 0");
      }
    }
  }

  [[nodiscard]] std::span<const Sinusoid> components() const noexcept { return components_; }
  [[nodiscard]] std::size_t size() const noexcept { return components_.size(); }
  [[nodiscard]] bool empty() const noexcept { return components_.empty(); }

  /// Throws unless every frequency lies strictly inside (0, 1/(2 dt)).
  void check_below_nyquist(double dt) const {
    const double nyq = 0.5 / dt;
    for (const auto& s : components_) {
      if (!(s.frequency > 0.0) || !(s.frequency < nyq)) {
        throw InvalidInput("SinusoidSet: frequency " + std::to_string(s.frequency) +
                           " Hz outside (0, Nyquist=" + std::to_string(nyq) + ")");
      }
    }
  }

  friend bool operator==(const SinusoidSet&, const SinusoidSet&) = default;

private:
  std::vector<Sinusoid> components_;
};

/// L >= 1 noise-only realizations sharing one (n, dt) grid.
class TrainingSet {
public:
  explicit TrainingSet(std::vector<TimeSeries> members) : members_(std::move(members)) {
    if (members_.empty()) throw InvalidInput("TrainingSet: needs at least one member");
    const auto n = members_.front().size();
    const auto dt = members_.front().dt();
    for (std::size_t l = 1; l < members_.size(); ++l) {
      if (members_[l].size() != n || members_[l].dt() != dt) {
        throw InvalidInput("TrainingSet: member " + std::to_string(l) +
                           " is not on the grid of member 0");
      }
    }
  }

  [[nodiscard]] std::span<const TimeSeries> members() const noexcept { return members_; }
  [[nodiscard]] std::size_t size() const noexcept { return members_.size(); }
  [[nodiscard]] FourierGrid grid() const { return grid_of(members_.front()); }

private:
  std::vector<TimeSeries> members_;
};

/// Noise PSD on the grid, in the convention E[periodogram] = S.
class NoisePsd {
public:
  NoisePsd(FourierGrid grid, std::vector<double> values)
      : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
      throw InvalidInput("NoisePsd: expected " + std::to_string(grid_.size()) +
                         " values, got " + std::to_string(values_.size()));
    }
    for (double v : values_) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidInput("NoisePsd: values must be finite and > 0");
      }
    }
  }

  static NoisePsd constant(FourierGrid grid, double level) {
    return {grid, std::vector<double>(grid.size(), level)};
  }

  [[nodiscard]] const FourierGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] double operator[](std::size_t pos) const noexcept { return values_[pos]; }

private:
  FourierGrid grid_;
  std::vector<double> values_;
};

/// Adds sum_i a_i sin(2 pi f_i t_j + phi_i) to the noise series.
inline TimeSeries synthesize(const SinusoidSet& sines, const TimeSeries& noise) {
  sines.check_below_nyquist(noise.dt());
  std::vector<double> out(noise.samples().begin(), noise.samples().end());
  for (const auto& s : sines.components()) {
    if (s.amplitude == 0.0) continue;
    // Phase accumulates in normalized units to keep the argument small.
    const double fn = s.frequency * noise.dt();
    for (std::size_t j = 0; j < out.size(); ++j) {
      const double cycles = std::fmod(fn * static_cast<double>(j + 1), 1.0);
      out[j] += s.amplitude * std::sin(2.0 * std::numbers::pi * cycles + s.phase);
    }
  }
  return {std::move(out), noise.dt()};
}

} // namespace pgdetect
