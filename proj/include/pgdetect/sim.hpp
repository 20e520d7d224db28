#pragma once

// Monte Carlo harness: AR(p) colored noise with exact PSD, per-trial seed
// streams, null/alternative statistic sampling, MC threshold calibration,
// empirical ROC curves and false-alarm frequency histograms.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "pgdetect/analytic.hpp"
#include "pgdetect/core_model.hpp"
#include "pgdetect/detectors.hpp"
#include "pgdetect/error.hpp"
#include "pgdetect/spectral.hpp"

namespace pgdetect {

// ---------------------------------------------------------------------------
// AR noise

/// x_t = sum_m a_m x_{t-m} + sigma w_t with w_t standard Gaussian.
struct ARModel {
  std::vector<double> coeffs;
  double sigma = 1.0;

  [[nodiscard]] std::size_t order() const noexcept { return coeffs.size(); }

  /// Reflection coefficients of 1 - sum_m a_m z^{-m} by the step-down
  /// recursion; the model is stationary iff all lie strictly inside (-1, 1).
  [[nodiscard]] std::vector<double> reflection_coefficients() const {
    std::vector<double> c(coeffs.size());
    for (std::size_t m = 0; m < c.size(); ++m) c[m] = -coeffs[m];
    std::vector<double> refl(c.size());
    for (std::size_t p = c.size(); p > 0; --p) {
      const double k = c[p - 1];
      refl[p - 1] = k;
      if (!(std::abs(k) < 1.0)) break;
      std::vector<double> next(p - 1);
      for (std::size_t m = 0; m + 1 < p; ++m) {
        next[m] = (c[m] - k * c[p - 2 - m]) / (1.0 - k * k);
      }
      c = std::move(next);
    }
    return refl;
  }

  [[nodiscard]] bool stable() const {
    const auto refl = reflection_coefficients();
    return std::all_of(refl.begin(), refl.end(), [](double k) { return std::abs(k) < 1.0; });
  }

  void validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      throw InvalidInput("ARModel: sigma must be finite and > 0");
    }
    for (double a : coeffs) {
      if (!std::isfinite(a)) throw InvalidInput("ARModel: non-finite coefficient");
    }
    if (!stable()) throw InvalidInput("ARModel: characteristic roots not inside the unit circle");
  }

  /// Same shape, innovations scaled by c.
  [[nodiscard]] ARModel scaled(double c) const { return {coeffs, sigma * c}; }
};

inline std::size_t ar_burn_in(const ARModel& model) {
  return std::max<std::size_t>(1000, 50 * model.order());
}

namespace detail {

// Fills out with a zero-initialized AR path after discarding the burn-in.
// Assumes a validated model.
template <class Rng>
void ar_fill(const ARModel& model, std::span<double> out, Rng& rng) {
  const std::size_t p = model.order();
  const std::size_t burn = ar_burn_in(model);
  std::vector<double> buf(burn + out.size(), 0.0);
  std::normal_distribution<double> gauss(0.0, model.sigma);
  const double* a = model.coeffs.data();
  for (std::size_t t = 0; t < buf.size(); ++t) {
    double v = gauss(rng);
    const std::size_t lags = std::min(p, t);
    for (std::size_t m = 0; m < lags; ++m) v += a[m] * buf[t - 1 - m];
    buf[t] = v;
  }
  std::copy(buf.end() - static_cast<std::ptrdiff_t>(out.size()), buf.end(), out.begin());
}

} // namespace detail

inline TimeSeries ar_generate(const ARModel& model, std::size_t n, double dt, std::uint64_t seed) {
  model.validate();
  if (n < 4 || n % 2 != 0) throw InvalidInput("ar_generate: n must be even and >= 4");
  std::mt19937_64 rng(seed);
  std::vector<double> out(n);
  detail::ar_fill(model, out, rng);
  return {std::move(out), dt};
}

/// sigma^2 / |1 - sum_m a_m e^{-i 2 pi nu m}|^2 at the grid's normalized frequencies.
inline NoisePsd ar_psd(const ARModel& model, const FourierGrid& grid) {
  model.validate();
  std::vector<double> s(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = 2.0 * std::numbers::pi * grid.normalized(i);
    std::complex<double> den(1.0, 0.0);
    for (std::size_t m = 0; m < model.order(); ++m) {
      den -= model.coeffs[m] * std::polar(1.0, -w * static_cast<double>(m + 1));
    }
    s[i] = model.sigma * model.sigma / std::norm(den);
  }
  return {grid, std::move(s)};
}

/// Autocovariances gamma(0 .. max_lag) of the stationary AR process. Solves
/// the Yule-Walker equations for lags 0 .. p, then runs the AR recursion.
inline std::vector<double> ar_autocovariance(const ARModel& model, std::size_t max_lag) {
  model.validate();
  const std::size_t p = model.order();
  const std::size_t m = p + 1;
  // Row h: gamma(h) - sum_i a_i gamma(|h - i|) = sigma^2 [h == 0].
  std::vector<double> a(m * m, 0.0);
  std::vector<double> b(m, 0.0);
  b[0] = model.sigma * model.sigma;
  for (std::size_t h = 0; h < m; ++h) {
    a[h * m + h] += 1.0;
    for (std::size_t i = 1; i <= p; ++i) {
      const std::size_t lag = h > i ? h - i : i - h;
      a[h * m + lag] -= model.coeffs[i - 1];
    }
  }
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < m; ++r) {
      if (std::abs(a[r * m + c]) > std::abs(a[piv * m + c])) piv = r;
    }
    if (piv != c) {
      for (std::size_t j = 0; j < m; ++j) std::swap(a[c * m + j], a[piv * m + j]);
      std::swap(b[c], b[piv]);
    }
    for (std::size_t r = c + 1; r < m; ++r) {
      const double f = a[r * m + c] / a[c * m + c];
      for (std::size_t j = c; j < m; ++j) a[r * m + j] -= f * a[c * m + j];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> g(std::max(max_lag + 1, m));
  for (std::size_t c = m; c-- > 0;) {
    double v = b[c];
    for (std::size_t j = c + 1; j < m; ++j) v -= a[c * m + j] * g[j];
    g[c] = v / a[c * m + c];
  }
  for (std::size_t h = m; h <= max_lag; ++h) {
    double v = 0.0;
    for (std::size_t i = 1; i <= p; ++i) v += model.coeffs[i - 1] * g[h - i];
    g[h] = v;
  }
  g.resize(max_lag + 1);
  return g;
}

/// Mean of the classical periodogram ordinate of an n-sample record:
/// sum_{|h| < n} (1 - |h|/n) gamma(h) e^{-i 2 pi k h / n}. This is the AR
/// PSD smoothed by the Fejer kernel; the two differ by leakage, which
/// matters where the PSD changes on the scale of a few bins.
inline NoisePsd ar_expected_periodogram(const ARModel& model, const FourierGrid& grid) {
  const std::size_t n = grid.n();
  const std::vector<double> g = ar_autocovariance(model, n - 1);
  std::vector<double> c(n);
  for (std::size_t h = 0; h < n; ++h) {
    c[h] = (1.0 - static_cast<double>(h) / static_cast<double>(n)) * g[h];
  }
  std::vector<double> s(grid.size());
  detail::dft_real_parts(c, s);
  for (double& v : s) v = 2.0 * v - g[0];
  return {grid, std::move(s)};
}

/// Shipped stand-in for a stellar noise PSD. Poles: a real pole at 0.97
/// (convective low-frequency power), a real pole at 0.5, and two conjugate
/// pairs of modulus 0.85 at normalized frequencies 0.30 and 0.36 (the
/// oscillation bump). sigma = 0.15 signal units. A pole closer to 1 makes
/// the low-frequency peak narrower than a few Fourier bins at N = 1024; its
/// leakage then correlates ordinates across the whole band.
inline ARModel default_stellar_ar6() {
  ARModel m{{-0.13894967301018313, -0.1341012840389041, 1.0181515057850974,
             0.2099041818308118, 0.20355311020631942, -0.25317303125},
            0.15};
  m.validate();
  return m;
}

// ---------------------------------------------------------------------------
// Seeds

/// SplitMix64 finalizer (Steele, Lea and Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of one series: mix(mix(mix(master) ^ trial * G) ^ (stream * H + 1)).
/// Streams 0 .. L-1 are the training members, stream L the observation noise.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t trial,
                                    std::uint64_t stream) noexcept {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ (trial * 0x9E3779B97F4A7C15ULL));
  return splitmix64(h ^ (stream * 0xD1B54A32D192ED03ULL + 1));
}

// ---------------------------------------------------------------------------
// Monte Carlo

struct McTest {
  TestKind kind;
  std::vector<double> gammas; // thresholds at which exceedances are counted
};

struct McConfig {
  std::size_t trials = 0;
  std::uint64_t master_seed = 0;
  std::size_t n = 0;
  double dt = 1.0;
  std::size_t training_size = 0;
  SinusoidSet sines;
  ARModel noise;
  std::vector<McTest> tests;
  bool run_h0 = true;
  bool run_h1 = false;
  std::size_t histogram_bins = 50;
  unsigned threads = 1; // does not affect results

  [[nodiscard]] FourierGrid grid() const { return {n, dt}; }

  /// Throws before any trial runs.
  void validate() const {
    if (trials < 1) throw InvalidInput("McConfig: trials must be >= 1");
    const FourierGrid g = grid();
    noise.validate();
    sines.check_below_nyquist(dt);
    if (tests.empty()) throw InvalidInput("McConfig: no tests configured");
    for (const auto& t : tests) {
      t.kind.validate(g.size());
      if (t.kind.standardized() && training_size < 1) {
        throw InvalidInput("McConfig: " + t.kind.name() + " needs a training set (L >= 1)");
      }
      if (t.kind.family == TestFamily::Fisher || t.kind.family == TestFamily::TTildeFisher) {
        if (g.size() < 2) throw InvalidInput("McConfig: grid too small for " + t.kind.name());
      }
    }
    if (!run_h0 && !run_h1) throw InvalidInput("McConfig: neither H0 nor H1 requested");
    if (histogram_bins < 1) throw InvalidInput("McConfig: histogram_bins must be >= 1");
  }
};

struct Exceedance {
  double gamma = 0.0;
  std::size_t count = 0;
  double rate = 0.0;
  double stderr_ = 0.0;
};

/// Binned counts of the argmax frequency over equal-width bands of (0, Nyquist).
struct FrequencyHistogram {
  std::vector<double> low_hz;
  std::vector<double> high_hz;
  std::vector<std::size_t> counts;
  std::vector<std::size_t> bins_per_band; // Fourier indices falling in each band

  [[nodiscard]] std::size_t total() const {
    std::size_t s = 0;
    for (auto c : counts) s += c;
    return s;
  }
};

inline std::size_t histogram_band(std::size_t k, std::size_t n, std::size_t bands) {
  return k * bands / (n / 2);
}

inline FrequencyHistogram make_histogram(const FourierGrid& grid, std::size_t bands) {
  FrequencyHistogram h;
  const double width = grid.nyquist() / static_cast<double>(bands);
  h.low_hz.resize(bands);
  h.high_hz.resize(bands);
  h.counts.assign(bands, 0);
  h.bins_per_band.assign(bands, 0);
  for (std::size_t b = 0; b < bands; ++b) {
    h.low_hz[b] = width * static_cast<double>(b);
    h.high_hz[b] = width * static_cast<double>(b + 1);
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ++h.bins_per_band[histogram_band(grid.index(i), grid.n(), bands)];
  }
  return h;
}

struct McTestSummary {
  TestKind kind;
  std::vector<double> h0_stats;          // per trial, empty unless H0 ran
  std::vector<double> h1_stats;          // per trial, empty unless H1 ran
  std::vector<std::size_t> h0_argmax;    // Fourier index per trial
  std::vector<Exceedance> h0_exceedance; // one per configured gamma
  std::vector<Exceedance> h1_exceedance;
  FrequencyHistogram h0_histogram;
};

struct McSummary {
  std::size_t trials = 0;
  std::size_t training_size = 0;
  FourierGrid grid{4, 1.0};
  std::vector<McTestSummary> tests;
};

inline double binomial_stderr(double rate, std::size_t trials) {
  return std::sqrt(rate * (1.0 - rate) / static_cast<double>(trials));
}

inline std::vector<Exceedance> count_exceedances(std::span<const double> stats,
                                                 std::span<const double> gammas) {
  std::vector<Exceedance> out;
  out.reserve(gammas.size());
  for (double g : gammas) {
    const auto c = static_cast<std::size_t>(
        std::count_if(stats.begin(), stats.end(), [g](double s) { return s > g; }));
    const double rate = static_cast<double>(c) / static_cast<double>(stats.size());
    out.push_back({g, c, rate, binomial_stderr(rate, stats.size())});
  }
  return out;
}

namespace detail {

struct TrialResult {
  std::vector<double> h0;
  std::vector<std::size_t> h0_argmax;
  std::vector<double> h1;
};

inline TrialResult run_trial(const McConfig& cfg, std::uint64_t trial,
                             std::span<const double> sine_samples) {
  const FourierGrid grid = cfg.grid();
  const std::size_t m = grid.size();
  const std::size_t l = cfg.training_size;
  bool need_std = false;
  for (const auto& t : cfg.tests) need_std = need_std || t.kind.standardized();

  std::optional<PeriodogramVec> pbar;
  if (need_std) {
    std::vector<double> rows(l * m);
    std::vector<double> series(cfg.n);
    for (std::size_t s = 0; s < l; ++s) {
      std::mt19937_64 rng(stream_seed(cfg.master_seed, trial, s));
      ar_fill(cfg.noise, series, rng);
      periodogram_ordinates(series, std::span<double>(rows).subspan(s * m, m));
    }
    std::vector<double> mean(m);
    pairwise_row_sum(rows, m, 0, l, mean);
    for (double& v : mean) v /= static_cast<double>(l);
    pbar.emplace(grid, std::move(mean), PeriodogramKind::Averaged, l);
  }

  std::vector<double> noise(cfg.n);
  {
    std::mt19937_64 rng(stream_seed(cfg.master_seed, trial, l));
    ar_fill(cfg.noise, noise, rng);
  }

  TrialResult r;
  auto evaluate_all = [&](std::span<const double> x, std::vector<double>& stats,
                          std::vector<std::size_t>* argmax) {
    std::vector<double> ord(m);
    periodogram_ordinates(x, ord);
    const PeriodogramVec p(grid, std::move(ord), PeriodogramKind::Classical);
    std::optional<PeriodogramVec> pt;
    if (pbar) pt.emplace(standardized_periodogram(p, *pbar));
    for (const auto& t : cfg.tests) {
      const Evaluation e = evaluate(t.kind, &p, pt ? &*pt : nullptr);
      stats.push_back(e.statistic);
      if (argmax) argmax->push_back(e.argmax_index);
    }
  };
  if (cfg.run_h0) evaluate_all(noise, r.h0, &r.h0_argmax);
  if (cfg.run_h1) {
    for (std::size_t j = 0; j < cfg.n; ++j) noise[j] += sine_samples[j];
    evaluate_all(noise, r.h1, nullptr);
  }
  return r;
}

} // namespace detail

/// Runs cfg.trials independent trials. Trial t draws its L training members
/// and its observation noise from stream_seed(master, t, 0..L); H1 reuses the
/// H0 noise with the sinusoids added. Results do not depend on cfg.threads.
inline McSummary run_mc(const McConfig& cfg) {
  cfg.validate();
  const FourierGrid grid = cfg.grid();
  std::vector<double> sine_samples(cfg.n, 0.0);
  if (cfg.run_h1) {
    const TimeSeries sig =
        synthesize(cfg.sines, TimeSeries(std::vector<double>(cfg.n, 0.0), cfg.dt));
    sine_samples.assign(sig.samples().begin(), sig.samples().end());
  }

  std::vector<detail::TrialResult> results(cfg.trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= cfg.trials) return;
      try {
        results[t] = detail::run_trial(cfg, t, sine_samples);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cfg.trials;
        return;
      }
    }
  };
  const unsigned threads = std::max(1u, cfg.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  McSummary s;
  s.trials = cfg.trials;
  s.training_size = cfg.training_size;
  s.grid = grid;
  for (std::size_t ti = 0; ti < cfg.tests.size(); ++ti) {
    McTestSummary ts;
    ts.kind = cfg.tests[ti].kind;
    ts.h0_histogram = make_histogram(grid, cfg.histogram_bins);
    for (const auto& r : results) {
      if (cfg.run_h0) {
        ts.h0_stats.push_back(r.h0[ti]);
        ts.h0_argmax.push_back(r.h0_argmax[ti]);
        ++ts.h0_histogram.counts[histogram_band(r.h0_argmax[ti], cfg.n, cfg.histogram_bins)];
      }
      if (cfg.run_h1) ts.h1_stats.push_back(r.h1[ti]);
    }
    if (cfg.run_h0) ts.h0_exceedance = count_exceedances(ts.h0_stats, cfg.tests[ti].gammas);
    if (cfg.run_h1) ts.h1_exceedance = count_exceedances(ts.h1_stats, cfg.tests[ti].gammas);
    s.tests.push_back(std::move(ts));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Calibration, ROC, histograms

struct Calibration {
  double threshold = 0.0;
  double ci_low = 0.0; // order-statistic 99% confidence interval
  double ci_high = 0.0;
  std::size_t trials = 0;
};

inline constexpr double kCalibrationZ = 2.5758293035489004; // two-sided 99%

/// Empirical (1 - target_pfa) quantile of null statistics: the smallest
/// sample value exceeded by at most target_pfa of the samples.
inline Calibration calibrate_from_samples(std::span<const double> h0_stats, double target_pfa) {
  detail::check_pfa(target_pfa, "calibrate_threshold");
  const std::size_t n = h0_stats.size();
  if (static_cast<double>(n) < 100.0 / target_pfa) {
    throw InvalidInput("calibrate_threshold: " + std::to_string(n) +
                       " trials cannot resolve target pfa " + std::to_string(target_pfa) +
                       " (need >= 100 / pfa)");
  }
  std::vector<double> sorted(h0_stats.begin(), h0_stats.end());
  std::sort(sorted.begin(), sorted.end());
  const double nd = static_cast<double>(n);
  const double q = 1.0 - target_pfa;
  auto rank_value = [&](double rank) {
    const auto r = static_cast<std::ptrdiff_t>(std::clamp(rank, 1.0, nd)) - 1;
    return sorted[static_cast<std::size_t>(r)];
  };
  const double half = kCalibrationZ * std::sqrt(nd * q * (1.0 - q));
  return {rank_value(std::ceil(nd * q)), rank_value(std::floor(nd * q - half)),
          rank_value(std::ceil(nd * q + half)), n};
}

inline Calibration calibrate_threshold(McConfig cfg, const TestKind& test, double target_pfa) {
  detail::check_pfa(target_pfa, "calibrate_threshold");
  if (static_cast<double>(cfg.trials) < 100.0 / target_pfa) {
    throw InvalidInput("calibrate_threshold: " + std::to_string(cfg.trials) +
                       " trials cannot resolve target pfa " + std::to_string(target_pfa));
  }
  cfg.tests = {{test, {}}};
  cfg.run_h0 = true;
  cfg.run_h1 = false;
  const McSummary s = run_mc(cfg);
  return calibrate_from_samples(s.tests.front().h0_stats, target_pfa);
}

/// Step ROC of "statistic > threshold" swept over every pooled sample value,
/// one point per distinct (P_FA, P_DET) pair. Its trapezoidal area equals the
/// Mann-Whitney statistic with ties counted as one half.
inline RocCurve empirical_roc_from_samples(const TestKind& test, std::span<const double> h0,
                                           std::span<const double> h1) {
  if (h0.empty() || h1.empty()) throw InvalidInput("empirical_roc: empty sample set");
  std::vector<double> a(h0.begin(), h0.end());
  std::vector<double> b(h1.begin(), h1.end());
  std::sort(a.begin(), a.end(), std::greater<>());
  std::sort(b.begin(), b.end(), std::greater<>());
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end(), std::greater<>());
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());

  const double n0 = static_cast<double>(a.size());
  const double n1 = static_cast<double>(b.size());
  RocCurve c{test, 0, 0, {}};
  std::size_t ia = 0;
  std::size_t ib = 0;
  // Threshold above every sample first, then each pooled value descending.
  c.points.push_back({0.0, 0.0, 0.0, 0.0, pooled.front()});
  for (double t : pooled) {
    while (ia < a.size() && a[ia] > t) ++ia;
    while (ib < b.size() && b[ib] > t) ++ib;
    const double pfa = static_cast<double>(ia) / n0;
    const double pdet = static_cast<double>(ib) / n1;
    RocPoint pt{pfa, pdet, binomial_stderr(pfa, a.size()), binomial_stderr(pdet, b.size()), t};
    if (pfa != c.points.back().pfa || pdet != c.points.back().pdet) c.points.push_back(pt);
  }
  // Below every sample both rates reach 1.
  const RocPoint last{1.0, 1.0, 0.0, 0.0, -std::numeric_limits<double>::infinity()};
  if (c.points.back().pfa == 1.0) {
    c.points.back().pdet = 1.0;
  } else {
    c.points.push_back(last);
  }
  return c;
}

/// Hanley-McNeil standard error of an AUC estimate.
inline double auc_stderr(double auc, std::size_t n0, std::size_t n1) {
  const double q1 = auc / (2.0 - auc);
  const double q2 = 2.0 * auc * auc / (1.0 + auc);
  const double v = (auc * (1.0 - auc) + (static_cast<double>(n1) - 1.0) * (q1 - auc * auc) +
                    (static_cast<double>(n0) - 1.0) * (q2 - auc * auc)) /
                   (static_cast<double>(n0) * static_cast<double>(n1));
  return std::sqrt(std::max(v, 0.0));
}

inline RocCurve empirical_roc(McConfig cfg, const TestKind& test) {
  cfg.tests = {{test, {}}};
  cfg.run_h0 = true;
  cfg.run_h1 = true;
  const McSummary s = run_mc(cfg);
  RocCurve c = empirical_roc_from_samples(test, s.tests.front().h0_stats,
                                          s.tests.front().h1_stats);
  c.training_size = cfg.training_size;
  c.n = cfg.n;
  return c;
}

inline FrequencyHistogram fa_frequency_histogram(McConfig cfg, const TestKind& test) {
  cfg.tests = {{test, {}}};
  cfg.run_h0 = true;
  cfg.run_h1 = false;
  return run_mc(cfg).tests.front().h0_histogram;
}

struct GoodnessOfFit {
  double chi2 = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
};

/// Pearson chi-square test of the histogram against argmax frequencies
/// uniformly distributed over the Fourier indices.
inline GoodnessOfFit uniformity_gof(const FrequencyHistogram& h) {
  std::size_t indices = 0;
  for (auto c : h.bins_per_band) indices += c;
  const double total = static_cast<double>(h.total());
  GoodnessOfFit g;
  std::size_t used = 0;
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    if (h.bins_per_band[b] == 0) continue;
    const double expected =
        total * static_cast<double>(h.bins_per_band[b]) / static_cast<double>(indices);
    const double d = static_cast<double>(h.counts[b]) - expected;
    g.chi2 += d * d / expected;
    ++used;
  }
  g.dof = used > 1 ? used - 1 : 1;
  g.p_value = boost::math::gamma_q(0.5 * static_cast<double>(g.dof), 0.5 * g.chi2);
  return g;
}

} // namespace pgdetect
