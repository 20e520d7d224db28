#pragma once

// Thin FFTW wrapper. Plans are created once per length under a lock
// (FFTW planning is not thread safe) and executed through the new-array
// interface, which is.

#include <fftw3.h>

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>

namespace pgdetect::detail {

class R2cPlanCache {
public:
  static R2cPlanCache& instance() {
    static R2cPlanCache cache;
    return cache;
  }

  R2cPlanCache(const R2cPlanCache&) = delete;
  R2cPlanCache& operator=(const R2cPlanCache&) = delete;

  fftw_plan get(std::size_t n) {
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(n); it != plans_.end()) return it->second;
    auto* in = fftw_alloc_real(n);
    auto* out = fftw_alloc_complex(n / 2 + 1);
    // FFTW_ESTIMATE keeps the plan (and hence the rounding) independent of timing.
    fftw_plan p = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(n, p);
    return p;
  }

private:
  R2cPlanCache() = default;
  ~R2cPlanCache() {
    for (auto& [n, p] : plans_) fftw_destroy_plan(p);
  }

  std::mutex mutex_;
  std::map<std::size_t, fftw_plan> plans_;
};

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

/// Writes |sum_j x_j e^{-i 2 pi k j / n}|^2 / n for k = 1 .. n/2 - 1 into out.
inline void periodogram_ordinates(std::span<const double> x, std::span<double> out) {
  const std::size_t n = x.size();
  const fftw_plan plan = R2cPlanCache::instance().get(n);
  std::unique_ptr<double, FftwFree> in(fftw_alloc_real(n));
  std::unique_ptr<fftw_complex, FftwFree> spec(fftw_alloc_complex(n / 2 + 1));
  std::copy(x.begin(), x.end(), in.get());
  fftw_execute_dft_r2c(plan, in.get(), spec.get());
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = 1; k < n / 2; ++k) {
    const double re = spec.get()[k][0];
    const double im = spec.get()[k][1];
    out[k - 1] = (re * re + im * im) * inv_n;
  }
}

/// Writes Re(sum_j x_j e^{-i 2 pi k j / n}) for k = 1 .. n/2 - 1 into out.
inline void dft_real_parts(std::span<const double> x, std::span<double> out) {
  const std::size_t n = x.size();
  const fftw_plan plan = R2cPlanCache::instance().get(n);
  std::unique_ptr<double, FftwFree> in(fftw_alloc_real(n));
  std::unique_ptr<fftw_complex, FftwFree> spec(fftw_alloc_complex(n / 2 + 1));
  std::copy(x.begin(), x.end(), in.get());
  fftw_execute_dft_r2c(plan, in.get(), spec.get());
  for (std::size_t k = 1; k < n / 2; ++k) out[k - 1] = spec.get()[k][0];
}

} // namespace pgdetect::detail
