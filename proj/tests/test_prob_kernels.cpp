#include <gtest/gtest.h>

#include <boost/math/distributions/non_central_f.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "pgdetect/error.hpp"
#include "pgdetect/prob_kernels.hpp"
#include "pgdetect/spectral.hpp"

using namespace pgdetect;

TEST(Dirichlet, MatchesDirectRatioAwayFromIntegers) {
  for (std::size_t n : {1u, 2u, 7u, 64u, 1024u}) {
    for (double nu : {0.013, 0.25, -0.37, 0.4999, 1.3, -2.71}) {
      const double ref = std::sin(std::numbers::pi * n * nu) / (n * std::sin(std::numbers::pi * nu));
      EXPECT_NEAR(dirichlet_ratio(nu, n), ref, 1e-9) << n << " " << nu;
    }
  }
}

TEST(Dirichlet, IntegerLimits) {
  EXPECT_DOUBLE_EQ(dirichlet_ratio(0.0, 1024), 1.0);
  EXPECT_DOUBLE_EQ(dirichlet_ratio(1.0, 1024), -1.0); // (-1)^{N-1}, N even
  EXPECT_DOUBLE_EQ(dirichlet_ratio(2.0, 1024), 1.0);
  EXPECT_DOUBLE_EQ(dirichlet_ratio(1.0, 1023), 1.0);
  // Continuity across an integer.
  EXPECT_NEAR(dirichlet_ratio(1.0 + 1e-9, 16), -1.0, 1e-6);
}

TEST(Fejer, EvenPeriodicAndZeroOnGrid) {
  const std::size_t n = 32;
  for (double nu : {0.01, 0.1, 0.33}) {
    EXPECT_NEAR(fejer_kernel(nu, n), fejer_kernel(-nu, n), 1e-14);
    EXPECT_NEAR(fejer_kernel(nu, n), fejer_kernel(nu + 1.0, n), 1e-12);
  }
  for (int k = 1; k < 32; ++k) EXPECT_NEAR(fejer_kernel(k / 32.0, n), 0.0, 1e-25);
  EXPECT_DOUBLE_EQ(fejer_kernel(0.0, n), 1.0);
}

TEST(FDistribution, DensityIntegratesToOne) {
  // Substitute u = gamma / (gamma + L) to map [0, inf) onto [0, 1).
  for (std::size_t l : {1u, 2u, 5u, 20u, 100u}) {
    const double big_l = static_cast<double>(l);
    const auto integrand = [&](double u) {
      u = std::min(u, 1.0 - 0x1p-52);
      const double g = big_l * u / (1.0 - u);
      return f_pdf(g, l) * big_l / ((1.0 - u) * (1.0 - u));
    };
    EXPECT_NEAR(oracle::simpson(integrand, 0.0, 1.0, 20000), 1.0, 1e-10) << "L=" << l;
  }
}

TEST(FDistribution, CdfIsIntegralOfDensity) {
  for (std::size_t l : {1u, 2u, 5u, 20u, 100u}) {
    for (double g : {0.0, 0.1, 1.0, 3.0, 10.0, 50.0, 100.0}) {
      const double num = oracle::simpson([&](double t) { return f_pdf(t, l); }, 0.0, g, 20000);
      EXPECT_NEAR(f_cdf(g, l), num, 1e-10) << "L=" << l << " gamma=" << g;
      EXPECT_NEAR(f_cdf(g, l) + f_sf(g, l), 1.0, 1e-15);
    }
  }
}

TEST(FDistribution, LargeLApproachesExponential) {
  EXPECT_NEAR(f_sf(3.0, 1000000), std::exp(-3.0), 1e-5);
}

TEST(FDistribution, RejectsBadArguments) {
  EXPECT_THROW(f_pdf(-0.1, 5), InvalidInput);
  EXPECT_THROW(f_cdf(1.0, 0), InvalidInput);
}

TEST(NoncentralF, ZeroLambdaIsCentral) {
  for (double g : {0.0, 0.5, 4.0}) {
    const Tail t = noncentral_f(g, 0.0, 7);
    EXPECT_DOUBLE_EQ(t.cdf, f_cdf(g, 7));
    EXPECT_DOUBLE_EQ(t.sf, f_sf(g, 7));
  }
}

TEST(NoncentralF, MatchesBoostNoncentralF) {
  // Our variable is (chi2_{2,lambda}/2) / (chi2_{2L}/2L), i.e. F(2, 2L; lambda).
  for (std::size_t l : {1u, 3u, 5u, 20u, 100u}) {
    for (double lambda : {0.01, 0.5, 3.0, 20.0, 150.0}) {
      boost::math::non_central_f_distribution<double> d(2.0, 2.0 * l, lambda);
      for (double g : {0.05, 0.7, 2.0, 6.0, 15.0, 40.0}) {
        const Tail t = noncentral_f(g, lambda, l);
        const double ref_cdf = boost::math::cdf(d, g);
        const double ref_sf = boost::math::cdf(boost::math::complement(d, g));
        EXPECT_NEAR(t.cdf, ref_cdf, 1e-9 * std::max(ref_cdf, 1e-3))
            << "L=" << l << " lambda=" << lambda << " g=" << g;
        EXPECT_NEAR(t.sf, ref_sf, 1e-9 * std::max(ref_sf, 1e-3))
            << "L=" << l << " lambda=" << lambda << " g=" << g;
        EXPECT_NEAR(t.cdf + t.sf, 1.0, 1e-11);
      }
    }
  }
}

TEST(NoncentralF, MonotoneInLambdaAndGamma) {
  double prev = 0.0;
  for (double lambda : {0.0, 1.0, 2.0, 5.0, 10.0, 40.0}) {
    const double s = noncentral_f_sf(3.0, lambda, 10);
    EXPECT_GT(s, prev);
    prev = s;
  }
  prev = 1.0;
  for (double g : {0.1, 1.0, 2.0, 5.0, 9.0}) {
    const double s = noncentral_f_sf(g, 6.0, 10);
    EXPECT_LT(s, prev);
    prev = s;
  }
}

TEST(NoncentralF, HugeLambdaConvergesOrReportsFailure) {
  EXPECT_NO_THROW(noncentral_f(10.0, 5000.0, 50));
  EXPECT_THROW(noncentral_f(10.0, 1e12, 50), NumericError);
}

TEST(Noncentrality, EqualsTwiceSignalPeriodogramOverPsd) {
  // Exact oracle for one sinusoid: lambda_k = 2 |DFT of the noiseless signal|^2 / (N S_k).
  for (std::size_t n : {64u, 250u, 1024u}) {
    const double dt = 60.0;
    const FourierGrid grid = fourier_grid(n, dt);
    std::vector<double> psd(grid.size());
    for (std::size_t i = 0; i < psd.size(); ++i) psd[i] = 0.2 + 0.01 * static_cast<double>(i % 7);
    for (const Sinusoid& c : {Sinusoid{0.1, 0.005, 0.4}, Sinusoid{0.07, 0.00575, -2.0},
                              Sinusoid{0.13, 0.0065, 1.1}, Sinusoid{0.05, 3.0 / (n * dt), 0.7}}) {
      std::vector<double> s(n);
      for (std::size_t j = 0; j < n; ++j) {
        s[j] = c.amplitude * std::sin(2 * std::numbers::pi * c.frequency * dt * (j + 1) + c.phase);
      }
      const auto ps = oracle::direct_periodogram(s);
      const auto lam = noncentrality_lambda(SinusoidSet({c}), NoisePsd(grid, psd), grid);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_NEAR(lam[i], 2.0 * ps[i] / psd[i], 1e-9 * (1.0 + lam[i]))
            << "n=" << n << " f=" << c.frequency << " i=" << i;
      }
    }
  }
}

TEST(Noncentrality, AddsOverSinusoids) {
  // Interference between distinct sinusoids is not part of lambda.
  const FourierGrid grid = fourier_grid(256, 1.0);
  const auto psd = NoisePsd::constant(grid, 0.5);
  const std::vector<Sinusoid> comps{{0.1, 0.1, 0.2}, {0.3, 0.27, 1.0}};
  const auto both = noncentrality_lambda(SinusoidSet(comps), psd, grid);
  const auto a = noncentrality_lambda(SinusoidSet({comps[0]}), psd, grid);
  const auto b = noncentrality_lambda(SinusoidSet({comps[1]}), psd, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(both[i], a[i] + b[i], 1e-14);
}

TEST(Noncentrality, EmptySetIsZero) {
  const FourierGrid g = fourier_grid(32, 1.0);
  EXPECT_TRUE(noncentrality_lambda(SinusoidSet(), NoisePsd::constant(g, 1.0), g).all_zero());
}

TEST(Noncentrality, StandardizedOrdinateFollowsNoncentralF) {
  // White noise with a sine at a fixed bin: the standardized ordinate at the
  // sine's bin follows F(2, 2L; lambda). Kolmogorov-Smirnov at 4000 draws.
  const std::size_t n = 128;
  const std::size_t l = 4;
  const FourierGrid grid = fourier_grid(n, 1.0);
  const SinusoidSet sines({{0.35, 0.1432, 0.3}});
  const auto lam = noncentrality_lambda(sines, NoisePsd::constant(grid, 1.0), grid);
  const std::size_t pos = 17; // nearest bin to 0.1432 * 128 = 18.3
  std::vector<double> samples;
  std::vector<double> sig(n);
  for (std::size_t j = 0; j < n; ++j) sig[j] = 0.35 * std::sin(2 * std::numbers::pi * 0.1432 * (j + 1) + 0.3);
  for (std::uint64_t t = 0; t < 4000; ++t) {
    std::vector<TimeSeries> members;
    for (std::size_t m = 0; m < l; ++m) members.emplace_back(oracle::white(n, t * 100 + m + 1), 1.0);
    auto x = oracle::white(n, t * 100 + 99);
    for (std::size_t j = 0; j < n; ++j) x[j] += sig[j];
    const auto pt = standardized_periodogram(classical_periodogram(TimeSeries(x, 1.0)),
                                             averaged_periodogram(TrainingSet(members)));
    samples.push_back(pt.ordinates()[pos]);
  }
  ASSERT_GT(lam[pos], 3.0);
  const double d = oracle::ks_statistic(samples, [&](double g) { return noncentral_f_cdf(g, lam[pos], l); });
  EXPECT_LT(d, 1.63 / std::sqrt(4000.0));
}
