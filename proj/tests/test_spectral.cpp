#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pgdetect/error.hpp"
#include "pgdetect/spectral.hpp"

using namespace pgdetect;

TEST(ClassicalPeriodogram, MatchesDirectDft) {
  for (std::size_t n : {4u, 6u, 16u, 250u, 1024u}) {
    const auto x = oracle::white(n, 17 + n);
    const auto ref = oracle::direct_periodogram(x);
    const auto p = classical_periodogram(TimeSeries(x, 1.0));
    ASSERT_EQ(p.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      EXPECT_NEAR(p.ordinates()[i], ref[i], 1e-10 * (1.0 + ref[i])) << "n=" << n << " i=" << i;
    }
  }
}

TEST(ClassicalPeriodogram, PureToneOnBinConcentratesEnergy) {
  // a cos at bin k: periodogram = N a^2 / 4 at k, zero elsewhere.
  const std::size_t n = 64;
  const std::size_t k = 5;
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) {
    x[j] = 2.0 * std::cos(2 * std::numbers::pi * static_cast<double>(k * (j + 1)) / n);
  }
  const auto p = classical_periodogram(TimeSeries(x, 1.0));
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_NEAR(p.ordinates()[i], i + 1 == k ? 64.0 : 0.0, 1e-9);
  }
}

TEST(ClassicalPeriodogram, ScalesQuadratically) {
  const auto x = oracle::white(128, 3);
  std::vector<double> y(x);
  for (double& v : y) v *= 3.0;
  const auto p = classical_periodogram(TimeSeries(x, 1.0));
  const auto q = classical_periodogram(TimeSeries(y, 1.0));
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_NEAR(q.ordinates()[i], 9.0 * p.ordinates()[i], 1e-10 * (1 + q.ordinates()[i]));
  }
}

TEST(ClassicalPeriodogram, WhiteNoiseMeanEqualsVariance) {
  // E[P] = sigma^2 for white noise of variance sigma^2.
  const std::size_t n = 256;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto p = classical_periodogram(TimeSeries(oracle::white(n, 1000 + s, 2.0), 1.0));
    for (double v : p.ordinates()) sum += v;
    count += p.size();
  }
  // Mean of 25400 exponential(4) variables: sd 4/sqrt(25400) = 0.025.
  EXPECT_NEAR(sum / static_cast<double>(count), 4.0, 0.1);
}

TEST(AveragedPeriodogram, IsElementwiseMean) {
  std::vector<TimeSeries> members;
  for (int l = 0; l < 7; ++l) members.emplace_back(oracle::white(32, 50 + l), 2.0);
  const TrainingSet t(members);
  const auto avg = averaged_periodogram(t);
  EXPECT_EQ(avg.kind(), PeriodogramKind::Averaged);
  EXPECT_EQ(avg.training_size(), 7u);
  std::vector<double> ref(15, 0.0);
  for (const auto& m : members) {
    const auto p = oracle::direct_periodogram({m.samples().begin(), m.samples().end()});
    for (std::size_t i = 0; i < 15; ++i) ref[i] += p[i] / 7.0;
  }
  for (std::size_t i = 0; i < 15; ++i) EXPECT_NEAR(avg.ordinates()[i], ref[i], 1e-10);
}

TEST(StandardizedPeriodogram, IsRatioAndScaleInvariant) {
  std::vector<TimeSeries> members;
  std::vector<TimeSeries> scaled;
  for (int l = 0; l < 5; ++l) {
    auto x = oracle::white(64, 90 + l);
    members.emplace_back(x, 1.0);
    for (double& v : x) v *= 7.0;
    scaled.emplace_back(x, 1.0);
  }
  auto obs = oracle::white(64, 7);
  const auto p = classical_periodogram(TimeSeries(obs, 1.0));
  const auto pbar = averaged_periodogram(TrainingSet(members));
  const auto pt = standardized_periodogram(p, pbar);
  EXPECT_EQ(pt.kind(), PeriodogramKind::Standardized);
  for (std::size_t i = 0; i < pt.size(); ++i) {
    EXPECT_NEAR(pt.ordinates()[i], p.ordinates()[i] / pbar.ordinates()[i], 1e-12);
  }
  for (double& v : obs) v *= 7.0;
  const auto pt2 = standardized_periodogram(classical_periodogram(TimeSeries(obs, 1.0)),
                                            averaged_periodogram(TrainingSet(scaled)));
  for (std::size_t i = 0; i < pt.size(); ++i) {
    EXPECT_NEAR(pt2.ordinates()[i], pt.ordinates()[i], 1e-10 * (1 + pt.ordinates()[i]));
  }
}

TEST(StandardizedPeriodogram, ZeroTrainingIsDegenerate) {
  const TrainingSet zeros({TimeSeries(std::vector<double>(16, 0.0), 1.0)});
  const auto p = classical_periodogram(TimeSeries(oracle::white(16, 1), 1.0));
  EXPECT_THROW(standardized_periodogram(p, averaged_periodogram(zeros)), DegenerateTraining);
}

TEST(StandardizedPeriodogram, RejectsGridMismatchAndWrongKinds) {
  const TrainingSet t({TimeSeries(oracle::white(16, 2), 1.0)});
  const auto p32 = classical_periodogram(TimeSeries(oracle::white(32, 1), 1.0));
  const auto p16 = classical_periodogram(TimeSeries(oracle::white(16, 1), 1.0));
  EXPECT_THROW(standardized_periodogram(p32, averaged_periodogram(t)), InvalidInput);
  EXPECT_THROW(standardized_periodogram(p16, p16), InvalidInput);
}
