#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pgdetect/detectors.hpp"
#include "pgdetect/error.hpp"

using namespace pgdetect;

namespace {

PeriodogramVec classical(std::vector<double> v) {
  const FourierGrid g = fourier_grid(2 * (v.size() + 1), 1.0);
  return {g, std::move(v), PeriodogramKind::Classical};
}

PeriodogramVec standardized(std::vector<double> v) {
  const FourierGrid g = fourier_grid(2 * (v.size() + 1), 1.0);
  return {g, std::move(v), PeriodogramKind::Standardized, 5};
}

// Fisher's exact law of max/sum for m i.i.d. exponential ordinates.
double fisher_exact_sf(double x, std::size_t m) {
  double s = 0.0;
  for (std::size_t j = 1; j <= m && j * x < 1.0; ++j) {
    const double c = std::exp(std::lgamma(m + 1.0) - std::lgamma(j + 1.0) - std::lgamma(m - j + 1.0));
    s += (j % 2 ? 1.0 : -1.0) * c * std::pow(1.0 - static_cast<double>(j) * x, m - 1.0);
  }
  return s;
}

} // namespace

TEST(OrderStatistics, SortedAndStable) {
  const auto s = order_statistics(std::vector<double>{3, 1, 2, 1});
  EXPECT_EQ(s, (std::vector<double>{1, 1, 2, 3}));
  EXPECT_THROW(order_statistics(std::vector<double>{}), InvalidInput);
}

TEST(Argmax, LowestPositionOnTies) {
  EXPECT_EQ(argmax_position(std::vector<double>{1, 5, 2, 5}), 1u);
}

TEST(Fisher, MaxOverSum) {
  EXPECT_DOUBLE_EQ(fisher_stat(classical({1, 2, 7})), 0.7);
  EXPECT_THROW(fisher_stat(classical({0, 0, 0})), DegenerateInput);
  EXPECT_THROW(fisher_stat(standardized({1, 2, 7})), InvalidInput);
}

TEST(Fisher, WhiteNoiseMatchesExactLaw) {
  const std::size_t n = 64; // 31 ordinates
  std::vector<double> g;
  for (std::uint64_t t = 0; t < 3000; ++t) {
    g.push_back(fisher_stat(classical_periodogram(TimeSeries(oracle::white(n, 7000 + t), 1.0))));
  }
  const double d = oracle::ks_statistic(g, [](double x) { return 1.0 - fisher_exact_sf(x, 31); });
  EXPECT_LT(d, 1.63 / std::sqrt(3000.0));
}

TEST(RobustFisher, FactorAndStatistic) {
  const std::size_t eta = 10;
  const std::size_t nc = 2;
  const double r = 0.8;
  const double b = 1.0 + (1.0 - r) * std::log(1.0 - r) / r;
  EXPECT_NEAR(robust_fisher_factor(eta, nc), b * 10 * r, 1e-14);
  const auto p = classical({1, 2, 3, 4, 5, 6, 7, 8, 9, 30});
  EXPECT_NEAR(robust_fisher_stat(p, nc), b * 8.0 * 30.0 / 36.0, 1e-12);
  EXPECT_THROW(robust_fisher_stat(p, 10), InvalidInput);
  EXPECT_THROW(robust_fisher_stat(p, 0), InvalidInput);
}

TEST(Chiu, NcThLargestOverTrimmedSum) {
  const auto p = classical({4, 1, 9, 2, 8, 3});
  // sorted 1 2 3 4 8 9; n_c = 2: 8 / (1+2+3+4)
  EXPECT_DOUBLE_EQ(chiu_stat(p, 2), 0.8);
  EXPECT_DOUBLE_EQ(chiu_stat(p, 1), 9.0 / 18.0);
}

TEST(TTilde, MaxAndNcThLargest) {
  const auto p = standardized({4, 1, 9, 2, 8, 3});
  EXPECT_DOUBLE_EQ(t_tilde(p), 9.0);
  EXPECT_DOUBLE_EQ(t_tilde_nc(p, 1), 9.0);
  EXPECT_DOUBLE_EQ(t_tilde_nc(p, 3), 4.0);
  EXPECT_DOUBLE_EQ(t_tilde_nc(p, 6), 1.0);
  EXPECT_THROW(t_tilde_nc(p, 7), InvalidInput);
  EXPECT_DOUBLE_EQ(t_tilde_fisher(p), 9.0 / 27.0);
  EXPECT_THROW(t_tilde(classical({1, 2})), InvalidInput);
}

TEST(Evaluate, DispatchesAndReportsFourierIndex) {
  const auto pc = classical({1, 7, 3});
  const auto ps = standardized({2, 1, 5});
  const Evaluation f = evaluate(TestKind::fisher(), &pc, nullptr);
  EXPECT_DOUBLE_EQ(f.statistic, 7.0 / 11.0);
  EXPECT_EQ(f.argmax_index, 2u);
  const Evaluation t = evaluate(TestKind::ttilde(), &pc, &ps);
  EXPECT_DOUBLE_EQ(t.statistic, 5.0);
  EXPECT_EQ(t.argmax_index, 3u);
  EXPECT_THROW(evaluate(TestKind::ttilde(), &pc, nullptr), InvalidInput);
}

TEST(Decide, StrictInequalityAndAnalyticPfa) {
  const auto r = decide(TestKind::ttilde(), 5.0, 5.0, 1, 10, 100);
  EXPECT_EQ(r.decision, Decision::H0);
  ASSERT_TRUE(r.analytic_pfa.has_value());
  EXPECT_NEAR(*r.analytic_pfa, pfa_t_tilde(5.0, 10, 100), 1e-15);
  EXPECT_EQ(decide(TestKind::fisher(), 0.51, 0.5, 1).decision, Decision::H1);
  EXPECT_FALSE(decide(TestKind::fisher(), 0.51, 0.5, 1).analytic_pfa.has_value());
  EXPECT_THROW(decide(TestKind::ttilde(), 1.0, 2.0, 1), InvalidInput);
}

TEST(TestKind, NamesParseAndValidate) {
  EXPECT_EQ(TestKind::chiu(5).name(), "chiu(5)");
  EXPECT_EQ(TestKind::ttilde().name(), "ttilde");
  EXPECT_EQ(TestKind::parse_family("ttilde_nc"), TestFamily::TTildeNc);
  EXPECT_THROW(TestKind::parse_family("bogus"), InvalidInput);
  EXPECT_THROW(TestKind::ttilde_nc(12).validate(11), InvalidInput);
  EXPECT_NO_THROW(TestKind::ttilde_nc(11).validate(11));
  EXPECT_THROW(TestKind::chiu(11).validate(11), InvalidInput);
}
