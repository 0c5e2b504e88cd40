// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "gencep/spectra.hpp"

using namespace gencep;

namespace {

SampleRecord random_record(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  for (auto& x : v) x = cplx{g(eng), g(eng)};
  return SampleRecord::from_complex({n}, v);
}

LagSet all_lags(std::size_t n) {
  std::vector<Lag> ks;
  for (int k = 1; k < static_cast<int>(n); ++k) ks.push_back({k});
  return LagSet(1, ks);
}

double sample_variance(const std::vector<double>& v) {
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace

TEST(Periodogram, ConstantSeries) {
  auto pg = periodogram(SampleRecord::from_real(std::vector<double>(10, 0.7)));
  EXPECT_NEAR(pg.values[0], 10 * 0.49, 1e-12);
  for (std::size_t l = 1; l < 10; ++l) EXPECT_NEAR(pg.values[l], 0.0, 1e-14);
}

TEST(Periodogram, NonNegativeAndMeanIsZeroLagCovariance) {
  auto r = random_record(50, 1);
  auto pg = periodogram(r);
  for (double v : pg.values) EXPECT_GE(v, 0.0);
  const auto c = biased_covariances(r, LagSet(1, {}));
  EXPECT_NEAR(pg.mean(), c[0].real(), 1e-10);
  auto dense = periodogram(r, Shape{128});
  EXPECT_NEAR(dense.mean(), c[0].real(), 1e-10);
}

TEST(Periodogram, DenseGridMatchesCorrelogram) {
  const std::size_t n = 16, k = 33;
  auto r = random_record(n, 2);
  auto pg = periodogram(r, Shape{k});
  auto c = biased_covariances(r, all_lags(n));
  for (std::size_t l = 0; l < k; ++l) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(l) / static_cast<double>(k);
    cplx acc = c.at({0});
    for (int j = 1; j < static_cast<int>(n); ++j)
      acc += c.at({j}) * std::polar(1.0, -j * th) + c.at({-j}) * std::polar(1.0, j * th);
    EXPECT_NEAR(pg.values[l], acc.real(), 1e-10);
    EXPECT_NEAR(acc.imag(), 0.0, 1e-10);
  }
}

TEST(Periodogram, RejectsCoarseDenseGrid) {
  EXPECT_THROW(periodogram(random_record(16, 3), Shape{15}), DomainError);
}

TEST(BiasedCovariances, HandExamples) {
  auto c = biased_covariances(SampleRecord::from_real({1.0, 1.0}), LagSet(1, {{1}}));
  EXPECT_NEAR(c.at({0}).real(), 1.0, 1e-15);
  EXPECT_NEAR(c.at({1}).real(), 0.5, 1e-15);
  EXPECT_NEAR(c.at({-1}).real(), 0.5, 1e-15);

  auto ones = SampleRecord::from_complex({3, 3}, std::vector<cplx>(9, cplx{1.0, 0.0}));
  auto c2 = biased_covariances(ones, LagSet(2, {{1, 1}, {1, -1}}));
  EXPECT_NEAR(c2.at({1, 1}).real(), 4.0 / 9.0, 1e-15);
  EXPECT_NEAR(c2.at({-1, 1}).real(), 4.0 / 9.0, 1e-15);
}

TEST(BiasedCovariances, WhiteNoiseStatistics) {
  auto c = biased_covariances(gen_white_noise({100000}, 1.0, 5), LagSet(1, {{1}}));
  EXPECT_NEAR(c.at({0}).real(), 1.0, 0.05);
  EXPECT_LT(std::abs(c.at({1})), 0.02);
}

TEST(BiasedCovariances, RejectsOutOfRangeLag) {
  EXPECT_THROW(biased_covariances(random_record(4, 1), LagSet(1, {{4}})), DomainError);
}

TEST(BiasedCovariances, HermitianByConstruction) {
  auto c = biased_covariances(random_record(20, 6), LagSet::box(1, 3));
  for (int k = -3; k <= 3; ++k) EXPECT_EQ(c.at({-k}), std::conj(c.at({k})));
  EXPECT_EQ(c.at({0}).imag(), 0.0);
}

TEST(CovariancesFromPeriodogram, ExactRecoveryOneD) {
  const std::size_t n = 32;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto r = random_record(n, seed);
    auto direct = biased_covariances(r, all_lags(n));
    auto via = covariances_from_periodogram(periodogram(r, Shape{2 * n - 1}), all_lags(n));
    for (std::size_t i = 0; i < direct.size(); ++i) EXPECT_LE(std::abs(direct[i] - via[i]), 1e-9);
  }
}

TEST(CovariancesFromPeriodogram, ExactRecoveryTwoD) {
  std::mt19937_64 eng(4);
  std::normal_distribution<double> g;
  std::vector<cplx> v(5 * 4);
  for (auto& x : v) x = g(eng);
  auto r = SampleRecord::from_complex({5, 4}, v);
  const auto lags = LagSet::box({4, 3});
  auto direct = biased_covariances(r, lags);
  auto via = covariances_from_periodogram(periodogram(r, Shape{9, 7}), lags);
  for (std::size_t i = 0; i < direct.size(); ++i) EXPECT_LE(std::abs(direct[i] - via[i]), 1e-9);
}

TEST(CovariancesFromPeriodogram, ConstantSeriesAndBoundary) {
  auto r = SampleRecord::from_real(std::vector<double>(8, 2.0));
  auto c = covariances_from_periodogram(periodogram(r, Shape{15}), LagSet::box(1, 0));
  EXPECT_NEAR(c.at({0}).real(), 4.0, 1e-12);
  EXPECT_THROW(covariances_from_periodogram(periodogram(r, Shape{14}), LagSet::box(1, 1)), DomainError);
}

TEST(WindowedPeriodogram, RectangularEqualsPeriodogram) {
  auto r = random_record(40, 7);
  auto a = windowed_periodogram(r, Window::rectangular);
  auto b = periodogram(r);
  for (std::size_t l = 0; l < 40; ++l) EXPECT_NEAR(a.values[l], b.values[l], 1e-10);
  EXPECT_FALSE(a.windowed);
}

TEST(WindowedPeriodogram, BartlettSmoothsWhiteNoise) {
  auto r = gen_white_noise({4096}, 1.0, 8);
  EXPECT_LT(sample_variance(windowed_periodogram(r, Window::bartlett).values), sample_variance(periodogram(r).values));
}

TEST(WindowedPeriodogram, WeightsAndNames) {
  EXPECT_EQ(window_weight(Window::parzen, 0, 10.0), 1.0);
  EXPECT_EQ(window_weight(Window::bartlett, 0, 10.0), 1.0);
  EXPECT_EQ(window_weight(Window::bartlett, 10, 10.0), 0.0);
  EXPECT_EQ(parse_window("parzen"), Window::parzen);
  EXPECT_THROW(parse_window("hann"), DomainError);
}
