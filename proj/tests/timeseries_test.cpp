#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "arstack/errors.hpp"
#include "arstack/timeseries.hpp"
#include "oracles.hpp"

namespace arstack {
namespace {

const std::vector<double> kAlternating{1, -1, 1, -1, 1, -1, 1, -1};

TEST(Series, RejectsShortAndNonFinite) {
  EXPECT_THROW(Series({1.0}), InvalidArgument);
  EXPECT_THROW(Series({1.0, std::nan("")}), InvalidData);
  EXPECT_THROW(Series({1.0, std::numeric_limits<double>::infinity()}), InvalidData);
  EXPECT_EQ(Series({1.0, 2.0}).size(), 2u);
}

TEST(Autocorrelation, HandComputedValues) {
  auto r = autocorrelation(Series({1, 2, 3}), 1);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_DOUBLE_EQ(r[0], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r[1], 0.0);

  r = autocorrelation(Series({4.25, 4.25, 4.25, 4.25}), 1);
  EXPECT_EQ(r[0], 0.0);
  EXPECT_EQ(r[1], 0.0);

  r = autocorrelation(Series(kAlternating), 1);
  EXPECT_DOUBLE_EQ(r[0], 1.0);
  EXPECT_DOUBLE_EQ(r[1], -7.0 / 8.0);
}

TEST(Autocorrelation, Errors) {
  EXPECT_THROW(autocorrelation(Series({1, 2, 3}), 3), InvalidArgument);
  const std::vector<double> bad{1.0, std::nan("")};
  EXPECT_THROW(autocorrelation(std::span<const double>(bad), 0), InvalidData);
}

TEST(Autocorrelation, BoundedByLagZero) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(3.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(2 + trial % 30);
    for (auto& x : v) x = g(rng);
    const auto r = autocorrelation(Series(v), v.size() - 1);
    EXPECT_GE(r[0], 0.0);
    for (double rk : r) EXPECT_LE(std::abs(rk), r[0] * (1 + 1e-12));
  }
}

TEST(FitYuleWalker, ConstantSeriesGivesZeroModel) {
  const auto m = fit_yule_walker(Series({5, 5, 5, 5, 5}), 1);
  EXPECT_EQ(m.order, 1);
  ASSERT_EQ(m.coefficients.size(), 1u);
  EXPECT_EQ(m.coefficients[0], 0.0);
  EXPECT_EQ(m.mean, 5.0);
  EXPECT_EQ(m.noise_variance, 0.0);
  EXPECT_TRUE(m.is_zero());
}

TEST(FitYuleWalker, AlternatingSeries) {
  const auto m = fit_yule_walker(Series(kAlternating), 1);
  EXPECT_DOUBLE_EQ(m.coefficients[0], 7.0 / 8.0);
  EXPECT_DOUBLE_EQ(m.mean, 0.0);
  // r0 + a r1 = 1 - 49/64
  EXPECT_DOUBLE_EQ(m.noise_variance, 15.0 / 64.0);
}

TEST(FitYuleWalker, OrderPreconditions) {
  EXPECT_THROW(fit_yule_walker(Series({1, 2, 3}), 3), InvalidArgument);
  EXPECT_THROW(fit_yule_walker(Series({1, 2, 3}), 0), InvalidArgument);
  EXPECT_NO_THROW(fit_yule_walker(Series({1, 2, 3}), 2));
}

TEST(FitYuleWalker, NearlyConstantBrightPixelIsDegenerate) {
  // variance ~1e-14 against a floor of 1e-12 * mean^2 = 1e-6
  const auto m = fit_yule_walker(Series({1000.0, 1000.0 + 1e-7, 1000.0, 1000.0}), 1);
  EXPECT_TRUE(m.is_zero());
}

TEST(FitYuleWalker, MonteCarloConsistency) {
  const auto y = oracle::ar1_series(-0.6, 1.0, 10'000, 12345);
  const auto m = fit_yule_walker(Series(y), 1);
  EXPECT_GE(m.coefficients[0], -0.64);
  EXPECT_LE(m.coefficients[0], -0.56);
  EXPECT_NEAR(m.noise_variance, 1.0, 0.05);
}

TEST(FitYuleWalker, MatchesDenseSolve) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> len(0, 12);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int p = 1; p <= 3; ++p) {
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<double> y(static_cast<std::size_t>(p + 2 + len(rng) % (15 - p)));
      y[0] = g(rng);
      for (std::size_t i = 1; i < y.size(); ++i) y[i] = 0.5 * y[i - 1] + g(rng);
      const auto m = fit_yule_walker(Series(y), p);
      const auto ref = oracle::yule_walker_dense(y, static_cast<std::size_t>(p));
      for (int k = 0; k < p; ++k) EXPECT_NEAR(m.coefficients[static_cast<std::size_t>(k)], ref[static_cast<std::size_t>(k)], 1e-9);
    }
  }
}

TEST(Levinson, NoiseVarianceMatchesClosedForm) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> y(12);
    for (auto& v : y) v = g(rng);
    const auto m = fit_yule_walker(Series(y), 3);
    const auto r = oracle::autocov(y, 3);
    double expected = r[0];
    for (int k = 0; k < 3; ++k) expected += m.coefficients[static_cast<std::size_t>(k)] * r[static_cast<std::size_t>(k + 1)];
    EXPECT_NEAR(m.noise_variance, std::max(expected, 0.0), 1e-12);
    EXPECT_GE(m.noise_variance, 0.0);
  }
}

TEST(Levinson, RejectsShortInput) {
  const std::vector<double> r{1.0, 0.5};
  EXPECT_THROW(levinson_durbin(r, 2), InvalidArgument);
  EXPECT_THROW(levinson_durbin(r, 0), InvalidArgument);
}

TEST(Forecast, ZeroModelForecastsMean) {
  const Series s({1, 2, 3});
  const auto m = fit_yule_walker(s, 1);
  // r1 = 0 for this series, so the coefficient is exactly zero.
  EXPECT_EQ(m.coefficients[0], 0.0);
  EXPECT_DOUBLE_EQ(forecast(m, s, 1), 2.0);

  ArModel zero{2, {0.0, 0.0}, -3.5, 0.0};
  for (int h = 1; h < 6; ++h) EXPECT_EQ(forecast(zero, Series({9, -4, 100}), h), -3.5);
}

TEST(Forecast, AlternatingOneStep) {
  const Series s(kAlternating);
  EXPECT_DOUBLE_EQ(forecast(fit_yule_walker(s, 1), s, 1), 7.0 / 8.0);
}

TEST(Forecast, RecursesOnEarlierForecasts) {
  const ArModel m{2, {-0.5, 0.25}, 10.0, 1.0};
  const Series s({10, 11, 13});
  // centred history: ..., 1, 3
  const double y1 = -(-0.5 * 3 + 0.25 * 1);
  const double y2 = -(-0.5 * y1 + 0.25 * 3);
  const double y3 = -(-0.5 * y2 + 0.25 * y1);
  EXPECT_NEAR(forecast(m, s, 1), y1 + 10, 1e-12);
  EXPECT_NEAR(forecast(m, s, 2), y2 + 10, 1e-12);
  EXPECT_NEAR(forecast(m, s, 3), y3 + 10, 1e-12);
}

TEST(Forecast, Errors) {
  const ArModel m{1, {0.5}, 0.0, 1.0};
  EXPECT_THROW(forecast(m, Series({1, 2}), 0), InvalidArgument);
  const ArModel m3{3, {0.1, 0.1, 0.1}, 0.0, 1.0};
  EXPECT_THROW(forecast(m3, Series({1, 2}), 1), InvalidArgument);
}

TEST(Forecast, OneStepEqualsDirectFormula) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(4.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = 1 + trial % 3;
    std::vector<double> y(10);
    for (auto& v : y) v = g(rng);
    const Series s(y);
    const auto m = fit_yule_walker(s, p);
    double direct = 0.0;
    for (int k = 1; k <= p; ++k) direct -= m.coefficients[static_cast<std::size_t>(k - 1)] * (y[y.size() - static_cast<std::size_t>(k)] - m.mean);
    EXPECT_NEAR(forecast(m, s, 1), direct + m.mean, 1e-12);
  }
}

TEST(Properties, ShiftAndScaleInvariance) {
  std::mt19937_64 rng(31337);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> shift(-100.0, 100.0);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 1 + trial % 3;
    std::vector<double> y(16);
    for (auto& v : y) v = g(rng);
    const double c = shift(rng);
    const double alpha = (trial % 2 ? -1.0 : 1.0) * scale(rng);
    std::vector<double> shifted = y, scaled = y;
    for (auto& v : shifted) v += c;
    for (auto& v : scaled) v *= alpha;

    const auto base = fit_yule_walker(Series(y), p);
    const auto sh = fit_yule_walker(Series(shifted), p);
    const auto sc = fit_yule_walker(Series(scaled), p);
    for (int k = 0; k < p; ++k) {
      const auto i = static_cast<std::size_t>(k);
      EXPECT_NEAR(sh.coefficients[i], base.coefficients[i], 1e-9);
      EXPECT_NEAR(sc.coefficients[i], base.coefficients[i], 1e-9);
    }
    EXPECT_NEAR(sc.noise_variance, alpha * alpha * base.noise_variance,
                1e-9 * std::max(1.0, alpha * alpha * base.noise_variance));
  }
}

TEST(Properties, FirstOrderCoefficientIsBounded) {
  std::mt19937_64 rng(8);
  std::exponential_distribution<double> g(0.3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> y(2 + trial % 15);
    for (auto& v : y) v = g(rng);
    EXPECT_LE(std::abs(fit_yule_walker(Series(y), 1).coefficients[0]), 1.0);
  }
}

}  // namespace
}  // namespace arstack
