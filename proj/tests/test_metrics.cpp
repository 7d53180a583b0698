#include "oracles.hpp"

#include "silcorr/error.hpp"
#include "silcorr/metrics.hpp"
#include "silcorr/special_functions.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace silcorr;
using namespace silcorr::metrics;

namespace
{

double r_of(const std::vector<double> & m, const std::vector<double> & g) { return pearson_r({m, g}); }
double e_of(const std::vector<double> & m, const std::vector<double> & g) { return rrmse({m, g}); }

ErrorCode code_of(auto && fn)
{
  try {
    fn();
  } catch (const Error & e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::EmptyInput;
}

std::vector<double> random_series(std::mt19937_64 & rng, std::size_t n)
{
  std::normal_distribution<double> d(5.0, 3.0);
  std::vector<double> v(n);
  for (auto & x : v) x = d(rng);
  return v;
}

}  // namespace

TEST(Pearson, HandEvaluatedExample)
{
  // 3 / (sqrt(2) * sqrt(42/9))
  EXPECT_NEAR(r_of({1, 2, 3}, {1, 2, 4}), 3.0 / (std::sqrt(2.0) * std::sqrt(42.0 / 9.0)), 1e-15);
  EXPECT_NEAR(r_of({1, 2, 3}, {1, 2, 4}), 0.98198, 1e-5);
}

TEST(Pearson, SelfAndNegated)
{
  std::mt19937_64 rng(1);
  const auto m = random_series(rng, 300);
  std::vector<double> neg(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) neg[i] = 7.0 - m[i];
  EXPECT_NEAR(r_of(m, m), 1.0, 1e-12);
  EXPECT_NEAR(r_of(m, neg), -1.0, 1e-12);
}

TEST(Pearson, ZeroVariance)
{
  EXPECT_EQ(code_of([] { r_of({2, 2, 2}, {1, 2, 3}); }), ErrorCode::ZeroVariance);
  EXPECT_EQ(code_of([] { r_of({1, 2, 3}, {5, 5, 5}); }), ErrorCode::ZeroVariance);
}

TEST(Pearson, InputChecks)
{
  EXPECT_EQ(code_of([] { r_of({1, 2}, {1, 2}); }), ErrorCode::DegenerateSampleSize);
  EXPECT_EQ(code_of([] { r_of({1, 2, 3}, {1, 2}); }), ErrorCode::DegenerateSampleSize);
  EXPECT_EQ(code_of([] { r_of({1, NAN, 3}, {1, 2, 3}); }), ErrorCode::EmptyInput);
}

TEST(Pearson, OracleEquivalence)
{
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> len(3, 500);
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = len(rng);
    const auto m = random_series(rng, n);
    auto g = random_series(rng, n);
    for (std::size_t i = 0; i < n; ++i) g[i] += 0.7 * m[i];
    EXPECT_NEAR(r_of(m, g), oracle::pearson(m, g), 1e-12);
    EXPECT_NEAR(e_of(m, g), oracle::rrmse(m, g), 1e-12);
  }
}

TEST(Pearson, ScaleShiftInvariance)
{
  std::mt19937_64 rng(3);
  const auto m = random_series(rng, 100);
  const auto g = random_series(rng, 100);
  const double r = r_of(m, g);
  for (const auto [a, b, c, d] : {std::array{2.0, 1.0, 3.0, -4.0}, std::array{-0.5, 9.0, 4.0, 0.0},
                                  std::array{1e3, -7.0, -2.0, 1.0}}) {
    std::vector<double> m2(m.size());
    std::vector<double> g2(g.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      m2[i] = a * m[i] + b;
      g2[i] = c * g[i] + d;
    }
    EXPECT_NEAR(r_of(m2, g2), (a * c > 0 ? 1.0 : -1.0) * r, 1e-12);
  }
}

TEST(Pearson, Symmetry)
{
  std::mt19937_64 rng(4);
  const auto m = random_series(rng, 64);
  const auto g = random_series(rng, 64);
  EXPECT_NEAR(r_of(m, g), r_of(g, m), 1e-15);
}

TEST(PValue, Examples)
{
  EXPECT_EQ(p_value(0.0, 10), 1.0);
  EXPECT_EQ(p_value(0.0, 1000), 1.0);
  EXPECT_NEAR(p_value(0.632, 10), 0.05, 0.002);
  EXPECT_LT(p_value(0.999999, 100), 1e-12);
  EXPECT_EQ(p_value(1.0, 10), 0.0);
  EXPECT_EQ(code_of([] { p_value(0.5, 2); }), ErrorCode::DegenerateSampleSize);
}

TEST(PValue, CriticalValueTable)
{
  // Two-tailed 5% critical t for df = 8 is 2.306.
  const double t = 2.306;
  const double r = t / std::sqrt(t * t + 8.0);
  EXPECT_NEAR(p_value(r, 10), 0.05, 1e-4);
}

TEST(PValue, MatchesBoost)
{
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ur(-0.999, 0.999);
  std::uniform_int_distribution<std::size_t> un(3, 2000);
  for (int k = 0; k < 500; ++k) {
    const double r = ur(rng);
    const std::size_t n = un(rng);
    const double expected = oracle::p_value(r, n);
    EXPECT_NEAR(p_value(r, n), expected, 1e-10 * std::max(1.0, expected)) << r << " " << n;
  }
}

TEST(PValue, Monotone)
{
  double prev = 1.0;
  for (double r = 0.05; r < 1.0; r += 0.05) {
    const double p = p_value(r, 20);
    EXPECT_LT(p, prev);
    EXPECT_EQ(p, p_value(-r, 20));
    prev = p;
  }
  prev = 1.0;
  for (std::size_t n = 3; n < 200; n += 7) {
    const double p = p_value(0.3, n);
    EXPECT_LT(p, prev);
    prev = p;
  }
}

TEST(IncompleteBeta, MatchesBoost)
{
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ua(0.1, 500.0);
  std::uniform_real_distribution<double> ux(0.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    const double a = ua(rng);
    const double b = k % 2 ? 0.5 : ua(rng) / 50.0;
    const double x = ux(rng);
    EXPECT_NEAR(special::incomplete_beta(a, b, x), oracle::ibeta(a, b, x), 1e-10) << a << " " << b << " " << x;
  }
  EXPECT_EQ(special::incomplete_beta(2.0, 3.0, 0.0), 0.0);
  EXPECT_EQ(special::incomplete_beta(2.0, 3.0, 1.0), 1.0);
}

TEST(Rrmse, Examples)
{
  EXPECT_EQ(e_of({1, 2, 3}, {1, 2, 3}), 0.0);
  EXPECT_NEAR(e_of({1, 2, 3}, {0, 0, 0}), 1.0, 1e-15);
  EXPECT_NEAR(e_of({1, 1, 1, 1}, {1.1, 0.9, 1.1, 0.9}), 0.10, 1e-12);
  EXPECT_EQ(code_of([] { e_of({0, 0, 0}, {1, 2, 3}); }), ErrorCode::ZeroRMS);
}

TEST(Rrmse, NotSymmetric)
{
  const std::vector<double> m{1, 2, 3};
  const std::vector<double> g{2, 4, 6};
  EXPECT_NE(e_of(m, g), e_of(g, m));
  EXPECT_NEAR(e_of(m, g), 1.0, 1e-12);
  EXPECT_NEAR(e_of(g, m), 0.5, 1e-12);
}

TEST(Bands, Thresholds)
{
  EXPECT_EQ(rate_correlation(1.0), CorrelationBand::High);
  EXPECT_EQ(rate_correlation(0.7), CorrelationBand::High);
  EXPECT_EQ(rate_correlation(0.65), CorrelationBand::Moderate);
  EXPECT_EQ(rate_correlation(0.5), CorrelationBand::Moderate);
  EXPECT_EQ(rate_correlation(0.3), CorrelationBand::Low);
  EXPECT_EQ(rate_correlation(0.1), CorrelationBand::Weak);
  EXPECT_EQ(rate_correlation(0.099), CorrelationBand::NotPositive);
  EXPECT_EQ(rate_correlation(-0.9), CorrelationBand::NotPositive);

  EXPECT_EQ(rate_accuracy(0.0), AccuracyBand::Excellent);
  EXPECT_EQ(rate_accuracy(0.0999), AccuracyBand::Excellent);
  EXPECT_EQ(rate_accuracy(0.10), AccuracyBand::Good);
  EXPECT_EQ(rate_accuracy(0.20), AccuracyBand::Fair);
  EXPECT_EQ(rate_accuracy(0.30), AccuracyBand::Poor);
  EXPECT_EQ(rate_accuracy(2.5), AccuracyBand::Poor);
}

TEST(Bands, ReferencePairs)
{
  const auto a = rate(0.99, 0.0458);
  EXPECT_EQ(a.r_band, CorrelationBand::High);
  EXPECT_EQ(a.rrmse_band, AccuracyBand::Excellent);
  const auto b = rate(0.79, 0.4426);
  EXPECT_EQ(b.r_band, CorrelationBand::High);
  EXPECT_EQ(b.rrmse_band, AccuracyBand::Poor);
}

TEST(Bands, StringRoundTrip)
{
  for (auto b : {CorrelationBand::High, CorrelationBand::Moderate, CorrelationBand::Low, CorrelationBand::Weak,
                 CorrelationBand::NotPositive}) {
    EXPECT_EQ(correlation_band_from_string(to_string(b)), b);
  }
  for (auto b : {AccuracyBand::Excellent, AccuracyBand::Good, AccuracyBand::Fair, AccuracyBand::Poor}) {
    EXPECT_EQ(accuracy_band_from_string(to_string(b)), b);
  }
}

TEST(Evaluate, FullResult)
{
  const std::vector<double> m{1, 2, 3, 4, 5};
  const std::vector<double> g{1.1, 1.9, 3.2, 3.8, 5.1};
  const auto r = evaluate({m, g});
  EXPECT_EQ(r.n, 5u);
  ASSERT_TRUE(r.r && r.p_value && r.rrmse);
  EXPECT_EQ(r.r_band, CorrelationBand::High);
  EXPECT_EQ(r.rrmse_band, AccuracyBand::Excellent);
  EXPECT_TRUE(r.significant);

  const std::vector<double> flat{2, 2, 2};
  const auto z = evaluate({flat, std::vector<double>{1, 2, 3}});
  EXPECT_FALSE(z.r.has_value());
  EXPECT_FALSE(z.r_band.has_value());
  EXPECT_TRUE(z.rrmse.has_value());
  EXPECT_FALSE(z.significant);
}
