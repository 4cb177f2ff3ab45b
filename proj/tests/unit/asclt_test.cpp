#include <seqclt/asclt.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <gtest/gtest.h>

namespace seqclt {
namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

double harmonic_number(std::uint64_t n) {
  double s = 0.0;
  for (std::uint64_t k = n; k >= 1; --k) s += 1.0 / static_cast<double>(k);
  return s;
}

TEST(Weights, TelescopingNormalizer) {
  for (std::uint64_t n : {1, 2, 10, 1000, 1'000'000})
    EXPECT_NEAR(summed_log_increments(n) / std::log1p(static_cast<double>(n)), 1.0, 1e-12) << n;
  const WeightSeq dk = WeightSeq::log_increment();
  for (std::uint64_t k = 1; k < 1000; ++k) {
    EXPECT_GT(dk.weight(k), dk.weight(k + 1));
    EXPECT_GT(dk.weight(k + 1), 0.0);
  }
  EXPECT_EQ(WeightSeq::harmonic().normalizer(100), std::log(100.0));
}

TEST(Estimate, ConstantSources) {
  const double xs[] = {0.0};
  BitStream ones(SourceSpec::constant(true));
  EXPECT_EQ(asclt_estimate(ones, 1000, xs, WeightSeq::harmonic())[0], 0.0);
  BitStream zeros(SourceSpec::constant(false));
  EXPECT_NEAR(asclt_estimate(zeros, 1000, xs, WeightSeq::harmonic())[0], harmonic_number(1000) / std::log(1000.0),
              1e-13);
  zeros.reset();
  EXPECT_NEAR(asclt_estimate(zeros, 1000, xs, WeightSeq::log_increment())[0], 1.0, 1e-12);
}

TEST(Estimate, MonotoneInThresholdAndBounded) {
  const double xs[] = {-2.0, -1.0, -0.5, 0.0, 0.3, 1.0, 2.5};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    BitStream s(SourceSpec::prng(seed));
    AscltEstimator est(std::vector<double>(std::begin(xs), std::end(xs)), WeightSeq::harmonic());
    est.consume(s, 50'000);
    const auto e = est.estimates();
    EXPECT_TRUE(std::is_sorted(e.begin(), e.end()));
    EXPECT_GE(e.front(), 0.0);
    EXPECT_LE(e.back(), est.total_weight() / std::log(50'000.0) + 1e-15);
    EXPECT_EQ(std::abs(est.running_sum()) % 2, 0);
  }
}

TEST(Estimate, NeedsTwoSteps) {
  BitStream s(SourceSpec::prng(1));
  const double xs[] = {0.0};
  EXPECT_THROW(asclt_estimate(s, 1, xs, WeightSeq::harmonic()), std::domain_error);
}

TEST(WeightEquivalence, ConstantZerosGapIsHarmonicExcess) {
  BitStream s(SourceSpec::constant(false));
  const std::uint64_t n = 10'000;
  const WeightComparison c = weight_equivalence_check(s, n, 0.0);
  EXPECT_NEAR(c.log_increment, 1.0, 1e-12);
  EXPECT_NEAR(c.difference, (harmonic_number(n) - std::log(double(n))) / std::log(double(n)), 1e-12);
  EXPECT_NEAR(c.difference, (kEulerGamma + 0.5 / n) / std::log(double(n)), 1e-6);
}

TEST(WeightEquivalence, GapShrinksAlongAPath) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    std::vector<double> gaps;
    for (std::uint64_t n : {1'000, 10'000, 100'000, 1'000'000}) {
      BitStream s(SourceSpec::prng(seed));
      gaps.push_back(std::fabs(weight_equivalence_check(s, n, 0.0).difference));
    }
    EXPECT_LE(gaps.back(), gaps.front()) << seed;
  }
  BitStream tiny(SourceSpec::prng(1));
  EXPECT_TRUE(std::isfinite(weight_equivalence_check(tiny, 2, 0.0).difference));
}

// Minimality checked in 50-digit decimal arithmetic, independent of the
// binary-float search inside subsequence().
TEST(Subsequence, MinimalIndices) {
  using Dec = boost::multiprecision::cpp_dec_float_50;
  for (double a : {1.5, 2.0}) {
    const unsigned limit = subsequence_limit(a);
    const auto ns = subsequence(a, limit);
    ASSERT_EQ(ns.size(), limit);
    Dec target = 1;
    for (unsigned k = 1; k <= limit; ++k) {
      target *= Dec(a);
      const std::uint64_t n = ns[k - 1];
      EXPECT_GE(boost::multiprecision::log(Dec(n) + 1), target) << a << " k=" << k;
      EXPECT_LT(boost::multiprecision::log(Dec(n)), target) << a << " k=" << k;
    }
    EXPECT_THROW(subsequence(a, limit + 1), std::overflow_error);
  }
  const auto two = subsequence(2.0, 3);
  EXPECT_EQ(two[0], 7U);
  EXPECT_EQ(two[2], 2980U);
  EXPECT_EQ(subsequence_limit(2.0), 5U);
  EXPECT_THROW(subsequence(1.0, 1), std::domain_error);
  EXPECT_THROW(subsequence(2.5, 1), std::domain_error);
}

TestFunction power_function(unsigned m) {
  return {"pow" + std::to_string(m), [m](double x) { return std::pow(x, m); }, 0.0, 0.0};
}

TEST(BinomialExpectation, HandExamples) {
  EXPECT_EQ(binomial_expectation(clip_function(), 1), 0.0);
  EXPECT_EQ(binomial_expectation(clip_function(), 4), 0.0);
  const TestFunction clipped_square{"sq4", [](double x) { return std::min(x * x, 4.0); }, 4.0, 0.0};
  EXPECT_NEAR(binomial_expectation(clipped_square, 4), 1.0, 1e-15);
  for (std::uint64_t k : {1, 2, 3, 999, 1'000'000}) EXPECT_EQ(binomial_expectation(constant_function(1.0), k), 1.0);
}

// Odd functions cancel under the symmetric binomial law.
TEST(BinomialExpectation, OddFunctionsVanish) {
  const TestFunction odd{"odd", [](double x) { return std::sin(x) + std::clamp(x, -1.0, 1.0); }, 2.0, 2.0};
  for (std::uint64_t k = 1; k <= 2000; k += 37) EXPECT_NEAR(binomial_expectation(odd, k), 0.0, 1e-10) << k;
  EXPECT_NEAR(binomial_expectation(odd, 1'000'000), 0.0, 1e-10);
}

// E[Y^2] = 1 and E[Y^4] = 3 - 2/k exactly for Y = S_k / sqrt(k).
TEST(BinomialExpectation, PolynomialMoments) {
  for (std::uint64_t k : {1, 2, 5, 64, 1001, 100'000, 1'000'000}) {
    EXPECT_NEAR(binomial_expectation(power_function(2), k), 1.0, 1e-10) << k;
    EXPECT_NEAR(binomial_expectation(power_function(4), k), 3.0 - 2.0 / k, 1e-10) << k;
  }
  EXPECT_THROW(binomial_expectation(clip_function(), 0), std::out_of_range);
  EXPECT_THROW(binomial_expectation(clip_function(), 1'000'001), std::out_of_range);
}

TEST(TnStatistic, ConstantOnesTwoSteps) {
  // Y_1 = 1, Y_2 = sqrt(2); clip gives 1 both times and E f(Y_k) = 0, so T_2 = (d_1 + d_2)/D_2 = 1.
  BitStream s(SourceSpec::constant(true));
  EXPECT_NEAR(tn_statistic(s, 2, clip_function()), 1.0, 1e-15);
}

TEST(TnStatistic, ConstantFunctionIsExactlyZero) {
  for (const SourceSpec& spec : {SourceSpec::prng(3), SourceSpec::constant(true), SourceSpec::champernowne()}) {
    BitStream s(spec);
    EXPECT_EQ(tn_statistic(s, 5000, constant_function(2.5)), 0.0);
  }
}

TEST(TnStatistic, CacheMustMatchFunction) {
  const ExpectationCache cache(clip_function(), 100);
  BitStream s(SourceSpec::prng(1));
  EXPECT_THROW(tn_statistic(s, 50, smoothed_step(0.0), WeightSeq::log_increment(), cache), std::invalid_argument);
  EXPECT_THROW(tn_statistic(s, 200, clip_function(), WeightSeq::log_increment(), cache), std::out_of_range);
}

TEST(TnStatistic, CenteredOverSeeds) {
  const std::uint64_t n = 10'000;
  const TestFunction f = clip_function();
  const ExpectationCache cache(f, n);
  std::vector<double> ts;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    BitStream s(SourceSpec::prng(seed));
    const double t = tn_statistic(s, n, f, WeightSeq::log_increment(), cache);
    EXPECT_LE(std::fabs(t), 2.0 * f.bound);
    ts.push_back(t);
  }
  const double mean = std::accumulate(ts.begin(), ts.end(), 0.0) / ts.size();
  double var = 0.0;
  for (double t : ts) var += (t - mean) * (t - mean);
  var /= ts.size() - 1;
  EXPECT_LE(std::fabs(mean), 3.0 * std::sqrt(var / ts.size()));
}

TEST(TestFunctions, DocumentedConstantsHoldOnProbes) {
  for (const TestFunction& f : {clip_function(), smoothed_step(0.0), smoothed_step(-1.0), constant_function(-2.0)}) {
    double prev_x = -6.0;
    double prev_f = f(prev_x);
    for (double x = -6.0; x <= 6.0; x += 0.01) {
      const double v = f(x);
      EXPECT_LE(std::fabs(v), f.bound + 1e-15) << f.id;
      if (x > prev_x) EXPECT_LE(std::fabs(v - prev_f), f.lipschitz * (x - prev_x) + 1e-12) << f.id;
      prev_x = x;
      prev_f = v;
    }
  }
}

TEST(VarianceStudy, ConstantFunctionGivesZeros) {
  std::vector<std::uint64_t> seeds(100);
  std::iota(seeds.begin(), seeds.end(), 1);
  const std::uint64_t ns[] = {100, 1000};
  const VarianceStudy st = variance_study(seeds, ns, constant_function(1.0));
  for (const auto& r : st.rows) {
    EXPECT_EQ(r.mean_tn2, 0.0);
    EXPECT_FALSE(r.flag);
  }
}

TEST(VarianceStudy, ShapeAndValidation) {
  std::vector<std::uint64_t> seeds(200);
  std::iota(seeds.begin(), seeds.end(), 1);
  const std::uint64_t ns[] = {100, 1000, 10'000};
  const VarianceStudy st = variance_study(seeds, ns, clip_function());
  ASSERT_EQ(st.rows.size(), 3U);
  EXPECT_GT(st.rows[0].mean_tn2, st.rows[1].mean_tn2);
  EXPECT_GT(st.rows[1].mean_tn2, st.rows[2].mean_tn2);
  EXPECT_DOUBLE_EQ(st.rows[0].bound, st.rows[0].mean_tn2);
  for (const auto& r : st.rows) EXPECT_FALSE(r.flag);

  const std::vector<std::uint64_t> few(99, 1);
  EXPECT_THROW(variance_study(few, ns, clip_function()), std::invalid_argument);
  const std::uint64_t small[] = {50, 1000};
  EXPECT_THROW(variance_study(seeds, small, clip_function()), std::invalid_argument);
  const std::uint64_t unsorted[] = {1000, 100};
  EXPECT_THROW(variance_study(seeds, unsorted, clip_function()), std::invalid_argument);
}

}  // namespace
}  // namespace seqclt
