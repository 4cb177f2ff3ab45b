#include <seqclt/slln_bounds.hpp>

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

namespace seqclt {
namespace {

TEST(TailBound, ConstantVarianceExample) {
  // 4/eps^2 * (sigma^2/M + D_{M+1}) with D_{M+1} <= sigma^2/M: 400 * 0.002.
  const auto s = VarianceSpec::constant(1.0);
  EXPECT_NEAR(tail_bound(s, 0.1, 1000), 0.8, 1e-12);
  const Interval iv = tail_bound_interval(s, 0.1, 1000);
  EXPECT_NEAR(iv.lo, 400.0 * (0.001 + 1.0 / 1001.0), 1e-12);
  EXPECT_LE(iv.lo, iv.hi);
}

TEST(TailBound, EnclosesTheTruncatedSum) {
  // D_{M+1} for sigma^2 = 1 lies in [P + 1/(K+1), P + 1/K] with P the sum over M < k <= K.
  const std::uint64_t M = 50, K = 1'000'000;
  double partial = 0.0;
  for (std::uint64_t k = K; k > M; --k) partial += 1.0 / (double(k) * double(k));
  const double scale = 4.0 / (0.2 * 0.2);
  const Interval iv = tail_bound_interval(VarianceSpec::constant(1.0), 0.2, M);
  EXPECT_LE(iv.lo, scale * (1.0 / M + partial + 1.0 / K));
  EXPECT_GE(iv.hi, scale * (1.0 / M + partial + 1.0 / (K + 1)));
}

TEST(TailBound, EpsilonScaling) {
  const auto s = VarianceSpec::constant(2.5);
  const double ref = tail_bound(s, 1.0, 4096);
  for (double eps : {1e-6, 1e-3, 0.0371, 0.5, 3.0}) {
    const double scaled = tail_bound(s, eps, 4096) * eps * eps;
    EXPECT_NEAR(scaled / ref, 1.0, 1e-12) << eps;
  }
}

TEST(TailBound, NonIncreasingInM) {
  const auto s = VarianceSpec::constant(1.0);
  double prev = tail_bound(s, 0.3, 1);
  for (std::uint64_t M = 2; M <= (1ULL << 40); M *= 2) {
    const double b = tail_bound(s, 0.3, M);
    EXPECT_LE(b, prev) << M;
    prev = b;
  }
}

TEST(TailBound, Errors) {
  const auto s = VarianceSpec::constant(1.0);
  EXPECT_THROW(tail_bound(s, 0.0, 10), std::domain_error);
  EXPECT_THROW(tail_bound(s, -1.0, 10), std::domain_error);
  EXPECT_THROW(tail_bound(s, 0.1, 0), std::invalid_argument);
  EXPECT_THROW(VarianceSpec::constant(-1.0), std::invalid_argument);
}

TEST(VarianceTable, AgreesWithConstantWhereItShould) {
  const auto c = VarianceSpec::constant(1.0);
  const auto t = VarianceSpec::table(std::vector<double>(100, 1.0));
  for (std::uint64_t M : {1, 10, 64, 100, 1000}) {
    const Interval a = tail_bound_interval(c, 0.25, M);
    const Interval b = tail_bound_interval(t, 0.25, M);
    // Both enclose the same true value.
    EXPECT_LE(b.lo, a.hi) << M;
    EXPECT_LE(a.lo, b.hi) << M;
    EXPECT_LE(b.hi, a.hi * (1 + 1e-12)) << M;
  }
}

TEST(VarianceTable, TailSupremumCoversUnlistedIndices) {
  const auto t = VarianceSpec::table({1.0, 1.0}, 4.0);
  EXPECT_EQ(t.variance(2), 1.0);
  EXPECT_EQ(t.variance(3), 4.0);
  EXPECT_GT(tail_bound(t, 0.5, 8), tail_bound(VarianceSpec::constant(1.0), 0.5, 8));
}

// For sigma^2 = 1 the bound is 8 / (eps^2 M) with eps = 2^-l, so the smallest
// power of two beating 2^-(n+l) is 2^(4 + 3l + n).
TEST(FindM, ClosedFormForUnitVariance) {
  const auto s = VarianceSpec::constant(1.0);
  EXPECT_EQ(find_M(s, 1, 1), 256U);
  EXPECT_EQ(find_M(s, 1, 2), 2048U);
  for (unsigned n = 1; n <= 3; ++n)
    for (unsigned l = 1; l <= 8; ++l) EXPECT_EQ(find_M(s, n, l), 1ULL << (4 + 3 * l + n)) << n << "," << l;
}

TEST(FindM, MonotoneInLevelAndVariance) {
  for (unsigned l = 1; l <= 5; ++l) {
    EXPECT_LE(find_M(VarianceSpec::constant(1.0), 1, l), find_M(VarianceSpec::constant(1.0), 2, l));
    EXPECT_LE(find_M(VarianceSpec::constant(0.5), 2, l), find_M(VarianceSpec::constant(3.0), 2, l));
  }
  EXPECT_THROW(find_M(VarianceSpec::constant(1.0), 30, 20), std::overflow_error);
}

TEST(TestPlan, RowsBeatTheirThresholds) {
  for (unsigned n = 1; n <= 3; ++n) {
    const TestPlan plan = build_test_plan(VarianceSpec::constant(1.0), n, 8);
    ASSERT_EQ(plan.rows.size(), 8U);
    for (const auto& r : plan.rows) {
      EXPECT_LT(r.bound, r.threshold);
      EXPECT_EQ(r.threshold, std::ldexp(1.0, -static_cast<int>(n + r.l)));
      EXPECT_EQ(r.eps, std::ldexp(1.0, -static_cast<int>(r.l)));
    }
    EXPECT_EQ(plan.truncation, std::ldexp(1.0, -static_cast<int>(n + 8)));
    EXPECT_EQ(plan.total_measure(), std::ldexp(1.0, -static_cast<int>(n)));
  }
}

TEST(Trace, LogSpacedIndices) {
  EXPECT_EQ(log_spaced_indices(4), (std::vector<std::uint64_t>{1, 2, 3, 4}));
  const auto ks = log_spaced_indices(1000);
  EXPECT_TRUE(std::is_sorted(ks.begin(), ks.end()));
  EXPECT_EQ(std::adjacent_find(ks.begin(), ks.end()), ks.end());
  EXPECT_EQ(ks.back(), 1000U);
  EXPECT_NE(std::find(ks.begin(), ks.end(), 100U), ks.end());
}

TEST(Trace, ConstantOnesFirstMoment) {
  BitStream s(SourceSpec::constant(true));
  const auto trace = centered_average_trace(s, BlockScheme::triangular(), 1, 4);
  ASSERT_EQ(trace.back().k, 4U);
  EXPECT_NEAR(trace.back().value, (1 + std::sqrt(2.0) + std::sqrt(3.0) + 2) / 4, 1e-15);
  EXPECT_NEAR(trace.back().value, 1.536566, 1e-6);
}

TEST(Trace, PrngSecondMomentSettles) {
  BitStream s(SourceSpec::prng(1));
  const auto trace = centered_average_trace(s, BlockScheme::triangular(), 2, 100'000);
  EXPECT_LT(std::fabs(trace.back().value), 0.02);
}

TEST(Trace, FixedBlocksAreCentredOnTheirExactMoment) {
  BitStream s(SourceSpec::prng(2));
  const auto trace = centered_average_trace(s, BlockScheme::fixed(4), 4, 100'000);
  EXPECT_LT(std::fabs(trace.back().value), 0.05);
}

}  // namespace
}  // namespace seqclt
