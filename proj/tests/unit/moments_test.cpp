#include <seqclt/moments.hpp>

#include <cmath>
#include <utility>
#include <random>

#include <gtest/gtest.h>

namespace seqclt {
namespace {

// E[S_n^m] = 2^-n sum_j C(n, j) (2j - n)^m, a third route independent of both
// the partition expansion and sign enumeration.
BigInt binomial_sum_moment(unsigned n, unsigned m) {
  BigInt total = 0;
  BigInt c = 1;
  for (unsigned j = 0; j <= n; ++j) {
    if (j > 0) c = c * (n - j + 1) / j;
    BigInt term = 1;
    const BigInt base = 2 * static_cast<long>(j) - static_cast<long>(n);
    for (unsigned i = 0; i < m; ++i) term *= base;
    total += c * term;
  }
  const BigInt denom = BigInt(1) << n;
  EXPECT_EQ(total % denom, 0);
  return total / denom;
}

TEST(NormalMoment, DoubleFactorials) {
  EXPECT_EQ(normal_moment(0), 1.0);
  EXPECT_EQ(normal_moment(1), 0.0);
  EXPECT_EQ(normal_moment(2), 1.0);
  EXPECT_EQ(normal_moment(4), 3.0);
  EXPECT_EQ(normal_moment(6), 15.0);
  EXPECT_EQ(normal_moment(8), 105.0);
  EXPECT_EQ(normal_moment_exact(16), BigInt(2027025));
}

TEST(Partitions, CountsAndOrder) {
  const unsigned counts[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42};
  for (unsigned t = 0; t <= 10; ++t) EXPECT_EQ(integer_partitions(t).size(), counts[t]) << t;
  const auto p4 = integer_partitions(4);
  EXPECT_EQ(p4.front().parts, (std::vector<unsigned>{4}));
  EXPECT_EQ(p4.back().parts, (std::vector<unsigned>{1, 1, 1, 1}));
  for (const auto& p : integer_partitions(8)) {
    EXPECT_EQ(p.total(), 8U);
    EXPECT_TRUE(std::is_sorted(p.parts.rbegin(), p.parts.rend()));
  }
}

TEST(Placements, BetweenBinomialAndPower) {
  for (std::uint64_t n : {1, 2, 5, 13, 40}) {
    for (unsigned t = 1; t <= 8; ++t) {
      for (const auto& p : integer_partitions(t)) {
        const BigInt k = placement_count(p, n);
        const auto l = static_cast<unsigned>(p.length());
        if (l > n) {
          EXPECT_EQ(k, 0);
          continue;
        }
        BigInt binom = 1;
        for (unsigned i = 0; i < l; ++i) binom = binom * (n - i) / (i + 1);
        EXPECT_LE(binom, k);
        EXPECT_LE(k, boost::multiprecision::pow(BigInt(n), l));
      }
    }
  }
}

TEST(ExactMoment, SmallExamples) {
  EXPECT_EQ(exact_rademacher_moment(3, 4), 21);
  EXPECT_EQ(brute_force_moment(3, 4), 21);
  EXPECT_EQ(exact_rademacher_moment(1, 6), 1);
  EXPECT_EQ(exact_rademacher_moment(2, 4), 8);
}

TEST(ExactMoment, AgreesWithEnumeration) {
  for (unsigned n = 1; n <= 16; ++n)
    for (unsigned m = 1; m <= 10; ++m)
      ASSERT_EQ(exact_rademacher_moment(n, m), brute_force_moment(n, m)) << "n=" << n << " m=" << m;
}

TEST(ExactMoment, AgreesWithBinomialSum) {
  for (unsigned n = 1; n <= 60; n += 3)
    for (unsigned m = 2; m <= 16; m += 2)
      ASSERT_EQ(exact_rademacher_moment(n, m), binomial_sum_moment(n, m)) << "n=" << n << " m=" << m;
}

TEST(ExactMoment, OddMomentsVanish) {
  for (std::uint64_t n : {1, 7, 1000})
    for (unsigned m = 1; m <= 15; m += 2) EXPECT_EQ(exact_rademacher_moment(n, m), 0);
}

TEST(ExactMoment, ClosedForms) {
  for (std::uint64_t n = 1; n <= 10'000; ++n) {
    const BigInt b = n;
    ASSERT_EQ(exact_rademacher_moment(n, 2), b);
    ASSERT_EQ(exact_rademacher_moment(n, 4), 3 * b * b - 2 * b);
  }
  for (std::uint64_t n : {1, 2, 9, 100, 12345}) {
    const BigInt b = n;
    EXPECT_EQ(exact_rademacher_moment(n, 6), 15 * b * b * b - 30 * b * b + 16 * b);
  }
}

TEST(ExactMoment, RejectsOutOfRangeArguments) {
  EXPECT_THROW(exact_rademacher_moment(0, 2), std::invalid_argument);
  EXPECT_THROW(exact_rademacher_moment(5, 17), std::out_of_range);
  EXPECT_THROW(brute_force_moment(21, 2), std::out_of_range);
}

TEST(ScaledBlockMoment, Examples) {
  EXPECT_NEAR(scaled_block_moment(100, 4), 2.98, 1e-15);
  EXPECT_EQ(scaled_block_moment(4, 4), 2.5);
  EXPECT_EQ(scaled_block_moment(7, 2), 1.0);
  EXPECT_EQ(scaled_block_moment(7, 3), 0.0);
  EXPECT_NEAR(scaled_block_moment(10, 6), 15.0 - 30.0 / 10 + 16.0 / 100, 1e-13);
}

// n * (nu_m - E[X^m]) rises to the 1/n coefficient of the closed form
// (2, 30, 420 for m = 4, 6, 8) and never exceeds it; the bias itself falls.
TEST(ScaledBlockMoment, BiasIsOrderOneOverN) {
  const std::pair<unsigned, double> limits[] = {{4, 2.0}, {6, 30.0}, {8, 420.0}};
  for (const auto& [m, limit] : limits) {
    double prev_bias = 1e300;
    double prev_scaled = 0.0;
    for (std::uint64_t n = 10; n <= 10'000; n += (n < 200 ? 1 : 97)) {
      const double bias = normal_moment(m) - scaled_block_moment(n, m);
      const double scaled = static_cast<double>(n) * bias;
      ASSERT_GT(bias, 0.0);
      ASSERT_LT(bias, prev_bias) << m << " n=" << n;
      ASSERT_LE(scaled, limit * (1 + 1e-9)) << m << " n=" << n;
      ASSERT_GE(scaled, prev_scaled - 1e-9 * limit) << m << " n=" << n;
      prev_bias = bias;
      prev_scaled = scaled;
    }
    EXPECT_NEAR(prev_scaled, limit, limit * 2e-3) << m;
  }
}

// Dyadic samples j / 256 whose powers are exact in double; the exact sums come from 128-bit integers.
TEST(MomentTable, CompensatedSumsMatchExactArithmetic) {
  std::mt19937_64 rng(4);
  MomentTable table(4);
  __extension__ typedef __int128 i128;
  i128 exact[5] = {};
  const int count = 1'000'000;
  for (int i = 0; i < count; ++i) {
    const std::int64_t j = static_cast<std::int64_t>(rng() % 2049) - 1024 + 4096;
    table.observe(static_cast<double>(j) / 256.0);
    i128 p = 1;
    for (unsigned m = 1; m <= 4; ++m) {
      p *= j;
      exact[m] += p;
    }
  }
  for (unsigned m = 1; m <= 4; ++m) {
    const long double truth = static_cast<long double>(exact[m]) / std::pow(256.0L, m) / count;
    EXPECT_NEAR(table.empirical_moment(m) / static_cast<double>(truth), 1.0, 4e-16) << m;
  }
}

TEST(MomentTable, MergeEqualsSingleTable) {
  MomentTable whole(6), left(6), right(6);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int i = 0; i < 1000; ++i) {
    const double x = g(rng);
    whole.observe(x);
    (i < 400 ? left : right).observe(x);
  }
  left.merge(right);
  EXPECT_EQ(left.count(), 1000U);
  for (unsigned m = 1; m <= 6; ++m) EXPECT_NEAR(left.empirical_moment(m), whole.empirical_moment(m), 1e-13);
}

TEST(MomentTable, Contracts) {
  MomentTable t(3);
  EXPECT_THROW(t.empirical_moment(1), std::logic_error);
  t.observe(2.0);
  EXPECT_EQ(t.empirical_moment(0), 1.0);
  EXPECT_EQ(t.empirical_moment(3), 8.0);
  EXPECT_THROW(t.empirical_moment(4), std::out_of_range);
}

}  // namespace
}  // namespace seqclt
