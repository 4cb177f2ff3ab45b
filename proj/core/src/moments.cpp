#include "seqclt/moments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace seqclt {

namespace {

void check_order(unsigned m) {
  if (m > kMaxExactMoment)
    throw std::out_of_range("moment order " + std::to_string(m) + " exceeds " + std::to_string(kMaxExactMoment));
}

BigInt factorial(unsigned n) {
  BigInt f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

void partitions_into(unsigned remaining, unsigned max_part, std::vector<unsigned>& prefix, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.push_back(Partition{prefix});
    return;
  }
  for (unsigned part = std::min(remaining, max_part); part >= 1; --part) {
    prefix.push_back(part);
    partitions_into(remaining - part, part, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

double normal_moment(unsigned m) {
  if (m % 2 == 1) return 0.0;
  double v = 1.0;
  for (unsigned j = m; j >= 2; j -= 2) v *= static_cast<double>(j - 1);
  return v;
}

BigInt normal_moment_exact(unsigned m) {
  if (m % 2 == 1) return 0;
  BigInt v = 1;
  for (unsigned j = m; j >= 2; j -= 2) v *= (j - 1);
  return v;
}

unsigned Partition::total() const noexcept {
  unsigned t = 0;
  for (auto p : parts) t += p;
  return t;
}

std::vector<unsigned> Partition::multiplicities() const {
  std::vector<unsigned> mult;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i == 0 || parts[i] != parts[i - 1])
      mult.push_back(1);
    else
      ++mult.back();
  }
  return mult;
}

std::vector<Partition> integer_partitions(unsigned target) {
  std::vector<Partition> out;
  std::vector<unsigned> prefix;
  partitions_into(target, target, prefix, out);
  return out;
}

BigInt multinomial(unsigned total, std::span<const unsigned> parts) {
  unsigned sum = 0;
  BigInt denom = 1;
  for (auto p : parts) {
    sum += p;
    denom *= factorial(p);
  }
  if (sum != total) throw std::invalid_argument("multinomial parts do not sum to the total");
  return factorial(total) / denom;
}

BigInt placement_count(const Partition& p, std::uint64_t n) {
  const std::uint64_t l = p.length();
  if (l > n) return 0;
  BigInt falling = 1;
  for (std::uint64_t i = 0; i < l; ++i) falling *= (n - i);
  BigInt denom = 1;
  for (auto mult : p.multiplicities()) denom *= factorial(mult);
  return falling / denom;
}

std::vector<MomentTerm> rademacher_moment_terms(std::uint64_t n, unsigned m) {
  check_order(m);
  if (n == 0) throw std::invalid_argument("block length must be >= 1");
  std::vector<MomentTerm> terms;
  if (m % 2 == 1) return terms;
  for (auto& half : integer_partitions(m / 2)) {
    std::vector<unsigned> doubled(half.parts.size());
    for (std::size_t i = 0; i < doubled.size(); ++i) doubled[i] = 2 * half.parts[i];
    MomentTerm t;
    t.multinomial = multinomial(m, doubled);
    // Doubling preserves multiplicities, so placements of 2p equal those of p.
    t.placements = placement_count(half, n);
    t.half = std::move(half);
    terms.push_back(std::move(t));
  }
  return terms;
}

BigInt exact_rademacher_moment(std::uint64_t n, unsigned m) {
  BigInt total = 0;
  for (const auto& t : rademacher_moment_terms(n, m)) total += t.multinomial * t.placements;
  return total;
}

BigInt brute_force_moment(unsigned n, unsigned m) {
  check_order(m);
  if (n == 0) throw std::invalid_argument("block length must be >= 1");
  if (n > kMaxBruteForceLength)
    throw std::out_of_range("brute force limited to n <= " + std::to_string(kMaxBruteForceLength));

  // Tally every sign vector by its sum, then weight S^m by the tally.
  std::vector<std::uint64_t> tally(n + 1, 0);
  const std::uint64_t vectors = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < vectors; ++mask) ++tally[static_cast<std::size_t>(std::popcount(mask))];

  BigInt sum = 0;
  for (unsigned ones = 0; ones <= n; ++ones) {
    const long long s = 2LL * ones - static_cast<long long>(n);
    BigInt term = 1;
    for (unsigned i = 0; i < m; ++i) term *= s;
    sum += term * tally[ones];
  }
  BigInt quotient, remainder;
  boost::multiprecision::divide_qr(sum, BigInt(vectors), quotient, remainder);
  if (remainder != 0) throw std::logic_error("brute-force moment sum is not divisible by 2^n");
  return quotient;
}

double scaled_block_moment(std::uint64_t n, unsigned m) {
  const BigInt moment = exact_rademacher_moment(n, m);
  if (m % 2 == 1) return 0.0;
  BigInt denom = 1;
  for (unsigned i = 0; i < m / 2; ++i) denom *= n;
  BigInt quotient, remainder;
  boost::multiprecision::divide_qr(moment, denom, quotient, remainder);
  return quotient.convert_to<double>() + remainder.convert_to<double>() / denom.convert_to<double>();
}

double power(double x, unsigned m) noexcept {
  double result = 1.0;
  double base = x;
  while (m > 0) {
    if (m & 1U) result *= base;
    m >>= 1;
    if (m > 0) base *= base;
  }
  return result;
}

// ---------------------------------------------------------------------------
// MomentTable

void MomentTable::Compensated::add(double v) noexcept {
  const double t = sum + v;
  if (std::fabs(sum) >= std::fabs(v))
    carry += (sum - t) + v;
  else
    carry += (v - t) + sum;
  sum = t;
}

MomentTable::MomentTable(unsigned m_max) : m_max_(m_max), sums_(m_max) {
  if (m_max == 0) throw std::invalid_argument("moment table needs m_max >= 1");
}

void MomentTable::observe(double x) {
  ++count_;
  for (unsigned m = 1; m <= m_max_; ++m) sums_[m - 1].add(power(x, m));
}

double MomentTable::empirical_moment(unsigned m) const {
  if (count_ == 0) throw std::logic_error("empirical moment requested before any sample");
  if (m > m_max_) throw std::out_of_range("moment order " + std::to_string(m) + " not tracked");
  if (m == 0) return 1.0;
  return sums_[m - 1].value() / static_cast<double>(count_);
}

void MomentTable::merge(const MomentTable& other) {
  if (other.m_max_ != m_max_) throw std::invalid_argument("cannot merge moment tables of different order");
  count_ += other.count_;
  for (unsigned i = 0; i < m_max_; ++i) {
    sums_[i].add(other.sums_[i].sum);
    sums_[i].add(other.sums_[i].carry);
  }
}

}  // namespace seqclt
