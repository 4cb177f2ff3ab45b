#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "seqclt/sampling.hpp"

namespace seqclt {

using BigInt = boost::multiprecision::cpp_int;

// Largest moment order accepted by the exact and brute-force routines.
inline constexpr unsigned kMaxExactMoment = 16;
// Largest block length the brute-force oracle will enumerate (2^n sign vectors).
inline constexpr unsigned kMaxBruteForceLength = 20;

// m-th moment of N(0,1): 0 for odd m, (m-1)!! for even m.
double normal_moment(unsigned m);

// (m-1)!! for even m, exactly; 0 for odd m.
BigInt normal_moment_exact(unsigned m);

// A partition of an integer into non-increasing positive parts.
struct Partition {
  std::vector<unsigned> parts;

  std::size_t length() const noexcept { return parts.size(); }
  unsigned total() const noexcept;
  // Multiplicity of each distinct part value, in order of first appearance.
  std::vector<unsigned> multiplicities() const;

  bool operator==(const Partition&) const = default;
};

// All partitions of `target`, in reverse lexicographic order ((target) first,
// (1,...,1) last). Partitions of 0: a single empty partition.
std::vector<Partition> integer_partitions(unsigned target);

// total! / prod(part!), with sum(parts) == total.
BigInt multinomial(unsigned total, std::span<const unsigned> parts);

// Number of ways to place the parts of `p` into n ordered slots, i.e. the count
// of solutions to k'_1 + ... + k'_n = sum(p) whose non-zero terms are exactly
// the parts of p:  n! / ((n-l)! * prod(mult_j!)). Zero when l > n.
BigInt placement_count(const Partition& p, std::uint64_t n);

// One term of the even-moment expansion: `half` is a partition of m/2, the term
// contributes multinomial(m; 2*half) * placements.
struct MomentTerm {
  Partition half;
  BigInt multinomial;
  BigInt placements;
};

std::vector<MomentTerm> rademacher_moment_terms(std::uint64_t n, unsigned m);

// E[S_n^m] for S_n a sum of n independent fair signs, exactly.
// Throws std::out_of_range for m > 16 and std::invalid_argument for n == 0.
BigInt exact_rademacher_moment(std::uint64_t n, unsigned m);

// Same quantity by enumerating all 2^n sign vectors. Independent of the
// partition expansion. Throws std::out_of_range for n > 20 or m > 16.
BigInt brute_force_moment(unsigned n, unsigned m);

// E[X^m] for X = S_n / sqrt(n): the exact moment divided by n^{m/2}, converted
// to double only at the end.
double scaled_block_moment(std::uint64_t n, unsigned m);

// Streaming sums of X^m for m = 1..m_max with error-compensated accumulation.
class MomentTable final : public SampleSink {
public:
  explicit MomentTable(unsigned m_max = 8);

  void observe(double x);
  void observe(const Sample& sample) override { observe(sample.value); }

  // (sum of X_i^m) / k. m == 0 gives 1. Throws std::logic_error when no data
  // has been observed and std::out_of_range for m > m_max.
  double empirical_moment(unsigned m) const;

  std::uint64_t count() const noexcept { return count_; }
  unsigned m_max() const noexcept { return m_max_; }

  // Combines a table built over a disjoint sample range.
  void merge(const MomentTable& other);

private:
  struct Compensated {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) noexcept;
    double value() const noexcept { return sum + carry; }
  };

  unsigned m_max_;
  std::uint64_t count_ = 0;
  std::vector<Compensated> sums_;
};

// x^m by repeated squaring.
double power(double x, unsigned m) noexcept;

}  // namespace seqclt
