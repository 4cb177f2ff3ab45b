#pragma once

#include <cstdint>
#include <vector>

#include "seqclt/bitsource.hpp"
#include "seqclt/sampling.hpp"

namespace seqclt {

// Closed interval of reals; `hi` is the sound end wherever a bound is needed.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Per-index variances sigma_k^2 (k >= 1) of an independent sequence.
//
// constant: sigma_k^2 = s for all k.
// table:    sigma_k^2 given for k = 1..T; beyond T each variance is at most
//           `tail_sup` (which defaults to the table maximum).
//
// Infinite tails sum_{k>c} sigma^2/k^2 are enclosed using the integral bound
// sum_{k>c} 1/k^2 <= 1/c.
class VarianceSpec {
public:
  enum class Kind { constant, table };

  static VarianceSpec constant(double sigma2);
  static VarianceSpec table(std::vector<double> sigma2);
  static VarianceSpec table(std::vector<double> sigma2, double tail_sup);

  Kind kind() const noexcept { return kind_; }

  // sigma_k^2 (upper value for k past the table).
  double variance(std::uint64_t k) const;

  // sum_{k=1}^{M} sigma_k^2.
  Interval head_sum(std::uint64_t M) const;
  // D_{M+1} = sum_{k>M} sigma_k^2 / k^2.
  Interval tail_sum(std::uint64_t M) const;

private:
  VarianceSpec() = default;

  Kind kind_ = Kind::constant;
  double sigma2_ = 0.0;
  std::vector<double> table_;
  double tail_sup_ = 0.0;
};

// Interval enclosure of 4/eps^2 * [ M^-2 sum_{k<=M} sigma_k^2 + D_{M+1} ].
// Throws std::domain_error for eps <= 0 and std::invalid_argument for M == 0.
Interval tail_bound_interval(const VarianceSpec& spec, double eps, std::uint64_t M);

// Upper end of tail_bound_interval: a bound on P(sup_{k>=M} |mean_k - mu| > eps).
double tail_bound(const VarianceSpec& spec, double eps, std::uint64_t M);

// Smallest power of two M with tail_bound(spec, 2^-precision, M) < 2^-(level+precision).
// Throws std::overflow_error if no M <= 2^63 qualifies.
std::uint64_t find_M(const VarianceSpec& spec, unsigned level, unsigned precision);

struct TestPlanRow {
  unsigned l = 0;
  double eps = 0.0;        // 2^-l
  std::uint64_t M = 0;
  double bound = 0.0;      // tail_bound at (eps, M)
  double threshold = 0.0;  // 2^-(n+l)
};

// Rows l = 1..l_max of the level-n test. The omitted rows l > l_max carry at
// most `truncation` = 2^-(n+l_max) measure.
struct TestPlan {
  unsigned level = 0;
  std::vector<TestPlanRow> rows;
  double truncation = 0.0;

  // Sum of row thresholds plus the truncation; equals 2^-level.
  double total_measure() const;
};

TestPlan build_test_plan(const VarianceSpec& spec, unsigned level, unsigned l_max);

struct TracePoint {
  std::uint64_t k = 0;
  double value = 0.0;  // mean of X_i^m minus mean of E[X_i^m], i <= k
};

// Running centred averages of X_k^m along a sample run, using the exact block
// means E[X_k^m]. Emitted at ten log-spaced indices per decade plus k_max.
// The stream must be at position 0.
std::vector<TracePoint> centered_average_trace(BitStream& stream, const BlockScheme& scheme, unsigned m,
                                               std::uint64_t k_max);

// Indices at which centered_average_trace reports.
std::vector<std::uint64_t> log_spaced_indices(std::uint64_t k_max);

}  // namespace seqclt
