#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "seqclt/bitsource.hpp"

namespace seqclt {

// Weights of the logarithmic path average.
//   harmonic:      weight(k) = 1/k,           normalizer(n) = log n
//   log_increment: weight(k) = log(1 + 1/k),  normalizer(n) = sum_{k<=n} weight(k) = log(n + 1)
class WeightSeq {
public:
  enum class Kind { harmonic, log_increment };

  constexpr WeightSeq() = default;
  constexpr explicit WeightSeq(Kind kind) : kind_(kind) {}

  static constexpr WeightSeq harmonic() { return WeightSeq(Kind::harmonic); }
  static constexpr WeightSeq log_increment() { return WeightSeq(Kind::log_increment); }

  Kind kind() const noexcept { return kind_; }
  std::string name() const;

  double weight(std::uint64_t k) const;
  double normalizer(std::uint64_t n) const;

private:
  Kind kind_ = Kind::harmonic;
};

// sum_{k<=n} log(1 + 1/k) accumulated term by term (compensated), for checking
// the telescoped closed form log(n + 1).
double summed_log_increments(std::uint64_t n);

// A bounded Lipschitz test function with its documented constants.
struct TestFunction {
  std::string id;
  std::function<double(double)> eval;
  double bound = 0.0;      // sup |f|
  double lipschitz = 0.0;  // Lipschitz constant

  double operator()(double x) const { return eval(x); }
};

// clip(x, -1, 1): B = 1, L = 1.
TestFunction clip_function();
// clip((x0 + 0.1 - x) / 0.1, 0, 1), a smoothed indicator of x <= x0: B = 1, L = 10.
TestFunction smoothed_step(double x0);
// f = c: B = |c|, L = 0.
TestFunction constant_function(double c);

// Running state of the path average over S_k = r_1 + ... + r_k, r_k = 2*bit_k - 1.
class AscltEstimator {
public:
  AscltEstimator(std::vector<double> thresholds, WeightSeq weights);

  void step(int sign);
  // Consumes `steps` bits from the stream.
  void consume(BitStream& stream, std::uint64_t steps);

  std::uint64_t steps() const noexcept { return steps_; }
  std::int64_t running_sum() const noexcept { return sum_; }
  std::span<const double> thresholds() const noexcept { return thresholds_; }
  // sum_{k<=n} weight(k) * 1{S_k/sqrt(k) <= x}, per threshold.
  std::span<const double> weighted_counts() const noexcept { return counts_; }
  double total_weight() const noexcept { return total_weight_; }

  // weighted_counts / normalizer(n). Throws std::domain_error for n < 2.
  std::vector<double> estimates() const;

private:
  std::vector<double> thresholds_;
  WeightSeq weights_;
  std::vector<double> counts_;
  double total_weight_ = 0.0;
  std::uint64_t steps_ = 0;
  std::int64_t sum_ = 0;
};

// (1/normalizer(n)) sum_{k<=n} weight(k) 1{S_k/sqrt(k) <= x} for each x, over
// the next n bits. Throws std::domain_error for n < 2.
std::vector<double> asclt_estimate(BitStream& stream, std::uint64_t n, std::span<const double> xs,
                                   WeightSeq weights);

struct WeightComparison {
  double harmonic = 0.0;
  double log_increment = 0.0;
  double difference = 0.0;  // harmonic - log_increment
};

// Both weightings on the same n-bit prefix.
WeightComparison weight_equivalence_check(BitStream& stream, std::uint64_t n, double x);

// n_k = smallest n with log(n + 1) >= a^k, for k = 1..k_max. The comparison is
// made in 50-digit arithmetic. Requires 1 < a <= 2 (std::domain_error) and
// throws std::overflow_error once n_k would exceed 2^63.
std::vector<std::uint64_t> subsequence(double a, unsigned k_max);

// Largest k_max accepted by subsequence(a, k_max).
unsigned subsequence_limit(double a);

// E f(S_k / sqrt(k)) over the Binomial(k, 1/2) law of the ones count. Weights
// come from the ratio recurrence outward from the mode and are renormalised;
// terms below 1e-18 of the modal weight are dropped.
double binomial_expectation(const TestFunction& f, std::uint64_t k);

inline constexpr std::uint64_t kMaxBinomialSteps = 1'000'000;

// binomial_expectation(f, k) for k = 1..k_max, computed once and read-only.
class ExpectationCache {
public:
  ExpectationCache(const TestFunction& f, std::uint64_t k_max);

  std::uint64_t k_max() const noexcept { return values_.size(); }
  const std::string& function_id() const noexcept { return id_; }
  double operator[](std::uint64_t k) const { return values_.at(k - 1); }

private:
  std::string id_;
  std::vector<double> values_;
};

// Running T_n = (1/normalizer(n)) sum_{k<=n} weight(k) (f(Y_k) - E f(Y_k)).
class TnAccumulator {
public:
  TnAccumulator(const TestFunction& f, const ExpectationCache& cache, WeightSeq weights);

  void step(int sign);
  std::uint64_t steps() const noexcept { return steps_; }
  // Throws std::domain_error for n < 2.
  double value() const;

private:
  const TestFunction& f_;
  const ExpectationCache& cache_;
  WeightSeq weights_;
  std::uint64_t steps_ = 0;
  std::int64_t sum_ = 0;
  double acc_ = 0.0;
  double carry_ = 0.0;
};

double tn_statistic(BitStream& stream, std::uint64_t n, const TestFunction& f, WeightSeq weights,
                    const ExpectationCache& cache);
double tn_statistic(BitStream& stream, std::uint64_t n, const TestFunction& f,
                    WeightSeq weights = WeightSeq::log_increment());

struct VarianceRow {
  std::uint64_t n = 0;
  double mean_tn2 = 0.0;
  double bound = 0.0;  // c_hat * loglog n / log n
  bool flag = false;   // mean_tn2 > 1.5 * bound
};

struct VarianceStudy {
  double c_hat = 0.0;  // calibrated at the smallest n
  std::vector<VarianceRow> rows;
};

inline constexpr std::size_t kMinStudySeeds = 100;

// Monte Carlo E[T_n^2] over PRNG seeds, one path per seed evaluated at every n.
// ns must be increasing with ns[0] >= 100; at least 100 seeds
// (std::invalid_argument otherwise).
VarianceStudy variance_study(std::span<const std::uint64_t> seeds, std::span<const std::uint64_t> ns,
                             const TestFunction& f, WeightSeq weights = WeightSeq::log_increment());

}  // namespace seqclt
