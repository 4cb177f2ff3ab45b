#include "seqclt/asclt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace seqclt {

namespace {

using Float50 = boost::multiprecision::cpp_bin_float_50;

constexpr std::uint64_t kSignChunk = std::uint64_t{1} << 16;
constexpr double kWeightCutoff = 1e-18;

// Calls visit(sign) for each of the next n bits, sign = 2*bit - 1.
template <class Visit>
void for_each_sign(BitStream& stream, std::uint64_t n, Visit&& visit) {
  while (n > 0) {
    const std::uint64_t take = std::min(n, kSignChunk);
    const BitBlock block = stream.next_bits(take);
    const auto words = block.words();
    std::uint64_t left = take;
    for (std::uint64_t w : words) {
      const unsigned bits = static_cast<unsigned>(std::min<std::uint64_t>(64, left));
      for (unsigned i = 0; i < bits; ++i) visit(((w >> (63 - i)) & 1U) ? 1 : -1);
      left -= bits;
    }
    n -= take;
  }
}

void require_path_length(std::uint64_t n) {
  if (n < 2) throw std::domain_error("logarithmic average needs n >= 2");
}

double shape(std::uint64_t n) {
  const double ln = std::log(static_cast<double>(n));
  return std::log(ln) / ln;
}

Float50 log_normalizer(std::uint64_t n) { return boost::multiprecision::log(Float50(n) + 1); }

}  // namespace

// ---------------------------------------------------------------------------
// Weights

std::string WeightSeq::name() const { return kind_ == Kind::harmonic ? "harmonic" : "dk"; }

double WeightSeq::weight(std::uint64_t k) const {
  if (k == 0) throw std::invalid_argument("weight index is 1-based");
  const auto kd = static_cast<double>(k);
  return kind_ == Kind::harmonic ? 1.0 / kd : std::log1p(1.0 / kd);
}

double WeightSeq::normalizer(std::uint64_t n) const {
  if (n == 0) throw std::invalid_argument("normalizer needs n >= 1");
  const auto nd = static_cast<double>(n);
  return kind_ == Kind::harmonic ? std::log(nd) : std::log1p(nd);
}

double summed_log_increments(std::uint64_t n) {
  double sum = 0.0;
  double carry = 0.0;
  for (std::uint64_t k = 1; k <= n; ++k) {
    const double v = std::log1p(1.0 / static_cast<double>(k));
    const double t = sum + v;
    carry += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + carry;
}

// ---------------------------------------------------------------------------
// Test functions

TestFunction clip_function() {
  return {"clip", [](double x) { return std::clamp(x, -1.0, 1.0); }, 1.0, 1.0};
}

TestFunction smoothed_step(double x0) {
  return {"step:" + std::to_string(x0), [x0](double x) { return std::clamp((x0 + 0.1 - x) / 0.1, 0.0, 1.0); }, 1.0,
          10.0};
}

TestFunction constant_function(double c) {
  return {"const:" + std::to_string(c), [c](double) { return c; }, std::fabs(c), 0.0};
}

// ---------------------------------------------------------------------------
// Estimator

AscltEstimator::AscltEstimator(std::vector<double> thresholds, WeightSeq weights)
    : thresholds_(std::move(thresholds)), weights_(weights), counts_(thresholds_.size(), 0.0) {}

void AscltEstimator::step(int sign) {
  ++steps_;
  sum_ += sign;
  const double w = weights_.weight(steps_);
  const double y = static_cast<double>(sum_) / std::sqrt(static_cast<double>(steps_));
  total_weight_ += w;
  for (std::size_t i = 0; i < thresholds_.size(); ++i)
    if (y <= thresholds_[i]) counts_[i] += w;
}

void AscltEstimator::consume(BitStream& stream, std::uint64_t steps) {
  for_each_sign(stream, steps, [this](int s) { step(s); });
}

std::vector<double> AscltEstimator::estimates() const {
  require_path_length(steps_);
  const double norm = weights_.normalizer(steps_);
  std::vector<double> out(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i) out[i] = counts_[i] / norm;
  return out;
}

std::vector<double> asclt_estimate(BitStream& stream, std::uint64_t n, std::span<const double> xs,
                                   WeightSeq weights) {
  require_path_length(n);
  AscltEstimator est(std::vector<double>(xs.begin(), xs.end()), weights);
  est.consume(stream, n);
  return est.estimates();
}

WeightComparison weight_equivalence_check(BitStream& stream, std::uint64_t n, double x) {
  require_path_length(n);
  AscltEstimator harmonic({x}, WeightSeq::harmonic());
  AscltEstimator dk({x}, WeightSeq::log_increment());
  for_each_sign(stream, n, [&](int s) {
    harmonic.step(s);
    dk.step(s);
  });
  WeightComparison c;
  c.harmonic = harmonic.estimates()[0];
  c.log_increment = dk.estimates()[0];
  c.difference = c.harmonic - c.log_increment;
  return c;
}

// ---------------------------------------------------------------------------
// Subsequence

unsigned subsequence_limit(double a) {
  if (!(a > 1.0 && a <= 2.0)) throw std::domain_error("subsequence base must satisfy 1 < a <= 2");
  // n_k <= 2^63 iff a^k <= log(2^63 + 1).
  const Float50 cap = boost::multiprecision::log(Float50(std::uint64_t{1} << 63) + 1);
  Float50 power = a;
  unsigned k = 0;
  while (power <= cap) {
    ++k;
    power *= a;
  }
  return k;
}

std::vector<std::uint64_t> subsequence(double a, unsigned k_max) {
  const unsigned limit = subsequence_limit(a);
  if (k_max > limit)
    throw std::overflow_error("subsequence index " + std::to_string(k_max) + " exceeds the 64-bit limit " +
                              std::to_string(limit) + " for a = " + std::to_string(a));
  std::vector<std::uint64_t> out;
  out.reserve(k_max);
  Float50 target = 1;
  for (unsigned k = 1; k <= k_max; ++k) {
    target *= a;
    // Start from ceil(e^target) - 1 and correct in unit steps.
    Float50 guess = boost::multiprecision::ceil(boost::multiprecision::exp(target)) - 1;
    auto n = guess.convert_to<std::uint64_t>();
    while (log_normalizer(n) < target) ++n;
    while (n > 1 && log_normalizer(n - 1) >= target) --n;
    out.push_back(n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Binomial expectations

double binomial_expectation(const TestFunction& f, std::uint64_t k) {
  if (k == 0 || k > kMaxBinomialSteps)
    throw std::out_of_range("binomial expectation needs 1 <= k <= " + std::to_string(kMaxBinomialSteps));
  const double root = std::sqrt(static_cast<double>(k));
  const std::uint64_t c = k / 2;

  // Outcomes are paired symmetrically (x, -x) so odd functions cancel exactly,
  // and centred on a reference value so constant functions come out exact.
  double ref = 0.0;
  double num = 0.0;
  double den = 0.0;
  if (k % 2 == 0) {
    ref = f(0.0);
    den = 1.0;
    double w = 1.0;
    for (std::uint64_t d = 1; d <= c; ++d) {
      w *= static_cast<double>(c - d + 1) / static_cast<double>(c + d);
      if (w < kWeightCutoff) break;
      const double x = static_cast<double>(2 * d) / root;
      num += w * ((f(x) - ref) + (f(-x) - ref));
      den += 2.0 * w;
    }
  } else {
    const double x0 = 1.0 / root;
    const double hi = f(x0);
    const double lo = f(-x0);
    ref = 0.5 * (hi + lo);
    num = (hi - ref) + (lo - ref);
    den = 2.0;
    double w = 1.0;
    for (std::uint64_t d = 1; d <= c; ++d) {
      w *= static_cast<double>(c + 1 - d) / static_cast<double>(c + 1 + d);
      if (w < kWeightCutoff) break;
      const double x = static_cast<double>(2 * d + 1) / root;
      num += w * ((f(x) - ref) + (f(-x) - ref));
      den += 2.0 * w;
    }
  }
  return ref + num / den;
}

ExpectationCache::ExpectationCache(const TestFunction& f, std::uint64_t k_max) : id_(f.id) {
  if (k_max == 0 || k_max > kMaxBinomialSteps) throw std::out_of_range("expectation cache size out of range");
  values_.resize(k_max);
  for (std::uint64_t k = 1; k <= k_max; ++k) values_[k - 1] = binomial_expectation(f, k);
}

// ---------------------------------------------------------------------------
// T_n

TnAccumulator::TnAccumulator(const TestFunction& f, const ExpectationCache& cache, WeightSeq weights)
    : f_(f), cache_(cache), weights_(weights) {
  if (cache.function_id() != f.id) throw std::invalid_argument("expectation cache built for a different function");
}

void TnAccumulator::step(int sign) {
  if (steps_ >= cache_.k_max()) throw std::out_of_range("T_n path longer than the expectation cache");
  ++steps_;
  sum_ += sign;
  const double y = static_cast<double>(sum_) / std::sqrt(static_cast<double>(steps_));
  const double v = weights_.weight(steps_) * (f_(y) - cache_[steps_]);
  const double t = acc_ + v;
  carry_ += std::fabs(acc_) >= std::fabs(v) ? (acc_ - t) + v : (v - t) + acc_;
  acc_ = t;
}

double TnAccumulator::value() const {
  require_path_length(steps_);
  return (acc_ + carry_) / weights_.normalizer(steps_);
}

double tn_statistic(BitStream& stream, std::uint64_t n, const TestFunction& f, WeightSeq weights,
                    const ExpectationCache& cache) {
  require_path_length(n);
  TnAccumulator acc(f, cache, weights);
  for_each_sign(stream, n, [&](int s) { acc.step(s); });
  return acc.value();
}

double tn_statistic(BitStream& stream, std::uint64_t n, const TestFunction& f, WeightSeq weights) {
  require_path_length(n);
  const ExpectationCache cache(f, n);
  return tn_statistic(stream, n, f, weights, cache);
}

// ---------------------------------------------------------------------------
// Variance study

VarianceStudy variance_study(std::span<const std::uint64_t> seeds, std::span<const std::uint64_t> ns,
                             const TestFunction& f, WeightSeq weights) {
  if (seeds.size() < kMinStudySeeds)
    throw std::invalid_argument("variance study needs at least " + std::to_string(kMinStudySeeds) + " seeds");
  if (ns.empty() || ns.front() < 100) throw std::invalid_argument("variance study needs step counts >= 100");
  if (!std::is_sorted(ns.begin(), ns.end()) || std::adjacent_find(ns.begin(), ns.end()) != ns.end())
    throw std::invalid_argument("variance study step counts must be strictly increasing");

  const std::uint64_t n_max = ns.back();
  const ExpectationCache cache(f, n_max);

  std::vector<double> sums(ns.size(), 0.0);
  for (std::uint64_t seed : seeds) {
    BitStream stream(SourceSpec::prng(seed));
    TnAccumulator acc(f, cache, weights);
    std::size_t next = 0;
    for_each_sign(stream, n_max, [&](int s) {
      acc.step(s);
      if (next < ns.size() && acc.steps() == ns[next]) {
        const double t = acc.value();
        sums[next] += t * t;
        ++next;
      }
    });
  }

  VarianceStudy study;
  const auto count = static_cast<double>(seeds.size());
  const double first = sums[0] / count;
  study.c_hat = first / shape(ns[0]);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    VarianceRow row;
    row.n = ns[i];
    row.mean_tn2 = sums[i] / count;
    row.bound = study.c_hat * shape(ns[i]);
    row.flag = row.mean_tn2 > 1.5 * row.bound;
    study.rows.push_back(row);
  }
  return study;
}

}  // namespace seqclt
