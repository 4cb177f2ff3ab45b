#include "seqclt/slln_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "seqclt/moments.hpp"

namespace seqclt {

VarianceSpec VarianceSpec::constant(double sigma2) {
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) throw std::invalid_argument("variance must be finite and >= 0");
  VarianceSpec s;
  s.kind_ = Kind::constant;
  s.sigma2_ = sigma2;
  return s;
}

VarianceSpec VarianceSpec::table(std::vector<double> sigma2) {
  const double sup = sigma2.empty() ? 0.0 : *std::max_element(sigma2.begin(), sigma2.end());
  return table(std::move(sigma2), sup);
}

VarianceSpec VarianceSpec::table(std::vector<double> sigma2, double tail_sup) {
  for (double v : sigma2)
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("variances must be finite and >= 0");
  if (!(tail_sup >= 0.0) || !std::isfinite(tail_sup)) throw std::invalid_argument("tail variance bound must be >= 0");
  VarianceSpec s;
  s.kind_ = Kind::table;
  s.table_ = std::move(sigma2);
  s.tail_sup_ = tail_sup;
  return s;
}

double VarianceSpec::variance(std::uint64_t k) const {
  if (k == 0) throw std::invalid_argument("variance index is 1-based");
  if (kind_ == Kind::constant) return sigma2_;
  return k <= table_.size() ? table_[k - 1] : tail_sup_;
}

Interval VarianceSpec::head_sum(std::uint64_t M) const {
  if (kind_ == Kind::constant) {
    const double v = sigma2_ * static_cast<double>(M);
    return {v, v};
  }
  const std::uint64_t inside = std::min<std::uint64_t>(M, table_.size());
  double s = 0.0;
  for (std::uint64_t k = 0; k < inside; ++k) s += table_[k];
  const double beyond = M > inside ? tail_sup_ * static_cast<double>(M - inside) : 0.0;
  return {s, s + beyond};
}

Interval VarianceSpec::tail_sum(std::uint64_t M) const {
  if (M == 0) throw std::invalid_argument("tail sum needs M >= 1");
  if (kind_ == Kind::constant) {
    // 1/(M+1) <= sum_{k>M} 1/k^2 <= 1/M
    return {sigma2_ / (static_cast<double>(M) + 1.0), sigma2_ / static_cast<double>(M)};
  }
  double s = 0.0;
  for (std::uint64_t k = M + 1; k <= table_.size(); ++k) {
    const auto kd = static_cast<double>(k);
    s += table_[k - 1] / (kd * kd);
  }
  const auto cutoff = static_cast<double>(std::max<std::uint64_t>(M, table_.size()));
  return {s, s + tail_sup_ / cutoff};
}

Interval tail_bound_interval(const VarianceSpec& spec, double eps, std::uint64_t M) {
  if (!(eps > 0.0)) throw std::domain_error("tail bound needs eps > 0");
  if (M == 0) throw std::invalid_argument("tail bound needs M >= 1");
  const double scale = 4.0 / (eps * eps);
  const auto md = static_cast<double>(M);
  const Interval head = spec.head_sum(M);
  const Interval tail = spec.tail_sum(M);
  Interval mean_part = spec.kind() == VarianceSpec::Kind::constant
                           ? Interval{spec.variance(1) / md, spec.variance(1) / md}
                           : Interval{head.lo / md / md, head.hi / md / md};
  return {scale * (mean_part.lo + tail.lo), scale * (mean_part.hi + tail.hi)};
}

double tail_bound(const VarianceSpec& spec, double eps, std::uint64_t M) {
  return tail_bound_interval(spec, eps, M).hi;
}

std::uint64_t find_M(const VarianceSpec& spec, unsigned level, unsigned precision) {
  if (level == 0 || precision == 0) throw std::invalid_argument("test level and precision must be >= 1");
  const double eps = std::ldexp(1.0, -static_cast<int>(precision));
  const double threshold = std::ldexp(1.0, -static_cast<int>(level + precision));
  for (unsigned e = 0; e <= 63; ++e) {
    const std::uint64_t M = std::uint64_t{1} << e;
    if (tail_bound(spec, eps, M) < threshold) return M;
  }
  throw std::overflow_error("no M <= 2^63 meets the tail threshold (level " + std::to_string(level) +
                            ", precision " + std::to_string(precision) + ")");
}

double TestPlan::total_measure() const {
  double total = truncation;
  for (const auto& r : rows) total += r.threshold;
  return total;
}

TestPlan build_test_plan(const VarianceSpec& spec, unsigned level, unsigned l_max) {
  if (l_max == 0) throw std::invalid_argument("test plan needs l_max >= 1");
  TestPlan plan;
  plan.level = level;
  for (unsigned l = 1; l <= l_max; ++l) {
    TestPlanRow row;
    row.l = l;
    row.eps = std::ldexp(1.0, -static_cast<int>(l));
    row.M = find_M(spec, level, l);
    row.bound = tail_bound(spec, row.eps, row.M);
    row.threshold = std::ldexp(1.0, -static_cast<int>(level + l));
    plan.rows.push_back(row);
  }
  plan.truncation = std::ldexp(1.0, -static_cast<int>(level + l_max));
  return plan;
}

std::vector<std::uint64_t> log_spaced_indices(std::uint64_t k_max) {
  std::vector<std::uint64_t> ks;
  for (int j = 0;; ++j) {
    const double v = std::round(std::pow(10.0, j / 10.0));
    if (v > static_cast<double>(k_max)) break;
    const auto k = static_cast<std::uint64_t>(v);
    if (ks.empty() || ks.back() != k) ks.push_back(k);
  }
  if (ks.empty() || ks.back() != k_max) ks.push_back(k_max);
  return ks;
}

std::vector<TracePoint> centered_average_trace(BitStream& stream, const BlockScheme& scheme, unsigned m,
                                               std::uint64_t k_max) {
  if (m == 0 || m > kMaxExactMoment) throw std::out_of_range("trace power must be in 1..16");
  const auto marks = log_spaced_indices(k_max);
  std::unordered_map<std::uint64_t, double> means;
  const auto block_mean = [&](std::uint64_t n) {
    if (m % 2 == 1) return 0.0;
    auto it = means.find(n);
    if (it == means.end()) it = means.emplace(n, scaled_block_moment(n, m)).first;
    return it->second;
  };

  std::vector<TracePoint> trace;
  trace.reserve(marks.size());
  double sum = 0.0;
  double carry = 0.0;
  std::size_t next_mark = 0;
  CallbackSink sink([&](const Sample& s) {
    const double v = power(s.value, m) - block_mean(s.block_size);
    const double t = sum + v;
    carry += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
    if (next_mark < marks.size() && s.index == marks[next_mark]) {
      trace.push_back({s.index, (sum + carry) / static_cast<double>(s.index)});
      ++next_mark;
    }
  });
  SampleSink* sinks[] = {&sink};
  sample_run(stream, scheme, k_max, sinks);
  return trace;
}

}  // namespace seqclt
