#include "seqclt/cdf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace seqclt {

double phi(double x) {
  if (x > 40.0) return 1.0;
  if (x < -40.0) return 0.0;
  // erfc keeps full relative accuracy in the lower tail, where 1 + erf would cancel.
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

EmpiricalCDF::EmpiricalCDF(std::vector<double> samples) : samples_(std::move(samples)) { freeze(); }

void EmpiricalCDF::add(double x) {
  samples_.push_back(x);
  frozen_ = false;
}

void EmpiricalCDF::freeze() {
  if (!frozen_) std::sort(samples_.begin(), samples_.end());
  frozen_ = true;
}

void EmpiricalCDF::require_frozen() const {
  if (!frozen_) throw std::logic_error("empirical CDF must be frozen before evaluation");
}

std::span<const double> EmpiricalCDF::sorted() const {
  require_frozen();
  return samples_;
}

double EmpiricalCDF::eval(double t) const {
  require_frozen();
  if (samples_.empty()) throw std::invalid_argument("empirical CDF of an empty sample");
  const auto below = std::upper_bound(samples_.begin(), samples_.end(), t) - samples_.begin();
  return static_cast<double>(below) / static_cast<double>(samples_.size());
}

double ks_distance(const EmpiricalCDF& ecdf) {
  const auto xs = ecdf.sorted();
  if (xs.empty()) throw std::invalid_argument("KS distance of an empty sample");
  const auto k = static_cast<double>(xs.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double p = phi(xs[i]);
    const double above = static_cast<double>(i + 1) / k;
    const double below = static_cast<double>(i) / k;
    sup = std::max({sup, std::fabs(above - p), std::fabs(below - p)});
  }
  return sup;
}

std::vector<CdfRow> pointwise_error(const EmpiricalCDF& ecdf, std::span<const double> grid) {
  std::vector<CdfRow> rows;
  rows.reserve(grid.size());
  for (double t : grid) {
    const double f = ecdf.eval(t);
    const double p = phi(t);
    rows.push_back({t, f, p, f - p});
  }
  return rows;
}

}  // namespace seqclt
