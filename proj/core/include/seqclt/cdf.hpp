#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "seqclt/sampling.hpp"

namespace seqclt {

// Standard normal CDF, absolute error below 1e-12. Saturates to exactly 0 / 1
// for |x| > 40.
double phi(double x);

// Empirical distribution function of a finite sample. Collect with add() or
// as a SampleSink, then freeze() (sorts) before evaluating.
class EmpiricalCDF final : public SampleSink {
public:
  EmpiricalCDF() = default;
  explicit EmpiricalCDF(std::vector<double> samples);

  void add(double x);
  void observe(const Sample& sample) override { add(sample.value); }

  void freeze();
  bool frozen() const noexcept { return frozen_; }

  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }

  // Sorted samples; requires frozen().
  std::span<const double> sorted() const;

  // Fraction of samples <= t; requires frozen() and a non-empty sample.
  double eval(double t) const;

private:
  void require_frozen() const;

  std::vector<double> samples_;
  bool frozen_ = false;
};

// sup_t |F_k(t) - phi(t)|, exact: the supremum is attained at the jumps of the
// step function, so it is the max over order statistics x_(i) of
// max(|i/k - phi(x_(i))|, |(i-1)/k - phi(x_(i))|).
// Throws std::invalid_argument on an empty sample.
double ks_distance(const EmpiricalCDF& ecdf);

struct CdfRow {
  double t = 0.0;
  double ecdf = 0.0;
  double phi = 0.0;
  double diff = 0.0;  // ecdf - phi
};

std::vector<CdfRow> pointwise_error(const EmpiricalCDF& ecdf, std::span<const double> grid);

}  // namespace seqclt
