#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "collabnet/temporal_graph.hpp"

namespace collabnet {

/// Half-open degree interval [lo, hi).
struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::int64_t count = 0;
  double density = 0.0;  // count / ((hi - lo) * N)

  double width() const { return hi - lo; }
  /// Geometric mean of the edges, the representative abscissa for fitting.
  double center() const;
};

/// Variable-width histogram over [d_min, d_max + 1). Every bin holds at
/// least target_per_bin observations once N >= target_per_bin; identical
/// degree values are never split across bins.
struct AdaptiveHistogram {
  std::vector<HistogramBin> bins;
  std::int64_t total = 0;
  std::int64_t target_per_bin = 1000;
};

AdaptiveHistogram build_adaptive_bins(const std::vector<int>& degrees,
                                      std::int64_t target = 1000);
AdaptiveHistogram build_adaptive_bins(const DegreeSample& sample,
                                      std::int64_t target = 1000);

/// Right-continuous empirical distribution function P(d <= x).
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<int> degrees);
  explicit EmpiricalCdf(const DegreeSample& sample);

  double operator()(double x) const;
  int min_degree() const { return degrees_.front(); }
  int max_degree() const { return degrees_.back(); }
  std::int64_t size() const { return static_cast<std::int64_t>(degrees_.size()); }

 private:
  std::vector<int> degrees_;  // sorted ascending
};

/// n_points log-spaced abscissas from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n_points);

/// Densities from finite differences of the CDF on the grid: central
/// differences in the interior, one-sided at the ends, negatives clamped
/// to zero.
std::vector<double> pdf_from_cdf(const std::function<double(double)>& cdf,
                                 const std::vector<double>& grid);

}  // namespace collabnet
