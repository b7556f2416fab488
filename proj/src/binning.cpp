#include "collabnet/binning.hpp"

#include <algorithm>
#include <cmath>

#include "collabnet/errors.hpp"

namespace collabnet {

double HistogramBin::center() const { return std::sqrt(lo * hi); }

namespace {

AdaptiveHistogram bins_from_sorted(const std::vector<int>& degrees,
                                   std::int64_t target) {
  if (target < 1) throw InputError("bin target must be positive");
  if (degrees.empty()) throw InputError("empty sample");
  if (degrees.front() < 1) throw InputError("degrees must be >= 1");

  // Run-length encode the sorted degrees.
  std::vector<std::pair<int, std::int64_t>> runs;
  for (int d : degrees) {
    if (!runs.empty() && runs.back().first == d)
      ++runs.back().second;
    else
      runs.emplace_back(d, 1);
  }

  AdaptiveHistogram hist;
  hist.total = static_cast<std::int64_t>(degrees.size());
  hist.target_per_bin = target;

  // Merge consecutive degree values until each bin reaches the target.
  // A bin's upper edge extends to the next bin's first value so the bins
  // partition [d_min, d_max + 1) even when degree values are sparse.
  std::size_t i = 0;
  while (i < runs.size()) {
    HistogramBin bin;
    bin.lo = runs[i].first;
    while (i < runs.size() && bin.count < target) {
      bin.count += runs[i].second;
      ++i;
    }
    bin.hi = i < runs.size() ? runs[i].first : runs.back().first + 1.0;
    hist.bins.push_back(bin);
  }

  // A short trailing bin folds into its predecessor.
  if (hist.bins.size() >= 2 && hist.bins.back().count < target) {
    auto tail = hist.bins.back();
    hist.bins.pop_back();
    hist.bins.back().hi = tail.hi;
    hist.bins.back().count += tail.count;
  }

  for (auto& b : hist.bins)
    b.density = static_cast<double>(b.count) /
                (b.width() * static_cast<double>(hist.total));
  return hist;
}

}  // namespace

AdaptiveHistogram build_adaptive_bins(const std::vector<int>& degrees,
                                      std::int64_t target) {
  std::vector<int> sorted = degrees;
  std::sort(sorted.begin(), sorted.end());
  return bins_from_sorted(sorted, target);
}

AdaptiveHistogram build_adaptive_bins(const DegreeSample& sample,
                                      std::int64_t target) {
  return bins_from_sorted(sample.degrees, target);
}

EmpiricalCdf::EmpiricalCdf(std::vector<int> degrees)
    : degrees_(std::move(degrees)) {
  if (degrees_.empty()) throw InputError("empty sample");
  std::sort(degrees_.begin(), degrees_.end());
}

EmpiricalCdf::EmpiricalCdf(const DegreeSample& sample)
    : EmpiricalCdf(sample.degrees) {}

double EmpiricalCdf::operator()(double x) const {
  auto it = std::upper_bound(degrees_.begin(), degrees_.end(), x);
  return static_cast<double>(it - degrees_.begin()) /
         static_cast<double>(degrees_.size());
}

std::vector<double> log_grid(double lo, double hi, int n_points) {
  if (!(lo > 0.0) || !(hi > lo)) throw InputError("log grid needs 0 < lo < hi");
  if (n_points < 2) throw InputError("log grid needs at least 2 points");
  std::vector<double> grid(n_points);
  const double step = (std::log(hi) - std::log(lo)) / (n_points - 1);
  for (int i = 0; i < n_points; ++i) grid[i] = lo * std::exp(step * i);
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<double> pdf_from_cdf(const std::function<double(double)>& cdf,
                                 const std::vector<double>& grid) {
  if (grid.size() < 3)
    throw InputError("differentiation grid needs at least 3 points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw InputError("differentiation grid must be strictly increasing");

  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = cdf(grid[i]);

  const std::size_t n = grid.size();
  std::vector<double> pdf(n);
  pdf[0] = (f[1] - f[0]) / (grid[1] - grid[0]);
  for (std::size_t i = 1; i + 1 < n; ++i)
    pdf[i] = (f[i + 1] - f[i - 1]) / (grid[i + 1] - grid[i - 1]);
  pdf[n - 1] = (f[n - 1] - f[n - 2]) / (grid[n - 1] - grid[n - 2]);

  for (auto& p : pdf) p = std::max(0.0, p);
  return pdf;
}

}  // namespace collabnet
