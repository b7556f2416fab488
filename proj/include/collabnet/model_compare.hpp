#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "collabnet/binning.hpp"
#include "collabnet/fitters.hpp"

namespace collabnet {

struct ChiSquared {
  double value = std::numeric_limits<double>::quiet_NaN();
  double per_bin = std::numeric_limits<double>::quiet_NaN();
  int bins_included = 0;
  int bins_excluded = 0;
};

/// Pearson chi-squared between observed bin counts and N times the model's
/// bin mass. Bins outside the model's support (power law below x_min) are
/// excluded and counted; expected counts are floored at 1e-9.
ChiSquared chi_squared(const AdaptiveHistogram& hist, const ModelParams& params);

/// Scale A of the anchored power-law prediction: the predicted count over
/// [lo, hi) is A * integral over the bin of d^-gamma. A is chosen so the
/// bins at or above x_min carry the observed tail count.
double power_law_anchor_scale(const AdaptiveHistogram& hist,
                              const ModelParams& pl);

/// Expected counts per bin under a fitted power law, anchored so the bins at
/// or above x_min carry the observed tail count, and extrapolated with the
/// same exponent below x_min. This is the "power-law prediction" that the
/// flattening and cutoff measures compare against.
std::vector<double> power_law_expected_counts(const AdaptiveHistogram& hist,
                                              const ModelParams& pl);

/// Percentage by which observed counts exceed the power-law prediction over
/// the bins covering degrees 1..d_low. Empty region -> nullopt.
std::optional<double> flattening_excess(const AdaptiveHistogram& hist,
                                        const ModelParams& pl, int d_low = 5);

/// Smallest bin-center degree from which observations stay within tol_pct of
/// the power-law prediction through the last well-populated bin.
std::optional<double> cutoff_degree(const AdaptiveHistogram& hist,
                                    const ModelParams& pl,
                                    double tol_pct = 5.0);

enum class ScalingMode { power, log };

struct ScalingFit {
  double slope = std::numeric_limits<double>::quiet_NaN();  // exponent in power mode
  double intercept = std::numeric_limits<double>::quiet_NaN();
  double r_squared = std::numeric_limits<double>::quiet_NaN();
};

/// power: least squares on (ln N, ln value), slope is the exponent.
/// log: least squares on (ln N, value), slope is the ln N coefficient.
ScalingFit scaling_regression(const std::vector<std::pair<double, double>>& points,
                              ScalingMode mode);

struct Ranking {
  ModelFamily best = ModelFamily::power_law;
  bool tie = false;
  // 100 * (chi2_family - chi2_best) / chi2_family, for each converged family
  std::vector<std::pair<ModelFamily, double>> margins;
};

/// Minimum chi-squared among converged fits; ties break by the fixed family
/// order power_law, log_normal, weibull and are flagged.
Ranking rank_models(const std::vector<FitResult>& fits);

struct ComparisonRecord {
  int snapshot_year = 0;
  std::int64_t n = 0;
  double chi2_pl = std::numeric_limits<double>::quiet_NaN();
  double chi2_ln = std::numeric_limits<double>::quiet_NaN();
  double chi2_wb = std::numeric_limits<double>::quiet_NaN();
  std::optional<ModelFamily> best;  // empty when fewer than 2 families ran
  bool tie = false;
  std::optional<double> flattening_pct;
  std::optional<double> d_c;
};

}  // namespace collabnet
