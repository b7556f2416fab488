#include "collabnet/model_compare.hpp"

#include <algorithm>
#include <cmath>

#include "collabnet/errors.hpp"

namespace collabnet {

ChiSquared chi_squared(const AdaptiveHistogram& hist,
                       const ModelParams& params) {
  if (hist.bins.empty()) throw InputError("histogram has no bins");

  ChiSquared out;
  out.value = 0.0;
  for (const auto& bin : hist.bins) {
    if (params.family == ModelFamily::power_law && bin.lo < params.x_min) {
      ++out.bins_excluded;
      continue;
    }
    const double expected = std::max(
        static_cast<double>(hist.total) *
            model_cell_mass(bin.lo, bin.hi, params),
        1e-9);
    const double diff = static_cast<double>(bin.count) - expected;
    out.value += diff * diff / expected;
    ++out.bins_included;
  }
  if (out.bins_included == 0)
    throw NumericalError("model support excludes every histogram bin");
  out.per_bin = out.value / out.bins_included;
  return out;
}

double power_law_anchor_scale(const AdaptiveHistogram& hist,
                              const ModelParams& pl) {
  if (pl.family != ModelFamily::power_law)
    throw InputError("expected power-law parameters");
  if (hist.bins.empty()) throw InputError("histogram has no bins");

  std::size_t first_tail = hist.bins.size();
  for (std::size_t i = 0; i < hist.bins.size(); ++i) {
    if (hist.bins[i].lo >= pl.x_min) {
      first_tail = i;
      break;
    }
  }
  if (first_tail == hist.bins.size())
    throw NumericalError("x_min lies beyond the histogram; no tail to anchor");

  double n_tail = 0.0;
  for (std::size_t i = first_tail; i < hist.bins.size(); ++i)
    n_tail += static_cast<double>(hist.bins[i].count);

  // A * integral_{x*-1/2}^{inf} d^-gamma = n_tail, with x* the first
  // anchored edge; bins below x* reuse the same extrapolated curve. The
  // half-unit shift matches the power law's integer-cell convention
  // (see model_cell_mass).
  const double x_star = hist.bins[first_tail].lo;
  const double tail_integral =
      std::pow(x_star - 0.5, 1.0 - pl.gamma) / (pl.gamma - 1.0);
  return n_tail / tail_integral;
}

std::vector<double> power_law_expected_counts(const AdaptiveHistogram& hist,
                                              const ModelParams& pl) {
  const double scale = power_law_anchor_scale(hist, pl);

  std::vector<double> expected;
  expected.reserve(hist.bins.size());
  for (const auto& bin : hist.bins)
    expected.push_back(scale * power_law_mass_unnormalized(
                                   bin.lo - 0.5, bin.hi - 0.5, pl.gamma));
  return expected;
}

std::optional<double> flattening_excess(const AdaptiveHistogram& hist,
                                        const ModelParams& pl, int d_low) {
  if (d_low < 1) throw InputError("d_low must be at least 1");
  const auto expected = power_law_expected_counts(hist, pl);

  double observed_sum = 0.0, expected_sum = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < hist.bins.size(); ++i) {
    const auto& bin = hist.bins[i];
    // bins whose degrees all lie in 1..d_low
    if (bin.lo >= 1.0 && bin.hi <= d_low + 1.0) {
      observed_sum += static_cast<double>(bin.count);
      expected_sum += expected[i];
      any = true;
    }
  }
  if (!any || !(expected_sum > 0.0)) return std::nullopt;
  return 100.0 * (observed_sum - expected_sum) / expected_sum;
}

std::optional<double> cutoff_degree(const AdaptiveHistogram& hist,
                                    const ModelParams& pl, double tol_pct) {
  if (!(tol_pct > 0.0)) throw InputError("tolerance must be positive");
  const auto expected = power_law_expected_counts(hist, pl);
  const double tol = tol_pct / 100.0;

  int last = -1;
  for (std::size_t i = 0; i < hist.bins.size(); ++i)
    if (hist.bins[i].count >= hist.target_per_bin) last = static_cast<int>(i);
  if (last < 0) return std::nullopt;

  auto within = [&](int i) {
    const double e = expected[i];
    if (!(e > 0.0)) return false;
    return std::abs(static_cast<double>(hist.bins[i].count) / e - 1.0) <= tol;
  };

  int start = -1;
  for (int i = last; i >= 0; --i) {
    if (within(i))
      start = i;
    else
      break;
  }
  if (start < 0) return std::nullopt;
  return hist.bins[start].center();
}

ScalingFit scaling_regression(
    const std::vector<std::pair<double, double>>& points, ScalingMode mode) {
  if (points.size() < 3)
    throw InputError("scaling regression needs at least 3 points");

  std::vector<double> xs, ys;
  for (const auto& [n, value] : points) {
    if (!(n > 0.0)) throw InputError("sample sizes must be positive");
    if (mode == ScalingMode::power && !(value > 0.0))
      throw InputError("power-mode regression requires positive values");
    xs.push_back(std::log(n));
    ys.push_back(mode == ScalingMode::power ? std::log(value) : value);
  }

  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0))
    throw InputError("scaling regression needs at least 2 distinct sizes");

  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

Ranking rank_models(const std::vector<FitResult>& fits) {
  // fixed comparison order: power_law, log_normal, weibull
  std::vector<const FitResult*> usable;
  for (ModelFamily family : {ModelFamily::power_law, ModelFamily::log_normal,
                             ModelFamily::weibull}) {
    for (const auto& fit : fits) {
      if (fit.params.family == family && fit.converged &&
          std::isfinite(fit.chi2)) {
        usable.push_back(&fit);
        break;
      }
    }
  }
  if (usable.size() < 2)
    throw InputError("model ranking needs at least 2 converged fits");

  double best_chi2 = usable.front()->chi2;
  const FitResult* best = usable.front();
  for (const auto* fit : usable) {
    if (fit->chi2 < best_chi2) {
      best_chi2 = fit->chi2;
      best = fit;
    }
  }

  Ranking ranking;
  ranking.best = best->params.family;
  int at_min = 0;
  for (const auto* fit : usable) {
    if (fit->chi2 == best_chi2) ++at_min;
    const double margin =
        fit->chi2 > 0.0 ? 100.0 * (fit->chi2 - best_chi2) / fit->chi2 : 0.0;
    ranking.margins.emplace_back(fit->params.family, margin);
  }
  ranking.tie = at_min > 1;
  return ranking;
}

}  // namespace collabnet
