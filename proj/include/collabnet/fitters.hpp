#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "collabnet/binning.hpp"
#include "collabnet/temporal_graph.hpp"

namespace collabnet {

enum class ModelFamily { power_law, log_normal, weibull };

std::string family_name(ModelFamily family);

/// Parameters for one of the three candidate families. Use the named
/// constructors; they validate domains.
struct ModelParams {
  ModelFamily family = ModelFamily::power_law;
  // power_law
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double x_min = 1.0;
  // log_normal
  double mu = std::numeric_limits<double>::quiet_NaN();
  double sigma = std::numeric_limits<double>::quiet_NaN();
  // weibull
  double k = std::numeric_limits<double>::quiet_NaN();
  double lambda = std::numeric_limits<double>::quiet_NaN();

  static ModelParams power_law(double gamma, double x_min = 1.0);
  static ModelParams log_normal(double mu, double sigma);
  static ModelParams weibull(double k, double lambda);

  double p1() const;  // gamma | mu | k
  double p2() const;  // 0     | sigma | lambda
};

struct FitResult {
  ModelParams params;
  double sse = std::numeric_limits<double>::quiet_NaN();
  double chi2 = std::numeric_limits<double>::quiet_NaN();  // set by model comparison
  std::int64_t n = 0;
  int iterations = 0;
  bool converged = false;
};

// Densities. power_law_pdf is the continuous Pareto density normalized on
// [x_min, inf); it is zero below x_min.
double power_law_pdf(double d, double gamma, double x_min);
double log_normal_pdf(double d, double mu, double sigma);
double weibull_pdf(double d, double k, double lambda);

// Cumulative distributions, zero below the support.
double power_law_cdf(double d, double gamma, double x_min);
double log_normal_cdf(double d, double mu, double sigma);
double weibull_cdf(double d, double k, double lambda);

double model_pdf(double d, const ModelParams& params);
double model_cdf(double d, const ModelParams& params);
/// Probability mass the model assigns to [lo, hi).
double model_bin_mass(double lo, double hi, const ModelParams& params);

/// Probability mass the continuous model assigns to a histogram bin
/// [lo, hi) over integer degrees. An integer degree d stands for the
/// continuous cell (d-1, d] — degrees count completed collaborations, so
/// the underlying quantity rounds up — hence the bin's cells cover
/// (lo-1, hi-1]. The power law instead keeps the discrete convention of
/// its maximum-likelihood estimator: cells (d-1/2, d+1/2] normalized by
/// the (x_min - 1/2) reference, so the mass over [lo, hi) is
/// [(lo-1/2)^(1-gamma) - (hi-1/2)^(1-gamma)] / (x_min-1/2)^(1-gamma).
double model_cell_mass(double lo, double hi, const ModelParams& params);

/// Integral of d^(-gamma) over [lo, hi), 0 < lo < hi, gamma > 1. Building
/// block for extrapolating a fitted power law below its x_min.
double power_law_mass_unnormalized(double lo, double hi, double gamma);

/// Gamma function via the Lanczos approximation, relative error < 1e-10 for
/// arguments in (0, 30).
double lanczos_gamma(double z);

enum class SampleKind { auto_detect, continuous, discrete };

/// Clauset-style tail estimator: gamma = 1 + n / sum ln(d_i / x_min) over the
/// samples with d_i >= x_min. Discrete samples use the x_min - 1/2 offset
/// correction; auto_detect treats all-integer data as discrete.
FitResult fit_power_law_mle(std::span<const double> data, double x_min,
                            SampleKind kind = SampleKind::auto_detect);
FitResult fit_power_law_mle(const DegreeSample& sample, double x_min);

struct XminSelection {
  double x_min = 1.0;
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double ks_distance = std::numeric_limits<double>::quiet_NaN();
  bool fallback = false;   // fewer than 10 distinct degrees, x_min forced to 1
  std::string warning;
};

/// Scan the observed degree values for the x_min minimizing the
/// Kolmogorov-Smirnov distance between the tail and its fitted power law.
/// Ties break toward the smallest candidate. Candidates whose tail keeps
/// fewer than min_tail observations are not scanned: a KS distance over a
/// sliver of the data is noise, and downstream goodness-of-fit needs the
/// selected tail to be well populated.
XminSelection select_x_min(const DegreeSample& sample,
                           std::int64_t min_tail = 10);

struct CurveModel {
  std::function<double(double x, std::span<const double> params)> eval;
  // Empty means the whole parameter space is admissible.
  std::function<bool(std::span<const double> params)> in_domain;
};

struct LmOptions {
  int max_iterations = 200;
  double sse_rel_tol = 1e-8;
  double grad_tol = 1e-10;
  double initial_damping = 1e-3;
  double max_damping = 1e12;
};

struct LmResult {
  std::vector<double> params;
  double sse = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  bool converged = false;
};

/// Levenberg-Marquardt least squares: minimizes sum_i w_i (y_i - f(x_i))^2.
/// Steps solve (J^T J + eta D) delta = J^T r with D = diag(J^T J); damping
/// doubles on rejected steps and shrinks by 3 on accepted ones. Steps that
/// leave the parameter domain are rejected. Weights default to 1.
LmResult lm_minimize(const CurveModel& model, std::span<const double> xs,
                     std::span<const double> ys, std::vector<double> init,
                     const LmOptions& options = {},
                     std::span<const double> weights = {});

/// Least-squares fits of binned densities: the model predicts each bin's
/// average density, model_cell_mass(lo, hi) / (hi - lo), so integer samples
/// and continuous bin edges share one convention. With weighted=true
/// residuals are weighted by the reciprocal density variance
/// (bin_width * N)^2 / count.
FitResult fit_weibull(const AdaptiveHistogram& hist, bool weighted = false);
FitResult fit_log_normal(const AdaptiveHistogram& hist, bool weighted = false);

}  // namespace collabnet
