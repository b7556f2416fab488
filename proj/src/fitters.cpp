#include "collabnet/fitters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "collabnet/errors.hpp"

namespace collabnet {

std::string family_name(ModelFamily family) {
  switch (family) {
    case ModelFamily::power_law:
      return "power_law";
    case ModelFamily::log_normal:
      return "log_normal";
    case ModelFamily::weibull:
      return "weibull";
  }
  return "unknown";
}

ModelParams ModelParams::power_law(double gamma, double x_min) {
  if (!(gamma > 1.0))
    throw InputError("non-normalizable power law: gamma must exceed 1");
  if (!(x_min > 0.0)) throw InputError("x_min must be positive");
  ModelParams p;
  p.family = ModelFamily::power_law;
  p.gamma = gamma;
  p.x_min = x_min;
  return p;
}

ModelParams ModelParams::log_normal(double mu, double sigma) {
  if (!(sigma > 0.0)) throw InputError("sigma must be positive");
  if (!std::isfinite(mu)) throw InputError("mu must be finite");
  ModelParams p;
  p.family = ModelFamily::log_normal;
  p.mu = mu;
  p.sigma = sigma;
  return p;
}

ModelParams ModelParams::weibull(double k, double lambda) {
  if (!(k > 0.0) || !(lambda > 0.0))
    throw InputError("weibull shape and scale must be positive");
  ModelParams p;
  p.family = ModelFamily::weibull;
  p.k = k;
  p.lambda = lambda;
  return p;
}

double ModelParams::p1() const {
  switch (family) {
    case ModelFamily::power_law:
      return gamma;
    case ModelFamily::log_normal:
      return mu;
    case ModelFamily::weibull:
      return k;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double ModelParams::p2() const {
  switch (family) {
    case ModelFamily::power_law:
      return 0.0;
    case ModelFamily::log_normal:
      return sigma;
    case ModelFamily::weibull:
      return lambda;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double power_law_pdf(double d, double gamma, double x_min) {
  if (!(gamma > 1.0))
    throw InputError("non-normalizable power law: gamma must exceed 1");
  if (!(x_min > 0.0)) throw InputError("x_min must be positive");
  if (d < x_min) return 0.0;
  return (gamma - 1.0) / x_min * std::pow(d / x_min, -gamma);
}

double log_normal_pdf(double d, double mu, double sigma) {
  if (!(sigma > 0.0)) throw InputError("sigma must be positive");
  if (!(d > 0.0)) throw InputError("log-normal density requires d > 0");
  const double z = (std::log(d) - mu) / sigma;
  return std::exp(-0.5 * z * z) /
         (d * sigma * std::sqrt(2.0 * std::numbers::pi));
}

double weibull_pdf(double d, double k, double lambda) {
  if (!(k > 0.0) || !(lambda > 0.0))
    throw InputError("weibull shape and scale must be positive");
  if (d < 0.0) throw InputError("weibull density requires d >= 0");
  if (d == 0.0) {
    if (k < 1.0) return std::numeric_limits<double>::infinity();
    return k == 1.0 ? 1.0 / lambda : 0.0;
  }
  const double t = d / lambda;
  return k / lambda * std::pow(t, k - 1.0) * std::exp(-std::pow(t, k));
}

double power_law_cdf(double d, double gamma, double x_min) {
  if (!(gamma > 1.0))
    throw InputError("non-normalizable power law: gamma must exceed 1");
  if (!(x_min > 0.0)) throw InputError("x_min must be positive");
  if (d <= x_min) return 0.0;
  return 1.0 - std::pow(d / x_min, 1.0 - gamma);
}

double log_normal_cdf(double d, double mu, double sigma) {
  if (!(sigma > 0.0)) throw InputError("sigma must be positive");
  if (d <= 0.0) return 0.0;
  return 0.5 * std::erfc(-(std::log(d) - mu) / (sigma * std::numbers::sqrt2));
}

double weibull_cdf(double d, double k, double lambda) {
  if (!(k > 0.0) || !(lambda > 0.0))
    throw InputError("weibull shape and scale must be positive");
  if (d <= 0.0) return 0.0;
  return -std::expm1(-std::pow(d / lambda, k));
}

double model_pdf(double d, const ModelParams& params) {
  switch (params.family) {
    case ModelFamily::power_law:
      return power_law_pdf(d, params.gamma, params.x_min);
    case ModelFamily::log_normal:
      return log_normal_pdf(d, params.mu, params.sigma);
    case ModelFamily::weibull:
      return weibull_pdf(d, params.k, params.lambda);
  }
  throw InputError("unknown model family");
}

double model_cdf(double d, const ModelParams& params) {
  switch (params.family) {
    case ModelFamily::power_law:
      return power_law_cdf(d, params.gamma, params.x_min);
    case ModelFamily::log_normal:
      return log_normal_cdf(d, params.mu, params.sigma);
    case ModelFamily::weibull:
      return weibull_cdf(d, params.k, params.lambda);
  }
  throw InputError("unknown model family");
}

double model_bin_mass(double lo, double hi, const ModelParams& params) {
  if (!(hi > lo)) throw InputError("bin edges must satisfy lo < hi");
  return std::max(0.0, model_cdf(hi, params) - model_cdf(lo, params));
}

double model_cell_mass(double lo, double hi, const ModelParams& params) {
  if (!(hi > lo)) throw InputError("bin edges must satisfy lo < hi");
  if (params.family == ModelFamily::power_law) {
    // discrete power law on cells (d-1/2, d+1/2], normalized at x_min-1/2
    const double ref = params.x_min - 0.5;
    if (!(ref > 0.0))
      throw InputError("power-law cell mass needs x_min > 1/2");
    const double a = std::max(lo - 0.5, ref);
    const double b = std::max(hi - 0.5, ref);
    if (!(b > a)) return 0.0;
    const double e = 1.0 - params.gamma;
    return (std::pow(a / ref, e) - std::pow(b / ref, e));
  }
  const double a = std::max(lo - 1.0, 0.0);
  const double b = std::max(hi - 1.0, 0.0);
  if (!(b > a)) return 0.0;
  return std::max(0.0, model_cdf(b, params) - model_cdf(a, params));
}

double power_law_mass_unnormalized(double lo, double hi, double gamma) {
  if (!(lo > 0.0) || !(hi > lo)) throw InputError("need 0 < lo < hi");
  if (!(gamma > 1.0))
    throw InputError("non-normalizable power law: gamma must exceed 1");
  return (std::pow(lo, 1.0 - gamma) - std::pow(hi, 1.0 - gamma)) /
         (gamma - 1.0);
}

double lanczos_gamma(double z) {
  static constexpr double coef[9] = {
      0.99999999999980993,    676.5203681218851,     -1259.1392167224028,
      771.32342877765313,     -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,   9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z < 0.5) {
    // reflection for the left half plane
    return std::numbers::pi /
           (std::sin(std::numbers::pi * z) * lanczos_gamma(1.0 - z));
  }
  z -= 1.0;
  double x = coef[0];
  for (int i = 1; i < 9; ++i) x += coef[i] / (z + i);
  const double t = z + 7.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) *
         std::exp(-t) * x;
}

FitResult fit_power_law_mle(std::span<const double> data, double x_min,
                            SampleKind kind) {
  if (!(x_min > 0.0)) throw InputError("x_min must be positive");

  std::vector<double> tail;
  bool all_integer = true;
  for (double d : data) {
    if (!std::isfinite(d)) throw InputError("non-finite sample value");
    if (d != std::floor(d)) all_integer = false;
    if (d >= x_min) tail.push_back(d);
  }
  if (tail.size() < 2)
    throw InputError("power-law fit needs at least 2 samples at or above x_min");

  const bool discrete =
      kind == SampleKind::discrete ||
      (kind == SampleKind::auto_detect && all_integer);
  const double ref = discrete ? x_min - 0.5 : x_min;
  if (!(ref > 0.0))
    throw InputError("discrete power-law fit requires x_min > 1/2");

  double log_sum = 0.0;
  bool degenerate = true;
  for (double d : tail) {
    if (d != x_min) degenerate = false;
    log_sum += std::log(d / ref);
  }
  if (degenerate) throw InputError("degenerate tail: all samples equal x_min");

  FitResult fit;
  fit.params = ModelParams::power_law(
      1.0 + static_cast<double>(tail.size()) / log_sum, x_min);
  fit.n = static_cast<std::int64_t>(tail.size());
  fit.iterations = 0;
  fit.converged = true;
  return fit;
}

FitResult fit_power_law_mle(const DegreeSample& sample, double x_min) {
  std::vector<double> data(sample.degrees.begin(), sample.degrees.end());
  return fit_power_law_mle(data, x_min, SampleKind::discrete);
}

XminSelection select_x_min(const DegreeSample& sample,
                           std::int64_t min_tail) {
  const auto& deg = sample.degrees;
  if (deg.empty()) throw InputError("empty sample");

  // Run-length encode with suffix statistics.
  std::vector<int> values;
  std::vector<std::int64_t> counts;
  for (int d : deg) {
    if (!values.empty() && values.back() == d)
      ++counts.back();
    else {
      values.push_back(d);
      counts.push_back(1);
    }
  }

  if (values.size() < 10) {
    XminSelection sel;
    sel.x_min = 1.0;
    sel.fallback = true;
    sel.warning =
        "fewer than 10 distinct degree values; falling back to x_min = 1";
    try {
      sel.gamma = fit_power_law_mle(sample, 1.0).params.gamma;
    } catch (const InputError&) {
      // leave gamma unset; callers refitting at x_min = 1 will see the error
    }
    return sel;
  }

  const std::size_t nv = values.size();
  std::vector<std::int64_t> suffix_count(nv + 1, 0);
  std::vector<double> suffix_lnsum(nv + 1, 0.0);
  for (std::size_t i = nv; i-- > 0;) {
    suffix_count[i] = suffix_count[i + 1] + counts[i];
    suffix_lnsum[i] =
        suffix_lnsum[i + 1] + counts[i] * std::log(static_cast<double>(values[i]));
  }

  XminSelection best;
  bool have = false;
  for (std::size_t i = 0; i + 1 < nv; ++i) {
    const double n_tail = static_cast<double>(suffix_count[i]);
    if (suffix_count[i] < std::max<std::int64_t>(min_tail, 10)) break;
    const double ref = values[i] - 0.5;
    if (!(ref > 0.0)) continue;
    const double log_sum = suffix_lnsum[i] - n_tail * std::log(ref);
    const double gamma = 1.0 + n_tail / log_sum;
    if (!(gamma > 1.0) || !std::isfinite(gamma)) continue;

    // KS distance between the tail empirical CDF and the fitted model,
    // compared at the right edge of each integer cell.
    double ks = 0.0;
    std::int64_t cum = 0;
    for (std::size_t j = i; j < nv; ++j) {
      cum += counts[j];
      const double f_emp = static_cast<double>(cum) / n_tail;
      const double f_mod =
          1.0 - std::pow((values[j] + 0.5) / ref, 1.0 - gamma);
      ks = std::max(ks, std::abs(f_emp - f_mod));
    }

    if (!have || ks < best.ks_distance) {
      have = true;
      best.x_min = values[i];
      best.gamma = gamma;
      best.ks_distance = ks;
    }
  }

  if (!have) {
    // every candidate was unusable; fall back as for tiny samples
    best.x_min = 1.0;
    best.fallback = true;
    best.warning = "no usable x_min candidate; falling back to x_min = 1";
    try {
      best.gamma = fit_power_law_mle(sample, 1.0).params.gamma;
    } catch (const InputError&) {
    }
  }
  return best;
}

namespace {

// Gaussian elimination with partial pivoting; false on a singular system.
bool solve_linear(std::vector<double> a, std::vector<double> b, std::size_t n,
                  std::vector<double>& out) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (!(std::abs(a[piv * n + col]) > 1e-300)) return false;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c)
        std::swap(a[piv * n + c], a[col * n + c]);
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  out.assign(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= a[r * n + c] * out[c];
    out[r] = s / a[r * n + r];
    if (!std::isfinite(out[r])) return false;
  }
  return true;
}

}  // namespace

LmResult lm_minimize(const CurveModel& model, std::span<const double> xs,
                     std::span<const double> ys, std::vector<double> init,
                     const LmOptions& options, std::span<const double> weights) {
  if (!model.eval) throw InputError("curve model must provide an evaluator");
  if (xs.size() != ys.size()) throw InputError("x and y lengths differ");
  const std::size_t n = xs.size();
  const std::size_t p = init.size();
  if (p == 0) throw InputError("empty parameter vector");
  if (n < p) throw InputError("need at least as many data points as parameters");
  if (!weights.empty() && weights.size() != n)
    throw InputError("weight length differs from data length");
  for (double w : weights)
    if (!(w > 0.0)) throw InputError("weights must be positive");

  auto in_domain = [&](const std::vector<double>& th) {
    return !model.in_domain || model.in_domain(th);
  };
  if (!in_domain(init))
    throw InputError("initial parameters outside the model domain");

  auto weight_at = [&](std::size_t i) {
    return weights.empty() ? 1.0 : weights[i];
  };
  auto sse_of = [&](const std::vector<double>& th) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double f = model.eval(xs[i], th);
      if (!std::isfinite(f)) return std::numeric_limits<double>::infinity();
      const double r = ys[i] - f;
      s += weight_at(i) * r * r;
    }
    return s;
  };

  std::vector<double> theta = init;
  double sse = sse_of(theta);
  if (!std::isfinite(sse))
    throw NumericalError("model not evaluable at the initial parameters");

  LmResult res;
  res.params = theta;
  res.sse = sse;

  double eta = options.initial_damping;
  std::vector<double> jac(n * p), resid(n), jtj(p * p), jtr(p), delta;
  bool need_jacobian = true;

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    res.iterations = iter;

    if (need_jacobian) {
      for (std::size_t i = 0; i < n; ++i) {
        const double f0 = model.eval(xs[i], theta);
        resid[i] = std::sqrt(weight_at(i)) * (ys[i] - f0);
      }
      for (std::size_t j = 0; j < p; ++j) {
        const double h = 1e-6 * std::max(std::abs(theta[j]), 1e-3);
        std::vector<double> up = theta, down = theta;
        up[j] += h;
        down[j] -= h;
        double hp = in_domain(up) ? h : 0.0;
        double hm = in_domain(down) ? -h : 0.0;
        if (hp == hm) {
          for (std::size_t i = 0; i < n; ++i) jac[i * p + j] = 0.0;
          continue;
        }
        up[j] = theta[j] + hp;
        down[j] = theta[j] + hm;
        const double denom = hp - hm;
        for (std::size_t i = 0; i < n; ++i) {
          const double fp = model.eval(xs[i], up);
          const double fm = model.eval(xs[i], down);
          double g = (fp - fm) / denom;
          if (!std::isfinite(g)) g = 0.0;
          jac[i * p + j] = std::sqrt(weight_at(i)) * g;
        }
      }
      std::fill(jtj.begin(), jtj.end(), 0.0);
      std::fill(jtr.begin(), jtr.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < p; ++a) {
          jtr[a] += jac[i * p + a] * resid[i];
          for (std::size_t b = a; b < p; ++b)
            jtj[a * p + b] += jac[i * p + a] * jac[i * p + b];
        }
      }
      for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < a; ++b) jtj[a * p + b] = jtj[b * p + a];

      double grad_norm = 0.0;
      for (double g : jtr) grad_norm += g * g;
      if (std::sqrt(grad_norm) < options.grad_tol) {
        res.converged = true;
        break;
      }
      need_jacobian = false;
    }

    // (J^T J + eta D) delta = J^T r with D = diag(J^T J)
    std::vector<double> a = jtj;
    for (std::size_t j = 0; j < p; ++j) {
      const double djj = jtj[j * p + j];
      a[j * p + j] += eta * (djj > 0.0 ? djj : 1.0);
    }

    bool reject = false;
    std::vector<double> candidate;
    double cand_sse = std::numeric_limits<double>::infinity();
    if (!solve_linear(a, jtr, p, delta)) {
      reject = true;
    } else {
      candidate = theta;
      for (std::size_t j = 0; j < p; ++j) candidate[j] += delta[j];
      if (!in_domain(candidate)) {
        reject = true;
      } else {
        cand_sse = sse_of(candidate);
        if (!(cand_sse <= sse)) reject = true;
      }
    }

    if (reject) {
      eta *= 2.0;
      if (eta > options.max_damping) break;  // converged stays false
      continue;
    }

    const double rel = (sse - cand_sse) / std::max(sse, 1e-300);
    theta = std::move(candidate);
    sse = cand_sse;
    eta /= 3.0;
    need_jacobian = true;
    res.params = theta;
    res.sse = sse;
    if (rel < options.sse_rel_tol || sse == 0.0) {
      res.converged = true;
      break;
    }
  }

  res.params = theta;
  res.sse = sse;
  return res;
}

namespace {

struct BinnedMoments {
  double mean = 0.0, sd = 0.0, log_mean = 0.0, log_sd = 0.0;
};

BinnedMoments moments_of(const AdaptiveHistogram& hist) {
  double n = 0.0, s1 = 0.0, s2 = 0.0, l1 = 0.0, l2 = 0.0;
  for (const auto& b : hist.bins) {
    const double c = static_cast<double>(b.count);
    const double x = b.center();
    const double lx = std::log(x);
    n += c;
    s1 += c * x;
    s2 += c * x * x;
    l1 += c * lx;
    l2 += c * lx * lx;
  }
  BinnedMoments m;
  m.mean = s1 / n;
  m.sd = std::sqrt(std::max(0.0, s2 / n - m.mean * m.mean));
  m.log_mean = l1 / n;
  m.log_sd = std::sqrt(std::max(0.0, l2 / n - m.log_mean * m.log_mean));
  return m;
}

double weibull_cv_squared(double k) {
  const double g1 = lanczos_gamma(1.0 + 1.0 / k);
  const double g2 = lanczos_gamma(1.0 + 2.0 / k);
  return g2 / (g1 * g1) - 1.0;
}

// Invert the coefficient of variation to a Weibull shape; CV falls as k
// rises, so bisect on that monotone relation.
double weibull_shape_from_cv(double cv) {
  const double target = cv * cv;
  double lo = 0.08, hi = 20.0;
  if (target >= weibull_cv_squared(lo)) return lo;
  if (target <= weibull_cv_squared(hi)) return hi;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (weibull_cv_squared(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

struct BinnedFitData {
  std::vector<double> xs, ys, weights;  // xs: bin index into the edge list
};

BinnedFitData fit_data_from(const AdaptiveHistogram& hist, bool weighted) {
  BinnedFitData d;
  for (std::size_t i = 0; i < hist.bins.size(); ++i) {
    const auto& b = hist.bins[i];
    d.xs.push_back(static_cast<double>(i));
    d.ys.push_back(b.density);
    if (weighted) {
      const double wn = b.width() * static_cast<double>(hist.total);
      d.weights.push_back(wn * wn / static_cast<double>(b.count));
    }
  }
  return d;
}

// The fitted curve predicts each bin's density as the model's integer-cell
// mass over the bin divided by the bin width; see model_cell_mass.
FitResult lsq_fit(const AdaptiveHistogram& hist, bool weighted,
                  ModelFamily family, std::vector<double> init,
                  std::function<bool(std::span<const double>)> in_domain) {
  if (hist.bins.size() < 3) throw InputError("insufficient bins");
  const auto data = fit_data_from(hist, weighted);

  std::vector<std::pair<double, double>> edges;
  edges.reserve(hist.bins.size());
  for (const auto& b : hist.bins) edges.emplace_back(b.lo, b.hi);

  CurveModel model;
  model.eval = [family, edges](double x, std::span<const double> th) {
    const auto& e = edges[static_cast<std::size_t>(std::lround(x))];
    ModelParams p;
    p.family = family;
    if (family == ModelFamily::weibull) {
      p.k = th[0];
      p.lambda = th[1];
    } else {
      p.mu = th[0];
      p.sigma = th[1];
    }
    return model_cell_mass(e.first, e.second, p) / (e.second - e.first);
  };
  model.in_domain = std::move(in_domain);

  const auto lm = lm_minimize(model, data.xs, data.ys, std::move(init), {},
                              data.weights);
  FitResult fit;
  fit.params = family == ModelFamily::weibull
                   ? ModelParams::weibull(lm.params[0], lm.params[1])
                   : ModelParams::log_normal(lm.params[0], lm.params[1]);
  fit.sse = lm.sse;
  fit.n = hist.total;
  fit.iterations = lm.iterations;
  fit.converged = lm.converged;
  return fit;
}

}  // namespace

FitResult fit_weibull(const AdaptiveHistogram& hist, bool weighted) {
  if (hist.bins.size() < 3) throw InputError("insufficient bins");
  const auto m = moments_of(hist);
  const double cv = std::max(m.sd / m.mean, 1e-3);
  const double k0 = weibull_shape_from_cv(cv);
  const double lambda0 = m.mean / lanczos_gamma(1.0 + 1.0 / k0);

  return lsq_fit(hist, weighted, ModelFamily::weibull, {k0, lambda0},
                 [](std::span<const double> th) {
                   return th[0] > 0.0 && th[1] > 0.0;
                 });
}

FitResult fit_log_normal(const AdaptiveHistogram& hist, bool weighted) {
  if (hist.bins.size() < 3) throw InputError("insufficient bins");
  const auto m = moments_of(hist);
  const double mu0 = m.log_mean;
  const double sigma0 = std::max(m.log_sd, 0.05);

  return lsq_fit(hist, weighted, ModelFamily::log_normal, {mu0, sigma0},
                 [](std::span<const double> th) { return th[1] > 0.0; });
}

}  // namespace collabnet
