#include "collabnet/growth_sim.hpp"

#include <algorithm>
#include <cmath>

#include "collabnet/errors.hpp"

namespace collabnet {

void GrowthConfig::validate() const {
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  if (!(beta >= 0.0)) throw InputError("beta must be nonnegative");
  if (!(gamma_c >= 0.0)) throw InputError("gamma_c must be nonnegative");
  if (m < 1) throw InputError("m must be at least 1");
  if (n_nodes <= m) throw InputError("n_nodes must exceed m");
  if (!(a0 > 0.0)) throw InputError("a0 must be positive");
}

double attachment_weight(double k, const GrowthConfig& config) {
  if (k < 0.0) throw InputError("degree must be nonnegative");
  return config.alpha * std::pow(k + config.a0, config.beta) *
         std::exp(-config.gamma_c * k);
}

namespace {

// Fenwick tree over per-node sampling weights.
class WeightTree {
 public:
  explicit WeightTree(std::size_t n) : tree_(n + 1, 0.0), values_(n, 0.0) {}

  void set(std::size_t i, double v) {
    const double delta = v - values_[i];
    values_[i] = v;
    total_ += delta;
    for (std::size_t j = i + 1; j < tree_.size(); j += j & (~j + 1))
      tree_[j] += delta;
  }

  double value(std::size_t i) const { return values_[i]; }
  double total() const { return total_; }

  // Largest index whose prefix sum is <= target; with target uniform on
  // [0, total) this draws index i with probability values_[i] / total.
  std::size_t find(double target) const {
    std::size_t idx = 0;
    std::size_t bit = 1;
    while ((bit << 1) < tree_.size()) bit <<= 1;
    for (; bit; bit >>= 1) {
      const std::size_t next = idx + bit;
      if (next < tree_.size() && tree_[next] <= target) {
        idx = next;
        target -= tree_[next];
      }
    }
    return idx;
  }

 private:
  std::vector<double> tree_, values_;
  double total_ = 0.0;
};

}  // namespace

GrowthResult simulate_growth(const GrowthConfig& config, bool keep_edges) {
  config.validate();
  const std::size_t n = static_cast<std::size_t>(config.n_nodes);
  const int m = config.m;

  // alpha scales every weight equally and cancels in the sampling
  // probabilities, so it is dropped to make the invariance exact.
  auto rel_weight = [&](int k) {
    return std::pow(k + config.a0, config.beta) *
           std::exp(-config.gamma_c * k);
  };

  std::vector<int> degrees(n, 0);
  WeightTree tree(n);
  SplitMix64 rng(config.seed);

  GrowthResult result;
  if (keep_edges) result.edges.reserve(static_cast<std::size_t>(m) * n);

  // seed clique over nodes 0..m
  for (int i = 0; i <= m; ++i) {
    for (int j = i + 1; j <= m; ++j) {
      ++degrees[i];
      ++degrees[j];
      ++result.edge_count;
      if (keep_edges) result.edges.emplace_back(i, j);
    }
  }
  for (int i = 0; i <= m; ++i) tree.set(i, rel_weight(degrees[i]));

  std::vector<std::size_t> picks;
  picks.reserve(m);
  for (std::size_t v = static_cast<std::size_t>(m) + 1; v < n; ++v) {
    picks.clear();
    for (int e = 0; e < m; ++e) {
      const double total = tree.total();
      if (!(total > 0.0))
        throw NumericalError("attachment weights vanished during sampling");
      std::size_t u = tree.find(rng.next_unit() * total);
      while (u >= v || tree.value(u) <= 0.0) {
        if (u == 0)
          throw NumericalError("attachment sampling failed to find a target");
        --u;
      }
      picks.push_back(u);
      tree.set(u, 0.0);  // without replacement within this arrival
    }
    for (std::size_t u : picks) {
      ++degrees[u];
      ++result.edge_count;
      if (keep_edges)
        result.edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
      tree.set(u, rel_weight(degrees[u]));
    }
    degrees[v] = m;
    tree.set(v, rel_weight(m));
  }

  result.sample.snapshot_year = 0;
  result.sample.degrees = std::move(degrees);
  std::sort(result.sample.degrees.begin(), result.sample.degrees.end());
  return result;
}

MeanGrowthResult integrate_mean_growth(double k0, const GrowthConfig& config,
                                       double t_span) {
  config.validate();
  if (!(k0 >= 0.0)) throw InputError("k0 must be nonnegative");
  if (!std::isfinite(t_span) || t_span < 0.0)
    throw InputError("t_span must be finite and nonnegative");

  MeanGrowthResult out;
  if (k0 == 0.0 && config.beta > 0.0) {
    // dk/dt = alpha 0^beta = 0: the origin is a fixed point
    out.stationary = true;
    out.times = {0.0, t_span};
    out.k = {0.0, 0.0};
    out.step = t_span;
    return out;
  }
  if (t_span == 0.0) {
    out.times = {0.0};
    out.k = {k0};
    return out;
  }

  auto rate = [&](double k) {
    return config.alpha * std::pow(k, config.beta) *
           std::exp(-config.gamma_c * k);
  };

  auto integrate = [&](std::int64_t steps, MeanGrowthResult* record) {
    const double h = t_span / static_cast<double>(steps);
    const std::int64_t stride =
        record ? std::max<std::int64_t>(1, steps / 4096) : steps;
    double k = k0;
    if (record) {
      record->times.push_back(0.0);
      record->k.push_back(k);
      record->step = h;
    }
    for (std::int64_t i = 0; i < steps; ++i) {
      const double r1 = rate(k);
      const double r2 = rate(k + 0.5 * h * r1);
      const double r3 = rate(k + 0.5 * h * r2);
      const double r4 = rate(k + h * r3);
      k += h / 6.0 * (r1 + 2.0 * r2 + 2.0 * r3 + r4);
      if (!std::isfinite(k))
        throw NumericalError("mean-field trajectory diverged");
      if (record && ((i + 1) % stride == 0 || i + 1 == steps)) {
        record->times.push_back(h * static_cast<double>(i + 1));
        record->k.push_back(k);
      }
    }
    return k;
  };

  std::int64_t steps = 64;
  double prev = integrate(steps, nullptr);
  for (;;) {
    steps *= 2;
    const double cur = integrate(steps, nullptr);
    if (std::abs(cur - prev) <=
        1e-6 * std::max(std::abs(cur), 1e-12)) {
      integrate(steps, &out);
      return out;
    }
    prev = cur;
    if (steps >= (std::int64_t{1} << 22))
      throw NumericalError("mean-field integration did not reach tolerance");
  }
}

}  // namespace collabnet
