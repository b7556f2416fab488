#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "collabnet/temporal_graph.hpp"

namespace collabnet {

/// Parameters of the constrained-attachment growth law
/// dk/dt = alpha k^beta e^(-gamma_c k), realized as attachment weights
/// w(k) = alpha (k + a0)^beta e^(-gamma_c k).
struct GrowthConfig {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma_c = 0.0;
  int m = 2;                    // edges per arriving node
  std::int64_t n_nodes = 100000;
  double a0 = 1.0;              // baseline attractiveness at degree 0
  std::uint64_t seed = 42;

  void validate() const;  // throws InputError
};

double attachment_weight(double k, const GrowthConfig& config);

/// Counter-based RNG (splitmix64). The algorithm id is recorded alongside
/// outputs so any implementation can replay a seeded run.
class SplitMix64 {
 public:
  static constexpr const char* algorithm_id = "splitmix64";

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

struct GrowthResult {
  DegreeSample sample;  // final degrees, sorted ascending
  std::int64_t edge_count = 0;
  std::string rng_id = SplitMix64::algorithm_id;
  std::vector<std::pair<int, int>> edges;  // populated when keep_edges
};

/// Grow a network from a seed clique of m+1 nodes; each arriving node
/// attaches m edges to distinct existing nodes drawn without replacement
/// with probability proportional to attachment_weight(degree). The degree
/// sequence is a deterministic function of the config (alpha cancels in the
/// normalized sampling and is factored out exactly).
GrowthResult simulate_growth(const GrowthConfig& config,
                             bool keep_edges = false);

struct MeanGrowthResult {
  std::vector<double> times;
  std::vector<double> k;
  double step = 0.0;       // RK4 step of the accepted resolution
  bool stationary = false; // k0 = 0 with beta > 0 never leaves the origin
};

/// Fixed-step RK4 integration of dk/dt = alpha k^beta e^(-gamma_c k) over
/// [0, t_span]; the step is refined until halving it moves the endpoint by
/// less than 1e-6 relative.
MeanGrowthResult integrate_mean_growth(double k0, const GrowthConfig& config,
                                       double t_span);

}  // namespace collabnet
