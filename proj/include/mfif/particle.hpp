#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mfif/model.hpp"

// Finite-N network of Euler-Maruyama diffusions with threshold resets and
// synchronous cascade resolution: each firing round resets the firing set to
// 0 and kicks every other particle by alpha |F| / N.

namespace mfif {

// Small counter-seeded xoshiro256++ stream, one per particle, so that runs
// are bitwise reproducible regardless of the thread count.
struct Xoshiro256 {
  std::uint64_t s[4];

  explicit Xoshiro256(std::uint64_t seed);
  std::uint64_t next();
  double uniform();        // in (0,1)
  double normal();         // Box-Muller, spare cached
  double spare = 0.0;
  bool has_spare = false;
};

struct CascadeOutcome {
  int spikes = 0;
  int rounds = 0;
  bool round_cap_hit = false;
};

struct CascadeOptions {
  int round_cap = 1000;
  bool sequential = false;  // process firings one particle at a time, in
                            // index order, instead of synchronous rounds
};

// Resolves all threshold crossings in place; spike counts are appended to
// spike_count when provided.
CascadeOutcome cascade_resolve(std::vector<double>& positions, double alpha,
                               std::vector<int>* spike_count = nullptr,
                               const CascadeOptions& opts = {});

struct ParticleTrace {
  std::vector<double> times;
  std::vector<double> eN;             // cumulative spikes / N
  std::vector<int> cascade_sizes;
  std::vector<int> cascade_rounds;
  std::optional<std::pair<double, double>> blowup;  // (time, fraction)
};

struct SimOptions {
  double delta_blow = 0.05;     // cascade of >= delta_blow * N resets = blow-up
  CascadeOptions cascade;
  double sigma_test = 1.0;      // test hook; 0 disables the noise
  bool record_sup_z = false;    // track sup_t (X_i + M_i)_+ per particle
  bool stop_on_blowup = true;
  int n_threads = 0;            // 0 = hardware concurrency
};

struct SimResult {
  ParticleTrace trace;
  double sup_z_mean = 0.0;      // Monte Carlo E[sup_{s<=T} (Z_s)_+]
};

SimResult simulate(const ModelConfig& cfg, int N, double dt, double T,
                   std::uint64_t seed, const SimOptions& opts = {});

}  // namespace mfif
