#include "mfif/particle.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace mfif {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t v, int k) {
  return (v << k) | (v >> (64 - k));
}

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& w : s) w = splitmix64(x);
}

std::uint64_t Xoshiro256::next() {
  std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
  std::uint64_t t = s[1] << 17;
  s[2] ^= s[0];
  s[3] ^= s[1];
  s[1] ^= s[2];
  s[0] ^= s[3];
  s[2] ^= t;
  s[3] = rotl(s[3], 45);
  return result;
}

double Xoshiro256::uniform() {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double Xoshiro256::normal() {
  if (has_spare) {
    has_spare = false;
    return spare;
  }
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * M_PI * u2;
  spare = r * std::sin(a);
  has_spare = true;
  return r * std::cos(a);
}

CascadeOutcome cascade_resolve(std::vector<double>& positions, double alpha,
                               std::vector<int>* spike_count,
                               const CascadeOptions& opts) {
  const auto N = positions.size();
  CascadeOutcome out;
  if (opts.sequential) {
    // Sensitivity variant: handle crossings one particle at a time in index
    // order; each reset immediately kicks every other particle.
    bool again = true;
    while (again) {
      again = false;
      for (std::size_t i = 0; i < N; ++i) {
        if (positions[i] >= 1.0) {
          positions[i] = 0.0;
          ++out.spikes;
          if (spike_count) ++(*spike_count)[i];
          double kick = alpha / static_cast<double>(N);
          for (std::size_t j = 0; j < N; ++j)
            if (j != i) positions[j] += kick;
          again = true;
        }
      }
      ++out.rounds;
      if (out.rounds > opts.round_cap) {
        out.round_cap_hit = true;
        return out;
      }
      if (!again) --out.rounds;  // the final empty sweep is not a round
    }
    if (out.spikes == 0) out.rounds = 0;
    return out;
  }

  std::vector<std::size_t> firing;
  for (;;) {
    firing.clear();
    for (std::size_t i = 0; i < N; ++i)
      if (positions[i] >= 1.0) firing.push_back(i);
    if (firing.empty()) break;
    ++out.rounds;
    out.spikes += static_cast<int>(firing.size());
    double kick =
        alpha * static_cast<double>(firing.size()) / static_cast<double>(N);
    // Everyone gains the kick, then the firing set is reset to 0: particles
    // firing in this round do not receive the kicks they generated, while
    // particles reset in earlier rounds do.
    for (std::size_t i = 0; i < N; ++i) positions[i] += kick;
    for (std::size_t i : firing) {
      positions[i] = 0.0;
      if (spike_count) ++(*spike_count)[i];
    }
    if (out.rounds >= opts.round_cap) {
      out.round_cap_hit = true;
      break;
    }
  }
  return out;
}

SimResult simulate(const ModelConfig& cfg, int N, double dt, double T,
                   std::uint64_t seed, const SimOptions& opts) {
  if (N < 1) throw std::invalid_argument("simulate: N >= 1 required");
  if (dt <= 0 || T <= 0) throw std::invalid_argument("simulate: bad dt/T");
  if (cfg.init.kind != InitialKind::Dirac)
    throw std::invalid_argument("simulate: Dirac initial law required");

  const int n_steps = static_cast<int>(std::llround(T / dt));
  const double x0 = cfg.init.x0;
  const double noise = opts.sigma_test * std::sqrt(dt);

  std::vector<double> pos(static_cast<std::size_t>(N), x0);
  std::vector<int> spikes(static_cast<std::size_t>(N), 0);
  std::vector<Xoshiro256> rng;
  rng.reserve(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i)
    rng.emplace_back(seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(i));

  std::vector<double> sup_z;
  if (opts.record_sup_z)
    sup_z.assign(static_cast<std::size_t>(N), std::max(x0, 0.0));

  SimResult res;
  ParticleTrace& tr = res.trace;
  tr.times.resize(n_steps + 1);
  tr.eN.resize(n_steps + 1);
  tr.cascade_sizes.assign(n_steps + 1, 0);
  tr.cascade_rounds.assign(n_steps + 1, 0);
  tr.times[0] = 0.0;
  tr.eN[0] = 0.0;

  unsigned hw = opts.n_threads > 0 ? static_cast<unsigned>(opts.n_threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
  const bool use_threads = hw > 1 && N >= 4096;

  long long total_spikes = 0;
  const DriftSpec& drift = cfg.drift;

  auto diffuse_range = [&](std::size_t lo, std::size_t hi, double /*t*/) {
    switch (drift.kind) {
      case DriftKind::Zero:
        for (std::size_t i = lo; i < hi; ++i)
          pos[i] += noise * rng[i].normal();
        break;
      case DriftKind::Linear: {
        const double lam_dt = drift.lambda * dt;
        for (std::size_t i = lo; i < hi; ++i)
          pos[i] += -lam_dt * pos[i] + noise * rng[i].normal();
        break;
      }
      case DriftKind::Tabulated:
        for (std::size_t i = lo; i < hi; ++i) {
          double x = pos[i];
          pos[i] = x + eval_drift(drift, std::min(x, 1.0)) * dt +
                   noise * rng[i].normal();
        }
        break;
    }
  };

  for (int k = 1; k <= n_steps; ++k) {
    double t = dt * k;
    if (use_threads) {
      std::vector<std::thread> pool;
      std::size_t chunk = (pos.size() + hw - 1) / hw;
      for (unsigned w = 0; w < hw; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(pos.size(), lo + chunk);
        if (lo < hi) pool.emplace_back(diffuse_range, lo, hi, t);
      }
      for (auto& th : pool) th.join();
    } else {
      diffuse_range(0, pos.size(), t);
    }

    CascadeOutcome c = cascade_resolve(pos, cfg.alpha, &spikes, opts.cascade);
    total_spikes += c.spikes;
    tr.times[k] = t;
    tr.eN[k] = static_cast<double>(total_spikes) / N;
    tr.cascade_sizes[k] = c.spikes;
    tr.cascade_rounds[k] = c.rounds;

    if (opts.record_sup_z) {
      for (std::size_t i = 0; i < pos.size(); ++i) {
        double z = pos[i] + static_cast<double>(spikes[i]);
        if (z > sup_z[i]) sup_z[i] = z;
      }
    }

    bool blow = c.round_cap_hit ||
                c.spikes >= opts.delta_blow * static_cast<double>(N);
    if (blow && !tr.blowup) {
      tr.blowup = {t, static_cast<double>(c.spikes) / N};
      if (opts.stop_on_blowup) {
        tr.times.resize(k + 1);
        tr.eN.resize(k + 1);
        tr.cascade_sizes.resize(k + 1);
        tr.cascade_rounds.resize(k + 1);
        break;
      }
    }
  }

  if (opts.record_sup_z) {
    double s = 0.0;
    for (double z : sup_z) s += std::max(z, 0.0);
    res.sup_z_mean = s / static_cast<double>(N);
  }
  return res;
}

}  // namespace mfif
