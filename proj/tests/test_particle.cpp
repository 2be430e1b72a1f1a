#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "mfif/bounds.hpp"
#include "mfif/particle.hpp"

using namespace mfif;

namespace {

ModelConfig brownian(double alpha, double x0, double T) {
  return ModelConfig::make(DriftSpec::zero(), alpha, 1.0,
                           InitialLaw::dirac(x0), T);
}

}  // namespace

TEST_CASE("rng streams are reproducible and roughly normal") {
  Xoshiro256 a(7), b(7), c(8);
  CHECK(a.next() == b.next());
  CHECK(a.next() == b.next());
  CHECK(a.next() != c.next());
  double mean = 0.0, var = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    double z = a.normal();
    mean += z;
    var += z * z;
  }
  mean /= n;
  var = var / n - mean * mean;
  CHECK(std::abs(mean) < 0.03);
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));
  for (int i = 0; i < 1000; ++i) {
    double u = a.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("cascade_resolve synchronous semantics") {
  // Round 1: particle 0 fires, resets to 0, everyone else kicked by 0.3/3.
  // Round 2: particle 1 (0.95 + 0.1 = 1.05) fires; the already-reset
  // particle 0 receives this later round's kick.
  std::vector<double> x = {1.2, 0.95, 0.5};
  std::vector<int> spikes(3, 0);
  auto out = cascade_resolve(x, 0.3, &spikes);
  CHECK(out.spikes == 2);
  CHECK(out.rounds == 2);
  CHECK(!out.round_cap_hit);
  CHECK(x[0] == doctest::Approx(0.1));
  CHECK(x[1] == doctest::Approx(0.0));
  CHECK(x[2] == doctest::Approx(0.7));
  CHECK(spikes[0] == 1);
  CHECK(spikes[1] == 1);
  CHECK(spikes[2] == 0);
  for (double v : x) CHECK(v < 1.0);
}

TEST_CASE("cascade counting identity and termination under full firing") {
  std::vector<double> x(100, 0.999);
  x[0] = 1.0;  // ignites; each round's kick 0.9/100 pushes the rest over
  std::vector<int> spikes(100, 0);
  auto out = cascade_resolve(x, 0.9, &spikes);
  CHECK(out.spikes == std::accumulate(spikes.begin(), spikes.end(), 0));
  CHECK(out.spikes >= 100);  // everyone fires at least once
  CHECK(!out.round_cap_hit);
  for (double v : x) CHECK(v < 1.0);
}

TEST_CASE("sequential cascade variant agrees on simple configurations") {
  std::vector<double> sync = {1.2, 0.95, 0.5};
  std::vector<double> seq = sync;
  auto a = cascade_resolve(sync, 0.3);
  CascadeOptions co;
  co.sequential = true;
  auto b = cascade_resolve(seq, 0.3, nullptr, co);
  CHECK(a.spikes == b.spikes);
  CHECK(sync == seq);
}

TEST_CASE("sup-Z estimate at vanishing noise returns the initial point") {
  auto cfg = brownian(0.0, 0.8, 0.1);
  SimOptions so;
  so.sigma_test = 0.0;  // freezes the diffusion
  so.record_sup_z = true;
  auto res = simulate(cfg, 100, 1e-2, 0.1, 1, so);
  CHECK(res.sup_z_mean == doctest::Approx(0.8));
  CHECK(res.trace.eN.back() == 0.0);
}

TEST_CASE("trace invariants and counting identity") {
  auto cfg = brownian(0.2, 0.8, 0.5);
  auto res = simulate(cfg, 2000, 1e-3, 0.5, 11, {});
  const auto& tr = res.trace;
  REQUIRE(!tr.times.empty());
  CHECK(tr.eN.front() == 0.0);
  long long total_spikes = 0;
  for (std::size_t k = 1; k < tr.eN.size(); ++k) {
    CHECK(tr.eN[k] >= tr.eN[k - 1]);
    total_spikes += tr.cascade_sizes[k];
  }
  CHECK(tr.eN.back() * 2000.0 ==
        doctest::Approx(static_cast<double>(total_spikes)).epsilon(1e-9));
}

TEST_CASE("seed determinism across thread counts") {
  auto cfg = brownian(0.3, 0.8, 0.2);
  SimOptions s1, s2;
  s1.n_threads = 1;
  s2.n_threads = 3;
  auto a = simulate(cfg, 1000, 1e-3, 0.2, 77, s1);
  auto b = simulate(cfg, 1000, 1e-3, 0.2, 77, s2);
  CHECK(a.trace.eN == b.trace.eN);
  CHECK(a.trace.cascade_sizes == b.trace.cascade_sizes);
  CHECK(a.trace.cascade_rounds == b.trace.cascade_rounds);
  auto c = simulate(cfg, 1000, 1e-3, 0.2, 78, s1);
  CHECK(a.trace.eN != c.trace.eN);
}

TEST_CASE("supercritical coupling raises blow-up") {
  auto cfg = brownian(0.39, 0.8, 0.2);
  auto res = simulate(cfg, 5000, 1e-3, 0.2, 5, {});
  REQUIRE(res.trace.blowup.has_value());
  CHECK(res.trace.blowup->first < 0.1);
  CHECK(res.trace.blowup->second >= 0.05);
}

TEST_CASE("subcritical run stays under the stability envelope") {
  auto cfg = brownian(0.05, 0.8, 0.5);
  SimOptions so;
  so.record_sup_z = true;
  auto res = simulate(cfg, 5000, 1e-3, 0.5, 9, so);
  CHECK(!res.trace.blowup.has_value());
  CHECK(res.sup_z_mean < g_bound(1.0, 0.05, 0.0, 0.5, 0.5));
}
