#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mfif/fp.hpp"

using namespace mfif;

namespace {

ModelConfig brownian(double alpha, double x0, double T) {
  return ModelConfig::make(DriftSpec::zero(), alpha, 1.0,
                           InitialLaw::dirac(x0), T);
}

}  // namespace

TEST_CASE("grid construction snaps 0 and 1 onto nodes") {
  auto g = SpaceTimeGrid::make(-2.3, 2.6e-3, 1e-3, 1.0);
  // dy snapped so 1/dy is an integer; y_min extended down to a node.
  CHECK(std::abs(1.0 / g.dy - std::round(1.0 / g.dy)) < 1e-12);
  CHECK(g.y(g.M) == doctest::Approx(1.0));
  CHECK(g.y(g.index_of_zero()) == doctest::Approx(0.0));
  CHECK(g.y_min <= -2.3);
  CHECK_THROWS(SpaceTimeGrid::make(0.5, 1e-3, 1e-3, 1.0));
  CHECK_THROWS(SpaceTimeGrid::make(-1.0, -1e-3, 1e-3, 1.0));
}

TEST_CASE("explicit stability guard") {
  auto g = SpaceTimeGrid::make(-1.0, 1e-2, 1e-3, 1.0);
  CHECK_THROWS(g.check_explicit_stability(0.0));  // dt > dy^2
  auto g2 = SpaceTimeGrid::make(-1.0, 1e-1, 5e-3, 1.0);
  CHECK_NOTHROW(g2.check_explicit_stability(0.0));
}

TEST_CASE("closed-form oracles") {
  CHECK(hitting_cdf_brownian(0.8, 0.0) == 0.0);
  CHECK(hitting_cdf_brownian(0.8, 1.0) ==
        doctest::Approx(std::erfc(0.2 / std::sqrt(2.0))).epsilon(1e-12));
  CHECK_THROWS(hitting_cdf_brownian(1.2, 1.0));

  CHECK(hitting_cdf_line(0.2, 0.5, 0.0) == 0.0);
  CHECK(hitting_cdf_line(0.2, 0.5, 1.0) ==
        doctest::Approx(0.9134467).epsilon(1e-6));
  CHECK_THROWS(hitting_cdf_line(-0.1, 0.5, 1.0));

  // Inverse-Gaussian density from 0.8 at t = 0.04.
  CHECK(inverse_gaussian_fpt(0.8, 0.04) == doctest::Approx(6.05).epsilon(2e-3));
  CHECK(inverse_gaussian_fpt(0.8, 0.0) == 0.0);
}

TEST_CASE("renewal oracle short-time value") {
  // At t = 0.04 the second-passage correction is <= 2 Phi(-5) ~ 5.7e-7, so
  // e(0.04) = 2 Phi(-1) up to 1e-3.
  auto c = renewal_oracle(0.8, 0.1, 1e-4);
  double target = std::erfc(1.0 / std::sqrt(2.0));
  CHECK(c.value(0.04) == doctest::Approx(target).epsilon(1e-3 / target));
  CHECK(c.e[0] == 0.0);
  for (std::size_t k = 1; k <= c.n(); ++k) CHECK(c.e[k] >= c.e[k - 1]);
}

TEST_CASE("killed solve: mass accounting, positivity, flux sign") {
  auto cfg = brownian(0.05, 0.5, 1.0);
  auto grid = SpaceTimeGrid::make(SpaceTimeGrid::default_ymin(0.5, 1.0),
                                  5e-3, 1e-3, 1.0);
  auto f = solve_killed_fp(cfg, FiringCurve::zero(1.0, 1e-3), cfg.init, grid);
  CHECK(f.mass_defect() <= 1e-6);
  CHECK(f.killed_mass() == doctest::Approx(f.injected.back()).epsilon(1e-8));
  for (double v : f.flux) CHECK(v >= 0.0);
  for (const auto& snap : f.p) {
    CHECK(snap[grid.M] == 0.0);  // Dirichlet node
    for (double v : snap) CHECK(v >= -1e-12);
  }
}

TEST_CASE("re-injection conserves mass and reproduces Gamma") {
  auto cfg = brownian(0.05, 0.5, 1.0);
  auto grid = SpaceTimeGrid::make(SpaceTimeGrid::default_ymin(0.5, 1.0),
                                  5e-3, 1e-3, 1.0);
  FiringCurve zero = FiringCurve::zero(1.0, 1e-3);
  DensityField field;
  auto g = gamma_map(cfg, zero, cfg.init, grid, {}, &field);
  CHECK(field.mass_defect() <= 1e-6);
  CHECK(g.e[0] == 0.0);
  for (std::size_t k = 1; k <= g.n(); ++k) CHECK(g.e[k] >= g.e[k - 1]);
  // Gamma(0)' = flux of the re-injected solve.
  for (std::size_t k = 1; k <= g.n(); ++k)
    CHECK(g.de[k] == doctest::Approx(field.flux[k]));
  CHECK_THROWS(gamma_map(cfg, FiringCurve::zero(0.5, 1e-3), cfg.init, grid));
}

TEST_CASE("gamma is monotone in the input curve") {
  auto cfg = brownian(0.3, 0.5, 1.0);
  auto grid = SpaceTimeGrid::make(SpaceTimeGrid::default_ymin(0.5, 1.0),
                                  5e-3, 1e-3, 1.0);
  FiringCurve slow = FiringCurve::zero(1.0, 1e-3);
  FiringCurve fast = FiringCurve::zero(1.0, 1e-3);
  for (std::size_t k = 0; k <= fast.n(); ++k) {
    fast.e[k] = fast.t(k);
    fast.de[k] = 1.0;
  }
  auto g_slow = gamma_map(cfg, slow, cfg.init, grid);
  auto g_fast = gamma_map(cfg, fast, cfg.init, grid);
  for (std::size_t k = 0; k <= g_slow.n(); ++k)
    CHECK(g_fast.e[k] >= g_slow.e[k] - 1e-12);
}

TEST_CASE("grid convergence of Gamma on the Brownian benchmark") {
  auto cfg = brownian(0.05, 0.8, 0.5);
  auto run = [&](double dy, double dt) {
    auto grid = SpaceTimeGrid::make(SpaceTimeGrid::default_ymin(0.8, 0.5),
                                    dy, dt, 0.5);
    FpOptions fp;
    fp.store_every = grid.n_steps;
    auto g = gamma_map(cfg, FiringCurve::zero(0.5, dt), cfg.init, grid, fp);
    auto oracle = renewal_oracle(0.8, 0.5, dt);
    double err = 0.0;
    for (std::size_t k = 0; k < g.e.size(); ++k)
      err = std::max(err, std::abs(g.e[k] - oracle.e[k]));
    return err;
  };
  double coarse = run(5e-3, 2e-3);
  double fine = run(2.5e-3, 5e-4);
  CHECK(fine <= 0.5 * coarse);  // observed order >= 1 under dt ~ dy^2
}

TEST_CASE("self-consistent solve matches the renewal limit at small alpha") {
  // alpha = 1e-4: the coupling correction is O(alpha), so the direct
  // nonlinear solve must sit on the uncoupled renewal solution.
  auto cfg = brownian(1e-4, 0.8, 0.5);
  auto grid = SpaceTimeGrid::make(SpaceTimeGrid::default_ymin(0.8, 0.5),
                                  2.5e-3, 1e-3, 0.5);
  FpOptions fp;
  fp.store_every = grid.n_steps;
  auto nl = solve_nonlinear_fp(cfg, cfg.init, grid, fp);
  CHECK(!nl.blowup_time.has_value());
  auto oracle = renewal_oracle(0.8, 0.5, 1e-3);
  for (std::size_t k = 0; k < nl.curve.e.size(); ++k)
    CHECK(nl.curve.e[k] == doctest::Approx(oracle.e[k]).epsilon(0.02));
}

TEST_CASE("cascade scheme classifies the critical coupling") {
  for (double alpha : {0.38, 0.39}) {
    auto cfg = brownian(alpha, 0.8, 0.1);
    auto grid = SpaceTimeGrid::make(SpaceTimeGrid::default_ymin(0.8, 0.1),
                                    2.5e-3, 5e-4, 0.1);
    FpOptions fp;
    fp.scheme = CouplingScheme::Cascade;
    fp.store_every = grid.n_steps;
    auto nl = solve_nonlinear_fp(cfg, cfg.init, grid, fp);
    if (alpha < 0.385) {
      CHECK(!nl.blowup_time.has_value());
    } else {
      REQUIRE(nl.blowup_time.has_value());
      CHECK(*nl.blowup_time < 0.05);
      // Series are frozen at the blow-up step.
      CHECK(nl.curve.e.back() ==
            doctest::Approx(nl.curve.value(*nl.blowup_time)));
    }
  }
}

TEST_CASE("initial law handling errors") {
  auto cfg = brownian(0.05, 0.5, 1.0);
  auto grid = SpaceTimeGrid::make(-0.5, 5e-3, 1e-3, 1.0);
  auto bad = InitialLaw::dirac(-0.9);  // below y_min of this grid
  CHECK_THROWS(
      solve_killed_fp(cfg, FiringCurve::zero(1.0, 1e-3), bad, grid));
}

TEST_CASE("final_law renormalizes to a unit-mass gridded law") {
  auto cfg = brownian(0.05, 0.5, 0.5);
  auto grid = SpaceTimeGrid::make(SpaceTimeGrid::default_ymin(0.5, 0.5),
                                  5e-3, 1e-3, 0.5);
  DensityField field;
  (void)gamma_map(cfg, FiringCurve::zero(0.5, 1e-3), cfg.init, grid, {},
                  &field);
  auto law = field.final_law();
  CHECK(law.kind == InitialKind::GriddedDensity);
  CHECK(law.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_NOTHROW(law.validate());
}
