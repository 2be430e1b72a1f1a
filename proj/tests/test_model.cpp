#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mfif/model.hpp"

using namespace mfif;

TEST_CASE("eval_drift closed forms") {
  CHECK(eval_drift(DriftSpec::zero(), 0.7) == 0.0);
  CHECK(eval_drift(DriftSpec::linear(1.0), 0.5) == doctest::Approx(-0.5));
  CHECK(eval_drift(DriftSpec::linear(2.0), -1.0) == doctest::Approx(2.0));
}

TEST_CASE("eval_drift rejects points above the threshold") {
  CHECK_THROWS_AS(eval_drift(DriftSpec::zero(), 1.5), std::domain_error);
}

TEST_CASE("drift constants are verified by sampling") {
  DriftSpec lin = DriftSpec::linear(2.0);
  CHECK(lin.Lambda == doctest::Approx(2.0));
  CHECK(lin.K == doctest::Approx(2.0));
  CHECK_NOTHROW(lin.verify_constants());
  // Tabulated drift with understated constants must be rejected.
  CHECK_THROWS(DriftSpec::tabulated({-1.0, 1.0}, {3.0, -3.0}, /*Lambda=*/0.1,
                                    /*K=*/0.1, /*m=*/0.1)
                   .verify_constants());
}

TEST_CASE("initial law bookkeeping") {
  auto dirac = InitialLaw::dirac(0.8);
  CHECK(dirac.total_mass() == doctest::Approx(1.0));
  CHECK(dirac.mean_positive_part() == doctest::Approx(0.8));
  CHECK(dirac.support_max() == doctest::Approx(0.8));

  // Uniform density on [0, 0.5].
  auto grid = InitialLaw::gridded(0.0, 0.1, {2.0, 2.0, 2.0, 2.0, 2.0, 2.0});
  CHECK(grid.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(grid.mean_positive_part() == doctest::Approx(0.25).epsilon(1e-6));
  CHECK_NOTHROW(grid.validate());
}

TEST_CASE("gridded law off unit mass is rejected") {
  auto bad = InitialLaw::gridded(0.0, 0.1, {1.0, 1.0, 1.0});
  CHECK_THROWS(bad.validate());
}

TEST_CASE("config folds sigma by the time change") {
  auto cfg = ModelConfig::make(DriftSpec::linear(1.0), 0.1, 2.0,
                               InitialLaw::dirac(0.5), 1.0);
  // u = sigma^2 t: horizon stretched, drift slope divided by sigma^2.
  CHECK(cfg.T == doctest::Approx(4.0));
  CHECK(eval_drift(cfg.drift, 0.5) == doctest::Approx(-0.5 / 4.0));
}

TEST_CASE("config validation") {
  CHECK_THROWS(ModelConfig::make(DriftSpec::zero(), 1.5, 1.0,
                                 InitialLaw::dirac(0.5), 1.0));
  CHECK_THROWS(ModelConfig::make(DriftSpec::zero(), 0.1, 1.0,
                                 InitialLaw::dirac(1.5), 1.0));
  // Default gap: eps = min(1, 1 - x0).
  auto cfg = ModelConfig::make(DriftSpec::zero(), 0.1, 1.0,
                               InitialLaw::dirac(0.8), 1.0);
  CHECK(cfg.eps == doctest::Approx(0.2));
  // alpha = 0 is the uncoupled model and must be accepted.
  CHECK_NOTHROW(ModelConfig::make(DriftSpec::zero(), 0.0, 1.0,
                                  InitialLaw::dirac(0.8), 1.0));
}

TEST_CASE("firing curve invariants and interpolation") {
  FiringCurve e = FiringCurve::zero(1.0, 0.25);
  CHECK(e.n() == 4);
  CHECK(e.T() == doctest::Approx(1.0));
  CHECK_NOTHROW(e.validate());

  for (std::size_t k = 0; k <= e.n(); ++k) {
    e.e[k] = 2.0 * e.t(k);
    e.de[k] = 2.0;
  }
  CHECK_NOTHROW(e.validate());
  CHECK(e.value(0.375) == doctest::Approx(0.75));
  CHECK(e.deriv(0.9) == doctest::Approx(2.0));
  CHECK(e.sup_e() == doctest::Approx(2.0));
  CHECK(e.sup_de() == doctest::Approx(2.0));

  SUBCASE("monotonicity is enforced") {
    e.e[2] = e.e[1] - 0.1;
    CHECK_THROWS(e.validate());
  }
  SUBCASE("trapezoid consistency is enforced") {
    e.de[2] = 50.0;  // breaks |e_{k+1}-e_k - (de_k+de_{k+1}) dt/2| <= c dt^2
    CHECK_THROWS(e.validate(1.0));
  }
  SUBCASE("e(0) != 0 is rejected") {
    e.e[0] = 0.1;
    CHECK_THROWS(e.validate());
  }
}

TEST_CASE("shift_curve") {
  FiringCurve e = FiringCurve::zero(1.0, 0.25);
  for (std::size_t k = 0; k <= e.n(); ++k) {
    e.e[k] = 3.0 * e.t(k);
    e.de[k] = 3.0;
  }
  SUBCASE("shift by zero is the identity") {
    auto s = shift_curve(e, 0.0);
    CHECK(s.e == e.e);
    CHECK(s.de == e.de);
  }
  SUBCASE("linear curve is shift-stationary") {
    auto s = shift_curve(e, 0.5);
    CHECK(s.T() == doctest::Approx(0.5));
    CHECK(s.e[0] == 0.0);
    for (std::size_t k = 0; k <= s.n(); ++k)
      CHECK(s.e[k] == doctest::Approx(3.0 * s.t(k)));
  }
  SUBCASE("off-grid shift is rejected") {
    CHECK_THROWS(shift_curve(e, 0.3));
  }
  SUBCASE("monotone in, monotone out with result(0) = 0") {
    FiringCurve m = FiringCurve::zero(1.0, 0.25);
    const double vals[] = {0.0, 0.1, 0.15, 0.5, 0.6};
    for (int k = 0; k <= 4; ++k) m.e[k] = vals[k];
    // Derivatives chosen trapezoid-consistent with the values.
    for (int k = 1; k <= 4; ++k)
      m.de[k] = 2.0 * (m.e[k] - m.e[k - 1]) / 0.25 - m.de[k - 1];
    auto s = shift_curve(m, 0.25);
    CHECK(s.e[0] == 0.0);
    for (std::size_t k = 1; k <= s.n(); ++k) CHECK(s.e[k] >= s.e[k - 1]);
  }
}

TEST_CASE("solve_flow closed forms") {
  FiringCurve zero = FiringCurve::zero(1.0, 1e-3);
  SUBCASE("zero drift, zero input: constant path") {
    auto th = solve_flow(DriftSpec::zero(), zero, 0.3, 0.8);
    CHECK(th.front() == doctest::Approx(0.8));
    CHECK(th.back() == doctest::Approx(0.8));
  }
  SUBCASE("linear drift decay") {
    auto th = solve_flow(DriftSpec::linear(1.0), zero, 0.3, 0.8);
    CHECK(th.back() == doctest::Approx(0.8 * std::exp(-1.0)).epsilon(1e-8));
  }
  SUBCASE("zero drift integrates alpha e exactly") {
    FiringCurve e = FiringCurve::zero(1.0, 1e-3);
    for (std::size_t k = 0; k <= e.n(); ++k) {
      e.e[k] = e.t(k);
      e.de[k] = 1.0;
    }
    auto th = solve_flow(DriftSpec::zero(), e, 0.3, 0.0);
    CHECK(th.back() == doctest::Approx(0.3).epsilon(1e-12));
  }
}

TEST_CASE("flow comparison principle") {
  FiringCurve e = FiringCurve::zero(1.0, 1e-2);
  for (std::size_t k = 0; k <= e.n(); ++k) {
    e.e[k] = 0.5 * e.t(k);
    e.de[k] = 0.5;
  }
  auto lo = solve_flow(DriftSpec::linear(2.0), e, 0.2, -0.5);
  auto hi = solve_flow(DriftSpec::linear(2.0), e, 0.2, 0.5);
  for (std::size_t k = 0; k < lo.size(); ++k) CHECK(lo[k] <= hi[k] + 1e-12);
}

TEST_CASE("flow Gronwall envelope for linear drift") {
  const double lambda = 1.0;
  FiringCurve e = FiringCurve::zero(1.0, 1e-2);
  for (std::size_t k = 0; k <= e.n(); ++k) {
    e.e[k] = e.t(k);
    e.de[k] = 1.0;
  }
  const double alpha = 0.3, x0 = 0.5;
  auto th = solve_flow(DriftSpec::linear(lambda), e, alpha, x0);
  for (std::size_t k = 0; k < th.size(); ++k) {
    double t = 1e-2 * static_cast<double>(k);
    double env = (x0 + lambda * t + alpha * e.value(t)) * std::exp(lambda * t);
    CHECK(th[k] <= env + 1e-10);
  }
}
