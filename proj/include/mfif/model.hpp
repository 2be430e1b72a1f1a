#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Problem definition for the mean-field integrate-and-fire equation:
// drift specifications, initial laws, firing curves e(t) = E(M_t) and the
// deterministic flow driven by a firing curve.

namespace mfif {

enum class DriftKind { Zero, Linear, Tabulated };

// Drift b : (-infty, 1] -> R together with its structural constants:
//   |b(x)| <= Lambda (|x| + 1),   |b(x) - b(y)| <= K |x - y|,
//   m = sup_{0 <= z <= 1} |b(z)|.
// For Zero and Linear the constants are derived; for Tabulated they are
// supplied by the caller and verified by sampling.
struct DriftSpec {
  DriftKind kind = DriftKind::Zero;
  double lambda = 0.0;  // Linear: b(x) = -lambda x

  // Tabulated: piecewise-linear through (xs[i], ys[i]), end slopes extended.
  std::vector<double> xs;
  std::vector<double> ys;

  double Lambda = 0.0;
  double K = 0.0;
  double m = 0.0;

  static DriftSpec zero();
  static DriftSpec linear(double lambda);
  static DriftSpec tabulated(std::vector<double> xs, std::vector<double> ys,
                             double Lambda, double K, double m);

  // Randomized sampling over x, y in [lo, 1]; throws if a constant is violated.
  void verify_constants(int samples = 2000, double lo = -10.0,
                        unsigned long long seed = 1) const;
};

double eval_drift(const DriftSpec& spec, double x);

enum class InitialKind { Dirac, GriddedDensity };

// Initial law of X_0, supported in (-infty, 1].
struct InitialLaw {
  InitialKind kind = InitialKind::Dirac;
  double x0 = 0.0;  // Dirac location

  // GriddedDensity: density values at uniformly spaced nodes.
  double grid_lo = 0.0;
  double grid_dy = 0.0;
  std::vector<double> density;

  // Linear-decay slope near 1: density(x) <= beta (1 - x) on (1-eps, 1].
  std::optional<double> beta;

  static InitialLaw dirac(double x0);
  static InitialLaw gridded(double lo, double dy, std::vector<double> values);

  double total_mass() const;              // 1 for Dirac
  double mean_positive_part() const;      // E[(X_0)_+]
  double support_max() const;
  // Checks mass, support and (when beta is set) the decay bound on (1-eps, 1].
  void validate(double eps = 0.0) const;
};

// Problem instance. Threshold is fixed at 1 and reset at 0. A noise level
// sigma != 1 is folded away at construction by the time change u = sigma^2 t
// (drift scaled by 1/sigma^2, horizon by sigma^2), so every solver below
// assumes unit noise.
struct ModelConfig {
  DriftSpec drift;
  double alpha = 0.0;   // in (0,1)
  double sigma = 1.0;   // original noise level, informational after rescale
  InitialLaw init = InitialLaw::dirac(0.0);
  double eps = 0.0;     // in (0,1), x0 <= 1 - eps
  double T = 1.0;       // internal horizon (already time-changed)

  static ModelConfig make(DriftSpec drift, double alpha, double sigma,
                          InitialLaw init, double T,
                          std::optional<double> eps = std::nullopt);
};

// Discretized e(t) = E(M_t) on the uniform grid t_k = k dt, k = 0..n.
// e(0) = 0, e nondecreasing, e' >= 0.
struct FiringCurve {
  double dt = 0.0;
  std::vector<double> e;
  std::vector<double> de;

  std::size_t n() const { return e.empty() ? 0 : e.size() - 1; }
  double T() const { return dt * static_cast<double>(n()); }
  double t(std::size_t k) const { return dt * static_cast<double>(k); }

  static FiringCurve zero(double T, double dt);

  double value(double t) const;   // linear interpolation
  double deriv(double t) const;   // linear interpolation of e'

  double sup_e() const;
  double sup_de() const;

  // Throws unless e(0)=0, e nondecreasing, e' >= 0 and the trapezoid
  // consistency |e_{k+1}-e_k - (de_k+de_{k+1}) dt/2| <= c dt^2 holds.
  void validate(double consistency_c = 1e6) const;
};

// e^{#s}(r) = e(s + r) - e(s) on [0, T - s]; s must lie on the grid.
FiringCurve shift_curve(const FiringCurve& e, double s);

// Integrates d theta/dt = b(theta) + alpha e'(t) on the curve's grid with the
// classical 4th-order Runge-Kutta step (e' interpolated linearly, so the
// quadrature of the e' term reduces to the trapezoid rule and the zero-drift
// case theta_t = x_init + alpha e(t) is reproduced exactly).
std::vector<double> solve_flow(const DriftSpec& spec, const FiringCurve& e,
                               double alpha, double x_init);

}  // namespace mfif
