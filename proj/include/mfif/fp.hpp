#pragma once

#include <optional>
#include <vector>

#include "mfif/model.hpp"

// Deterministic mean-field machinery: the killed Fokker-Planck solver with
// Dirichlet condition at the threshold, boundary-flux extraction, the map
// Gamma via re-injection at the reset point, the self-consistent nonlinear
// solve, and closed-form first-passage oracles for the Brownian case.

namespace mfif {

struct SpaceTimeGrid {
  double y_min = 0.0;
  double dy = 0.0;
  double dt = 0.0;
  double T = 0.0;
  int M = 0;        // nodes j = 0..M with y_M = 1 and 0 on the grid
  int n_steps = 0;  // time levels k = 0..n_steps

  double y(int j) const { return y_min + dy * j; }
  int index_of_zero() const;

  // Snaps dy so that 1/dy is an integer (0 and 1 must both be grid nodes)
  // and extends y_min down to a node.
  static SpaceTimeGrid make(double y_min_hint, double dy, double dt, double T);

  // Default truncation y_min = min(x0, 0) - max(6 sqrt(T), 4).
  static double default_ymin(double x0, double T);

  void check_explicit_stability(double max_drift) const;
};

// Space-time (sub)density with per-step boundary accounting. Snapshots are
// stored every `store_every` steps; flux and leak are recorded at every step.
struct DensityField {
  SpaceTimeGrid grid;
  int store_every = 1;
  std::vector<double> snapshot_times;
  std::vector<std::vector<double>> p;  // p[s][j], nodes 0..M
  std::vector<double> flux;     // flux[k] = rate -1/2 d_y p(t_k, 1), k = 0..n
  std::vector<double> leak;     // cumulative mass lost at y_min up to t_k
  std::vector<double> injected; // cumulative re-injected mass (re-injection mode)
  std::vector<double> mass;     // interior mass at t_k
  bool reinjection = false;

  const std::vector<double>& final_density() const { return p.back(); }
  double killed_mass() const;  // 1 - mass(T) - leak(T), killed mode

  // Max |mass + integral flux + leak - 1| (killed) or |mass + leak - 1|
  // (re-injection) over all recorded steps.
  double mass_defect() const;

  InitialLaw final_law() const;  // gridded law from the final snapshot
};

// Coupling treatment of the self-consistent solve.
//  - Midpoint: within each step the rate is iterated to the midpoint fixed
//    point e' = (e'_k + e'_{k+1})/2 (the convention of the prescribed-curve
//    mode), which is the accurate integrator while the solution is regular.
//  - Cascade: the deterministic limit of the finite-network update: a plain
//    killed step, then a synchronous cascade F = L + A(alpha F) where L is
//    the step's boundary loss and A(s) the mass within s of the threshold;
//    the profile is displaced by alpha F and the overflow absorbed. This is
//    the scheme that resolves and classifies blow-up: at a jump, F lands on
//    the macroscopic root of the jump condition independently of dt.
enum class CouplingScheme { Midpoint, Cascade };

struct FpOptions {
  // Implicitness of the diffusion half. The default is backward Euler: the
  // re-injection deposits a fresh grid delta every step, and Crank-Nicolson
  // barely damps its high-frequency content, which shows up as a mass bias
  // after the negative excursions are clipped.
  double theta = 1.0;
  int rannacher_steps = 4;   // implicit startup steps to damp Dirac data
  int store_every = 1;
  bool second_order_flux = true;  // one-sided 2nd-order d_y p(t,1) stencil
  // Nonlinear solve controls.
  CouplingScheme scheme = CouplingScheme::Midpoint;
  double delta_blow = 0.2;   // one-step firing of this mass fraction = blow-up
  double blowup_cap = 0.0;   // 0 = default 10 / sqrt(dt)
  double mass_tol = 1e-6;    // per unit time
};

// Killed equation: d_t p + d_y[(b + alpha e') p] - 1/2 d_yy p = 0,
// p(t,1) = 0, absorbing at y_min. No re-injection: mass exits through the
// boundary flux.
DensityField solve_killed_fp(const ModelConfig& cfg, const FiringCurve& e,
                             const InitialLaw& init, const SpaceTimeGrid& grid,
                             const FpOptions& opts = {});

// Same evolution, but the boundary-flux mass re-enters at the reset point 0
// each step. Returns Gamma(e): Gamma(e)(0) = 0, Gamma(e)'(t) = flux(t).
FiringCurve gamma_map(const ModelConfig& cfg, const FiringCurve& e,
                      const InitialLaw& init, const SpaceTimeGrid& grid,
                      const FpOptions& opts = {},
                      DensityField* field_out = nullptr);

struct NonlinearResult {
  FiringCurve curve;
  DensityField field;
  std::optional<double> blowup_time;
};

// Self-consistent solve with the selected coupling scheme. A one-step
// firing of at least delta_blow of the mass, or a rate above the cap, is
// reported as blow-up; the Cascade scheme is the reliable classifier near
// the critical coupling (use dt <= 5e-4 there: the per-step loss of a steep
// regular transient must stay below delta_blow).
NonlinearResult solve_nonlinear_fp(const ModelConfig& cfg,
                                   const InitialLaw& init,
                                   const SpaceTimeGrid& grid,
                                   const FpOptions& opts = {});

// Reflection-principle oracle: P(tau_1 <= t) = 2 Phi(-(1 - x0)/sqrt t).
double hitting_cdf_brownian(double x0, double t);

// Bachelier-Levy oracle: P(exists s <= t : W_s >= a - slope s), a > 0.
double hitting_cdf_line(double a, double slope, double t);

// Inverse-Gaussian first-passage density from a to 1:
// f_a(t) = (1 - a)/sqrt(2 pi t^3) exp(-(1-a)^2 / (2t)).
double inverse_gaussian_fpt(double a, double t);

// Volterra renewal solution of e'(t) = f_{x0}(t) + int_0^t f_0(t - s) e'(s) ds
// for the Brownian, uncoupled case (alpha = 0, b = 0).
FiringCurve renewal_oracle(double x0, double T, double dt);

}  // namespace mfif
