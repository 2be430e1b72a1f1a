#include "mfif/fp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mfif {

namespace {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

struct StepLoss {
  double up = 0.0;
  double down = 0.0;
};

// One advection-diffusion step on the interior nodes 1..M-1 with Dirichlet
// zeros at both ends. Advection is conservative first-order upwind, CFL
// sub-stepped; diffusion is a theta-scheme solved by the Thomas algorithm.
// Returns the scheme-exact mass lost through each boundary.
class Stepper {
 public:
  Stepper(const SpaceTimeGrid& g, const DriftSpec& drift, double alpha)
      : g_(g), alpha_(alpha), bface_(g.M), diag_(g.M + 1), rhs_(g.M + 1),
        work_(g.M + 1) {
    for (int j = 0; j < g_.M; ++j)
      bface_[j] = eval_drift(drift, std::min(g_.y(j) + 0.5 * g_.dy, 1.0));
  }

  StepLoss step(std::vector<double>& p, double eprime, double theta) {
    StepLoss loss = advect(p, eprime);
    StepLoss d = diffuse(p, theta);
    loss.up += d.up;
    loss.down += d.down;
    // Clip negative round-off; account it against the lower-boundary leak.
    for (int j = 1; j < g_.M; ++j) {
      if (p[j] < 0.0) {
        loss.down += p[j] * g_.dy;
        p[j] = 0.0;
      }
    }
    return loss;
  }

  // Uniform upward displacement by s with first-order upwind sub-steps;
  // returns the mass absorbed at the threshold.
  double shift_up(std::vector<double>& p, double s) {
    if (s <= 0.0) return 0.0;
    const int M = g_.M;
    const double dy = g_.dy;
    int n_sub = std::max(1, static_cast<int>(std::ceil(s / (0.9 * dy))));
    const double ds = s / n_sub;
    double absorbed = 0.0;
    for (int k = 0; k < n_sub; ++k) {
      absorbed += p[M - 1] * ds;
      for (int j = M - 1; j >= 1; --j)
        p[j] -= ds / dy * (p[j] - p[j - 1]);  // p[j-1] still old
    }
    return absorbed;
  }

 private:
  StepLoss advect(std::vector<double>& p, double eprime) {
    const int M = g_.M;
    const double dy = g_.dy;
    double vmax = 0.0;
    for (int j = 0; j < M; ++j)
      vmax = std::max(vmax, std::abs(bface_[j] + alpha_ * eprime));
    int n_sub = std::max(1, static_cast<int>(
                                std::ceil(g_.dt * vmax / (0.9 * dy))));
    const double dts = g_.dt / n_sub;
    StepLoss loss;
    std::vector<double>& F = work_;
    for (int s = 0; s < n_sub; ++s) {
      for (int j = 0; j < M; ++j) {
        double v = bface_[j] + alpha_ * eprime;
        F[j] = v > 0.0 ? v * p[j] : v * p[j + 1];
      }
      // F[0] uses p[0] = 0 upward and p[1] downward; F[M-1] uses p[M] = 0.
      for (int j = 1; j < M; ++j) p[j] -= dts / dy * (F[j] - F[j - 1]);
      if (F[M - 1] > 0.0) loss.up += F[M - 1] * dts;
      if (F[0] < 0.0) loss.down += -F[0] * dts;
    }
    return loss;
  }

  StepLoss diffuse(std::vector<double>& p, double theta) {
    const int M = g_.M;
    const double r = g_.dt / (2.0 * g_.dy * g_.dy);
    const double p1_old = p[1];
    const double pm_old = p[M - 1];
    // rhs = (I + (1-theta) r L) p
    for (int j = 1; j < M; ++j)
      rhs_[j] = p[j] + (1.0 - theta) * r * (p[j - 1] - 2.0 * p[j] + p[j + 1]);
    // Thomas solve of (I - theta r L) p_new = rhs
    const double a = -theta * r;
    const double b = 1.0 + 2.0 * theta * r;
    diag_[1] = b;
    rhs_[1] = rhs_[1];
    for (int j = 2; j < M; ++j) {
      double w = a / diag_[j - 1];
      diag_[j] = b - w * a;
      rhs_[j] = rhs_[j] - w * rhs_[j - 1];
    }
    p[M - 1] = rhs_[M - 1] / diag_[M - 1];
    for (int j = M - 2; j >= 1; --j) p[j] = (rhs_[j] - a * p[j + 1]) / diag_[j];
    StepLoss loss;
    loss.up = g_.dt / (2.0 * g_.dy) * (theta * p[M - 1] + (1.0 - theta) * pm_old);
    loss.down = g_.dt / (2.0 * g_.dy) * (theta * p[1] + (1.0 - theta) * p1_old);
    return loss;
  }

  const SpaceTimeGrid& g_;
  double alpha_;
  std::vector<double> bface_;
  std::vector<double> diag_, rhs_, work_;
};

std::vector<double> initial_grid_density(const InitialLaw& init,
                                         const SpaceTimeGrid& g) {
  std::vector<double> p(g.M + 1, 0.0);
  if (init.kind == InitialKind::Dirac) {
    double pos = (init.x0 - g.y_min) / g.dy;
    int j = static_cast<int>(std::floor(pos));
    double w = pos - j;
    if (j < 1 || j >= g.M)
      throw std::runtime_error("fp: Dirac initial point outside (y_min, 1)");
    p[j] += (1.0 - w) / g.dy;
    if (j + 1 < g.M)
      p[j + 1] += w / g.dy;
    else
      p[j] += w / g.dy;  // keep the mass off the Dirichlet node
  } else {
    double lo = init.grid_lo;
    double hi = lo + init.grid_dy * (init.density.size() - 1);
    if (hi > 1.0 + 1e-12)
      throw std::runtime_error("fp: initial support exceeds 1");
    for (int j = 1; j < g.M; ++j) {
      double y = g.y(j);
      if (y < lo || y > hi) continue;
      double u = (y - lo) / init.grid_dy;
      auto k = static_cast<std::size_t>(u);
      double w = u - static_cast<double>(k);
      double v = (k + 1 < init.density.size())
                     ? init.density[k] + w * (init.density[k + 1] - init.density[k])
                     : init.density[k];
      p[j] = std::max(v, 0.0);
    }
    double mass = std::accumulate(p.begin(), p.end(), 0.0) * g.dy;
    double target = init.total_mass();
    if (std::abs(target - 1.0) > 1e-8)
      throw std::runtime_error("fp: initial mass off by more than 1e-8");
    if (mass <= 0.0) throw std::runtime_error("fp: empty initial density");
    for (double& v : p) v *= target / mass;
  }
  return p;
}

double interior_mass(const std::vector<double>& p, const SpaceTimeGrid& g) {
  double s = 0.0;
  for (int j = 1; j < g.M; ++j) s += p[j];
  return s * g.dy;
}

// -1/2 d_y p(t,1) by the one-sided second-order stencil with p_M = 0.
double stencil_flux(const std::vector<double>& p, const SpaceTimeGrid& g,
                    bool second_order) {
  const int M = g.M;
  if (second_order)
    return std::max(0.0, (4.0 * p[M - 1] - p[M - 2]) / (4.0 * g.dy));
  return std::max(0.0, p[M - 1] / (2.0 * g.dy));
}

struct EvolveResult {
  DensityField field;
  std::vector<double> cum_killed;  // cumulative upper-boundary losses
  std::optional<double> blowup_time;
};

// Shared evolution driver. eprime_at(k) supplies the coupling rate used for
// the step from t_k to t_{k+1}; on_step reports (k+1, loss_up) after each
// step and may refine (inner Picard) through re-running — handled by caller.
EvolveResult evolve(const ModelConfig& cfg, const InitialLaw& init,
                    const SpaceTimeGrid& grid, const FpOptions& opts,
                    bool reinject, bool nonlinear,
                    const FiringCurve* e_in) {
  EvolveResult out;
  DensityField& f = out.field;
  f.grid = grid;
  f.reinjection = reinject;
  f.store_every = std::max(1, opts.store_every);

  std::vector<double> p = initial_grid_density(init, grid);
  Stepper stepper(grid, cfg.drift, cfg.alpha);
  const int j0 = grid.index_of_zero();
  const int n = grid.n_steps;
  const double cap =
      opts.blowup_cap > 0.0 ? opts.blowup_cap : 10.0 / std::sqrt(grid.dt);

  f.flux.assign(n + 1, 0.0);
  f.leak.assign(n + 1, 0.0);
  f.injected.assign(n + 1, 0.0);
  f.mass.assign(n + 1, 0.0);
  f.mass[0] = interior_mass(p, grid);
  out.cum_killed.assign(n + 1, 0.0);
  f.snapshot_times.push_back(0.0);
  f.p.push_back(p);

  // The re-entry mass is deposited with the one-step heat-kernel profile
  // around the reset point rather than as a bare grid delta: the delta's
  // discrete transient was measurably sub-first-order in the recirculated
  // firing mass.
  std::vector<double> inject_w;
  int inject_lo = j0;
  if (reinject) {
    int half = std::max(1, static_cast<int>(std::ceil(
                                8.0 * std::sqrt(grid.dt) / grid.dy)));
    inject_lo = std::max(1, j0 - half);
    int hi = std::min(grid.M - 1, j0 + half);
    double sum = 0.0;
    for (int j = inject_lo; j <= hi; ++j) {
      double y = grid.y(j);
      double w = std::exp(-y * y / (2.0 * grid.dt));
      inject_w.push_back(w);
      sum += w * grid.dy;
    }
    for (double& w : inject_w) w /= sum;  // exact discrete mass 1
  }

  std::vector<double> p_try;
  for (int k = 0; k < n; ++k) {
    double theta = (k < opts.rannacher_steps) ? 1.0 : opts.theta;
    StepLoss loss;
    const bool cascade = nonlinear && opts.scheme == CouplingScheme::Cascade;
    if (cascade) {
      // Synchronous cascade: step with the base drift only, then fire
      // synchronously. F solves F = L + A(alpha F), where L is the plain
      // step's threshold loss and A(s) the mass within s of the threshold;
      // the monotone iteration from F = L finds the smallest solution,
      // exactly the deterministic limit of the finite-network update.
      loss = stepper.step(p, 0.0, theta);
    } else if (nonlinear) {
      // Per-step self-consistency: the coupling rate over [t_k, t_{k+1}] is
      // the midpoint value 0.5 (e'_k + e'_{k+1}), the same convention the
      // prescribed-curve mode uses, so the converged march solves the same
      // discrete fixed point the Picard iteration converges to.
      double eprime = f.flux[k];
      for (int sweep = 0; sweep < 100; ++sweep) {
        p_try = p;
        loss = stepper.step(p_try, eprime, theta);
        double refined =
            0.5 * (f.flux[k] +
                   stencil_flux(p_try, grid, opts.second_order_flux));
        if (std::abs(refined - eprime) <= 1e-10 * (1.0 + std::abs(eprime)))
          break;
        eprime = refined;
      }
      p.swap(p_try);
    } else {
      double eprime = e_in ? e_in->deriv(grid.dt * (k + 0.5)) : 0.0;
      loss = stepper.step(p, eprime, theta);
    }
    // Read the boundary stencil before the cascade displacement below: the
    // upwind shift steepens the boundary layer until the next diffusion step
    // re-equilibrates it, and would bias the reported rate upward.
    f.flux[k + 1] = stencil_flux(p, grid, opts.second_order_flux);

    double extra = 0.0;
    if (cascade && cfg.alpha > 0.0) {
      // Node-sum suffix masses with linear interpolation in between.
      std::vector<double>& suffix = p_try;
      suffix.assign(grid.M + 1, 0.0);
      for (int j = grid.M - 1; j >= 1; --j)
        suffix[j] = suffix[j + 1] + p[j] * grid.dy;
      auto mass_within = [&](double s) {
        if (s <= 0.0) return 0.0;
        double pos = (1.0 - s - grid.y_min) / grid.dy;
        if (pos <= 1.0) return suffix[1];
        int j = static_cast<int>(pos);
        if (j >= grid.M) return 0.0;
        return suffix[j] - (pos - j) * p[j] * grid.dy;
      };
      double F = loss.up;
      for (int it = 0; it < 10 * grid.M; ++it) {
        double Fn = loss.up + mass_within(cfg.alpha * F);
        if (Fn - F < 1e-14) break;
        F = Fn;
      }
      extra = stepper.shift_up(p, cfg.alpha * F);
    }
    const double fired = loss.up + extra;

    if (reinject) {
      for (std::size_t i = 0; i < inject_w.size(); ++i)
        p[inject_lo + static_cast<int>(i)] += fired * inject_w[i];
      f.injected[k + 1] = f.injected[k] + fired;
    } else {
      f.injected[k + 1] = f.injected[k];
    }
    out.cum_killed[k + 1] = out.cum_killed[k] + fired;
    f.leak[k + 1] = f.leak[k] + loss.down;
    f.mass[k + 1] = interior_mass(p, grid);

    if ((k + 1) % f.store_every == 0 || k + 1 == n) {
      f.snapshot_times.push_back(grid.dt * (k + 1));
      f.p.push_back(p);
    }

    if (nonlinear && (fired >= opts.delta_blow || f.flux[k + 1] > cap)) {
      out.blowup_time = grid.dt * (k + 1);
      // Freeze the series at the blow-up step.
      for (int j = k + 2; j <= n; ++j) {
        f.flux[j] = f.flux[k + 1];
        f.leak[j] = f.leak[k + 1];
        f.injected[j] = f.injected[k + 1];
        f.mass[j] = f.mass[k + 1];
        out.cum_killed[j] = out.cum_killed[k + 1];
      }
      break;
    }
  }
  return out;
}

FiringCurve curve_from_losses(const std::vector<double>& cum,
                              const std::vector<double>& flux, double dt) {
  FiringCurve c;
  c.dt = dt;
  c.e = cum;
  c.de = flux;
  // Endpoint rates so that e(0) = 0 stays consistent with a vanishing flux.
  c.de[0] = 0.0;
  return c;
}

}  // namespace

int SpaceTimeGrid::index_of_zero() const {
  int j = static_cast<int>(std::llround(-y_min / dy));
  return j;
}

SpaceTimeGrid SpaceTimeGrid::make(double y_min_hint, double dy, double dt,
                                  double T) {
  if (dy <= 0 || dt <= 0 || T <= 0)
    throw std::invalid_argument("grid: dy, dt, T must be positive");
  if (y_min_hint >= 0.0)
    throw std::invalid_argument("grid: y_min must be below the reset point 0");
  SpaceTimeGrid g;
  auto cells_per_unit = std::max<long long>(1, std::llround(1.0 / dy));
  g.dy = 1.0 / static_cast<double>(cells_per_unit);
  auto cells_below = static_cast<long long>(std::ceil(-y_min_hint / g.dy - 1e-12));
  g.y_min = -static_cast<double>(cells_below) * g.dy;
  g.M = static_cast<int>(cells_below + cells_per_unit);
  g.n_steps = std::max(1, static_cast<int>(std::llround(T / dt)));
  g.dt = T / g.n_steps;
  g.T = T;
  return g;
}

double SpaceTimeGrid::default_ymin(double x0, double T) {
  return std::min(x0, 0.0) - std::max(6.0 * std::sqrt(T), 4.0);
}

void SpaceTimeGrid::check_explicit_stability(double max_drift) const {
  if (dt > dy * dy / (1.0 + dy * max_drift) + 1e-15)
    throw std::runtime_error("grid: explicit scheme stability violated");
}

double DensityField::killed_mass() const {
  return 1.0 - mass.back() - leak.back();
}

double DensityField::mass_defect() const {
  // injected[k] holds the exact cumulative upper-boundary mass: in killed
  // mode it left the system, in re-injection mode it re-entered at 0.
  double worst = 0.0;
  for (std::size_t k = 0; k < mass.size(); ++k) {
    double total = mass[k] + leak[k] + (reinjection ? 0.0 : injected[k]);
    worst = std::max(worst, std::abs(total - 1.0));
  }
  return worst;
}

InitialLaw DensityField::final_law() const {
  const auto& last = p.back();
  double mass_now = 0.0;
  for (int j = 1; j < grid.M; ++j) mass_now += last[j];
  mass_now *= grid.dy;
  std::vector<double> vals = last;
  if (mass_now > 0)
    for (double& v : vals) v /= mass_now;  // renormalize lost leak mass
  // Trapezoid mass of the law must be 1 within 1e-10 for validate().
  double trap = 0.0;
  for (std::size_t j = 0; j + 1 < vals.size(); ++j)
    trap += 0.5 * (vals[j] + vals[j + 1]);
  trap *= grid.dy;
  if (trap > 0)
    for (double& v : vals) v /= trap;
  return InitialLaw::gridded(grid.y_min, grid.dy, vals);
}

DensityField solve_killed_fp(const ModelConfig& cfg, const FiringCurve& e,
                             const InitialLaw& init, const SpaceTimeGrid& grid,
                             const FpOptions& opts) {
  auto res = evolve(cfg, init, grid, opts, /*reinject=*/false,
                    /*nonlinear=*/false, &e);
  res.field.injected = res.cum_killed;  // exact cumulative killed mass
  return res.field;
}

FiringCurve gamma_map(const ModelConfig& cfg, const FiringCurve& e,
                      const InitialLaw& init, const SpaceTimeGrid& grid,
                      const FpOptions& opts, DensityField* field_out) {
  if (std::abs(e.T() - grid.T) > 1e-9)
    throw std::invalid_argument("gamma_map: curve horizon != grid horizon");
  e.validate();
  auto res = evolve(cfg, init, grid, opts, /*reinject=*/true,
                    /*nonlinear=*/false, &e);
  if (field_out) *field_out = res.field;
  return curve_from_losses(res.field.injected, res.field.flux, grid.dt);
}

NonlinearResult solve_nonlinear_fp(const ModelConfig& cfg,
                                   const InitialLaw& init,
                                   const SpaceTimeGrid& grid,
                                   const FpOptions& opts) {
  auto res = evolve(cfg, init, grid, opts, /*reinject=*/true,
                    /*nonlinear=*/true, nullptr);
  NonlinearResult out;
  out.curve = curve_from_losses(res.field.injected, res.field.flux, grid.dt);
  out.field = std::move(res.field);
  out.blowup_time = res.blowup_time;
  return out;
}

double hitting_cdf_brownian(double x0, double t) {
  if (x0 >= 1.0) throw std::domain_error("hitting_cdf_brownian: x0 >= 1");
  if (t <= 0.0) return 0.0;
  return 2.0 * norm_cdf(-(1.0 - x0) / std::sqrt(t));
}

double hitting_cdf_line(double a, double slope, double t) {
  if (a <= 0.0) throw std::domain_error("hitting_cdf_line: a <= 0");
  if (t <= 0.0) return 0.0;
  double rt = std::sqrt(t);
  return norm_cdf((slope * t - a) / rt) +
         std::exp(2.0 * a * slope) * norm_cdf((-slope * t - a) / rt);
}

double inverse_gaussian_fpt(double a, double t) {
  if (t <= 0.0) return 0.0;
  double d = 1.0 - a;
  return d / std::sqrt(2.0 * M_PI * t * t * t) * std::exp(-d * d / (2.0 * t));
}

FiringCurve renewal_oracle(double x0, double T, double dt) {
  if (x0 >= 1.0) throw std::domain_error("renewal_oracle: x0 >= 1");
  FiringCurve c = FiringCurve::zero(T, dt);
  const std::size_t n = c.n();
  // Product-trapezoid quadrature; f_0(0) = 0 keeps the update explicit.
  for (std::size_t k = 1; k <= n; ++k) {
    double tk = c.t(k);
    double s = inverse_gaussian_fpt(x0, tk);
    s += 0.5 * dt * inverse_gaussian_fpt(0.0, tk) * c.de[0];
    for (std::size_t j = 1; j < k; ++j)
      s += dt * inverse_gaussian_fpt(0.0, tk - c.t(j)) * c.de[j];
    c.de[k] = s;
    c.e[k] = c.e[k - 1] + 0.5 * dt * (c.de[k - 1] + c.de[k]);
  }
  return c;
}

}  // namespace mfif
