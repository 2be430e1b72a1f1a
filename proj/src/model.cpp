#include "mfif/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mfif {

DriftSpec DriftSpec::zero() { return DriftSpec{}; }

DriftSpec DriftSpec::linear(double lambda) {
  if (lambda < 0) throw std::invalid_argument("linear drift: lambda < 0");
  DriftSpec s;
  s.kind = DriftKind::Linear;
  s.lambda = lambda;
  s.Lambda = lambda;
  s.K = lambda;
  s.m = lambda;  // sup of |lambda x| on [0,1]
  return s;
}

DriftSpec DriftSpec::tabulated(std::vector<double> xs, std::vector<double> ys,
                               double Lambda, double K, double m) {
  if (xs.size() < 2 || xs.size() != ys.size())
    throw std::invalid_argument("tabulated drift: need >= 2 matching knots");
  if (!std::is_sorted(xs.begin(), xs.end()))
    throw std::invalid_argument("tabulated drift: knots not sorted");
  DriftSpec s;
  s.kind = DriftKind::Tabulated;
  s.xs = std::move(xs);
  s.ys = std::move(ys);
  s.Lambda = Lambda;
  s.K = K;
  s.m = m;
  return s;
}

double eval_drift(const DriftSpec& spec, double x) {
  if (x > 1.0) throw std::domain_error("eval_drift: x > 1");
  switch (spec.kind) {
    case DriftKind::Zero:
      return 0.0;
    case DriftKind::Linear:
      return -spec.lambda * x;
    case DriftKind::Tabulated: {
      const auto& xs = spec.xs;
      const auto& ys = spec.ys;
      if (x <= xs.front()) {
        double sl = (ys[1] - ys[0]) / (xs[1] - xs[0]);
        return ys[0] + sl * (x - xs[0]);
      }
      if (x >= xs.back()) {
        std::size_t k = xs.size() - 1;
        double sl = (ys[k] - ys[k - 1]) / (xs[k] - xs[k - 1]);
        return ys[k] + sl * (x - xs[k]);
      }
      auto it = std::upper_bound(xs.begin(), xs.end(), x);
      std::size_t j = static_cast<std::size_t>(it - xs.begin());
      double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
      return ys[j - 1] + w * (ys[j] - ys[j - 1]);
    }
  }
  throw std::logic_error("eval_drift: bad kind");
}

void DriftSpec::verify_constants(int samples, double lo,
                                 unsigned long long seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, 1.0);
  double prev_x = u(rng);
  double prev_b = eval_drift(*this, prev_x);
  for (int i = 0; i < samples; ++i) {
    double x = u(rng);
    double b = eval_drift(*this, x);
    if (std::abs(b) > Lambda * (std::abs(x) + 1.0) + 1e-12)
      throw std::runtime_error("drift constants: |b(x)| > Lambda(|x|+1)");
    if (std::abs(b - prev_b) > K * std::abs(x - prev_x) + 1e-12)
      throw std::runtime_error("drift constants: Lipschitz K violated");
    prev_x = x;
    prev_b = b;
  }
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i <= 200; ++i) {
    double z = (i < 200) ? i / 200.0 : u01(rng);
    if (std::abs(eval_drift(*this, z)) > m + 1e-12)
      throw std::runtime_error("drift constants: m violated on [0,1]");
  }
}

InitialLaw InitialLaw::dirac(double x0) {
  if (x0 >= 1.0) throw std::invalid_argument("initial law: x0 must be < 1");
  InitialLaw law;
  law.kind = InitialKind::Dirac;
  law.x0 = x0;
  return law;
}

InitialLaw InitialLaw::gridded(double lo, double dy, std::vector<double> values) {
  if (dy <= 0 || values.size() < 2)
    throw std::invalid_argument("initial law: bad grid");
  InitialLaw law;
  law.kind = InitialKind::GriddedDensity;
  law.grid_lo = lo;
  law.grid_dy = dy;
  law.density = std::move(values);
  law.x0 = law.support_max();
  return law;
}

double InitialLaw::total_mass() const {
  if (kind == InitialKind::Dirac) return 1.0;
  double s = 0.0;  // trapezoid
  for (std::size_t j = 0; j + 1 < density.size(); ++j)
    s += 0.5 * (density[j] + density[j + 1]);
  return s * grid_dy;
}

double InitialLaw::mean_positive_part() const {
  if (kind == InitialKind::Dirac) return std::max(x0, 0.0);
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < density.size(); ++j) {
    double xa = grid_lo + grid_dy * static_cast<double>(j);
    double xb = xa + grid_dy;
    s += 0.5 * (std::max(xa, 0.0) * density[j] + std::max(xb, 0.0) * density[j + 1]);
  }
  return s * grid_dy;
}

double InitialLaw::support_max() const {
  if (kind == InitialKind::Dirac) return x0;
  for (std::size_t j = density.size(); j-- > 0;) {
    if (density[j] > 0.0) return grid_lo + grid_dy * static_cast<double>(j);
  }
  return grid_lo;
}

void InitialLaw::validate(double eps) const {
  if (support_max() > 1.0 + 1e-12)
    throw std::runtime_error("initial law: support exceeds 1");
  if (kind == InitialKind::GriddedDensity) {
    if (std::abs(total_mass() - 1.0) > 1e-10)
      throw std::runtime_error("initial law: mass != 1");
    for (double v : density)
      if (v < 0) throw std::runtime_error("initial law: negative density");
  }
  if (beta && eps > 0 && kind == InitialKind::GriddedDensity) {
    for (std::size_t j = 0; j < density.size(); ++j) {
      double x = grid_lo + grid_dy * static_cast<double>(j);
      if (x > 1.0 - eps && density[j] > *beta * (1.0 - x) + 1e-12)
        throw std::runtime_error("initial law: linear-decay bound violated");
    }
  }
}

ModelConfig ModelConfig::make(DriftSpec drift, double alpha, double sigma,
                              InitialLaw init, double T,
                              std::optional<double> eps) {
  if (!(alpha >= 0.0) || !(alpha < 1.0))
    throw std::invalid_argument("config: alpha must be in [0,1)");
  if (!(sigma > 0.0)) throw std::invalid_argument("config: sigma must be > 0");
  if (!(T > 0.0)) throw std::invalid_argument("config: T must be > 0");

  ModelConfig cfg;
  // Time change u = sigma^2 t: unit noise internally, drift and horizon rescaled.
  if (sigma != 1.0) {
    double s2 = sigma * sigma;
    switch (drift.kind) {
      case DriftKind::Zero:
        break;
      case DriftKind::Linear:
        drift = DriftSpec::linear(drift.lambda / s2);
        break;
      case DriftKind::Tabulated: {
        std::vector<double> ys = drift.ys;
        for (double& v : ys) v /= s2;
        drift = DriftSpec::tabulated(drift.xs, std::move(ys), drift.Lambda / s2,
                                     drift.K / s2, drift.m / s2);
        break;
      }
    }
    T *= s2;
  }
  cfg.drift = std::move(drift);
  cfg.alpha = alpha;
  cfg.sigma = sigma;
  cfg.init = std::move(init);
  cfg.T = T;

  double x0 = cfg.init.support_max();
  if (!(x0 < 1.0)) throw std::invalid_argument("config: X_0 must be < 1 a.s.");
  cfg.eps = eps ? *eps : std::min(1.0 - x0, 0.99);
  if (!(cfg.eps > 0.0) || !(cfg.eps < 1.0))
    throw std::invalid_argument("config: eps must be in (0,1)");
  if (x0 > 1.0 - cfg.eps + 1e-12)
    throw std::invalid_argument("config: x0 > 1 - eps");
  return cfg;
}

FiringCurve FiringCurve::zero(double T, double dt) {
  if (dt <= 0 || T <= 0) throw std::invalid_argument("curve: bad grid");
  auto n = static_cast<std::size_t>(std::llround(T / dt));
  if (n == 0) n = 1;
  FiringCurve c;
  c.dt = dt;
  c.e.assign(n + 1, 0.0);
  c.de.assign(n + 1, 0.0);
  return c;
}

double FiringCurve::value(double t) const {
  if (t <= 0) return e.front();
  if (t >= T()) return e.back();
  double u = t / dt;
  auto k = static_cast<std::size_t>(u);
  double w = u - static_cast<double>(k);
  return e[k] + w * (e[k + 1] - e[k]);
}

double FiringCurve::deriv(double t) const {
  if (t <= 0) return de.front();
  if (t >= T()) return de.back();
  double u = t / dt;
  auto k = static_cast<std::size_t>(u);
  double w = u - static_cast<double>(k);
  return de[k] + w * (de[k + 1] - de[k]);
}

double FiringCurve::sup_e() const {
  return *std::max_element(e.begin(), e.end());
}

double FiringCurve::sup_de() const {
  return *std::max_element(de.begin(), de.end());
}

void FiringCurve::validate(double consistency_c) const {
  if (e.size() != de.size() || e.size() < 2)
    throw std::runtime_error("curve: inconsistent sizes");
  if (std::abs(e.front()) > 1e-14) throw std::runtime_error("curve: e(0) != 0");
  for (std::size_t k = 0; k + 1 < e.size(); ++k) {
    if (e[k + 1] < e[k] - 1e-12) throw std::runtime_error("curve: e decreasing");
    if (de[k] < -1e-12) throw std::runtime_error("curve: e' < 0");
    double trap = 0.5 * (de[k] + de[k + 1]) * dt;
    if (std::abs(e[k + 1] - e[k] - trap) > consistency_c * dt * dt)
      throw std::runtime_error("curve: trapezoid consistency violated");
  }
}

FiringCurve shift_curve(const FiringCurve& e, double s) {
  double u = s / e.dt;
  auto k = static_cast<std::size_t>(std::llround(u));
  if (std::abs(u - static_cast<double>(k)) > 1e-9 || k > e.n())
    throw std::invalid_argument("shift_curve: s must lie on the grid");
  FiringCurve out;
  out.dt = e.dt;
  out.e.resize(e.e.size() - k);
  out.de.resize(out.e.size());
  for (std::size_t j = 0; j < out.e.size(); ++j) {
    out.e[j] = e.e[k + j] - e.e[k];
    out.de[j] = e.de[k + j];
  }
  return out;
}

std::vector<double> solve_flow(const DriftSpec& spec, const FiringCurve& e,
                               double alpha, double x_init) {
  const std::size_t n = e.n();
  const double dt = e.dt;
  std::vector<double> path(n + 1);
  path[0] = x_init;
  auto drift_ext = [&](double x) {
    // Past the threshold the flow has already escaped; extend b with the
    // slope it has at 1 so the integrator stays defined (callers truncate).
    if (x <= 1.0) return eval_drift(spec, x);
    if (spec.kind == DriftKind::Linear) return -spec.lambda * x;
    if (spec.kind == DriftKind::Zero) return 0.0;
    double b1 = eval_drift(spec, 1.0);
    double slope = (b1 - eval_drift(spec, 1.0 - 1e-6)) / 1e-6;
    return b1 + slope * (x - 1.0);
  };
  auto rhs = [&](double t, double x) {
    return drift_ext(x) + alpha * e.deriv(t);
  };
  for (std::size_t k = 0; k < n; ++k) {
    double t = e.t(k);
    double x = path[k];
    double k1 = rhs(t, x);
    double k2 = rhs(t + 0.5 * dt, x + 0.5 * dt * k1);
    double k3 = rhs(t + 0.5 * dt, x + 0.5 * dt * k2);
    double k4 = rhs(t + dt, x + dt * k3);
    path[k + 1] = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return path;
}

}  // namespace mfif
