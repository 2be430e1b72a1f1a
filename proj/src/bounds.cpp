#include "mfif/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace mfif {

namespace {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Bisection for the largest x in (0, hi] with pred(x) true, pred monotone
// (true below, false above). Assumes pred(lo) true for some tiny lo.
double largest_satisfying(double hi, const auto& pred, double tol = 1e-10) {
  if (pred(hi)) return hi;
  double lo = 0.0;
  double up = hi;
  while (up - lo > tol) {
    double mid = 0.5 * (lo + up);
    (pred(mid) ? lo : up) = mid;
  }
  return lo;
}

}  // namespace

double g_bound(double a, double alpha, double Lambda, double T, double t) {
  if (alpha >= 1.0) throw std::invalid_argument("g_bound: alpha >= 1");
  return (a + (4.0 + Lambda * std::sqrt(T)) * std::sqrt(t)) / (1.0 - alpha) *
         std::exp(2.0 * Lambda * t / (1.0 - alpha));
}

double B_bound(double T, double alpha, double Lambda, double ex0plus) {
  if (alpha >= 1.0) throw std::invalid_argument("B_bound: alpha >= 1");
  return (ex0plus + 4.0 * std::sqrt(T) + Lambda * T) / (1.0 - alpha) *
         std::exp(2.0 * Lambda * T / (1.0 - alpha));
}

double compute_T0(double eps, double Lambda) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("compute_T0: eps");
  if (Lambda == 0.0) return 1.0;
  auto ok = [&](double T0) {
    return (1.0 - eps) * std::exp(Lambda * T0) <= 1.0 - 7.0 * eps / 8.0 &&
           Lambda * T0 * std::exp(Lambda * T0) <= eps / 8.0;
  };
  return largest_satisfying(1.0, ok);
}

double density_ceiling_small_t(double eps, double c_prime, double B) {
  return std::pow(2.0, 1.5) * std::pow(c_prime, 1.5) * std::exp(-0.5) *
         (1.0 / eps + B);
}

double density_ceiling_large_t(double T0, double c_prime, double B) {
  return c_prime / std::sqrt(T0) +
         std::pow(2.0, 1.5) * std::pow(c_prime, 1.5) * std::exp(-0.5) * B;
}

double compute_alpha0(double eps, double Lambda, double K, double c_prime,
                      double ex0plus) {
  (void)K;  // c' already carries the K dependence
  if (!(c_prime > 0.0)) throw std::invalid_argument("compute_alpha0: c' <= 0");
  double T0 = compute_T0(eps, Lambda);
  double w0 = std::pow(2.0, 1.5) * std::pow(c_prime, 1.5) * std::exp(-0.5);
  auto ok = [&](double a) {
    double B = B_bound(T0, a, Lambda, ex0plus);
    return a * B <= eps / 4.0 && a * w0 * (1.0 / eps + B) <= 1.0 &&
           a * (c_prime / std::sqrt(T0) + w0 * B) <= 1.0;
  };
  double a0 = largest_satisfying(1.0 - 1e-12, ok);
  if (a0 <= 0.0) throw std::runtime_error("compute_alpha0: no positive solution");
  return a0;
}

double holder_B0(double c, double alpha, double Lambda, double eps) {
  if (c * alpha >= 1.0)
    throw std::invalid_argument("holder_B0: c alpha >= 1, bound void");
  return std::exp(2.0 * Lambda) *
         ((8.0 + 5.0 * c + 8.0 / eps) * Lambda + 4.0 * (2.0 + c + 1.0 / eps)) /
         (1.0 - c * alpha);
}

BarrierParams barrier_params(double m, double alpha, double C_T, double mu_T,
                             double eta_T, int n) {
  double gamma = 2.0 * (std::max(m, 1.0) + alpha * C_T);
  double Theta = mu_T * std::pow(static_cast<double>(n), -eta_T) /
                 (1.0 - std::exp(-gamma / static_cast<double>(n)));
  return {gamma, Theta};
}

double gradient_bound(int n, double mu_T, double eta_T, double m, double alpha,
                      double C_T, double K, double t) {
  auto [gamma, Theta] = barrier_params(m, alpha, C_T, mu_T, eta_T, n);
  return Theta * gamma * std::exp(K * t);
}

double two_sided_survival(double a, double b, double T) {
  if (a <= 0.0 || b <= 0.0) return 0.0;
  // Absorbing barriers at 0 and L, start at x = a: spectral sine series.
  double L = a + b;
  double x = a;
  double s = 0.0;
  for (int k = 1; k <= 20001; k += 2) {
    double envelope =
        4.0 / (k * M_PI) * std::exp(-0.5 * k * k * M_PI * M_PI * T / (L * L));
    s += envelope * std::sin(k * M_PI * x / L);
    // Stop on the envelope: individual sines may vanish exactly.
    if (envelope < 1e-16 && k > 5) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

double cdprime_exact(double alpha, double holderB) {
  double c = 2.0 + alpha * holderB;
  double p_inf = 1.0 - 2.0 * norm_cdf(-1.0);  // P(inf_{[0,1]} W > -1)
  return p_inf - two_sided_survival(1.0, c, 1.0);
}

CdprimeEstimate estimate_cdprime(double alpha, double holderB, int samples,
                                 unsigned long long seed) {
  if (holderB < 0.0) throw std::invalid_argument("estimate_cdprime: B < 0");
  const double c = 2.0 + alpha * holderB;
  const int n_steps = 256;
  const double dt = 1.0 / n_steps;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(dt));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  long long hits = 0;
  for (int i = 0; i < samples; ++i) {
    double w = 0.0;
    bool crossed_up = false;
    bool crossed_down = false;
    for (int k = 0; k < n_steps && !crossed_down; ++k) {
      double w2 = w + gauss(rng);
      if (w2 <= -1.0) {
        crossed_down = true;
        break;
      }
      if (w2 >= c) crossed_up = true;
      if (!crossed_down) {
        // Brownian-bridge correction for an unobserved excursion below -1.
        double pd = std::exp(-2.0 * (w + 1.0) * (w2 + 1.0) / dt);
        if (unif(rng) < pd) {
          crossed_down = true;
          break;
        }
        if (!crossed_up) {
          double pu = std::exp(-2.0 * (c - w) * (c - w2) / dt);
          if (unif(rng) < pu) crossed_up = true;
        }
      }
      w = w2;
    }
    if (crossed_up && !crossed_down) ++hits;
  }
  double p = static_cast<double>(hits) / samples;
  double se = std::sqrt(std::max(p * (1.0 - p), 1e-300) / samples);
  return {p, se};
}

double eta_from_cdprime(double c_dprime, double alpha, double holderB) {
  if (!(c_dprime > 0.0) || !(c_dprime < 1.0))
    throw std::invalid_argument("eta_from_cdprime: c'' outside (0,1)");
  double L = 3.0 + alpha * holderB;
  return -std::log(1.0 - c_dprime) / std::log(L);
}

double mu_from_ceiling(double ceiling, double c_dprime, double eps, double eta) {
  double r0 = std::min(c_dprime, eps / 4.0);
  return ceiling * std::pow(r0, -eta) / (1.0 - c_dprime);
}

double estimate_cprime(const DriftSpec& spec, int samples,
                       unsigned long long seed) {
  if (spec.K == 0.0) return 2.0;  // Gaussian envelope with c' = 2 is exact
  const double K = spec.K;

  // Worst-case K-Lipschitz drift families with F(t,0) = 0: push mass toward
  // or away from the origin, with and without saturation.
  const double sat = 1.0;
  std::vector<std::function<double(double)>> family = {
      [K](double x) { return -K * x; },
      [K](double x) { return K * x; },
      [K, sat](double x) { return -K * (x > 0 ? 1 : -1) * std::min(std::abs(x), sat); },
      [K, sat](double x) { return K * (x > 0 ? 1 : -1) * std::min(std::abs(x), sat); },
  };

  const int n_steps = 128;
  const double dt = 1.0 / n_steps;
  const std::vector<double> obs_times = {0.05, 0.1, 0.2, 0.4, 0.7, 1.0};
  const double bin_w = 0.05;
  const int n_bins = 400;  // covers |x| <= 10

  std::vector<std::vector<double>> hist;  // per observation time, all families
  hist.assign(obs_times.size(), std::vector<double>(n_bins, 0.0));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(dt));
  int per_family = std::max(1000, samples / static_cast<int>(family.size()));
  for (const auto& F : family) {
    std::vector<std::vector<double>> h(obs_times.size(),
                                       std::vector<double>(n_bins, 0.0));
    for (int i = 0; i < per_family; ++i) {
      double u = 0.0;
      std::size_t next_obs = 0;
      for (int k = 1; k <= n_steps; ++k) {
        u += F(u) * dt + gauss(rng);
        double t = k * dt;
        while (next_obs < obs_times.size() && t >= obs_times[next_obs] - 1e-12) {
          int b = static_cast<int>(std::floor((u + 10.0) / bin_w));
          if (b >= 0 && b < n_bins) h[next_obs][b] += 1.0;
          ++next_obs;
        }
      }
    }
    for (std::size_t j = 0; j < obs_times.size(); ++j)
      for (int b = 0; b < n_bins; ++b)
        hist[j][b] = std::max(hist[j][b], h[j][b] / (per_family * bin_w));
  }

  auto covers = [&](double cp) {
    for (std::size_t j = 0; j < obs_times.size(); ++j) {
      double t = obs_times[j];
      for (int b = 0; b < n_bins; ++b) {
        if (hist[j][b] <= 0.0) continue;
        double x = -10.0 + (b + 0.5) * bin_w;
        double env = cp / std::sqrt(t) * std::exp(-x * x / (cp * t));
        if (hist[j][b] > env) return false;
      }
    }
    return true;
  };

  double lo = 2.0;
  double hi = 2.0;
  while (!covers(hi)) {
    hi *= 2.0;
    if (hi > 1000.0)
      throw std::runtime_error("estimate_cprime: no c' <= 1000 covers");
  }
  if (hi > lo) {
    while (hi - lo > 1e-3) {
      double mid = 0.5 * (lo + hi);
      (covers(mid) ? hi : lo) = mid;
    }
  }
  return std::max(2.0, hi * 1.2);
}

BoundsReport compute_bounds(const ModelConfig& cfg, const BoundsOptions& opts) {
  BoundsReport r;
  const double eps = cfg.eps;
  const double Lambda = cfg.drift.Lambda;
  const double ex0plus = cfg.init.mean_positive_part();

  r.c_prime = opts.c_prime_override
                  ? *opts.c_prime_override
                  : estimate_cprime(cfg.drift, opts.mc_samples, opts.seed);
  r.T0 = compute_T0(eps, Lambda);
  r.alpha0 = compute_alpha0(eps, Lambda, cfg.drift.K, r.c_prime, ex0plus);
  r.B = B_bound(cfg.T, cfg.alpha, Lambda, ex0plus);

  double B_T0 = B_bound(r.T0, cfg.alpha, Lambda, ex0plus);
  r.density_ceiling = std::max(density_ceiling_small_t(eps, r.c_prime, B_T0),
                               density_ceiling_large_t(r.T0, r.c_prime, B_T0));
  if (r.density_ceiling * cfg.alpha < 1.0) {
    r.B0 = holder_B0(r.density_ceiling, cfg.alpha, Lambda, eps);
  } else {
    r.B0 = std::numeric_limits<double>::infinity();
  }
  r.holderB = r.B0;

  double c2 = cdprime_exact(cfg.alpha, std::isfinite(r.B0) ? r.B0 : 0.0);
  // c'' must stay inside (0,1); with a huge alpha*B0 the exact value
  // underflows, so floor it for the eta construction.
  c2 = std::clamp(c2, 1e-12, 1.0 - 1e-12);
  r.c_dprime = c2;
  double Bosc = std::isfinite(r.B0) ? r.B0 : 0.0;
  r.eta_T = opts.eta_override ? *opts.eta_override
                              : eta_from_cdprime(c2, cfg.alpha, Bosc);
  r.mu_T = opts.mu_override
               ? *opts.mu_override
               : mu_from_ceiling(r.density_ceiling, c2, eps, r.eta_T);

  r.n = static_cast<int>(std::ceil(4.0 / eps));
  auto bp = barrier_params(cfg.drift.m, cfg.alpha, opts.C_T, r.mu_T, r.eta_T, r.n);
  r.gamma = bp.gamma;
  r.Theta = bp.Theta;
  r.grad_bound = gradient_bound(r.n, r.mu_T, r.eta_T, cfg.drift.m, cfg.alpha,
                                opts.C_T, cfg.drift.K, cfg.T);

  int n_pts = 101;
  r.g_times.resize(n_pts);
  r.g_values.resize(n_pts);
  for (int i = 0; i < n_pts; ++i) {
    double t = cfg.T * i / (n_pts - 1);
    r.g_times[i] = t;
    r.g_values[i] = g_bound(1.0, cfg.alpha, Lambda, cfg.T, t);
  }
  return r;
}

}  // namespace mfif
