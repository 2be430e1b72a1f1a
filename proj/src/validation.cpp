#include "mfif/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mfif {

CheckReport check_holder(const FiringCurve& e, double B, double eps) {
  CheckReport r;
  r.name = "holder";
  double worst = std::numeric_limits<double>::infinity();
  std::size_t n = e.n();
  long long pairs = 0;
  for (std::size_t k0 = 0; k0 <= n; ++k0) {
    for (std::size_t k1 = k0 + 1; k1 <= n; ++k1) {
      double h = e.dt * static_cast<double>(k1 - k0);
      double bound = B * std::sqrt(h);
      if (bound > eps / 2.0) break;  // larger h only grows the bound
      ++pairs;
      double margin = bound - (e.e[k1] - e.e[k0]);
      if (margin < worst) {
        worst = margin;
        r.location_t = e.t(k0);
      }
    }
  }
  std::ostringstream d;
  if (pairs == 0) {
    // No grid increment fits under the eps/2 window: nothing to falsify.
    r.passed = true;
    r.worst_margin = std::numeric_limits<double>::infinity();
    d << "vacuous: B sqrt(dt) > eps/2 for every grid pair";
  } else {
    r.passed = worst >= 0.0;
    r.worst_margin = worst;
    d << pairs << " pairs, B=" << B;
  }
  r.details = d.str();
  return r;
}

CheckReport check_density_decay(const DensityField& field, double window) {
  CheckReport r;
  r.name = "density_decay";
  const auto& g = field.grid;
  double C = 0.0;
  double top = 0.0;
  for (std::size_t s = 0; s < field.p.size(); ++s) {
    const auto& p = field.p[s];
    top = std::max(top, std::abs(p[g.M]));
    for (int j = g.M - 1; j >= 1; --j) {
      double y = g.y(j);
      if (y <= 1.0 - window) break;
      double c = p[j] / (1.0 - y);
      if (c > C) {
        C = c;
        r.location_t = field.snapshot_times[s];
        r.location_y = y;
      }
    }
  }
  r.passed = std::isfinite(C) && top < 1e-12;
  r.worst_margin = r.passed ? C : -1.0;
  std::ostringstream d;
  d << "C=" << C << " on (1-" << window << ",1), p(t,1)max=" << top;
  r.details = d.str();
  return r;
}

CheckReport check_barrier(const DensityField& field, double gamma, double Theta,
                          double K, int n, double num_tol) {
  CheckReport r;
  r.name = "barrier";
  const auto& g = field.grid;
  const double y_edge = 1.0 - 1.0 / static_cast<double>(n);

  auto q = [&](double t, double y) {
    return Theta * std::exp(K * t) * (1.0 - std::exp(gamma * (y - 1.0)));
  };

  // Hypothesis: p(t, 1 - 1/n) <= q(t, 1 - 1/n) over the whole time range.
  double hyp_worst = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < field.p.size(); ++s) {
    double t = field.snapshot_times[s];
    // value at y_edge by linear interpolation
    double u = (y_edge - g.y_min) / g.dy;
    int j = static_cast<int>(u);
    double w = u - j;
    double pv = field.p[s][j] + w * (field.p[s][j + 1] - field.p[s][j]);
    hyp_worst = std::min(hyp_worst, q(t, y_edge) + num_tol - pv);
  }
  if (hyp_worst < 0.0) {
    r.passed = false;
    r.worst_margin = hyp_worst;
    r.details = "hypothesis-not-met: p(t,1-1/n) > q(t,1-1/n)";
    return r;
  }

  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < field.p.size(); ++s) {
    double t = field.snapshot_times[s];
    for (int j = g.M; j >= 1; --j) {
      double y = g.y(j);
      if (y < y_edge) break;
      double margin = q(t, y) + num_tol - field.p[s][j];
      if (margin < worst) {
        worst = margin;
        r.location_t = t;
        r.location_y = y;
      }
    }
  }
  r.passed = worst >= 0.0;
  r.worst_margin = worst;
  std::ostringstream d;
  d << "gamma=" << gamma << " Theta=" << Theta << " tol=" << num_tol;
  r.details = d.str();
  return r;
}

double fit_barrier_mu(const DensityField& field, double eta, int n,
                      double t_min) {
  const auto& g = field.grid;
  const double y_edge = 1.0 - 1.0 / static_cast<double>(n);
  double mu = 0.0;
  for (std::size_t s = 0; s < field.p.size(); ++s) {
    if (field.snapshot_times[s] < t_min) continue;
    for (int j = g.M - 1; j >= 1; --j) {
      double y = g.y(j);
      if (y < y_edge) break;
      mu = std::max(mu, field.p[s][j] * std::pow(1.0 - y, -eta));
    }
  }
  return mu;
}

std::pair<double, double> compare_curves(const FiringCurve& e1,
                                         const FiringCurve& e2) {
  if (e1.e.size() != e2.e.size() || std::abs(e1.dt - e2.dt) > 1e-12)
    throw std::invalid_argument("compare_curves: grid mismatch");
  double de = 0.0;
  double dd = 0.0;
  for (std::size_t k = 0; k < e1.e.size(); ++k) {
    de = std::max(de, std::abs(e1.e[k] - e2.e[k]));
    dd = std::max(dd, std::abs(e1.de[k] - e2.de[k]));
  }
  return {de, dd};
}

}  // namespace mfif
