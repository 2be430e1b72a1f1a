#pragma once

#include <string>
#include <utility>

#include "mfif/fp.hpp"
#include "mfif/model.hpp"

// Executable checks of the a-priori estimates against computed solutions.

namespace mfif {

struct CheckReport {
  std::string name;
  bool passed = false;
  double worst_margin = 0.0;  // >= 0 iff passed
  double location_t = 0.0;
  double location_y = 0.0;
  std::string details;
};

// e(t0 + h) - e(t0) <= B sqrt(h) over all grid pairs with B sqrt(h) <= eps/2.
CheckReport check_holder(const FiringCurve& e, double B, double eps);

// Fits C = max p(t,y)/(1-y) over y in (1 - window, 1); passes iff C is finite
// and p(t,1) vanishes. `window` defaults to eps/8 at the call site.
CheckReport check_density_decay(const DensityField& field, double window);

// Barrier domination p(t,y) <= Theta exp(Kt)[1 - exp(gamma (y-1))] + num_tol
// on y in [1 - 1/n, 1], provided the hypothesis holds at y = 1 - 1/n.
CheckReport check_barrier(const DensityField& field, double gamma, double Theta,
                          double K, int n, double num_tol);

// mu = max over snapshots with t >= t_min of p(t,y) (1-y)^{-eta} on the
// upper 1/n window; feeds barrier_params with the observed oscillation decay
// so Theta is pinned to the solved field rather than the crude ceiling.
double fit_barrier_mu(const DensityField& field, double eta, int n,
                      double t_min = 0.01);

// (sup|e1 - e2|, sup|e1' - e2'|) on a common grid.
std::pair<double, double> compare_curves(const FiringCurve& e1,
                                         const FiringCurve& e2);

}  // namespace mfif
