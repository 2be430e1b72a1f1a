#pragma once

#include <optional>
#include <vector>

#include "mfif/fp.hpp"
#include "mfif/model.hpp"

// Constructs the solution the way the contraction argument does: Picard
// iteration of Gamma on a short interval, then chaining of intervals with
// restarts from the terminal law.

namespace mfif {

struct PicardDiagnostics {
  std::vector<FiringCurve> iterates;
  std::vector<double> deltas;              // ||e_{k+1} - e_k|| = sup|e| + sup|e'|
  std::vector<double> contraction_factors; // deltas[k+1] / deltas[k]
  double A1 = 0.0;  // 2 sup |Gamma(0)'| + 1
  double T1 = 0.0;  // selected contraction window
};

struct PicardOptions {
  double T1_hint = 1.0;
  double tol = 1e-6;
  int max_iter = 60;
  double dy = 2.5e-3;
  double dt = 1e-3;
  std::optional<double> y_min;
  FpOptions fp;
};

// sup|e1 - e2| + sup|e1' - e2'| on a common grid.
double curve_distance(const FiringCurve& e1, const FiringCurve& e2);

struct PicardResult {
  FiringCurve curve;
  PicardDiagnostics diagnostics;
};

// e_0 = 0, e_{k+1} = Gamma(e_k) on [0, T1]. T1 is halved from T1_hint until
// the observed contraction factor over three consecutive iterates is <= 1/2;
// stops when the H-norm delta drops below tol. Throws (with diagnostics in
// the message) if max_iter is exhausted without contraction.
PicardResult picard_solve(const ModelConfig& cfg, const InitialLaw& init,
                          const PicardOptions& opts = {});

struct ChainResult {
  FiringCurve curve;  // concatenated on [0, T]
  std::optional<double> blowup_time;
  std::vector<double> window_ends;
  std::vector<double> restart_decay_C;  // fitted C with p(y) <= C (1-y) near 1
  double max_junction_jump = 0.0;       // |e'(T_i^-) - e'(T_i^+)|
};

// Runs picard_solve on successive windows, restarting from the previous
// window's terminal (full-law) density. Each restart density must decay
// linearly at the threshold; the fitted constant is recorded.
ChainResult chain_solve(const ModelConfig& cfg, const InitialLaw& init,
                        double T, const PicardOptions& opts = {});

// Empirical Lipschitz constant M_T = max_k e'_k.
double lipschitz_estimate(const FiringCurve& e);

}  // namespace mfif
