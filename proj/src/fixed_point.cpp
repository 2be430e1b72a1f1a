#include "mfif/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mfif {

double curve_distance(const FiringCurve& e1, const FiringCurve& e2) {
  if (e1.e.size() != e2.e.size() || std::abs(e1.dt - e2.dt) > 1e-12)
    throw std::invalid_argument("curve_distance: grid mismatch");
  double de = 0.0;
  double dd = 0.0;
  for (std::size_t k = 0; k < e1.e.size(); ++k) {
    de = std::max(de, std::abs(e1.e[k] - e2.e[k]));
    dd = std::max(dd, std::abs(e1.de[k] - e2.de[k]));
  }
  return de + dd;
}

double lipschitz_estimate(const FiringCurve& e) { return e.sup_de(); }

namespace {

SpaceTimeGrid window_grid(const ModelConfig& cfg, const InitialLaw& init,
                          const PicardOptions& opts, double T) {
  double ymin = opts.y_min ? *opts.y_min
                           : SpaceTimeGrid::default_ymin(init.support_max(), T);
  if (init.kind == InitialKind::GriddedDensity)
    ymin = std::min(ymin, init.grid_lo);
  return SpaceTimeGrid::make(ymin, opts.dy, opts.dt, T);
}

}  // namespace

PicardResult picard_solve(const ModelConfig& cfg, const InitialLaw& init,
                          const PicardOptions& opts) {
  double T1 = std::min({opts.T1_hint, cfg.T, 1.0});
  std::string last_failure;

  while (T1 >= 10.0 * opts.dt) {
    SpaceTimeGrid grid = window_grid(cfg, init, opts, T1);
    PicardDiagnostics diag;
    diag.T1 = T1;

    FiringCurve e = FiringCurve::zero(T1, grid.dt);
    FiringCurve gamma0 = gamma_map(cfg, e, init, grid, opts.fp);
    diag.A1 = 2.0 * gamma0.sup_de() + 1.0;
    diag.iterates.push_back(gamma0);
    diag.deltas.push_back(curve_distance(gamma0, e));

    FiringCurve cur = gamma0;
    bool contracted_ok = true;
    for (int it = 1; it < opts.max_iter; ++it) {
      FiringCurve next = gamma_map(cfg, cur, init, grid, opts.fp);
      double delta = curve_distance(next, cur);
      diag.iterates.push_back(next);
      diag.deltas.push_back(delta);
      std::size_t m = diag.deltas.size();
      if (diag.deltas[m - 2] > 0.0)
        diag.contraction_factors.push_back(delta / diag.deltas[m - 2]);

      if (delta < opts.tol) {
        // Enough factors observed in the contraction regime?
        const auto& f = diag.contraction_factors;
        int good = 0;
        for (auto v : f) good = (v <= 0.5) ? good + 1 : 0;
        if (good >= 3 || f.size() < 3 ||
            std::all_of(f.begin(), f.end(), [](double v) { return v <= 0.5; })) {
          PicardResult out;
          out.curve = next;
          out.diagnostics = std::move(diag);
          return out;
        }
      }
      // Abandon the window if the last three observed factors are not all
      // within the contraction target.
      const auto& f = diag.contraction_factors;
      if (f.size() >= 3) {
        bool ok = f[f.size() - 1] <= 0.5 && f[f.size() - 2] <= 0.5 &&
                  f[f.size() - 3] <= 0.5;
        if (!ok && it >= 6) {
          contracted_ok = false;
          break;
        }
      }
      cur = std::move(next);
    }
    if (contracted_ok) {
      std::ostringstream msg;
      msg << "picard_solve: max_iter exhausted at T1=" << T1
          << " (last delta=" << diag.deltas.back() << ")";
      last_failure = msg.str();
    }
    T1 *= 0.5;
  }
  if (last_failure.empty())
    last_failure = "picard_solve: window fell below 10*dt without contraction "
                   "(near blow-up or unstable grid)";
  throw std::runtime_error(last_failure);
}

ChainResult chain_solve(const ModelConfig& cfg, const InitialLaw& init,
                        double T, const PicardOptions& opts) {
  ChainResult out;
  out.curve.dt = opts.dt;
  out.curve.e = {0.0};
  out.curve.de = {0.0};

  InitialLaw law = init;
  double t_done = 0.0;
  double prev_end_rate = 0.0;
  bool first = true;

  while (t_done < T - 1e-12) {
    PicardOptions wopts = opts;
    wopts.T1_hint = std::min(opts.T1_hint, T - t_done);
    ModelConfig wcfg = cfg;
    wcfg.T = T - t_done;
    PicardResult pr = picard_solve(wcfg, law, wopts);
    const FiringCurve& e = pr.curve;
    double T1 = pr.diagnostics.T1;

    // de[0] of a window is the artificial zero endpoint; the first real
    // rate sits at the end of the window's first step.
    if (!first && e.de.size() > 1)
      out.max_junction_jump =
          std::max(out.max_junction_jump, std::abs(e.de[1] - prev_end_rate));

    double base = out.curve.e.back();
    for (std::size_t k = 1; k < e.e.size(); ++k) {
      out.curve.e.push_back(base + e.e[k]);
      out.curve.de.push_back(e.de[k]);
    }
    if (first) out.curve.de[0] = e.de[0];
    prev_end_rate = e.de.back();

    // Terminal full law of this window for the restart.
    SpaceTimeGrid grid = window_grid(wcfg, law, wopts, T1);
    DensityField field;
    FpOptions fo = wopts.fp;
    fo.store_every = grid.n_steps;  // only endpoints needed
    (void)gamma_map(wcfg, e, law, grid, fo, &field);

    // Linear-decay restart hypothesis: fit C with p(y) <= C (1-y) on the
    // upper eps/8 layer; the Dirichlet node enforces p(1) = 0.
    const auto& pT = field.final_density();
    double C = 0.0;
    for (int j = grid.M - 1; j >= 1; --j) {
      double y = grid.y(j);
      if (y <= 1.0 - cfg.eps / 8.0) break;
      C = std::max(C, pT[j] / (1.0 - y));
    }
    if (!std::isfinite(C))
      throw std::runtime_error("chain_solve: restart density lost linear decay");
    out.restart_decay_C.push_back(C);

    law = field.final_law();
    t_done += T1;
    out.window_ends.push_back(t_done);
    first = false;
  }
  return out;
}

}  // namespace mfif
