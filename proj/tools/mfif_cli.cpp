// Command-line laboratory for the excitatory mean-field integrate-and-fire
// equation: a-priori constants, mean-field solves (Picard or direct), the
// finite-N particle network, validation suites and the blow-up phase sweep.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mfif/bounds.hpp"
#include "mfif/fixed_point.hpp"
#include "mfif/fp.hpp"
#include "mfif/io.hpp"
#include "mfif/model.hpp"
#include "mfif/particle.hpp"
#include "mfif/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitBlowup = 4;
constexpr const char* kVersion = "mfif 1.0.0";

std::string out_dir() {
  const char* env = std::getenv("MFIF_OUTDIR");
  return env ? std::string(env) : std::string(".");
}

struct CommonArgs {
  double alpha = 0.05;
  double sigma = 1.0;
  double x0 = 0.8;
  double T = 1.0;
  double epsilon = 0.0;
  std::string drift = "zero";
  double lambda = 1.0;
  std::string config_path;

  mfif::ModelConfig build() const {
    mfif::DriftSpec d = drift == "linear" ? mfif::DriftSpec::linear(lambda)
                                          : mfif::DriftSpec::zero();
    std::optional<double> eps =
        epsilon > 0 ? std::optional<double>(epsilon) : std::nullopt;
    return mfif::ModelConfig::make(d, alpha, sigma, mfif::InitialLaw::dirac(x0),
                                   T, eps);
  }

  mfif::KeyValues as_keyvalues() const {
    mfif::KeyValues kv;
    kv["drift.kind"] = drift;
    if (drift == "linear") kv["drift.lambda"] = std::to_string(lambda);
    kv["alpha"] = std::to_string(alpha);
    kv["sigma"] = std::to_string(sigma);
    kv["x0"] = std::to_string(x0);
    kv["T"] = std::to_string(T);
    if (epsilon > 0) kv["epsilon"] = std::to_string(epsilon);
    return kv;
  }
};

void add_common(CLI::App* app, CommonArgs& a) {
  app->add_option("--alpha", a.alpha, "coupling strength in (0,1)");
  app->add_option("--sigma", a.sigma, "noise level (folded by time change)");
  app->add_option("--x0", a.x0, "Dirac initial point, < 1");
  app->add_option("--T", a.T, "horizon");
  app->add_option("--epsilon", a.epsilon, "threshold gap (default 1 - x0)");
  app->add_option("--drift", a.drift, "zero|linear")
      ->check(CLI::IsMember({"zero", "linear"}));
  app->add_option("--lambda", a.lambda, "linear drift slope");
  app->add_option("--config", a.config_path, "key=value config file");
}

void finish_manifest(const std::string& stem, const mfif::KeyValues& cfg,
                     const std::vector<std::string>& outputs,
                     std::chrono::steady_clock::time_point t0) {
  mfif::Manifest m;
  m.config = cfg;
  m.version = kVersion;
  m.outputs = outputs;
  m.wall_seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  m.peak_rss_kb = mfif::current_peak_rss_kb();
  mfif::write_manifest(stem + ".manifest", m);
}

int cmd_bounds(const CommonArgs& a, double CT, int samples,
               std::uint64_t seed) {
  auto t0 = std::chrono::steady_clock::now();
  mfif::ModelConfig cfg = a.build();
  mfif::BoundsOptions opts;
  opts.C_T = CT;
  opts.mc_samples = samples;
  opts.seed = seed;
  mfif::BoundsReport r = mfif::compute_bounds(cfg, opts);

  std::string dir = out_dir();
  std::string txt = dir + "/bounds.txt";
  std::string csv = dir + "/bounds.csv";
  {
    std::ofstream out(txt);
    out << std::setprecision(10);
    out << "T0 = " << r.T0 << "\nalpha0 = " << r.alpha0
        << "\nalpha0_paper_reference = " << r.alpha0_paper_reference
        << "\nB = " << r.B << "\nB0 = " << r.B0 << "\nc_prime = " << r.c_prime
        << "\nc_dprime = " << r.c_dprime << "\nmu_T = " << r.mu_T
        << "\neta_T = " << r.eta_T << "\ngamma = " << r.gamma
        << "\nTheta = " << r.Theta << "\ngrad_bound = " << r.grad_bound
        << "\ndensity_ceiling = " << r.density_ceiling << "\nn = " << r.n
        << "\n";
    out << "# alpha0 above evaluates the three stated inequalities; the\n"
           "# tracked reference value 0.104 is not reproducible from them\n";
  }
  {
    auto kv = a.as_keyvalues();
    std::ostringstream inputs;
    for (const auto& [k, v] : kv) inputs << k << '=' << v << ';';
    std::string ih = mfif::fnv1a_hex(inputs.str());
    std::ofstream out(csv);
    out << "name,value,inputs_hash\n" << std::setprecision(12);
    auto row = [&](const char* n, double v) {
      out << n << ',' << v << ',' << ih << '\n';
    };
    row("T0", r.T0);
    row("alpha0", r.alpha0);
    row("alpha0_paper_reference", r.alpha0_paper_reference);
    row("B", r.B);
    row("B0", r.B0);
    row("c_prime", r.c_prime);
    row("c_dprime", r.c_dprime);
    row("mu_T", r.mu_T);
    row("eta_T", r.eta_T);
    row("gamma", r.gamma);
    row("Theta", r.Theta);
    row("grad_bound", r.grad_bound);
    row("density_ceiling", r.density_ceiling);
    row("n", r.n);
  }
  std::cout << "alpha0 = " << std::setprecision(6) << r.alpha0
            << " (stated inequalities; paper-tracked reference 0.104)\n";
  finish_manifest(dir + "/bounds", a.as_keyvalues(), {txt, csv}, t0);
  return kExitOk;
}

void write_curve_csv(const std::string& path, const mfif::FiringCurve& e,
                     const std::vector<double>* flux) {
  std::vector<std::vector<double>> rows;
  rows.reserve(e.e.size());
  for (std::size_t k = 0; k < e.e.size(); ++k)
    rows.push_back({e.t(k), e.e[k], e.de[k], flux ? (*flux)[k] : e.de[k]});
  mfif::write_csv(path, "t,e,eprime,flux", rows);
}

int cmd_solve(const CommonArgs& a, const std::string& method, double dt,
              double dy, double ymin, double theta, const std::string& scheme,
              double blowup_cap, bool fail_on_blowup,
              const std::vector<double>& snapshot_times) {
  auto t0 = std::chrono::steady_clock::now();
  mfif::ModelConfig cfg = a.build();
  std::string dir = out_dir();
  std::vector<std::string> outputs;

  mfif::FpOptions fp;
  fp.theta = theta;
  fp.scheme = scheme == "cascade" ? mfif::CouplingScheme::Cascade
                                  : mfif::CouplingScheme::Midpoint;
  if (blowup_cap > 0) fp.blowup_cap = blowup_cap;

  std::optional<double> blowup;
  if (method == "picard") {
    mfif::PicardOptions po;
    po.dt = dt;
    po.dy = dy;
    if (ymin < 0) po.y_min = ymin;
    po.fp = fp;
    auto res = mfif::chain_solve(cfg, cfg.init, cfg.T, po);
    blowup = res.blowup_time;
    std::string curve_path = dir + "/curve.csv";
    write_curve_csv(curve_path, res.curve, nullptr);
    outputs.push_back(curve_path);
    // Per-window Picard diagnostics for the first window.
    mfif::PicardOptions po1 = po;
    auto pr = mfif::picard_solve(cfg, cfg.init, po1);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < pr.diagnostics.deltas.size(); ++i)
      rows.push_back({static_cast<double>(i), pr.diagnostics.deltas[i],
                      i < pr.diagnostics.contraction_factors.size() + 1 && i > 0
                          ? pr.diagnostics.contraction_factors[i - 1]
                          : 0.0});
    std::string diag_path = dir + "/picard_diagnostics.csv";
    mfif::write_csv(diag_path, "iter,delta,factor", rows);
    outputs.push_back(diag_path);
  } else {
    double ym = ymin < 0 ? ymin
                         : mfif::SpaceTimeGrid::default_ymin(
                               cfg.init.support_max(), cfg.T);
    auto grid = mfif::SpaceTimeGrid::make(ym, dy, dt, cfg.T);
    fp.store_every = std::max(1, grid.n_steps / 400);
    auto res = mfif::solve_nonlinear_fp(cfg, cfg.init, grid, fp);
    blowup = res.blowup_time;
    std::string curve_path = dir + "/curve.csv";
    write_curve_csv(curve_path, res.curve, &res.field.flux);
    outputs.push_back(curve_path);
    if (!snapshot_times.empty()) {
      std::vector<std::vector<double>> rows;
      for (double ts : snapshot_times) {
        std::size_t best = 0;
        for (std::size_t s = 0; s < res.field.snapshot_times.size(); ++s)
          if (std::abs(res.field.snapshot_times[s] - ts) <
              std::abs(res.field.snapshot_times[best] - ts))
            best = s;
        for (int j = 0; j <= grid.M; ++j)
          rows.push_back(
              {res.field.snapshot_times[best], grid.y(j), res.field.p[best][j]});
      }
      std::string snap_path = dir + "/density.csv";
      mfif::write_csv(snap_path, "t,y,p", rows);
      outputs.push_back(snap_path);
    }
  }

  if (blowup)
    std::cout << "blow-up detected at t = " << *blowup << '\n';
  else
    std::cout << "no blow-up on [0, " << cfg.T << "]\n";
  finish_manifest(dir + "/solve", a.as_keyvalues(), outputs, t0);
  if (blowup && fail_on_blowup) return kExitBlowup;
  return kExitOk;
}

int cmd_particles(const CommonArgs& a, int N, double dt, std::uint64_t seed,
                  double delta_blow, bool fail_on_blowup, bool sequential,
                  const std::vector<double>& snapshot_times) {
  auto t0 = std::chrono::steady_clock::now();
  mfif::ModelConfig cfg = a.build();
  mfif::SimOptions so;
  so.delta_blow = delta_blow;
  so.cascade.sequential = sequential;
  auto res = mfif::simulate(cfg, N, dt, cfg.T, seed, so);

  std::string dir = out_dir();
  std::vector<std::vector<double>> rows;
  const auto& tr = res.trace;
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    rows.push_back({tr.times[k], tr.eN[k],
                    static_cast<double>(tr.cascade_sizes[k]),
                    static_cast<double>(tr.cascade_rounds[k])});
  std::string path = dir + "/particles.csv";
  mfif::write_csv(path, "t,eN,cascade_size,cascade_rounds", rows);
  (void)snapshot_times;

  if (tr.blowup)
    std::cout << "blow-up: cascade of fraction " << tr.blowup->second
              << " at t = " << tr.blowup->first << '\n';
  else
    std::cout << "no blow-up; eN(T) = " << tr.eN.back() << '\n';

  auto kv = a.as_keyvalues();
  kv["N"] = std::to_string(N);
  kv["dt"] = std::to_string(dt);
  kv["seed"] = std::to_string(seed);
  finish_manifest(dir + "/particles", kv, {path}, t0);
  if (tr.blowup && fail_on_blowup) return kExitBlowup;
  return kExitOk;
}

int cmd_validate(const CommonArgs& a, const std::string& suite, double dt,
                 double dy) {
  auto t0 = std::chrono::steady_clock::now();
  mfif::ModelConfig cfg = a.build();
  std::vector<mfif::CheckReport> reports;

  mfif::BoundsOptions bo;
  bo.mc_samples = 100000;
  bo.seed = 7;
  mfif::BoundsReport bounds = mfif::compute_bounds(cfg, bo);

  double ym = mfif::SpaceTimeGrid::default_ymin(cfg.init.support_max(), cfg.T);
  auto grid = mfif::SpaceTimeGrid::make(ym, dy, dt, cfg.T);
  mfif::FpOptions fp;
  fp.store_every = std::max(1, grid.n_steps / 400);

  if (suite == "all" || suite == "holder" || suite == "decay" ||
      suite == "cross") {
    auto nl = mfif::solve_nonlinear_fp(cfg, cfg.init, grid, fp);
    if (suite == "all" || suite == "holder") {
      double B = std::isfinite(bounds.B0) ? bounds.B0 : 1e9;
      reports.push_back(mfif::check_holder(nl.curve, B, cfg.eps));
    }
    if (suite == "all" || suite == "decay")
      reports.push_back(mfif::check_density_decay(nl.field, cfg.eps / 8.0));
    if (suite == "all" || suite == "cross") {
      mfif::PicardOptions po;
      po.dt = dt;
      po.dy = dy;
      auto chain = mfif::chain_solve(cfg, cfg.init, cfg.T, po);
      mfif::CheckReport r;
      r.name = "cross_method";
      if (chain.curve.e.size() == nl.curve.e.size()) {
        auto [de, dd] = mfif::compare_curves(chain.curve, nl.curve);
        r.worst_margin = 1e-2 - std::max(de, dd);
        r.passed = r.worst_margin >= 0;
        std::ostringstream d;
        d << "sup|e|=" << de << " sup|e'|=" << dd;
        r.details = d.str();
      } else {
        r.passed = false;
        r.details = "grid mismatch between methods";
      }
      reports.push_back(r);
    }
  }
  if (suite == "all" || suite == "barrier") {
    auto killed = mfif::solve_killed_fp(cfg, mfif::FiringCurve::zero(cfg.T, dt),
                                        cfg.init, grid, fp);
    double mu = mfif::fit_barrier_mu(killed, bounds.eta_T, bounds.n);
    auto bp = mfif::barrier_params(cfg.drift.m, cfg.alpha, bo.C_T, mu,
                                   bounds.eta_T, bounds.n);
    double num_tol =
        10.0 * (dy * dy + dt) * bp.gamma * std::max(bp.Theta, 1.0);
    reports.push_back(mfif::check_barrier(killed, bp.gamma, bp.Theta,
                                          cfg.drift.K, bounds.n, num_tol));
  }

  std::cout << std::setprecision(6);
  bool all_ok = true;
  std::ofstream out(out_dir() + "/validate.csv");
  out << "name,passed,worst_margin,t,y,details\n" << std::setprecision(10);
  for (const auto& r : reports) {
    out << r.name << ',' << (r.passed ? 1 : 0) << ',' << r.worst_margin << ','
        << r.location_t << ',' << r.location_y << ",\"" << r.details << "\"\n";
    std::cout << r.name << ": " << (r.passed ? "pass" : "FAIL") << " ("
              << r.details << ")\n";
    all_ok = all_ok && r.passed;
  }
  finish_manifest(out_dir() + "/validate", a.as_keyvalues(),
                  {out_dir() + "/validate.csv"}, t0);
  return all_ok ? kExitOk : kExitSolver;
}

int cmd_figure1(int N, double dt, double T, double x0, std::uint64_t seed) {
  auto t0 = std::chrono::steady_clock::now();
  std::string dir = out_dir();
  std::vector<std::string> outputs;
  for (double alpha : {0.38, 0.39}) {
    auto cfg = mfif::ModelConfig::make(mfif::DriftSpec::zero(), alpha, 1.0,
                                       mfif::InitialLaw::dirac(x0), T);
    mfif::SimOptions so;
    auto res = mfif::simulate(cfg, N, dt, T, seed, so);
    std::ostringstream name;
    name << dir << "/figure1_alpha" << std::setprecision(2) << std::fixed
         << alpha << ".csv";
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < res.trace.times.size(); ++k)
      rows.push_back({res.trace.times[k], res.trace.eN[k],
                      static_cast<double>(res.trace.cascade_sizes[k]),
                      static_cast<double>(res.trace.cascade_rounds[k])});
    mfif::write_csv(name.str(), "t,eN,cascade_size,cascade_rounds", rows);
    outputs.push_back(name.str());
    std::cout << "alpha=" << alpha << ": "
              << (res.trace.blowup ? "blow-up" : "regular") << '\n';
  }
  // Companion plotting stub referencing the CSVs.
  {
    std::ofstream plot(dir + "/figure1_plot.py");
    plot << "# Plots the two firing curves written by the figure1 subcommand.\n"
            "import csv\n"
            "import matplotlib.pyplot as plt\n"
            "for name, color in [('figure1_alpha0.38.csv', 'red'),\n"
            "                    ('figure1_alpha0.39.csv', 'green')]:\n"
            "    with open(name) as f:\n"
            "        rows = list(csv.DictReader(f))\n"
            "    plt.plot([float(r['t']) for r in rows],\n"
            "             [float(r['eN']) for r in rows], color=color, label=name)\n"
            "plt.xlabel('t'); plt.ylabel('e_N(t)'); plt.legend(); plt.show()\n";
  }
  mfif::KeyValues kv;
  kv["x0"] = std::to_string(x0);
  kv["N"] = std::to_string(N);
  kv["dt"] = std::to_string(dt);
  kv["T"] = std::to_string(T);
  kv["seed"] = std::to_string(seed);
  finish_manifest(dir + "/figure1", kv, outputs, t0);
  return kExitOk;
}

int cmd_regions(const std::vector<double>& alphas, double x0, int N, double dt,
                double T, double dy, std::uint64_t seed) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::vector<double>> rows;
  for (double alpha : alphas) {
    auto cfg = mfif::ModelConfig::make(mfif::DriftSpec::zero(), alpha, 1.0,
                                       mfif::InitialLaw::dirac(x0), T);
    auto sim = mfif::simulate(cfg, N, dt, T, seed, {});
    double ym = mfif::SpaceTimeGrid::default_ymin(x0, T);
    // The cascade coupling scheme classifies blow-up dt-stably; the step
    // must satisfy dt <= 5e-4 so a steep regular transient stays below the
    // per-step firing threshold.
    auto grid = mfif::SpaceTimeGrid::make(ym, dy, std::min(dt, 2.5e-4), T);
    mfif::FpOptions fp;
    fp.scheme = mfif::CouplingScheme::Cascade;
    fp.store_every = grid.n_steps;  // endpoints only
    auto pde = mfif::solve_nonlinear_fp(cfg, cfg.init, grid, fp);
    bool sim_blow = sim.trace.blowup.has_value();
    bool pde_blow = pde.blowup_time.has_value();
    // classification: 0 = no-blow-up, 1 = blow-up, 2 = undecided
    double cls = (sim_blow == pde_blow) ? (sim_blow ? 1.0 : 0.0) : 2.0;
    double t_blow = sim_blow ? sim.trace.blowup->first
                             : (pde_blow ? *pde.blowup_time : -1.0);
    rows.push_back({alpha, cls, t_blow});
    std::cout << "alpha=" << alpha << " -> "
              << (cls == 0 ? "no-blow-up" : cls == 1 ? "blow-up" : "undecided")
              << '\n';
  }
  std::string path = out_dir() + "/regions.csv";
  mfif::write_csv(path, "alpha,classification,blowup_time", rows);
  mfif::KeyValues kv;
  kv["x0"] = std::to_string(x0);
  kv["N"] = std::to_string(N);
  kv["seed"] = std::to_string(seed);
  finish_manifest(out_dir() + "/regions", kv, {path}, t0);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mean-field integrate-and-fire laboratory"};
  app.require_subcommand(1);

  CommonArgs a;

  auto* sc_bounds = app.add_subcommand("bounds", "evaluate a-priori constants");
  add_common(sc_bounds, a);
  double CT = 0.0;
  int mc_samples = 200000;
  std::uint64_t seed = 1;
  bool seed_given = false;
  sc_bounds->add_option("--CT", CT, "sup e' used by the barrier constants");
  sc_bounds->add_option("--samples", mc_samples, "Monte Carlo sample count");
  sc_bounds->add_option("--seed", seed, "RNG seed");

  auto* sc_solve = app.add_subcommand("solve", "mean-field solve");
  add_common(sc_solve, a);
  std::string method = "direct";
  double dt = 1e-3, dy = 2.5e-3, ymin = 0.0, theta = 1.0, blowup_cap = 0.0;
  bool fail_on_blowup = false;
  std::vector<double> snapshots;
  sc_solve->add_option("--method", method, "picard|direct")
      ->check(CLI::IsMember({"picard", "direct"}));
  sc_solve->add_option("--dt", dt, "time step");
  sc_solve->add_option("--dy", dy, "space step");
  sc_solve->add_option("--ymin", ymin, "domain truncation (negative)");
  sc_solve->add_option("--theta", theta, "diffusion implicitness");
  std::string scheme = "midpoint";
  sc_solve->add_option("--scheme", scheme,
                       "direct-method coupling: midpoint|cascade")
      ->check(CLI::IsMember({"midpoint", "cascade"}));
  sc_solve->add_option("--blowup-cap", blowup_cap, "flux cap override");
  sc_solve->add_option("--snapshot", snapshots, "density snapshot times");
  sc_solve->add_flag("--fail-on-blowup", fail_on_blowup,
                     "exit 4 when blow-up is detected");

  auto* sc_part = app.add_subcommand("particles", "finite-N network");
  add_common(sc_part, a);
  int N = 100000;
  double pdt = 1e-4;
  double delta_blow = 0.05;
  bool sequential = false;
  sc_part->add_option("--N", N, "particle count");
  sc_part->add_option("--dt", pdt, "time step");
  sc_part->add_option("--seed", seed, "RNG seed (required)")
      ->required()
      ->each([&](const std::string&) { seed_given = true; });
  sc_part->add_option("--delta-blow", delta_blow, "blow-up cascade fraction");
  sc_part->add_flag("--sequential-cascade", sequential,
                    "index-order cascade variant");
  sc_part->add_flag("--fail-on-blowup", fail_on_blowup, "exit 4 on blow-up");

  auto* sc_val = app.add_subcommand("validate", "a-priori estimate checks");
  add_common(sc_val, a);
  std::string suite = "all";
  double vdt = 1e-3, vdy = 2.5e-3;
  sc_val->add_option("--suite", suite, "all|holder|decay|barrier|cross")
      ->check(CLI::IsMember({"all", "holder", "decay", "barrier", "cross"}));
  sc_val->add_option("--dt", vdt, "time step");
  sc_val->add_option("--dy", vdy, "space step");

  auto* sc_fig = app.add_subcommand("figure1", "alpha = 0.38 vs 0.39 runs");
  int fN = 100000;
  double fdt = 1e-4, fT = 4.0, fx0 = 0.8;
  std::uint64_t fseed = 0;
  sc_fig->add_option("--N", fN, "particle count");
  sc_fig->add_option("--dt", fdt, "time step");
  sc_fig->add_option("--T", fT, "horizon");
  sc_fig->add_option("--x0", fx0, "initial point");
  sc_fig->add_option("--seed", fseed, "RNG seed (required)")->required();

  auto* sc_reg = app.add_subcommand("regions", "blow-up phase sweep");
  std::vector<double> alphas;
  int rN = 20000;
  double rdt = 2e-4, rT = 2.0, rdy = 2.5e-3, rx0 = 0.8;
  std::uint64_t rseed = 0;
  sc_reg->add_option("--alpha", alphas, "alpha grid")->required();
  sc_reg->add_option("--x0", rx0, "initial point");
  sc_reg->add_option("--N", rN, "particle budget");
  sc_reg->add_option("--dt", rdt, "time step budget");
  sc_reg->add_option("--T", rT, "horizon budget");
  sc_reg->add_option("--dy", rdy, "PDE space step");
  sc_reg->add_option("--seed", rseed, "RNG seed (required)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (!a.config_path.empty()) {
      auto rs = mfif::settings_from_keyvalues(
          mfif::load_config_file(a.config_path));
      a.alpha = rs.cfg.alpha;
      a.sigma = 1.0;  // already folded by the time change
      a.x0 = rs.cfg.init.x0;
      a.T = rs.cfg.T;
      a.epsilon = rs.cfg.eps;
      a.drift = rs.cfg.drift.kind == mfif::DriftKind::Linear ? "linear" : "zero";
      a.lambda = rs.cfg.drift.lambda;
      dt = rs.grid_dt;
      dy = rs.grid_dy;
      if (rs.grid_ymin < 0) ymin = rs.grid_ymin;
      if (rs.seed_set) seed = rs.seed;
    }
  } catch (const std::exception& ex) {
    std::cerr << "config error: " << ex.what() << '\n';
    return kExitConfig;
  }

  try {
    if (sc_bounds->parsed()) return cmd_bounds(a, CT, mc_samples, seed);
    if (sc_solve->parsed())
      return cmd_solve(a, method, dt, dy, ymin, theta, scheme, blowup_cap,
                       fail_on_blowup, snapshots);
    if (sc_part->parsed())
      return cmd_particles(a, N, pdt, seed, delta_blow, fail_on_blowup,
                           sequential, snapshots);
    if (sc_val->parsed()) return cmd_validate(a, suite, vdt, vdy);
    if (sc_fig->parsed()) return cmd_figure1(fN, fdt, fT, fx0, fseed);
    if (sc_reg->parsed())
      return cmd_regions(alphas, rx0, rN, rdt, rT, rdy, rseed);
  } catch (const std::invalid_argument& ex) {
    std::cerr << "config error: " << ex.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& ex) {
    std::cerr << "solver error: " << ex.what() << '\n';
    return kExitSolver;
  }
  return kExitConfig;
}
