// Acceptance driver: one line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "css_peaks/ansatz.hpp"
#include "css_peaks/config.hpp"
#include "css_peaks/energy.hpp"
#include "css_peaks/experiments.hpp"
#include "css_peaks/gauge.hpp"
#include "css_peaks/log.hpp"
#include "css_peaks/newton.hpp"
#include "css_peaks/pohozaev.hpp"
#include "css_peaks/radial_profile.hpp"
#include "css_peaks/uniqueness.hpp"

using namespace css;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

ScalarField peak_field(const Grid2D& g, const RadialProfile& prof, Vec2 y, double eps) {
  std::vector<RadialProfile> profs{prof};
  std::vector<Vec2> ys{y};
  return build_ansatz(g, profs, ys, eps);
}

double partial_mass(const RadialProfile& prof, double r) {
  const int n = 2000;
  const double h = r / n;
  double acc = 0.0;
  for (int q = 0; q <= n; ++q) {
    const double s = q * h;
    const double u = evaluate_radial(prof, s);
    const double w = (q == 0 || q == n) ? 1.0 : (q % 2 ? 4.0 : 2.0);
    acc += w * s * u * u;
  }
  return 2.0 * std::numbers::pi * acc * h / 3.0;
}

ScalarField random_bumps(const Grid2D& g, std::mt19937_64& gen, double width, double spread) {
  std::uniform_real_distribution<double> pos(-spread, spread);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  ScalarField f(g);
  for (int b = 0; b < 4; ++b) {
    const Vec2 c{pos(gen), pos(gen)};
    const double a = amp(gen);
    for (int j = 0; j < g.n; ++j) {
      for (int i = 0; i < g.n; ++i) {
        const Vec2 x = g.point(i, j) - c;
        f(i, j) += a * std::exp(-dot(x, x) / (width * width));
      }
    }
  }
  return f;
}

double max_term(const PohozaevReport& r) {
  double m = std::abs(r.lhs);
  for (double t : r.rhs_terms) m = std::max(m, std::abs(t));
  return m;
}

// Shared state: the two-well sweep feeds criteria 5 to 8.
struct Context {
  fs::path config_dir;
  std::optional<ExperimentConfig> two_well;
  std::optional<ExperimentConfig> single_well;
  std::optional<SweepResult> sweep;

  const ExperimentConfig& two() {
    if (!two_well) two_well = load_config(config_dir / "two_well.json");
    return *two_well;
  }
  const ExperimentConfig& single() {
    if (!single_well) single_well = load_config(config_dir / "single_well.json");
    return *single_well;
  }
  const SweepResult& two_well_sweep() {
    if (!sweep) sweep = run_sweep(two());
    return *sweep;
  }
};

// 1. Ground-state suite.
void ground_states(Context&, Outcome& out) {
  double ode = 0.0, nehari = 0.0, derrick = 0.0, scaling = 0.0;
  for (double v0 : {1.0, 2.0}) {
    for (double p : {3.0, 4.0, 6.0}) {
      const RadialProfile prof = solve_ground_state(v0, p);
      ode = std::max(ode, ode_residual(prof, 4));
      const ProfileIntegrals I = profile_integrals(prof);
      nehari = std::max(nehari, std::abs(I.dirichlet + v0 * I.mass2 - I.massp) / I.massp);
      derrick = std::max(derrick, std::abs(v0 * I.mass2 - 2.0 / p * I.massp) / (v0 * I.mass2));

      // U_{4 v0}(r) = 4^{1/(p-2)} U_{v0}(2 r)
      ShootingOptions opts;
      opts.r_max = 12.5;
      const RadialProfile scaled = solve_ground_state(4.0 * v0, p, opts);
      const double amp = std::pow(4.0, 1.0 / (p - 2.0));
      double worst = 0.0;
      for (double r = 0.0; r < 8.0; r += 0.005) {
        worst = std::max(worst, std::abs(evaluate_radial(scaled, r) - amp * evaluate_radial(prof, 2.0 * r)));
      }
      scaling = std::max(scaling, worst / scaled.u0);
    }
  }
  out.detail << "ode " << sci(ode) << ", nehari " << sci(nehari) << ", derrick " << sci(derrick)
             << ", scaling " << sci(scaling);
  out.require(ode < 1e-6, "ODE residual < 1e-6");
  out.require(nehari < 1e-5, "Nehari < 1e-5");
  out.require(derrick < 1e-5, "Derrick < 1e-5");
  out.require(scaling < 1e-6, "scaling < 1e-6");
}

// 2. Gauge oracle and constraint residuals.
void gauge_oracle(Context&, Outcome& out) {
  const RadialProfile prof = solve_ground_state(1.0, 4.0);
  const Grid2D g{512, 8.0};
  const ScalarField u = peak_field(g, prof, {0.0, 0.0}, 1.0);
  const GaugeFields gf = compute_gauge(u);
  double worst = 0.0;
  for (int j = 0; j < g.n; j += 3) {
    for (int i = 0; i < g.n; i += 3) {
      const Vec2 x = g.point(i, j);
      const double r = norm(x);
      if (r < 1.5 * g.h()) continue;
      const double m = partial_mass(prof, r);
      const double a1 = -x.x2 / (4.0 * std::numbers::pi * r * r) * m;
      const double a2 = x.x1 / (4.0 * std::numbers::pi * r * r) * m;
      worst = std::max(worst, std::hypot(gf.a1(i, j) - a1, gf.a2(i, j) - a2) / std::hypot(a1, a2));
    }
  }
  const GaugeResiduals coarse = gauge_constraint_residuals(gf, u);
  const ScalarField uf = peak_field(Grid2D{1024, 8.0}, prof, {0.0, 0.0}, 1.0);
  const GaugeResiduals fine = gauge_constraint_residuals(compute_gauge(uf), uf);
  const double c[4] = {coarse.curl_res, coarse.div_res, coarse.a0x_res, coarse.a0y_res};
  const double f[4] = {fine.curl_res, fine.div_res, fine.a0x_res, fine.a0y_res};
  const char* names[4] = {"curl", "div", "a0x", "a0y"};
  out.detail << "shell " << sci(worst);
  out.require(worst < 1e-4, "shell oracle < 1e-4");
  for (int q = 0; q < 4; ++q) {
    const double order = std::log2(c[q] / f[q]);
    out.detail << ", " << names[q] << " " << sci(c[q]) << " (order " << sci(order) << ")";
    out.require(c[q] < 1e-4, std::string(names[q]) + " < 1e-4");
    out.require(order >= 1.0, std::string(names[q]) + " order >= 1");
  }
}

// 3. Variational consistency on two-peak states.
void variational(Context& ctx, Outcome& out) {
  const Grid2D g{256, 2.56};
  const Model model(g, ctx.two().potential, 0.2, ctx.two().p);
  const auto profs = well_profiles(model.potential(), model.p());
  std::mt19937_64 gen(314159);
  const double t = 1e-4;
  double dir = 0.0, fdw = 0.0, sym = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    std::vector<Vec2> ys{{-1.0, 0.0}, {1.0, 0.0}};
    ScalarField u = build_ansatz(g, profs, ys, 0.2);
    axpy(0.1, random_bumps(g, gen, 0.2, 1.2), u);
    const ScalarField v = random_bumps(g, gen, 0.25, 1.2);
    const ScalarField w = random_bumps(g, gen, 0.25, 1.2);

    ScalarField up = u;
    axpy(t, v, up);
    ScalarField um = u;
    axpy(-t, v, um);
    const double fd = (energy(up, model).total - energy(um, model).total) / (2.0 * t);
    const double exact = inner(residual(u, model), v);
    dir = std::max(dir, std::abs(fd - exact) / std::abs(exact));

    const Linearization J(model, u);
    const ScalarField jv = J.apply(v);
    const ScalarField jw = J.apply(w);
    ScalarField fdj = residual(up, model) - residual(um, model);
    fdj *= 1.0 / (2.0 * t);
    fdw = std::max(fdw, l2_norm(fdj - jv) / l2_norm(jv));
    const double a = inner(jv, w);
    const double b = inner(v, jw);
    sym = std::max(sym, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
  }
  out.detail << "directional " << sci(dir) << ", jacobian fd " << sci(fdw) << ", symmetry " << sci(sym);
  out.require(dir < 1e-5, "directional derivative < 1e-5");
  out.require(fdw < 1e-5, "Jacobian FD < 1e-5");
  out.require(sym < 1e-8, "Jacobian symmetry < 1e-8");
}

// 4. Energy expansion.
void expansion(Context& ctx, Outcome& out) {
  const ExpansionResult r = run_expansion(ctx.two());
  out.detail << "leading " << sci(r.leading) << " rel err " << sci(r.leading_rel_error) << ", remainder slope "
             << sci(r.remainder_slope) << ", shift " << sci(r.shift_measured) << " vs " << sci(r.shift_predicted)
             << " (rel " << sci(r.shift_rel_error) << "), gauge slope " << sci(r.gauge_slope);
  out.require(r.remainder_slope >= 2.0, "remainder order >= 2");
  out.require(r.shift_rel_error < 0.1, "shift within 10%");
  out.require(std::abs(r.gauge_slope - 4.0) <= 0.2, "gauge slope 4 +- 0.2");
  out.require(r.pass, "expansion check");
}

// 5. Full solve and rates.
void full_solve(Context& ctx, Outcome& out) {
  const ExperimentConfig& cfg = ctx.two();
  const SweepResult& sweep = ctx.two_well_sweep();
  std::vector<double> eps, phi, rel_offset;
  bool converged = true;
  for (const SweepEntry& e : sweep.entries) {
    converged = converged && e.report.converged && e.report.residual_norm <= cfg.solver.tol;
    eps.push_back(e.eps);
    phi.push_back(e.report.remainder_norm);
    double worst = 0.0;
    for (double d : e.report.peak_offsets) worst = std::max(worst, d);
    rel_offset.push_back(worst / e.eps);
    out.detail << "eps " << e.eps << ": it " << e.report.iterations << " res " << sci(e.report.residual_norm)
               << " |y-a|/eps " << sci(worst / e.eps) << " phi " << sci(e.report.remainder_norm) << "; ";
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < rel_offset.size(); ++i) decreasing = decreasing && rel_offset[i] < rel_offset[i - 1];
  const double slope = loglog_slope(eps, phi);
  const double m = cfg.potential.wells().front().m;
  out.detail << "remainder slope " << sci(slope);
  out.require(converged, "Newton tol at every eps");
  out.require(decreasing, "|y-a|/eps decreasing");
  out.require(slope >= m + 1.0 - 0.3, "remainder slope >= m + 0.7");
}

// 6. Pohozaev balance.
void pohozaev(Context& ctx, Outcome& out) {
  const ExperimentConfig& scfg = ctx.single();
  const double eps = scfg.eps_list.back();
  const auto sprofs = well_profiles(scfg.potential, scfg.p);
  std::vector<double> single_rel;
  for (int n : {512, 1024}) {
    const Grid2D g{n, scfg.grid.L};
    const Model model(g, scfg.potential, eps, scfg.p);
    std::vector<Vec2> ys{scfg.potential.wells().front().a};
    const SolveReport rep = newton_solve(build_ansatz(g, sprofs, ys, eps), model, scfg.solver, sprofs);
    out.require(rep.converged, "single-well solve at n = " + std::to_string(n));
    double worst = 0.0;
    for (const PohozaevRow& row : pohozaev_rows(scfg, model, rep.u, rep.peaks)) {
      worst = std::max(worst, row.report.rel_residual);
    }
    single_rel.push_back(worst);
  }
  out.detail << "single well " << sci(single_rel[0]) << " -> " << sci(single_rel[1]);
  out.require(single_rel[0] < 1e-3, "single well rel < 1e-3 at 512");
  out.require(single_rel[1] < single_rel[0], "single well decreasing under refinement");

  const ExperimentConfig& cfg = ctx.two();
  for (const SweepEntry& e : ctx.two_well_sweep().entries) {
    const Model model(cfg.grid, cfg.potential, e.eps, cfg.p);
    double worst = 0.0;
    for (const PohozaevRow& row : pohozaev_rows(cfg, model, e.report.u, e.report.peaks)) {
      worst = std::max(worst, row.report.rel_residual);
    }
    out.detail << ", two wells eps " << e.eps << " " << sci(worst);
    out.require(worst < 1e-3, "two-well rel < 1e-3 at eps " + short_num(e.eps));
  }

  const PotentialSpec flat = PotentialSpec::constant(1.0);
  const Grid2D g{512, scfg.grid.L};
  const Model model(g, flat, eps, scfg.p);
  std::vector<Vec2> origin{{0.0, 0.0}};
  const std::vector<RadialProfile> fprofs{solve_ground_state(1.0, scfg.p)};
  const SolveReport rep = newton_solve(build_ansatz(g, fprofs, origin, eps), model, scfg.solver);
  out.require(rep.converged, "constant-potential solve");
  const GaugeFields gf = compute_gauge(rep.u);
  double lhs = 0.0, ratio = 0.0;
  for (int k = 1; k <= 2; ++k) {
    Vec2 c{0.0, 0.0};
    (k == 1 ? c.x1 : c.x2) = scfg.pohozaev.offset * scfg.pohozaev.d;
    const PohozaevReport r = pohozaev_check(rep.u, gf, model, c, scfg.pohozaev.d, k, scfg.pohozaev.options);
    lhs = std::max(lhs, std::abs(r.lhs));
    ratio = std::max(ratio, std::abs(r.rhs) / max_term(r));
  }
  out.detail << ", control lhs " << sci(lhs) << " |rhs|/max term " << sci(ratio);
  out.require(lhs == 0.0, "control lhs = 0");
  out.require(ratio < 1e-6, "control rhs below floor");
}

// 7. Tangency.
void tangency(Context& ctx, Outcome& out) {
  const RadialProfile prof = solve_ground_state(1.0, 4.0);
  double radial = 0.0;
  for (auto [g, eps] : {std::pair{Grid2D{512, 8.0}, 1.0}, std::pair{Grid2D{512, 2.56}, 0.2}}) {
    const ScalarField u = peak_field(g, prof, {0.0, 0.0}, eps);
    radial = std::max(radial, tangency_residual(u, compute_gauge(u)));
  }
  out.detail << "radial " << sci(radial);
  out.require(radial < 1e-6, "radial < 1e-6");

  const ExperimentConfig& scfg = ctx.single();
  {
    const double eps = scfg.eps_list.back();
    const auto profs = well_profiles(scfg.potential, scfg.p);
    const Model model(scfg.grid, scfg.potential, eps, scfg.p);
    std::vector<Vec2> ys{scfg.potential.wells().front().a};
    const SolveReport rep = newton_solve(build_ansatz(scfg.grid, profs, ys, eps), model, scfg.solver);
    const double t = tangency_residual(rep.u, compute_gauge(rep.u));
    out.detail << ", single-well solution " << sci(t);
    out.require(t < 1e-3, "single-well solution < 1e-3");
  }
  for (const SweepEntry& e : ctx.two_well_sweep().entries) {
    const double t = tangency_residual(e.report.u, compute_gauge(e.report.u));
    out.detail << ", two-well eps " << e.eps << " " << sci(t);
    out.require(t < 1e-3, "two-well solution < 1e-3 at eps " + short_num(e.eps));
  }

  const Grid2D g{512, 2.56};
  ScalarField bumps(g);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const Vec2 x = g.point(i, j);
      const Vec2 a = x - Vec2{-0.4, 0.2};
      const Vec2 b = x - Vec2{0.3, -0.1};
      bumps(i, j) = std::exp(-dot(a, a) / 0.02) + 0.5 * std::exp(-dot(b, b) / 0.05);
    }
  }
  const double neg = tangency_residual(bumps, compute_gauge(bumps));
  out.detail << ", negative control " << sci(neg);
  out.require(neg > 1e-2, "negative control > 1e-2");
}

// 8. Uniqueness probe.
void uniqueness(Context& ctx, Outcome& out) {
  const ExperimentConfig& cfg = ctx.two();
  const double eps = 0.1;
  const SweepEntry* entry = nullptr;
  for (const SweepEntry& e : ctx.two_well_sweep().entries) {
    if (e.eps == eps) entry = &e;
  }
  out.require(entry != nullptr, "eps = 0.1 in the sweep");
  if (entry == nullptr) return;
  const Model model(cfg.grid, cfg.potential, eps, cfg.p);
  UniquenessOptions opts;
  opts.k_perturbations = 4;
  opts.magnitude = cfg.probe.magnitude;
  opts.seed = cfg.probe.seed;
  opts.delta = cfg.delta;
  opts.newton = cfg.solver;
  const UniquenessReport a = uniqueness_probe(model, ctx.two_well_sweep().profiles, entry->reduced.Y, opts);
  const UniquenessReport b = uniqueness_probe(model, ctx.two_well_sweep().profiles, entry->reduced.Y, opts);
  bool same = a.max_distance == b.max_distance && a.iterations == b.iterations && a.residuals == b.residuals;
  if (a.xi && b.xi) same = same && a.xi->data() == b.xi->data();
  out.detail << "converged " << a.included.size() << "/4, max sup distance " << sci(a.max_distance)
             << ", repeat identical " << (same ? "yes" : "no");
  out.require(a.included.size() == 4, "all 4 starts converge");
  out.require(a.pass(1e-8), "pairwise sup distance < 1e-8");
  out.require(same, "deterministic under fixed seed");
}

struct Criterion {
  int id;
  double budget_s;
  std::function<void(Context&, Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"css_peaks acceptance checks"};
  std::string config_dir = CSS_PEAKS_DEFAULT_CONFIG_DIR;
  std::vector<int> only;
  app.add_option("--config-dir", config_dir, "Directory holding two_well.json and single_well.json");
  app.add_option("--only", only, "Run only these criteria")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  Context ctx;
  ctx.config_dir = config_dir;
  const std::vector<Criterion> criteria{
      {1, 10.0, ground_states}, {2, 30.0, gauge_oracle}, {3, 60.0, variational}, {4, 300.0, expansion},
      {5, 900.0, full_solve},   {6, 120.0, pohozaev},    {7, 60.0, tangency},    {8, 600.0, uniqueness},
  };
  const std::set<int> selected(only.begin(), only.end());
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    // The shared sweep is charged to criterion 5 only.
    if (c.id > 5 && (selected.empty() || selected.count(5) == 0)) ctx.two_well_sweep();
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(ctx, out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.require(secs < c.budget_s, "runtime < " + std::to_string(static_cast<int>(c.budget_s)) + " s");
    std::printf("criterion %d: %s (%.1f s) %s\n", c.id, out.pass ? "PASS" : "FAIL", secs, out.detail.str().c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
