#include "css_peaks/experiments.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "css_peaks/ansatz.hpp"
#include "css_peaks/error.hpp"
#include "css_peaks/log.hpp"
#include "css_peaks/peaks.hpp"
#include "css_peaks/snapshot.hpp"
#include "json_io.hpp"

namespace css {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string row;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) row += ',';
    row += c;
    first = false;
  }
  return row + '\n';
}

std::vector<Vec2> well_centres(const PotentialSpec& spec) {
  std::vector<Vec2> Y;
  for (const Well& w : spec.wells()) Y.push_back(w.a);
  return Y;
}

std::string eps_tag(std::size_t index) {
  std::ostringstream os;
  os << "eps_" << index;
  return os.str();
}

}  // namespace

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw PreconditionError("loglog_slope: need two or more points");
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::vector<RadialProfile> well_profiles(const PotentialSpec& spec, double p) {
  std::vector<RadialProfile> out;
  for (const Well& w : spec.wells()) {
    bool reused = false;
    for (const RadialProfile& prof : out) {
      if (prof.v0 == w.v_at_a) {
        out.push_back(prof);
        reused = true;
        break;
      }
    }
    if (!reused) out.push_back(solve_ground_state(w.v_at_a, p));
  }
  return out;
}

ScalarField continue_solution(const ScalarField& prev, std::span<const Vec2> prev_peaks, double prev_eps,
                              std::span<const Vec2> new_peaks, double eps) {
  const Grid2D& g = prev.grid();
  ScalarField out(g);
  const double scale = prev_eps > 0.0 ? eps / prev_eps : 1.0;
  const double lo = -g.L + 4.0 * g.h();
  const double hi = g.L - 5.0 * g.h();
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const Vec2 x = g.point(i, j);
      std::size_t nearest = 0;
      double best = norm(x - new_peaks[0]);
      for (std::size_t q = 1; q < new_peaks.size(); ++q) {
        const double d = norm(x - new_peaks[q]);
        if (d < best) {
          best = d;
          nearest = q;
        }
      }
      // Same profile coordinate (x - y) / eps in the previous field.
      const Vec2 s = prev_peaks[nearest] + (1.0 / scale) * (x - new_peaks[nearest]);
      if (s.x1 < lo || s.x1 > hi || s.x2 < lo || s.x2 > hi) continue;
      out(i, j) = interpolate(prev, s, 4);
    }
  }
  return out;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  SweepResult res;
  res.profiles = well_profiles(cfg.potential, cfg.p);
  std::vector<Vec2> y_guess = well_centres(cfg.potential);
  std::optional<std::size_t> prev_index;
  std::vector<Vec2> prev_peaks;
  double prev_eps = 0.0;
  for (double eps : cfg.eps_list) {
    log::info("sweep: eps = " + log::fmt(eps));
    Model model(cfg.grid, cfg.potential, eps, cfg.p);
    SweepEntry entry;
    entry.eps = eps;
    entry.reduced = minimize_peaks(model, res.profiles, y_guess, cfg.delta);
    if (!entry.reduced.converged) log::warn("sweep: reduced minimisation hit its iteration cap");
    ScalarField start = build_ansatz(cfg.grid, res.profiles, entry.reduced.Y, eps);
    if (prev_index && prev_peaks.size() == entry.reduced.Y.size()) {
      // Carry over the correction u - W, rescaled around each peak and
      // shrunk by its expected order (eps^min(m, 2)).
      const ScalarField w_prev = build_ansatz(cfg.grid, res.profiles, prev_peaks, prev_eps);
      const ScalarField phi_prev = res.entries[*prev_index].report.u - w_prev;
      double order = 2.0;
      for (const Well& w : cfg.potential.wells()) order = std::min(order, w.m);
      ScalarField warm = continue_solution(phi_prev, prev_peaks, prev_eps, entry.reduced.Y, eps);
      warm *= std::pow(eps / prev_eps, order);
      warm += start;
      const double rw = l2_norm(residual(warm, model)) / std::max(l2_norm(warm), 1e-300);
      const double ra = l2_norm(residual(start, model)) / l2_norm(start);
      log::debug("sweep: warm start residual " + log::fmt(rw) + " vs ansatz " + log::fmt(ra));
      if (rw < ra) start = std::move(warm);
    }
    entry.report = newton_solve(start, model, cfg.solver, res.profiles);
    entry.energy = energy(entry.report.u, model);
    if (!entry.report.converged) {
      res.all_converged = false;
      log::error("sweep: Newton failed at eps = " + log::fmt(eps) + ": " + entry.report.message);
    }
    res.entries.push_back(std::move(entry));
    const SweepEntry& last = res.entries.back();
    prev_index = res.entries.size() - 1;
    prev_peaks = last.report.peaks;
    prev_eps = eps;
    if (last.report.peaks.size() == cfg.potential.size()) {
      bool inside = in_domain(cfg.potential, last.report.peaks, cfg.delta);
      if (inside) y_guess = last.report.peaks;
    }
  }
  return res;
}

ExpansionResult run_expansion(const ExperimentConfig& cfg) {
  cfg.validate();
  ExpansionResult res;
  const auto profiles = well_profiles(cfg.potential, cfg.p);
  const auto centres = well_centres(cfg.potential);
  for (const auto& prof : profiles) res.leading += (0.5 - 1.0 / cfg.p) * profile_integrals(prof).massp;
  std::vector<double> eps_v, rem_v, gauge_v;
  for (double eps : cfg.eps_list) {
    Model model(cfg.grid, cfg.potential, eps, cfg.p);
    const ScalarField w = build_ansatz(cfg.grid, profiles, centres, eps);
    const EnergyBreakdown e = energy(w, model);
    ExpansionRow row;
    row.eps = eps;
    row.scaled_energy = e.total / (eps * eps);
    row.remainder = std::abs(row.scaled_energy - res.leading);
    row.gauge_energy = e.gauge1 + e.gauge2;
    res.rows.push_back(row);
    eps_v.push_back(eps);
    rem_v.push_back(row.remainder);
    gauge_v.push_back(row.gauge_energy);
  }
  if (res.rows.size() >= 2) {
    res.remainder_slope = loglog_slope(eps_v, rem_v);
    res.gauge_slope = loglog_slope(eps_v, gauge_v);
  }
  const ExpansionRow& last = res.rows.back();
  res.leading_rel_error = last.remainder / res.leading;

  // First-order shift: move the first peak by delta/2 along x1.
  const double eps = cfg.eps_list.back();
  Model model(cfg.grid, cfg.potential, eps, cfg.p);
  std::vector<Vec2> moved = centres;
  moved[0] = moved[0] + Vec2{0.5 * cfg.delta, 0.0};
  const double e_moved = reduced_energy(model, profiles, moved, cfg.delta);
  res.shift_measured = (e_moved / (eps * eps)) - last.scaled_energy;
  const Well& w0 = cfg.potential.wells()[0];
  res.shift_predicted =
      0.5 * (cfg.potential.value(moved[0]) - w0.v_at_a) * profile_integrals(profiles[0]).mass2;
  res.shift_rel_error = std::abs(res.shift_measured - res.shift_predicted) / std::abs(res.shift_predicted);

  res.pass = res.rows.size() >= 2 && res.remainder_slope >= 2.0 && res.leading_rel_error < 1e-2 &&
             res.shift_rel_error < 0.1 && std::abs(res.gauge_slope - 4.0) <= 0.2;
  return res;
}

std::vector<PohozaevRow> pohozaev_rows(const ExperimentConfig& cfg, const Model& model,
                                       const ScalarField& u, std::span<const Vec2> peaks) {
  const GaugeFields gf = compute_gauge(u);
  std::vector<PohozaevRow> rows;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    for (int k = 1; k <= 2; ++k) {
      const Vec2 shift = k == 1 ? Vec2{cfg.pohozaev.offset * cfg.pohozaev.d, 0.0}
                                : Vec2{0.0, cfg.pohozaev.offset * cfg.pohozaev.d};
      PohozaevRow row;
      row.eps = model.eps();
      row.peak_index = i;
      row.report = pohozaev_check(u, gf, model, peaks[i] + shift, cfg.pohozaev.d, k, cfg.pohozaev.options);
      rows.push_back(row);
    }
  }
  return rows;
}

int cmd_ground_state(const GroundStateArgs& args, const fs::path& out) {
  if (!(args.v0 > 0.0)) throw ConfigError("--v0 must be positive");
  if (!(args.p > 2.0)) throw ConfigError("--p must exceed 2");
  if (!(args.shooting.dr >= 0.0)) throw ConfigError("--dr must be non-negative");
  if (!(args.shooting.r_max >= 20.0 / std::sqrt(args.v0))) throw ConfigError("--r-max must be at least 20/sqrt(v0)");
  const RadialProfile prof = solve_ground_state(args.v0, args.p, args.shooting);
  ensure_dir(out);
  write_profile(prof, out / args.stem);
  log::info("ground-state: u0 = " + log::fmt(prof.u0));
  return 0;
}

int cmd_solve(const ExperimentConfig& cfg, const fs::path& out) {
  cfg.validate();
  const SweepResult sweep = run_sweep(cfg);
  ensure_dir(out);
  const std::size_t k = cfg.potential.size();
  std::string summary = "eps,total_energy,phi_norm";
  for (std::size_t i = 0; i < k; ++i) summary += ",peak_offset_" + std::to_string(i + 1);
  summary += ",residual_norm,iterations\n";
  bool ok = sweep.all_converged;
  for (std::size_t e = 0; e < sweep.entries.size(); ++e) {
    const SweepEntry& entry = sweep.entries[e];
    Model model(cfg.grid, cfg.potential, entry.eps, cfg.p);
    write_text(out / ("solve_" + eps_tag(e) + ".json"), to_json(entry.report, model) + "\n");
    write_snapshot(entry.report.u, out / ("solve_" + eps_tag(e) + ".cssf"));
    summary += log::fmt(entry.eps) + ',' + log::fmt(entry.energy.total) + ',' +
               log::fmt(entry.report.remainder_norm);
    for (std::size_t i = 0; i < k; ++i) {
      summary += ',' + (i < entry.report.peak_offsets.size() ? log::fmt(entry.report.peak_offsets[i])
                                                             : std::string("nan"));
    }
    summary += ',' + log::fmt(entry.report.residual_norm) + ',' + std::to_string(entry.report.iterations) + '\n';
    if (entry.report.peak_offsets.size() != k) ok = false;
  }
  write_text(out / "summary.csv", summary);
  return ok ? 0 : 1;
}

int cmd_expansion_check(const ExperimentConfig& cfg, const fs::path& out) {
  const ExpansionResult res = run_expansion(cfg);
  ensure_dir(out);
  std::string csv = "eps,scaled_energy,leading,remainder,gauge_energy\n";
  for (const auto& r : res.rows) {
    csv += csv_row({log::fmt(r.eps), log::fmt(r.scaled_energy), log::fmt(res.leading), log::fmt(r.remainder),
                    log::fmt(r.gauge_energy)});
  }
  write_text(out / "expansion.csv", csv);
  nlohmann::ordered_json j;
  j["leading"] = res.leading;
  j["leading_rel_error"] = res.leading_rel_error;
  j["remainder_slope"] = res.remainder_slope;
  j["gauge_slope"] = res.gauge_slope;
  j["shift_measured"] = res.shift_measured;
  j["shift_predicted"] = res.shift_predicted;
  j["shift_rel_error"] = res.shift_rel_error;
  j["pass"] = res.pass;
  write_text(out / "expansion.json", dump_json(j) + "\n");
  return res.pass ? 0 : 1;
}

int cmd_pohozaev(const ExperimentConfig& cfg, const fs::path& out, const std::optional<fs::path>& snapshot,
                 std::optional<double> snapshot_eps) {
  cfg.validate();
  std::vector<PohozaevRow> rows;
  if (snapshot) {
    if (!fs::exists(*snapshot)) throw ConfigError("snapshot not found: " + snapshot->string());
    const ScalarField u = read_snapshot(*snapshot);
    const double eps = snapshot_eps.value_or(cfg.eps_list.back());
    Model model(u.grid(), cfg.potential, eps, cfg.p);
    auto peaks = peak_positions(u);
    if (peaks.size() == cfg.potential.size()) peaks = match_to_wells(peaks, cfg.potential);
    rows = pohozaev_rows(cfg, model, u, peaks);
  } else {
    const SweepResult sweep = run_sweep(cfg);
    if (!sweep.all_converged) {
      log::error("pohozaev: solve failed; identity not checked");
      return 1;
    }
    for (const SweepEntry& entry : sweep.entries) {
      Model model(cfg.grid, cfg.potential, entry.eps, cfg.p);
      auto part = pohozaev_rows(cfg, model, entry.report.u, entry.report.peaks);
      rows.insert(rows.end(), part.begin(), part.end());
    }
  }
  ensure_dir(out);
  std::string csv = "eps,peak_index,k,lhs,rhs,rel_residual\n";
  bool ok = !rows.empty();
  for (const auto& r : rows) {
    csv += csv_row({log::fmt(r.eps), std::to_string(r.peak_index), std::to_string(r.report.k),
                    log::fmt(r.report.lhs), log::fmt(r.report.rhs), log::fmt(r.report.rel_residual)});
    if (!(r.report.rel_residual < cfg.pohozaev.threshold)) ok = false;
  }
  write_text(out / "pohozaev.csv", csv);
  return ok ? 0 : 1;
}

int cmd_uniqueness(const ExperimentConfig& cfg, const fs::path& out) {
  cfg.validate();
  const double eps = cfg.probe.eps > 0.0 ? cfg.probe.eps : cfg.eps_list.back();
  if (cfg.grid.h() > eps / 8.0 * (1.0 + 1e-12)) throw ConfigError("probe eps is not resolved by the grid");
  const auto profiles = well_profiles(cfg.potential, cfg.p);
  Model model(cfg.grid, cfg.potential, eps, cfg.p);
  UniquenessOptions opts;
  opts.k_perturbations = cfg.probe.k_perturbations;
  opts.magnitude = cfg.probe.magnitude;
  opts.seed = cfg.probe.seed;
  opts.delta = cfg.delta;
  opts.newton = cfg.solver;
  if (opts.magnitude * eps > opts.delta) throw ConfigError("probe magnitude * eps exceeds delta");
  const PeakConfig pc = minimize_peaks(model, profiles, well_centres(cfg.potential), cfg.delta);
  const UniquenessReport rep = uniqueness_probe(model, profiles, pc.Y, opts);
  ensure_dir(out);
  nlohmann::ordered_json j;
  j["eps"] = eps;
  j["seed"] = rep.seed;
  j["k_perturbations"] = opts.k_perturbations;
  j["magnitude"] = opts.magnitude;
  j["trivial"] = rep.trivial;
  auto y = nlohmann::ordered_json::array();
  for (const Vec2& v : pc.Y) y.push_back({v.x1, v.x2});
  j["y_star"] = y;
  auto starts = nlohmann::ordered_json::array();
  for (const auto& s : rep.starts) {
    auto pts = nlohmann::ordered_json::array();
    for (const Vec2& v : s) pts.push_back({v.x1, v.x2});
    starts.push_back(pts);
  }
  j["starts"] = starts;
  j["converged"] = rep.converged;
  j["iterations"] = rep.iterations;
  j["residuals"] = rep.residuals;
  j["distances"] = rep.distances;
  j["max_distance"] = rep.max_distance;
  j["pass"] = rep.pass(cfg.probe.sup_threshold);
  write_text(out / "uniqueness.json", dump_json(j) + "\n");
  if (rep.xi) write_snapshot(*rep.xi, out / "uniqueness_xi.cssf");
  return rep.pass(cfg.probe.sup_threshold) ? 0 : 1;
}

int cmd_gauge_check(const ExperimentConfig& cfg, const fs::path& out) {
  cfg.validate();
  const auto profiles = well_profiles(cfg.potential, cfg.p);
  const auto centres = well_centres(cfg.potential);
  std::string csv = "eps,curl_res,div_res,a0x_res,a0y_res,tangency\n";
  bool ok = true;
  for (double eps : cfg.eps_list) {
    const ScalarField w = build_ansatz(cfg.grid, profiles, centres, eps);
    const GaugeFields gf = compute_gauge(w);
    const GaugeResiduals r = gauge_constraint_residuals(gf, w);
    const double tang = tangency_residual(w, gf);
    csv += csv_row({log::fmt(eps), log::fmt(r.curl_res), log::fmt(r.div_res), log::fmt(r.a0x_res),
                    log::fmt(r.a0y_res), log::fmt(tang)});
    if (!(r.curl_res < 1e-4) || !(r.div_res < 1e-4)) ok = false;
  }
  ensure_dir(out);
  write_text(out / "gauge_check.csv", csv);
  return ok ? 0 : 1;
}

}  // namespace css
