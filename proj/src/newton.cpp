#include "css_peaks/newton.hpp"

#include <cmath>
#include <json.hpp>

#include "css_peaks/error.hpp"
#include "css_peaks/log.hpp"
#include "css_peaks/peaks.hpp"
#include "css_peaks/spectral.hpp"
#include "json_io.hpp"

namespace css {

namespace {

double dot(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

LinearSolveStats minres(const std::function<ScalarField(const ScalarField&)>& op,
                        const std::function<ScalarField(const ScalarField&)>& precondition,
                        const ScalarField& rhs, ScalarField& x, double rtol, int max_iter) {
  const Grid2D& g = rhs.grid();
  LinearSolveStats stats;
  x = ScalarField(g);
  ScalarField v_prev(g);
  ScalarField v = rhs;
  ScalarField z = precondition(v);
  double gamma = std::sqrt(std::max(dot(z, v), 0.0));
  if (gamma == 0.0) {
    stats.converged = true;
    return stats;
  }
  const double gamma1 = gamma;
  double gamma_prev = 1.0;
  double eta = gamma;
  double s_prev = 0.0, s = 0.0, c_prev = 1.0, c = 1.0;
  ScalarField w_prev(g);
  ScalarField w(g);
  for (int j = 1; j <= max_iter; ++j) {
    z *= 1.0 / gamma;
    ScalarField az = op(z);
    const double delta = dot(az, z);
    ScalarField v_next = az;
    axpy(-delta / gamma, v, v_next);
    axpy(-gamma / gamma_prev, v_prev, v_next);
    ScalarField z_next = precondition(v_next);
    const double zv = dot(z_next, v_next);
    if (zv < 0.0) {
      stats.breakdown = true;
      stats.iterations = j - 1;
      return stats;
    }
    const double gamma_next = std::sqrt(zv);
    const double a0 = c * delta - c_prev * s * gamma;
    const double a1 = std::hypot(a0, gamma_next);
    const double a2 = s * delta + c_prev * c * gamma;
    const double a3 = s_prev * gamma;
    if (a1 == 0.0) {
      stats.breakdown = true;
      stats.iterations = j - 1;
      return stats;
    }
    const double c_next = a0 / a1;
    const double s_next = gamma_next / a1;
    ScalarField w_next = z;
    axpy(-a3, w_prev, w_next);
    axpy(-a2, w, w_next);
    w_next *= 1.0 / a1;
    axpy(c_next * eta, w_next, x);
    eta = -s_next * eta;

    stats.iterations = j;
    stats.relative_residual = std::abs(eta) / gamma1;
    if (stats.relative_residual < rtol) {
      stats.converged = true;
      return stats;
    }
    if (gamma_next == 0.0) {
      stats.converged = true;
      return stats;
    }
    v_prev = std::move(v);
    v = std::move(v_next);
    z = std::move(z_next);
    w_prev = std::move(w);
    w = std::move(w_next);
    gamma_prev = gamma;
    gamma = gamma_next;
    c_prev = c;
    c = c_next;
    s_prev = s;
    s = s_next;
  }
  return stats;
}

SolveReport newton_solve(const ScalarField& u0, const Model& model, const NewtonOptions& opts,
                         std::span<const RadialProfile> profiles) {
  if (!(u0.grid() == model.grid())) throw PreconditionError("newton_solve: grid mismatch");
  if (!u0.all_finite()) throw PreconditionError("newton_solve: initial field is not finite");
  SolveReport rep;
  rep.eps = model.eps();
  auto relative = [](double fn, const ScalarField& field) {
    const double un = l2_norm(field);
    return un > 0.0 ? fn / un : fn;
  };
  ScalarField u = u0;
  GaugeFields gf = compute_gauge(u);
  ScalarField f = residual(u, model, gf);
  double fnorm = l2_norm(f);
  double rel = relative(fnorm, u);

  const Grid2D& grid = model.grid();
  if (opts.coarse_levels > 0 && grid.n / 2 >= 64 && 2.0 * grid.h() <= 0.25 * model.eps() && rel >= opts.tol) {
    const Model coarse_model(Grid2D{grid.n / 2, grid.L}, model.potential(), model.eps(), model.p());
    NewtonOptions copts = opts;
    copts.coarse_levels = opts.coarse_levels - 1;
    copts.tol = std::max(opts.coarse_tol, opts.tol);
    const SolveReport coarse = newton_solve(coarsen(u), coarse_model, copts);
    rep.coarse_iterations = coarse.iterations + coarse.coarse_iterations;
    // The lifted field can have a larger L2 residual (interpolation error is
    // amplified by the Laplacian) while lying much closer to the solution.
    if (coarse.converged) {
      u = refine(coarse.u);
      gf = compute_gauge(u);
      f = residual(u, model, gf);
      fnorm = l2_norm(f);
      rel = relative(fnorm, u);
      log::debug("newton: coarse phase " + std::to_string(rep.coarse_iterations) + " steps, lifted residual " +
                 log::fmt(rel));
    } else {
      log::warn("newton: coarse phase did not converge (" + coarse.message + "), starting on the fine grid");
    }
  }
  rep.residual_history.push_back(rel);
  log::debug("newton: start residual " + log::fmt(rel));

  const double eps2 = model.eps() * model.eps();
  const double vbar = model.v_mean();
  auto precond = [&](const ScalarField& r) { return solve_screened(r, eps2, vbar); };

  int it = 0;
  double t_start = 1.0;  // twice the last accepted step
  while (rel >= opts.tol) {
    if (it >= opts.max_iter) {
      rep.message = "iteration cap reached";
      break;
    }
    ++it;
    Linearization lin(model, u, gf);
    ScalarField rhs = f;
    rhs *= -1.0;
    const double forcing = std::clamp(rel, 1e-3 * opts.tol, opts.max_forcing);
    ScalarField step;
    const LinearSolveStats ls = minres([&](const ScalarField& s) { return lin.apply(s); }, precond,
                                       rhs, step, forcing, opts.max_linear_iter);
    rep.linear_iterations += ls.iterations;
    if (ls.breakdown && ls.iterations == 0) {
      rep.message = "linear solve breakdown";
      break;
    }
    double t = t_start;
    bool accepted = false;
    for (int halving = 0; halving <= opts.max_halvings; ++halving) {
      ScalarField trial = u;
      axpy(t, step, trial);
      GaugeFields tgf = compute_gauge(trial);
      ScalarField tf = residual(trial, model, tgf);
      const double tn = l2_norm(tf);
      if (std::isfinite(tn) && tn < fnorm) {
        u = std::move(trial);
        gf = std::move(tgf);
        f = std::move(tf);
        fnorm = tn;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      rep.message = "stagnation: no decrease after " + std::to_string(opts.max_halvings) + " halvings";
      break;
    }
    t_start = std::min(1.0, 2.0 * t);
    rel = relative(fnorm, u);
    rep.residual_history.push_back(rel);
    log::debug("newton: iter " + std::to_string(it) + " residual " + log::fmt(rel) + " step " +
               log::fmt(t) + " minres " + std::to_string(ls.iterations));
  }
  rep.iterations = it;
  rep.residual_norm = rel;
  rep.converged = rel < opts.tol;
  if (rep.converged) rep.message = "converged";
  rep.sign_changes = support_sign_changes(u);

  const auto& wells = model.potential().wells();
  auto found = peak_positions(u);
  if (found.size() == wells.size() && !wells.empty()) {
    rep.peaks = match_to_wells(found, model.potential());
    for (std::size_t i = 0; i < wells.size(); ++i) {
      rep.peak_offsets.push_back(norm(rep.peaks[i] - wells[i].a));
    }
    if (profiles.size() == wells.size()) {
      rep.remainder_norm = remainder_norm(u, model.potential(), profiles, model.eps()).phi_norm;
    }
  } else {
    rep.peaks = std::move(found);
  }
  rep.u = std::move(u);
  return rep;
}

std::string to_json(const SolveReport& r, const Model& model) {
  nlohmann::ordered_json j;
  j["eps"] = r.eps;
  j["p"] = model.p();
  j["n"] = model.grid().n;
  j["L"] = model.grid().L;
  j["converged"] = r.converged;
  j["message"] = r.message;
  j["residual_norm"] = r.residual_norm;
  j["iterations"] = r.iterations;
  j["linear_iterations"] = r.linear_iterations;
  j["coarse_iterations"] = r.coarse_iterations;
  j["remainder_norm"] = r.remainder_norm;
  j["sign_changes"] = r.sign_changes;
  auto peaks = nlohmann::ordered_json::array();
  for (const Vec2& y : r.peaks) peaks.push_back({y.x1, y.x2});
  j["peaks"] = peaks;
  j["peak_offsets"] = r.peak_offsets;
  j["residual_history"] = r.residual_history;
  return dump_json(j);
}

}  // namespace css
