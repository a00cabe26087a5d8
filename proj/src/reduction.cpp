#include "css_peaks/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "css_peaks/ansatz.hpp"
#include "css_peaks/error.hpp"
#include "css_peaks/log.hpp"

namespace css {

namespace {

using Point = std::vector<double>;

std::vector<Vec2> to_peaks(const Point& x) {
  std::vector<Vec2> Y(x.size() / 2);
  for (std::size_t i = 0; i < Y.size(); ++i) Y[i] = {x[2 * i], x[2 * i + 1]};
  return Y;
}

void project(const PotentialSpec& spec, double delta, Point& x) {
  const auto& wells = spec.wells();
  for (std::size_t i = 0; i < wells.size(); ++i) {
    Vec2 d{x[2 * i] - wells[i].a.x1, x[2 * i + 1] - wells[i].a.x2};
    const double r = norm(d);
    if (r > delta) {
      d = (delta / r) * d;
      x[2 * i] = wells[i].a.x1 + d.x1;
      x[2 * i + 1] = wells[i].a.x2 + d.x2;
    }
  }
}

double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

}  // namespace

void validate_delta(const PotentialSpec& spec, double delta) {
  if (!(delta > 0.0)) throw PreconditionError("delta must be positive");
  const double r0 = spec.half_min_separation();
  if (std::isfinite(r0) && !(delta < 0.5 * r0)) {
    throw PreconditionError("delta must be below a quarter of the smallest inter-well distance");
  }
}

bool in_domain(const PotentialSpec& spec, std::span<const Vec2> Y, double delta) {
  const auto& wells = spec.wells();
  if (Y.size() != wells.size()) return false;
  for (std::size_t i = 0; i < wells.size(); ++i) {
    if (norm(Y[i] - wells[i].a) > delta * (1.0 + 1e-12)) return false;
  }
  return true;
}

double reduced_energy(const Model& model, std::span<const RadialProfile> profiles,
                      std::span<const Vec2> Y, double delta) {
  if (profiles.size() != model.potential().size()) {
    throw PreconditionError("reduced_energy: one profile per well required");
  }
  if (!in_domain(model.potential(), Y, delta)) {
    throw DomainError("reduced_energy: peak configuration outside D_delta");
  }
  const ScalarField w = build_ansatz(model.grid(), profiles, Y, model.eps());
  return energy(w, model).total;
}

PeakConfig minimize_peaks(const Model& model, std::span<const RadialProfile> profiles,
                          std::span<const Vec2> Y0, double delta, const MinimizeOptions& opts) {
  const PotentialSpec& spec = model.potential();
  validate_delta(spec, delta);
  if (!in_domain(spec, Y0, delta)) {
    throw DomainError("minimize_peaks: initial configuration outside D_delta");
  }
  const double eps = model.eps();
  const std::size_t dim = 2 * Y0.size();
  PeakConfig out;
  out.eps = eps;
  out.delta = delta;

  auto evaluate = [&](const Point& x) {
    ++out.evaluations;
    const auto Y = to_peaks(x);
    return reduced_energy(model, profiles, Y, delta);
  };

  const double step = opts.initial_step > 0.0 ? opts.initial_step : 0.25 * std::min(eps, delta);
  std::vector<Point> simplex(dim + 1, Point(dim));
  for (std::size_t i = 0; i < Y0.size(); ++i) {
    simplex[0][2 * i] = Y0[i].x1;
    simplex[0][2 * i + 1] = Y0[i].x2;
  }
  for (std::size_t k = 0; k < dim; ++k) {
    simplex[k + 1] = simplex[0];
    simplex[k + 1][k] += step;
    project(spec, delta, simplex[k + 1]);
    if (distance(simplex[k + 1], simplex[0]) < 0.5 * step) {
      // Clamped onto the starting point at the ball edge: step inward.
      simplex[k + 1] = simplex[0];
      simplex[k + 1][k] -= step;
      project(spec, delta, simplex[k + 1]);
    }
  }
  std::vector<double> values(dim + 1);
  for (std::size_t k = 0; k <= dim; ++k) values[k] = evaluate(simplex[k]);

  const double diameter_tol = 1e-3 * eps;
  const double flat_tol = 1e-12 * eps * eps;
  std::vector<std::size_t> order(dim + 1);
  for (int it = 0;; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[dim - 1];
    double diameter = 0.0;
    for (std::size_t k = 0; k <= dim; ++k) diameter = std::max(diameter, distance(simplex[k], simplex[best]));
    const double spread = values[worst] - values[best];
    out.iterations = it;
    if (spread < flat_tol) {
      out.flat = true;
      out.converged = true;
      break;
    }
    if (diameter < diameter_tol) {
      out.converged = true;
      break;
    }
    if (it >= opts.max_iter) {
      log::warn("minimize_peaks: iteration cap reached, returning best point");
      break;
    }

    Point centroid(dim, 0.0);
    for (std::size_t k = 0; k <= dim; ++k) {
      if (k == worst) continue;
      for (std::size_t q = 0; q < dim; ++q) centroid[q] += simplex[k][q] / static_cast<double>(dim);
    }
    auto along = [&](double coef) {
      Point x(dim);
      for (std::size_t q = 0; q < dim; ++q) x[q] = centroid[q] + coef * (simplex[worst][q] - centroid[q]);
      project(spec, delta, x);
      return x;
    };
    Point xr = along(-1.0);
    const double fr = evaluate(xr);
    if (fr < values[best]) {
      Point xe = along(-2.0);
      const double fe = evaluate(xe);
      if (fe < fr) {
        simplex[worst] = std::move(xe);
        values[worst] = fe;
      } else {
        simplex[worst] = std::move(xr);
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = std::move(xr);
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    Point xc = along(outside ? -0.5 : 0.5);
    const double fc = evaluate(xc);
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = std::move(xc);
      values[worst] = fc;
      continue;
    }
    for (std::size_t k = 0; k <= dim; ++k) {
      if (k == best) continue;
      for (std::size_t q = 0; q < dim; ++q) {
        simplex[k][q] = simplex[best][q] + 0.5 * (simplex[k][q] - simplex[best][q]);
      }
      values[k] = evaluate(simplex[k]);
    }
  }
  const std::size_t best =
      static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  out.Y = to_peaks(simplex[best]);
  out.energy = values[best];
  return out;
}

}  // namespace css
