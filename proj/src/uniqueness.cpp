#include "css_peaks/uniqueness.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "css_peaks/ansatz.hpp"
#include "css_peaks/error.hpp"
#include "css_peaks/log.hpp"

namespace css {

bool UniquenessReport::pass(double threshold) const {
  if (trivial) return true;
  if (included.size() != starts.size()) return false;
  return max_distance < threshold;
}

std::vector<std::vector<Vec2>> probe_offsets(std::size_t peaks, int count, double length,
                                             std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<std::vector<Vec2>> out;
  for (int j = 0; j < count; ++j) {
    std::vector<Vec2> d(peaks);
    for (auto& v : d) {
      const double unit = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      const double angle = 2.0 * std::numbers::pi * unit;
      v = {length * std::cos(angle), length * std::sin(angle)};
    }
    out.push_back(std::move(d));
  }
  return out;
}

double sup_distance(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

UniquenessReport uniqueness_probe(const Model& model, std::span<const RadialProfile> profiles,
                                  std::span<const Vec2> y_star, const UniquenessOptions& opts) {
  if (opts.k_perturbations < 0) throw PreconditionError("uniqueness_probe: negative start count");
  if (!(opts.magnitude >= 0.0)) throw PreconditionError("uniqueness_probe: magnitude must be non-negative");
  const double length = opts.magnitude * model.eps();
  if (length > opts.delta) {
    throw PreconditionError("uniqueness_probe: perturbation magnitude*eps = " + log::fmt(length) +
                            " exceeds delta = " + log::fmt(opts.delta));
  }
  if (y_star.size() != profiles.size()) {
    throw PreconditionError("uniqueness_probe: one peak per profile required");
  }
  UniquenessReport rep;
  rep.seed = opts.seed;
  if (opts.k_perturbations == 0) {
    rep.trivial = true;
    log::warn("uniqueness_probe: zero perturbations requested, nothing to compare");
    return rep;
  }
  const auto offsets = probe_offsets(y_star.size(), opts.k_perturbations, length, opts.seed);
  std::vector<ScalarField> solutions;
  for (const auto& d : offsets) {
    std::vector<Vec2> y(y_star.begin(), y_star.end());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = y[i] + d[i];
    const ScalarField w = build_ansatz(model.grid(), profiles, y, model.eps());
    SolveReport sr = newton_solve(w, model, opts.newton);
    rep.starts.push_back(y);
    rep.converged.push_back(sr.converged);
    rep.iterations.push_back(sr.iterations);
    rep.residuals.push_back(sr.residual_norm);
    if (sr.converged) {
      rep.included.push_back(rep.starts.size() - 1);
      solutions.push_back(std::move(sr.u));
    } else {
      log::warn("uniqueness_probe: start " + std::to_string(rep.starts.size() - 1) +
                " did not converge and is excluded");
    }
  }
  const std::size_t c = solutions.size();
  rep.distances.assign(c, std::vector<double>(c, 0.0));
  std::size_t wi = 0;
  std::size_t wj = 0;
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = i + 1; j < c; ++j) {
      const double d = sup_distance(solutions[i], solutions[j]);
      rep.distances[i][j] = rep.distances[j][i] = d;
      if (d > rep.max_distance) {
        rep.max_distance = d;
        wi = i;
        wj = j;
      }
    }
  }
  if (rep.max_distance > 10.0 * opts.newton.tol) {
    ScalarField xi = solutions[wi] - solutions[wj];
    xi *= 1.0 / rep.max_distance;
    rep.xi = std::move(xi);
  }
  return rep;
}

}  // namespace css
