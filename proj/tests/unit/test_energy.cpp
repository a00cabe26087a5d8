#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "css_peaks/energy.hpp"
#include "css_peaks/experiments.hpp"
#include "helpers.hpp"

using namespace css;

namespace {

const Grid2D kSmall{128, 1.28};   // h = 0.02 = eps / 10 at eps = 0.2
const Grid2D kFine{1024, 3.2};    // h = 0.00625 = 0.05 / 8

ScalarField perturbed_state(const Grid2D& g, std::mt19937_64& gen) {
  ScalarField u = test::single_peak(g, 0.2, {0.05, -0.03});
  axpy(0.1, test::random_bumps(g, gen, 0.15), u);
  return u;
}

}  // namespace

TEST_CASE("zero field has zero energy and residual") {
  const Model model(kSmall, test::single_well(), 0.2, 4.0);
  const ScalarField z(kSmall);
  const EnergyBreakdown e = energy(z, model);
  CHECK(e.kinetic == 0.0);
  CHECK(e.potential == 0.0);
  CHECK(e.nonlinear == 0.0);
  CHECK(e.gauge1 == 0.0);
  CHECK(e.gauge2 == 0.0);
  CHECK(e.total == 0.0);
  CHECK(max_abs(residual(z, model)) == 0.0);
}

TEST_CASE("breakdown signs and exact total") {
  const Model model(kSmall, test::single_well(), 0.2, 4.0);
  std::mt19937_64 gen(11);
  const EnergyBreakdown e = energy(perturbed_state(kSmall, gen), model);
  CHECK(e.kinetic >= 0.0);
  CHECK(e.potential >= 0.0);
  CHECK(e.gauge1 >= 0.0);
  CHECK(e.gauge2 >= 0.0);
  CHECK(e.total == e.kinetic + e.potential + e.nonlinear + e.gauge1 + e.gauge2);
  const std::string js = to_json(e, model);
  for (const char* key : {"kinetic", "potential", "nonlinear", "gauge1", "gauge2", "total", "eps", "\"n\"", "\"L\""}) {
    CHECK(js.find(key) != std::string::npos);
  }
}

TEST_CASE("single peak: leading energy coefficient and gauge scaling") {
  const ProfileIntegrals I = profile_integrals(test::profile_v1_p4());
  const double lead = 0.25 * I.massp;
  std::vector<double> eps_v{0.2, 0.1, 0.05}, gauge_v, err_v;
  for (double eps : eps_v) {
    const Model model(kFine, test::single_well(), eps, 4.0);
    const EnergyBreakdown e = energy(test::single_peak(kFine, eps), model);
    gauge_v.push_back(e.gauge1 + e.gauge2);
    err_v.push_back(std::abs(e.total / (eps * eps) - lead) / lead);
  }
  CHECK(err_v[2] < 1e-2);
  CHECK(err_v[2] < err_v[1]);
  CHECK(err_v[1] < err_v[0]);
  CHECK(std::abs(loglog_slope(eps_v, gauge_v) - 4.0) <= 0.2);
}

TEST_CASE("constant potential: residual of the ansatz is gauge-only, order eps^2") {
  std::vector<double> eps_v{0.2, 0.1, 0.05}, res_v;
  for (double eps : eps_v) {
    const Model model(kFine, PotentialSpec::constant(1.0), eps, 4.0);
    const ScalarField w = test::single_peak(kFine, eps);
    res_v.push_back(l2_norm(residual(w, model)) / l2_norm(w));
  }
  CHECK(std::abs(loglog_slope(eps_v, res_v) - 2.0) <= 0.2);
}

TEST_CASE("directional derivative of the energy equals the residual pairing") {
  const Model model(kSmall, test::single_well(), 0.2, 4.0);
  std::mt19937_64 gen(2024);
  const double t = 1e-5;
  double worst = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    const ScalarField u = perturbed_state(kSmall, gen);
    const ScalarField v = test::random_bumps(kSmall, gen, 0.2);
    ScalarField up = u;
    axpy(t, v, up);
    ScalarField um = u;
    axpy(-t, v, um);
    const double fd = (energy(up, model).total - energy(um, model).total) / (2.0 * t);
    const double exact = inner(residual(u, model), v);
    worst = std::max(worst, std::abs(fd - exact) / std::abs(exact));
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("Jacobian: linearity, finite differences and symmetry") {
  const Model model(kSmall, test::single_well(), 0.2, 4.0);
  std::mt19937_64 gen(99);
  const double t = 1e-5;
  double lin = 0.0, fdw = 0.0, sym = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    const ScalarField u = perturbed_state(kSmall, gen);
    const ScalarField v = test::random_bumps(kSmall, gen, 0.2);
    const ScalarField w = test::random_bumps(kSmall, gen, 0.2);
    const Linearization J(model, u);
    const ScalarField jv = J.apply(v);
    const ScalarField jw = J.apply(w);

    ScalarField combo = 1.5 * v;
    axpy(-0.7, w, combo);
    ScalarField expect = 1.5 * jv;
    axpy(-0.7, jw, expect);
    lin = std::max(lin, max_abs(J.apply(combo) - expect) / max_abs(expect));

    ScalarField up = u;
    axpy(t, v, up);
    ScalarField um = u;
    axpy(-t, v, um);
    ScalarField fd = residual(up, model) - residual(um, model);
    fd *= 1.0 / (2.0 * t);
    fdw = std::max(fdw, l2_norm(fd - jv) / l2_norm(jv));

    const double a = inner(jv, w);
    const double b = inner(v, jw);
    sym = std::max(sym, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
  }
  CHECK(lin < 1e-12);
  CHECK(fdw < 1e-5);
  CHECK(sym < 1e-8);
  const ScalarField u = test::single_peak(kSmall, 0.2);
  const ScalarField v = test::random_bumps(kSmall, gen, 0.2);
  CHECK(max_abs(apply_jacobian(u, v, model) - Linearization(model, u).apply(v)) == 0.0);
}
