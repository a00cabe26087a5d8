#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "css_peaks/ansatz.hpp"
#include "css_peaks/energy.hpp"
#include "css_peaks/radial_profile.hpp"

namespace css::test {

inline const RadialProfile& profile_v1_p4() {
  static const RadialProfile prof = solve_ground_state(1.0, 4.0);
  return prof;
}

inline Well make_well(Vec2 a, double v = 1.0, double eta = 0.9) {
  Well w;
  w.a = a;
  w.v_at_a = v;
  w.b = {1.0, 1.0};
  w.m = 2.0;
  w.eta = eta;
  return w;
}

inline PotentialSpec single_well() { return PotentialSpec({make_well({0.0, 0.0})}, 3.0); }

inline PotentialSpec two_wells() {
  return PotentialSpec({make_well({-1.0, 0.0}), make_well({1.0, 0.0})}, 3.0);
}

inline ScalarField single_peak(const Grid2D& g, double eps, Vec2 y = {0.0, 0.0}) {
  std::vector<RadialProfile> profs{profile_v1_p4()};
  std::vector<Vec2> ys{y};
  return build_ansatz(g, profs, ys, eps);
}

// Smooth random decaying field: a few Gaussians with seeded centres/weights.
inline ScalarField random_bumps(const Grid2D& g, std::mt19937_64& gen, double width) {
  std::uniform_real_distribution<double> pos(-0.3, 0.3);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  ScalarField f(g);
  for (int b = 0; b < 3; ++b) {
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

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace css::test
