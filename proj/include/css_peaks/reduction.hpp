#pragma once

#include <span>
#include <string>
#include <vector>

#include "css_peaks/energy.hpp"
#include "css_peaks/radial_profile.hpp"

namespace css {

struct PeakConfig {
  std::vector<Vec2> Y;
  double eps = 0.0;
  double delta = 0.0;
  double energy = 0.0;    // reduced energy at Y
  bool converged = false;
  bool flat = false;      // energy spread across the simplex below 1e-12 eps^2
  int iterations = 0;
  int evaluations = 0;
};

/// Throws PreconditionError unless 0 < delta < min inter-well distance / 4.
void validate_delta(const PotentialSpec& spec, double delta);

/// True when every y_i lies in the closed ball of radius delta around a_i.
bool in_domain(const PotentialSpec& spec, std::span<const Vec2> Y, double delta);

/// Leading-order reduced energy I_eps(W_{eps,Y}).  Throws DomainError when
/// Y is outside D_delta.
double reduced_energy(const Model& model, std::span<const RadialProfile> profiles,
                      std::span<const Vec2> Y, double delta);

struct MinimizeOptions {
  int max_iter = 400;
  double initial_step = 0.0;  // 0: 0.25 * min(eps, delta)
};

/// Nelder-Mead over the 2k peak coordinates with every trial point
/// projected onto D_delta.
PeakConfig minimize_peaks(const Model& model, std::span<const RadialProfile> profiles,
                          std::span<const Vec2> Y0, double delta, const MinimizeOptions& opts = {});

}  // namespace css
