#pragma once

#include <span>

#include "css_peaks/grid.hpp"
#include "css_peaks/potential.hpp"
#include "css_peaks/radial_profile.hpp"

namespace css {

/// W_{eps,Y}(x) = Σ_i U^i(|x - y^i| / eps).  Throws MarginError when a
/// peak lies closer than L/4 to the boundary of the grid.
ScalarField build_ansatz(const Grid2D& grid, std::span<const RadialProfile> profiles,
                         std::span<const Vec2> peaks, double eps);

/// Samples the potential on the grid.
ScalarField sample_potential(const Grid2D& grid, const PotentialSpec& spec);

/// ||u||_eps = sqrt(∫ eps² |∇u|² + V u²).
double norm_eps(const ScalarField& u, const PotentialSpec& spec, double eps);
double norm_eps(const ScalarField& u, const ScalarField& potential, double eps);

}  // namespace css
