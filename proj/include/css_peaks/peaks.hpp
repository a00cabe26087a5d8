#pragma once

#include <span>
#include <vector>

#include "css_peaks/grid.hpp"
#include "css_peaks/potential.hpp"
#include "css_peaks/radial_profile.hpp"

namespace css {

struct Peak {
  Vec2 position;
  double value = 0.0;
  bool low_confidence = false;  // flat neighbourhood or indefinite fit
};

/// Grid-cell local maxima above 0.5 max(u), refined by a least-squares
/// quadratic fit on the 3x3 stencil.  Sorted by descending value.
std::vector<Peak> peak_locations(const ScalarField& u);

/// Positions only, in the order of peak_locations.
std::vector<Vec2> peak_positions(const ScalarField& u);

/// Reorders `points` so that entry i is the point closest to well i.
/// Throws PreconditionError when the counts differ.
std::vector<Vec2> match_to_wells(std::span<const Vec2> points, const PotentialSpec& spec);

struct RemainderResult {
  double phi_norm = 0.0;     // ||u - W_{eps, Y_fit}||_eps
  std::vector<Vec2> y_fit;   // matched to wells
};

/// Throws PreconditionError when the number of extracted peaks differs from
/// the number of profiles.
RemainderResult remainder_norm(const ScalarField& u, const PotentialSpec& spec,
                               std::span<const RadialProfile> profiles, double eps);

/// Number of cells in the support (u > 1e-12 max u) with a 4-neighbour of
/// opposite sign or a negative value.
std::size_t support_sign_changes(const ScalarField& u);

}  // namespace css
