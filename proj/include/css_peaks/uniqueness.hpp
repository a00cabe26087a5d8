#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "css_peaks/newton.hpp"

namespace css {

struct UniquenessOptions {
  int k_perturbations = 4;
  double magnitude = 0.5;   // |dY_j| = magnitude * eps for every peak
  std::uint64_t seed = 0;
  double delta = 0.2;
  NewtonOptions newton;
};

struct UniquenessReport {
  std::uint64_t seed = 0;
  std::vector<std::vector<Vec2>> starts;
  std::vector<bool> converged;
  std::vector<int> iterations;
  std::vector<double> residuals;
  std::vector<std::vector<double>> distances;  // pairwise sup-norm, converged starts only
  std::vector<std::size_t> included;           // indices of converged starts
  double max_distance = 0.0;
  bool trivial = false;                        // zero starts requested
  std::optional<ScalarField> xi;               // (u1 - u2)/||u1 - u2||_inf for the worst pair
  bool pass(double threshold) const;
};

/// Perturbation offsets for the probe from a seeded 64-bit Mersenne twister
/// (angles taken from the raw output so the sequence is platform independent).
std::vector<std::vector<Vec2>> probe_offsets(std::size_t peaks, int count, double length,
                                             std::uint64_t seed);

/// Runs Newton from W_{eps, Y* + dY_j} for each perturbation.  Throws
/// PreconditionError when magnitude * eps exceeds delta.
UniquenessReport uniqueness_probe(const Model& model, std::span<const RadialProfile> profiles,
                                  std::span<const Vec2> y_star, const UniquenessOptions& opts);

/// Sup-norm distance between two fields on one grid.
double sup_distance(const ScalarField& a, const ScalarField& b);

}  // namespace css
