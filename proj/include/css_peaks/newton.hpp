#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "css_peaks/energy.hpp"
#include "css_peaks/radial_profile.hpp"

namespace css {

struct NewtonOptions {
  double tol = 1e-10;           // on ||F(u)||_L2 / ||u||_L2
  int max_iter = 30;
  int max_halvings = 20;
  double max_forcing = 0.1;     // cap on the relative linear tolerance
  int max_linear_iter = 400;
  // Nested start: solve first on grids coarsened by 2 per level (only while
  // h <= eps/4 there) to coarse_tol, then refine and continue.
  int coarse_levels = 0;
  double coarse_tol = 1e-8;
};

struct LinearSolveStats {
  int iterations = 0;
  double relative_residual = 0.0;  // preconditioned residual estimate
  bool converged = false;
  bool breakdown = false;
};

/// Preconditioned MINRES for a symmetric (possibly indefinite) operator.
/// `precondition` must be symmetric positive definite.  Starts from x = 0.
LinearSolveStats minres(const std::function<ScalarField(const ScalarField&)>& op,
                        const std::function<ScalarField(const ScalarField&)>& precondition,
                        const ScalarField& rhs, ScalarField& x, double rtol, int max_iter);

struct SolveReport {
  ScalarField u;
  std::vector<Vec2> peaks;          // refined maxima, matched to wells when counts agree
  double residual_norm = 0.0;       // ||F(u)|| / ||u||
  int iterations = 0;
  int linear_iterations = 0;
  int coarse_iterations = 0;        // Newton steps spent on coarser grids
  double remainder_norm = -1.0;     // ||u - W||_eps; negative when unavailable
  std::vector<double> peak_offsets; // |y_i - a_i|
  std::vector<double> residual_history;
  std::size_t sign_changes = 0;     // see support_sign_changes
  bool converged = false;
  std::string message;
  double eps = 0.0;
};

/// Damped Newton on F(u) = 0.  When `profiles` is non-empty the report also
/// carries peak offsets and the remainder norm against them.
SolveReport newton_solve(const ScalarField& u0, const Model& model, const NewtonOptions& opts = {},
                         std::span<const RadialProfile> profiles = {});

/// JSON record of a report (without the field itself).
std::string to_json(const SolveReport& report, const Model& model);

}  // namespace css
