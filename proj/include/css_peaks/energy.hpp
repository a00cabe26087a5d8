#pragma once

#include <string>

#include "css_peaks/gauge.hpp"
#include "css_peaks/grid.hpp"
#include "css_peaks/potential.hpp"

namespace css {

// Discretized problem data shared by energy, residual and Jacobian:
// grid, potential (and its samples), eps and the exponent p.
class Model {
 public:
  Model(const Grid2D& grid, PotentialSpec potential, double eps, double p);

  const Grid2D& grid() const { return grid_; }
  const PotentialSpec& potential() const { return potential_; }
  double eps() const { return eps_; }
  double p() const { return p_; }
  const ScalarField& v() const { return v_; }
  double v_mean() const { return v_mean_; }

  /// Same grid and potential at a different eps.
  Model with_eps(double eps) const;

 private:
  Grid2D grid_;
  PotentialSpec potential_;
  double eps_;
  double p_;
  ScalarField v_;
  double v_mean_ = 0.0;
};

struct EnergyBreakdown {
  double kinetic = 0.0;    // ½ ∫ eps² |∇u|²
  double potential = 0.0;  // ½ ∫ V u²
  double nonlinear = 0.0;  // -(1/p) ∫ |u|^p
  double gauge1 = 0.0;     // ½ ∫ A1² u²
  double gauge2 = 0.0;     // ½ ∫ A2² u²
  double total = 0.0;
};

EnergyBreakdown energy(const ScalarField& u, const Model& model);
EnergyBreakdown energy(const ScalarField& u, const Model& model, const GaugeFields& gf);

/// JSON record {kinetic, potential, nonlinear, gauge1, gauge2, total, eps, n, L}.
std::string to_json(const EnergyBreakdown& e, const Model& model);

/// F(u) = -eps² Δu + V u + (A0 + A1² + A2²) u - |u|^{p-2} u.
ScalarField residual(const ScalarField& u, const Model& model);
ScalarField residual(const ScalarField& u, const Model& model, const GaugeFields& gf);

// DF(u) frozen at one state; apply() costs two padded convolution passes.
class Linearization {
 public:
  Linearization(const Model& model, ScalarField u);
  Linearization(const Model& model, ScalarField u, GaugeFields gf);

  ScalarField apply(const ScalarField& v) const;

  const ScalarField& state() const { return u_; }
  const GaugeFields& gauge() const { return gf_; }

 private:
  const Model* model_;
  ScalarField u_;
  GaugeFields gf_;
  ScalarField diagonal_;  // V + A0 + |A|² - (p-1)|u|^{p-2}
};

ScalarField apply_jacobian(const ScalarField& u, const ScalarField& v, const Model& model);

}  // namespace css
