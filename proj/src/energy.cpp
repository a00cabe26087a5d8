#include "css_peaks/energy.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "css_peaks/ansatz.hpp"
#include "css_peaks/error.hpp"
#include "css_peaks/spectral.hpp"
#include "json_io.hpp"

namespace css {

namespace {

double signed_power(double u, double exponent) {
  return std::copysign(std::pow(std::abs(u), exponent), u);
}

}  // namespace

Model::Model(const Grid2D& grid, PotentialSpec potential, double eps, double p)
    : grid_(grid), potential_(std::move(potential)), eps_(eps), p_(p) {
  grid_.validate();
  if (!(eps_ > 0.0)) throw PreconditionError("Model: eps must be positive");
  if (!(p_ > 2.0)) throw PreconditionError("Model: p must exceed 2");
  v_ = sample_potential(grid_, potential_);
  double acc = 0.0;
  for (double x : v_.values()) acc += x;
  v_mean_ = acc / static_cast<double>(v_.size());
}

Model Model::with_eps(double eps) const { return Model(grid_, potential_, eps, p_); }

EnergyBreakdown energy(const ScalarField& u, const Model& model) {
  return energy(u, model, compute_gauge(u));
}

EnergyBreakdown energy(const ScalarField& u, const Model& model, const GaugeFields& gf) {
  EnergyBreakdown e;
  const double eps = model.eps();
  const double p = model.p();
  const ScalarField& v = model.v();
  double pot = 0.0;
  double nl = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double rho = u[k] * u[k];
    pot += v[k] * rho;
    nl += std::pow(std::abs(u[k]), p);
    g1 += gf.a1[k] * gf.a1[k] * rho;
    g2 += gf.a2[k] * gf.a2[k] * rho;
  }
  const double area = u.grid().cell_area();
  e.kinetic = 0.5 * eps * eps * dirichlet_integral(u);
  e.potential = 0.5 * pot * area;
  e.nonlinear = -nl * area / p;
  e.gauge1 = 0.5 * g1 * area;
  e.gauge2 = 0.5 * g2 * area;
  e.total = e.kinetic + e.potential + e.nonlinear + e.gauge1 + e.gauge2;
  return e;
}

std::string to_json(const EnergyBreakdown& e, const Model& model) {
  nlohmann::ordered_json j;
  j["kinetic"] = e.kinetic;
  j["potential"] = e.potential;
  j["nonlinear"] = e.nonlinear;
  j["gauge1"] = e.gauge1;
  j["gauge2"] = e.gauge2;
  j["total"] = e.total;
  j["eps"] = model.eps();
  j["n"] = model.grid().n;
  j["L"] = model.grid().L;
  return dump_json(j, -1);
}

ScalarField residual(const ScalarField& u, const Model& model) {
  return residual(u, model, compute_gauge(u));
}

ScalarField residual(const ScalarField& u, const Model& model, const GaugeFields& gf) {
  const double eps2 = model.eps() * model.eps();
  const double p = model.p();
  ScalarField f = spectral_laplacian(u);
  const ScalarField& v = model.v();
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double coupling = v[k] + gf.a0[k] + gf.a1[k] * gf.a1[k] + gf.a2[k] * gf.a2[k];
    f[k] = -eps2 * f[k] + coupling * u[k] - signed_power(u[k], p - 1.0);
  }
  return f;
}

Linearization::Linearization(const Model& model, ScalarField u)
    : Linearization(model, u, compute_gauge(u)) {}

Linearization::Linearization(const Model& model, ScalarField u, GaugeFields gf)
    : model_(&model), u_(std::move(u)), gf_(std::move(gf)), diagonal_(u_.grid()) {
  const double p = model.p();
  const ScalarField& v = model.v();
  for (std::size_t k = 0; k < u_.size(); ++k) {
    diagonal_[k] = v[k] + gf_.a0[k] + gf_.a1[k] * gf_.a1[k] + gf_.a2[k] * gf_.a2[k] -
                   (p - 1.0) * std::pow(std::abs(u_[k]), p - 2.0);
  }
}

ScalarField Linearization::apply(const ScalarField& v) const {
  const double eps2 = model_->eps() * model_->eps();
  const GaugeVariation dv = gauge_variation(u_, v, gf_);
  ScalarField out = spectral_laplacian(v);
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double nonlocal =
        dv.da0[k] + 2.0 * gf_.a1[k] * dv.da1[k] + 2.0 * gf_.a2[k] * dv.da2[k];
    out[k] = -eps2 * out[k] + diagonal_[k] * v[k] + u_[k] * nonlocal;
  }
  return out;
}

ScalarField apply_jacobian(const ScalarField& u, const ScalarField& v, const Model& model) {
  return Linearization(model, u).apply(v);
}

}  // namespace css
