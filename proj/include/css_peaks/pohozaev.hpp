#pragma once

#include <array>
#include <string>

#include "css_peaks/energy.hpp"

namespace css {

// Local balance on the ball B_d(center) obtained by pairing the field
// equation with ∂_k u:
//   ½ ∫_B ∂_k V u²  =  ½ ∮ (eps²|∇u|² + V u²) ν_k  -  eps² ∮ ∂_ν u ∂_k u
//                     - (1/p) ∮ |u|^p ν_k  -  ∮ (A·ν) A_k u²
//                     + ½ ∮ (A0 + |A|²) u² ν_k
struct PohozaevReport {
  Vec2 center;
  double d = 0.0;
  int k = 1;
  double lhs = 0.0;
  // flux, normal_derivative, nonlinear, gauge_cross, gauge_diagonal
  std::array<double, 5> rhs_terms{};
  double rhs = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
};

enum class VolumeQuadrature {
  Sharp,  // h² sum over cells whose centre lies in the ball
  Polar   // Gauss-Legendre in r, trapezoid in angle, interpolated integrand
};

struct PohozaevOptions {
  int m_quad = 720;
  int interp_order = 6;  // 2 = bilinear, 4, 6
  VolumeQuadrature volume = VolumeQuadrature::Polar;
  double floor = 1e-30;
};

/// k is 1 or 2.  Throws MarginError when the ball (plus interpolation
/// stencil) leaves the grid or d is not below half the inter-well distance.
PohozaevReport pohozaev_check(const ScalarField& u, const GaugeFields& gf, const Model& model,
                              Vec2 center, double d, int k, const PohozaevOptions& opts = {});

/// ||A1 ∂1u + A2 ∂2u|| / (||A|| ||∇u|| + floor), L2 norms with spectral ∇u.
double tangency_residual(const ScalarField& u, const GaugeFields& gf, double floor = 1e-30);

std::string to_json(const PohozaevReport& r);

}  // namespace css
