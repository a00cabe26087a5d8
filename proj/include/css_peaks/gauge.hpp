#pragma once

#include <memory>
#include <vector>

#include "css_peaks/grid.hpp"
#include "css_peaks/spectral.hpp"

namespace css {

// Chern–Simons gauge triple determined by a matter field u:
//   A1 = -(1/4π) ∫ (x2 - y2)/|x - y|^2 u(y)^2 dy  =  ½ K2 * u²
//   A2 =  (1/4π) ∫ (x1 - y1)/|x - y|^2 u(y)^2 dy  = -½ K1 * u²
//   A0 = K1 * (A2 u²) - K2 * (A1 u²),      K_i(x) = -x_i / (2π |x|²).
struct GaugeFields {
  ScalarField a0;
  ScalarField a1;
  ScalarField a2;
};

// First variation of the gauge triple at u in direction v.
struct GaugeVariation {
  ScalarField da0;
  ScalarField da1;
  ScalarField da2;
};

enum class Kernel { K1, K2 };

// Aperiodic convolution with K1 / K2 on an n x n grid via zero padding to
// 2n x 2n.  Kernels are sampled at grid displacements with K(0) := 0.
class FreeSpaceConvolver {
 public:
  explicit FreeSpaceConvolver(const Grid2D& grid);

  /// Shared instance for a grid (cached per (n, L)).
  static std::shared_ptr<const FreeSpaceConvolver> for_grid(const Grid2D& grid);

  struct Spectrum {
    fft::ComplexBuffer data;
  };

  struct Term {
    const Spectrum* source;
    Kernel kernel;
    double coefficient;
  };

  Spectrum transform(const ScalarField& f) const;

  /// Σ coefficient · (kernel ∗ source), restricted to the physical grid.
  ScalarField combine(std::initializer_list<Term> terms) const;

  /// Convenience: kernel ∗ f.
  ScalarField convolve(const ScalarField& f, Kernel kernel) const;

  const Grid2D& grid() const { return grid_; }

 private:
  Grid2D grid_;
  std::shared_ptr<const fft::Plan2D> plan_;
  fft::ComplexBuffer k1_hat_;
  fft::ComplexBuffer k2_hat_;
};

GaugeFields compute_gauge(const ScalarField& u);

/// δA for the perturbation u -> u + t v at t = 0.
GaugeVariation gauge_variation(const ScalarField& u, const ScalarField& v, const GaugeFields& gf);

struct GaugeResiduals {
  double curl_res = 0.0;  // ∂1A2 - ∂2A1 - ½u²
  double div_res = 0.0;   // ∂1A1 + ∂2A2
  double a0x_res = 0.0;   // ∂1A0 + A2 u²
  double a0y_res = 0.0;   // ∂2A0 - A1 u²
};

/// Relative L2 residuals of the constraint equations satisfied by the
/// triple returned from compute_gauge.  Derivatives of the gauge fields use
/// sixth-order centered differences (the fields decay like 1/|x| and are
/// not periodic); each residual is divided by the norm of its right-hand
/// side, or by the norm of the cancelling terms when the right side is zero.
GaugeResiduals gauge_constraint_residuals(const GaugeFields& gf, const ScalarField& u);

/// Sixth-order centered difference along axis 0 (x1) or 1 (x2); order drops
/// near the grid edge.
ScalarField fd_derivative(const ScalarField& f, int axis);

}  // namespace css
