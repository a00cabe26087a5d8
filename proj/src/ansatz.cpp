#include "css_peaks/ansatz.hpp"

#include <cmath>
#include <sstream>

#include "css_peaks/error.hpp"
#include "css_peaks/spectral.hpp"

namespace css {

ScalarField build_ansatz(const Grid2D& grid, std::span<const RadialProfile> profiles,
                         std::span<const Vec2> peaks, double eps) {
  if (profiles.size() != peaks.size()) {
    throw PreconditionError("build_ansatz: profile count differs from peak count");
  }
  if (!(eps > 0.0)) throw PreconditionError("build_ansatz: eps must be positive");
  const double limit = grid.L - 0.25 * grid.L;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    if (std::abs(peaks[i].x1) > limit || std::abs(peaks[i].x2) > limit) {
      std::ostringstream os;
      os << "build_ansatz: peak " << i << " at (" << peaks[i].x1 << ", " << peaks[i].x2
         << ") is within L/4 of the boundary";
      throw MarginError(os.str());
    }
  }
  ScalarField w(grid);
  const double inv_eps = 1.0 / eps;
  for (int j = 0; j < grid.n; ++j) {
    for (int i = 0; i < grid.n; ++i) {
      const Vec2 x = grid.point(i, j);
      double acc = 0.0;
      for (std::size_t q = 0; q < peaks.size(); ++q) {
        acc += evaluate_radial(profiles[q], norm(x - peaks[q]) * inv_eps);
      }
      w(i, j) = acc;
    }
  }
  return w;
}

ScalarField sample_potential(const Grid2D& grid, const PotentialSpec& spec) {
  return sample(grid, [&spec](Vec2 x) { return spec.value(x); });
}

double norm_eps(const ScalarField& u, const ScalarField& potential, double eps) {
  double mass = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) mass += potential[k] * u[k] * u[k];
  mass *= u.grid().cell_area();
  return std::sqrt(eps * eps * dirichlet_integral(u) + mass);
}

double norm_eps(const ScalarField& u, const PotentialSpec& spec, double eps) {
  return norm_eps(u, sample_potential(u.grid(), spec), eps);
}

}  // namespace css
