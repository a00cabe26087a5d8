#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace css {

// Positive radial ground state of  -Δu + v0 u = u^{p-1}  on the plane,
// sampled at r_j = j * dr on [0, r_max].  Beyond r_max the profile is
// continued by tail_amplitude * exp(-sqrt(v0) r) / sqrt(r).
struct RadialProfile {
  double v0 = 1.0;
  double p = 4.0;
  double dr = 1e-3;
  double r_max = 25.0;
  std::vector<double> u;   // U(r_j)
  std::vector<double> du;  // U'(r_j)
  double u0 = 0.0;
  double tail_amplitude = 0.0;

  double decay_rate() const;
  std::size_t size() const { return u.size(); }
  double radius(std::size_t j) const { return static_cast<double>(j) * dr; }
};

struct ShootingOptions {
  double dr = 0.0;  // 0 selects 5e-4 / sqrt(v0)
  double r_max = 25.0;
  double tol = 1e-12;
  int max_iterations = 200;
};

/// Solves the radial problem by RK4 shooting on U(0) with bisection.
/// Throws SolverError if no over/undershoot bracket is found or the
/// bisection does not reach `tol` within `max_iterations`.
RadialProfile solve_ground_state(double v0, double p, const ShootingOptions& opts = {});

/// Cubic Hermite interpolation on [0, r_max]; asymptotic tail beyond.
double evaluate_radial(const RadialProfile& profile, double r);

/// Derivative companion of evaluate_radial.
double evaluate_radial_derivative(const RadialProfile& profile, double r);

struct ProfileIntegrals {
  double mass2 = 0.0;      // ∫ U²
  double massp = 0.0;      // ∫ U^p
  double dirichlet = 0.0;  // ∫ |∇U|²
};

/// Plane integrals by 2π r-weighted trapezoid rule plus the analytic tail.
ProfileIntegrals profile_integrals(const RadialProfile& profile);

/// Residual of U'' + U'/r - v0 U + U^{p-1} by centered differences of the
/// given order (2 or 4) on the radial mesh, over r >= r_min (and never the
/// first few samples).  Returns the max norm divided by max|U|.
double ode_residual(const RadialProfile& profile, int order = 4, double r_min = 0.0);

/// Writes `<stem>.csv` (r, U) and `<stem>.json` (header fields).
void write_profile(const RadialProfile& profile, const std::filesystem::path& stem);
RadialProfile read_profile(const std::filesystem::path& stem);

}  // namespace css
