#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "css_peaks/config.hpp"
#include "css_peaks/energy.hpp"
#include "css_peaks/newton.hpp"
#include "css_peaks/pohozaev.hpp"
#include "css_peaks/reduction.hpp"
#include "css_peaks/uniqueness.hpp"

namespace css {

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// One ground state per well, at v0 = V(a_i).
std::vector<RadialProfile> well_profiles(const PotentialSpec& spec, double p);

/// Rescales a field concentrated at `prev_peaks` on scale `prev_eps` to one
/// concentrated at `new_peaks` on scale `eps`: around the nearest new peak
/// the previous field is sampled at y_prev + (x - y_new) * prev_eps / eps.
ScalarField continue_solution(const ScalarField& prev, std::span<const Vec2> prev_peaks, double prev_eps,
                              std::span<const Vec2> new_peaks, double eps);

struct SweepEntry {
  double eps = 0.0;
  PeakConfig reduced;
  SolveReport report;
  EnergyBreakdown energy;
};

struct SweepResult {
  std::vector<RadialProfile> profiles;
  std::vector<SweepEntry> entries;
  bool all_converged = true;
};

/// Profiles, reduced minimisation and continuation Newton over eps_list.
/// The Newton start at each eps is W at the minimised peaks plus the
/// rescaled correction of the previous solution, when that lowers ||F||.
SweepResult run_sweep(const ExperimentConfig& cfg);

struct ExpansionRow {
  double eps = 0.0;
  double scaled_energy = 0.0;  // I(W_a) / eps^2
  double remainder = 0.0;      // |scaled_energy - leading|
  double gauge_energy = 0.0;   // gauge1 + gauge2 of W_a
};

struct ExpansionResult {
  std::vector<ExpansionRow> rows;
  double leading = 0.0;        // (1/2 - 1/p) Σ massp_i
  double remainder_slope = 0.0;
  double gauge_slope = 0.0;
  double shift_measured = 0.0;   // (I(W_Y) - I(W_a)) / eps^2 at the smallest eps
  double shift_predicted = 0.0;  // ½ (V(y1) - V(a1)) mass2_1
  double leading_rel_error = 0.0;
  double shift_rel_error = 0.0;
  bool pass = false;
};

ExpansionResult run_expansion(const ExperimentConfig& cfg);

struct PohozaevRow {
  double eps = 0.0;
  std::size_t peak_index = 0;
  PohozaevReport report;
};

/// Checks k = 1, 2 at every peak with the ball centre shifted off the peak.
std::vector<PohozaevRow> pohozaev_rows(const ExperimentConfig& cfg, const Model& model,
                                       const ScalarField& u, std::span<const Vec2> peaks);

struct GroundStateArgs {
  double v0 = 1.0;
  double p = 4.0;
  ShootingOptions shooting;
  std::string stem = "ground_state";
};

// Command drivers.  Each writes into `out`, returns 0 when every asserted
// threshold holds and 1 otherwise; invalid input raises ConfigError.
int cmd_ground_state(const GroundStateArgs& args, const std::filesystem::path& out);
int cmd_solve(const ExperimentConfig& cfg, const std::filesystem::path& out);
int cmd_expansion_check(const ExperimentConfig& cfg, const std::filesystem::path& out);
int cmd_pohozaev(const ExperimentConfig& cfg, const std::filesystem::path& out,
                 const std::optional<std::filesystem::path>& snapshot = std::nullopt,
                 std::optional<double> snapshot_eps = std::nullopt);
int cmd_uniqueness(const ExperimentConfig& cfg, const std::filesystem::path& out);
int cmd_gauge_check(const ExperimentConfig& cfg, const std::filesystem::path& out);

}  // namespace css
