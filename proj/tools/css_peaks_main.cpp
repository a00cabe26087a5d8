#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "css_peaks/config.hpp"
#include "css_peaks/error.hpp"
#include "css_peaks/experiments.hpp"
#include "css_peaks/log.hpp"
#include "css_peaks/spectral.hpp"

namespace {

constexpr int kUsageError = 2;
constexpr int kFailure = 1;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-peak solutions of the static planar Chern-Simons-Schrodinger system"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  int threads = 1;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "Experiment configuration (JSON)");
  app.add_option("--out", out_dir, "Output directory (overrides output_dir in the config)");
  app.add_option("--threads", threads, "FFT worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Seed for the uniqueness probe (overrides the config)");

  css::GroundStateArgs gs;
  auto* ground = app.add_subcommand("ground-state", "Solve the radial ground state and write profile files");
  ground->add_option("--v0", gs.v0, "Potential value at the well");
  ground->add_option("--p", gs.p, "Nonlinearity exponent (> 2)");
  ground->add_option("--dr", gs.shooting.dr, "Radial mesh spacing (0: 5e-4/sqrt(v0))");
  ground->add_option("--r-max", gs.shooting.r_max, "Truncation radius");
  ground->add_option("--tol", gs.shooting.tol, "Bisection tolerance");
  ground->add_option("--stem", gs.stem, "Output file stem");

  auto* solve = app.add_subcommand("solve", "Reduced minimisation and continuation Newton over eps_list");
  auto* expansion = app.add_subcommand("expansion-check", "Energy expansion of the multi-peak ansatz");
  auto* pohozaev = app.add_subcommand("pohozaev", "Local Pohozaev balances around every peak");
  std::string snapshot;
  std::optional<double> snapshot_eps;
  pohozaev->add_option("--snapshot", snapshot, "Check a stored field instead of solving");
  pohozaev->add_option("--eps", snapshot_eps, "eps of the stored field (default: last of eps_list)");
  auto* uniqueness = app.add_subcommand("uniqueness", "Multi-start local uniqueness probe");
  auto* gauge = app.add_subcommand("gauge-check", "Gauge constraint residuals of the ansatz");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    css::fft::set_threads(threads);
    if (ground->parsed()) {
      return css::cmd_ground_state(gs, out_dir.empty() ? "out" : out_dir);
    }
    if (config_path.empty()) throw css::ConfigError("--config is required for this subcommand");
    css::ExperimentConfig cfg = css::load_config(config_path);
    if (seed) cfg.probe.seed = *seed;
    const std::filesystem::path out = out_dir.empty() ? cfg.output_dir : std::filesystem::path(out_dir);
    if (solve->parsed()) return css::cmd_solve(cfg, out);
    if (expansion->parsed()) return css::cmd_expansion_check(cfg, out);
    if (pohozaev->parsed()) {
      std::optional<std::filesystem::path> snap;
      if (!snapshot.empty()) snap = snapshot;
      return css::cmd_pohozaev(cfg, out, snap, snapshot_eps);
    }
    if (uniqueness->parsed()) return css::cmd_uniqueness(cfg, out);
    if (gauge->parsed()) return css::cmd_gauge_check(cfg, out);
  } catch (const css::ConfigError& e) {
    css::log::error(e.what());
    return kUsageError;
  } catch (const std::exception& e) {
    css::log::error(e.what());
    return kFailure;
  }
  return kUsageError;
}
