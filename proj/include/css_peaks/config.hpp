#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "css_peaks/grid.hpp"
#include "css_peaks/newton.hpp"
#include "css_peaks/pohozaev.hpp"
#include "css_peaks/potential.hpp"

namespace css {

struct ProbeConfig {
  int k_perturbations = 4;
  double magnitude = 0.5;
  std::uint64_t seed = 20240601;
  double eps = 0.0;              // 0: smallest entry of eps_list
  double sup_threshold = 1e-8;
};

struct PohozaevConfig {
  double d = 0.3;
  double offset = 0.5;           // ball centre = peak + offset * d * e_k
  double threshold = 1e-3;
  PohozaevOptions options;
};

struct ExperimentConfig {
  PotentialSpec potential;
  double p = 4.0;
  std::vector<double> eps_list;
  Grid2D grid{512, 2.56};
  NewtonOptions solver;
  double delta = 0.2;
  ProbeConfig probe;
  PohozaevConfig pohozaev;
  std::filesystem::path output_dir = "out";

  /// Throws ConfigError: empty or non-decreasing eps_list, h > min(eps)/8,
  /// wells closer than L/4 to the boundary, invalid potential or delta.
  void validate() const;
};

/// Parses and validates; every failure is reported as ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string to_json(const ExperimentConfig& cfg);

}  // namespace css
