#pragma once

#include <filesystem>

#include "css_peaks/grid.hpp"

namespace css {

// Binary field snapshot, little-endian:
//   "CSSF" | u32 n | f64 L | n*n f64 values (row-major, x1 fastest)
void write_snapshot(const ScalarField& field, const std::filesystem::path& path);
ScalarField read_snapshot(const std::filesystem::path& path);

/// Plot-friendly CSV with header x1,x2,value; `stride` subsamples the grid.
void export_csv(const ScalarField& field, const std::filesystem::path& path, int stride = 1);

}  // namespace css
