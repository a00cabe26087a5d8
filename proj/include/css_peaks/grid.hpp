#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "css_peaks/vec2.hpp"

namespace css {

// Uniform n x n grid on [-L, L)^2, spacing h = 2L / n.
struct Grid2D {
  int n = 64;
  double L = 1.0;

  double h() const { return 2.0 * L / n; }
  double coord(int i) const { return -L + i * h(); }
  Vec2 point(int i, int j) const { return {coord(i), coord(j)}; }
  std::size_t size() const { return static_cast<std::size_t>(n) * static_cast<std::size_t>(n); }
  double cell_area() const { return h() * h(); }

  /// n must be a power of two >= 64 and L positive.
  void validate() const;

  friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

// Real samples on a Grid2D, row-major with x1 fastest: values[j * n + i].
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid2D& grid, double fill = 0.0);
  ScalarField(const Grid2D& grid, std::vector<double> values);

  const Grid2D& grid() const { return grid_; }
  int n() const { return grid_.n; }
  std::size_t size() const { return values_.size(); }

  double& operator()(int i, int j) { return values_[index(i, j)]; }
  double operator()(int i, int j) const { return values_[index(i, j)]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& data() { return values_; }
  const std::vector<double>& data() const { return values_; }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(grid_.n) +
           static_cast<std::size_t>(i);
  }

  bool all_finite() const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);

 private:
  Grid2D grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Samples f at every grid point.
ScalarField sample(const Grid2D& grid, const std::function<double(Vec2)>& f);

/// h^2-weighted inner product and the induced L2 norm.
double inner(const ScalarField& a, const ScalarField& b);
double l2_norm(const ScalarField& a);
double max_abs(const ScalarField& a);

/// a <- a + s * b
void axpy(double s, const ScalarField& b, ScalarField& a);

/// Pointwise product.
ScalarField multiply(const ScalarField& a, const ScalarField& b);

/// Tensor-product Lagrange interpolation of the given order (2 = bilinear,
/// 4 = cubic, 6 = quintic) at an arbitrary point inside the grid.
double interpolate(const ScalarField& f, Vec2 x, int order = 2);

/// Samples on the n/2 grid over the same box (its nodes are the even fine
/// nodes).  Requires n/2 >= 64.
ScalarField coarsen(const ScalarField& f);

/// Onto the 2n grid: even nodes copied, midpoints by six-point Lagrange
/// interpolation per axis (indices clamped at the edges).
ScalarField refine(const ScalarField& f);

}  // namespace css
