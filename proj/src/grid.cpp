#include "css_peaks/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "css_peaks/error.hpp"

namespace css {

void Grid2D::validate() const {
  if (n < 64 || !std::has_single_bit(static_cast<unsigned>(n))) {
    std::ostringstream os;
    os << "Grid2D: n = " << n << " must be a power of two >= 64";
    throw PreconditionError(os.str());
  }
  if (!(L > 0.0)) throw PreconditionError("Grid2D: L must be positive");
}

ScalarField::ScalarField(const Grid2D& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

ScalarField::ScalarField(const Grid2D& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw PreconditionError("ScalarField: size mismatch");
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField sample(const Grid2D& grid, const std::function<double(Vec2)>& f) {
  ScalarField out(grid);
  for (int j = 0; j < grid.n; ++j) {
    for (int i = 0; i < grid.n; ++i) out(i, j) = f(grid.point(i, j));
  }
  return out;
}

double inner(const ScalarField& a, const ScalarField& b) {
  double acc = 0.0;
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t k = 0; k < av.size(); ++k) acc += av[k] * bv[k];
  return acc * a.grid().cell_area();
}

double l2_norm(const ScalarField& a) { return std::sqrt(inner(a, a)); }

double max_abs(const ScalarField& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

void axpy(double s, const ScalarField& b, ScalarField& a) {
  auto av = a.values();
  const auto bv = b.values();
  for (std::size_t k = 0; k < av.size(); ++k) av[k] += s * bv[k];
}

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.grid());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] * b[k];
  return out;
}

double interpolate(const ScalarField& f, Vec2 x, int order) {
  const Grid2D& g = f.grid();
  const double h = g.h();
  const int half = std::max(1, order / 2);
  const double fx = (x.x1 + g.L) / h;
  const double fy = (x.x2 + g.L) / h;
  const int i0 = static_cast<int>(std::floor(fx)) - half + 1;
  const int j0 = static_cast<int>(std::floor(fy)) - half + 1;
  const int width = 2 * half;
  if (i0 < 0 || j0 < 0 || i0 + width > g.n || j0 + width > g.n) {
    throw MarginError("interpolate: stencil leaves the grid");
  }
  // Lagrange weights on the nodes i0 .. i0 + width - 1.
  auto weights = [width](double t, int start, double* w) {
    for (int a = 0; a < width; ++a) {
      double num = 1.0;
      double den = 1.0;
      for (int b = 0; b < width; ++b) {
        if (b == a) continue;
        num *= t - (start + b);
        den *= static_cast<double>(a - b);
      }
      w[a] = num / den;
    }
  };
  double wx[16];
  double wy[16];
  weights(fx, i0, wx);
  weights(fy, j0, wy);
  double acc = 0.0;
  for (int b = 0; b < width; ++b) {
    double row = 0.0;
    for (int a = 0; a < width; ++a) row += wx[a] * f(i0 + a, j0 + b);
    acc += wy[b] * row;
  }
  return acc;
}

ScalarField coarsen(const ScalarField& f) {
  const Grid2D& g = f.grid();
  const Grid2D c{g.n / 2, g.L};
  c.validate();
  ScalarField out(c);
  for (int j = 0; j < c.n; ++j) {
    for (int i = 0; i < c.n; ++i) out(i, j) = f(2 * i, 2 * j);
  }
  return out;
}

ScalarField refine(const ScalarField& f) {
  const int n = f.n();
  const Grid2D fine{2 * n, f.grid().L};
  static constexpr double w[6] = {3.0 / 256, -25.0 / 256, 150.0 / 256, 150.0 / 256, -25.0 / 256, 3.0 / 256};
  auto clamp = [n](int k) { return std::clamp(k, 0, n - 1); };
  // Along x1: n rows of 2n values.
  std::vector<double> rows(static_cast<std::size_t>(n) * 2 * n);
  for (int j = 0; j < n; ++j) {
    double* row = rows.data() + static_cast<std::size_t>(j) * 2 * n;
    for (int i = 0; i < n; ++i) {
      row[2 * i] = f(i, j);
      double acc = 0.0;
      for (int a = 0; a < 6; ++a) acc += w[a] * f(clamp(i - 2 + a), j);
      row[2 * i + 1] = acc;
    }
  }
  ScalarField out(fine);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < 2 * n; ++i) {
      out(i, 2 * j) = rows[static_cast<std::size_t>(j) * 2 * n + i];
      double acc = 0.0;
      for (int a = 0; a < 6; ++a) acc += w[a] * rows[static_cast<std::size_t>(clamp(j - 2 + a)) * 2 * n + i];
      out(i, 2 * j + 1) = acc;
    }
  }
  return out;
}

}  // namespace css
