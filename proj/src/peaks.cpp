#include "css_peaks/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "css_peaks/ansatz.hpp"
#include "css_peaks/error.hpp"

namespace css {

namespace {

// Least-squares quadratic c0 + c1 x + c2 y + c3 x² + c4 xy + c5 y² through
// the 3x3 stencil (offsets in cells); returns the stationary offset.
bool refine(const double f[3][3], double& dx, double& dy) {
  double sum = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (int b = -1; b <= 1; ++b) {
    for (int a = -1; a <= 1; ++a) {
      const double v = f[b + 1][a + 1];
      sum += v;
      sx += a * v;
      sy += b * v;
      sxx += a * a * v;
      syy += b * b * v;
      sxy += a * b * v;
    }
  }
  const double c1 = sx / 6.0;
  const double c2 = sy / 6.0;
  const double c4 = sxy / 4.0;
  const double s = 0.5 * (sxx + syy) - 2.0 * sum / 3.0;
  const double d = 0.5 * (sxx - syy);
  const double c3 = 0.5 * (s + d);
  const double c5 = 0.5 * (s - d);
  const double hxx = 2.0 * c3;
  const double hyy = 2.0 * c5;
  const double det = hxx * hyy - c4 * c4;
  if (!(hxx < 0.0) || !(det > 0.0)) return false;
  dx = (-c1 * hyy + c2 * c4) / det;
  dy = (-c2 * hxx + c1 * c4) / det;
  return std::abs(dx) <= 1.0 && std::abs(dy) <= 1.0;
}

}  // namespace

std::vector<Peak> peak_locations(const ScalarField& u) {
  const Grid2D& g = u.grid();
  const int n = g.n;
  double top = -std::numeric_limits<double>::infinity();
  for (double v : u.values()) top = std::max(top, v);
  std::vector<Peak> peaks;
  if (!(top > 0.0)) return peaks;
  const double threshold = 0.5 * top;
  const double h = g.h();
  for (int j = 1; j + 1 < n; ++j) {
    for (int i = 1; i + 1 < n; ++i) {
      const double c = u(i, j);
      if (c <= threshold) continue;
      // Strict against neighbours earlier in scan order, weak against later
      // ones, so a plateau yields exactly one cell.
      bool is_max = true;
      for (int b = -1; b <= 1 && is_max; ++b) {
        for (int a = -1; a <= 1; ++a) {
          if (a == 0 && b == 0) continue;
          const double v = u(i + a, j + b);
          const bool earlier = (b < 0) || (b == 0 && a < 0);
          if (earlier ? v >= c : v > c) {
            is_max = false;
            break;
          }
        }
      }
      if (!is_max) continue;
      // A tie with any neighbour means the maximum is not strict.
      double f[3][3];
      bool flat = false;
      for (int b = -1; b <= 1; ++b) {
        for (int a = -1; a <= 1; ++a) {
          f[b + 1][a + 1] = u(i + a, j + b);
          if ((a != 0 || b != 0) && std::abs(f[b + 1][a + 1] - c) <= 1e-12 * std::abs(c)) flat = true;
        }
      }
      Peak pk;
      pk.value = c;
      pk.position = g.point(i, j);
      double dx = 0.0;
      double dy = 0.0;
      if (!flat && refine(f, dx, dy)) {
        pk.position = pk.position + Vec2{dx * h, dy * h};
      } else {
        pk.low_confidence = true;
      }
      peaks.push_back(pk);
    }
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& a, const Peak& b) { return a.value > b.value; });
  return peaks;
}

std::vector<Vec2> peak_positions(const ScalarField& u) {
  std::vector<Vec2> out;
  for (const Peak& p : peak_locations(u)) out.push_back(p.position);
  return out;
}

std::vector<Vec2> match_to_wells(std::span<const Vec2> points, const PotentialSpec& spec) {
  const auto& wells = spec.wells();
  if (points.size() != wells.size()) {
    throw PreconditionError("match_to_wells: found " + std::to_string(points.size()) +
                            " peaks for " + std::to_string(wells.size()) + " wells");
  }
  std::vector<Vec2> out(wells.size());
  std::vector<bool> point_used(points.size(), false);
  std::vector<bool> well_used(wells.size(), false);
  // Greedy on the globally closest remaining (well, point) pair.
  for (std::size_t round = 0; round < wells.size(); ++round) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bw = 0;
    std::size_t bp = 0;
    for (std::size_t w = 0; w < wells.size(); ++w) {
      if (well_used[w]) continue;
      for (std::size_t q = 0; q < points.size(); ++q) {
        if (point_used[q]) continue;
        const double d = norm(points[q] - wells[w].a);
        if (d < best) {
          best = d;
          bw = w;
          bp = q;
        }
      }
    }
    out[bw] = points[bp];
    well_used[bw] = true;
    point_used[bp] = true;
  }
  return out;
}

RemainderResult remainder_norm(const ScalarField& u, const PotentialSpec& spec,
                               std::span<const RadialProfile> profiles, double eps) {
  const auto found = peak_positions(u);
  if (found.size() != profiles.size()) {
    throw PreconditionError("remainder_norm: " + std::to_string(found.size()) +
                            " peaks extracted but " + std::to_string(profiles.size()) +
                            " profiles given");
  }
  RemainderResult out;
  out.y_fit = match_to_wells(found, spec);
  const ScalarField w = build_ansatz(u.grid(), profiles, out.y_fit, eps);
  out.phi_norm = norm_eps(u - w, spec, eps);
  return out;
}

std::size_t support_sign_changes(const ScalarField& u) {
  const int n = u.n();
  const double top = max_abs(u);
  std::size_t count = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double c = u(i, j);
      if (std::abs(c) <= 1e-12 * top) continue;
      if (c < 0.0) {
        ++count;
        continue;
      }
      const int di[4] = {1, -1, 0, 0};
      const int dj[4] = {0, 0, 1, -1};
      for (int q = 0; q < 4; ++q) {
        const int a = i + di[q];
        const int b = j + dj[q];
        if (a < 0 || b < 0 || a >= n || b >= n) continue;
        if (u(a, b) < -1e-12 * top) {
          ++count;
          break;
        }
      }
    }
  }
  return count;
}

}  // namespace css
