#include "css_peaks/gauge.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include "css_peaks/error.hpp"

namespace css {

namespace {

constexpr double kFloor = 1e-300;

}  // namespace

FreeSpaceConvolver::FreeSpaceConvolver(const Grid2D& grid)
    : grid_(grid),
      plan_(fft::plan(2 * grid.n)),
      k1_hat_(plan_->spectrum_size()),
      k2_hat_(plan_->spectrum_size()) {
  const int n = grid.n;
  const int m = 2 * n;
  const double h = grid.h();
  const double scale = h * h / (static_cast<double>(m) * static_cast<double>(m));
  fft::RealBuffer k1(plan_->real_size());
  fft::RealBuffer k2(plan_->real_size());
  for (int b = 0; b < m; ++b) {
    const int db = b < n ? b : b - m;
    for (int a = 0; a < m; ++a) {
      const int da = a < n ? a : a - m;
      const std::size_t idx = static_cast<std::size_t>(b) * m + a;
      if ((da == 0 && db == 0) || a == n || b == n) {
        k1[idx] = 0.0;
        k2[idx] = 0.0;
        continue;
      }
      const double d1 = da * h;
      const double d2 = db * h;
      const double r2 = d1 * d1 + d2 * d2;
      k1[idx] = -d1 / (2.0 * std::numbers::pi * r2) * scale;
      k2[idx] = -d2 / (2.0 * std::numbers::pi * r2) * scale;
    }
  }
  plan_->forward(k1, k1_hat_);
  plan_->forward(k2, k2_hat_);

  // The omitted central cell carries -∫_cell K_i(d) (d·∇g) dd = (h²/4π) ∂_i g.
  // Adding that derivative term spectrally lifts the local error from O(h²)
  // to O(h⁴); it is antisymmetric like K_i, so the convolution stays odd.
  const double period = m * h;
  const double weight = h * h / (4.0 * std::numbers::pi) / (static_cast<double>(m) * m);
  const int half = m / 2 + 1;
  for (int b = 0; b < m; ++b) {
    const double kb = (b == m / 2) ? 0.0 : fft::wavenumber(b, m, period);
    for (int a = 0; a < half; ++a) {
      const double ka = (a == m / 2) ? 0.0 : fft::wavenumber(a, m, period);
      const std::size_t idx = static_cast<std::size_t>(b) * half + a;
      k1_hat_[idx] += fft::Complex(0.0, weight * ka);
      k2_hat_[idx] += fft::Complex(0.0, weight * kb);
    }
  }
}

std::shared_ptr<const FreeSpaceConvolver> FreeSpaceConvolver::for_grid(const Grid2D& grid) {
  static std::mutex mutex;
  static std::map<std::pair<int, double>, std::shared_ptr<const FreeSpaceConvolver>> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_pair(grid.n, grid.L);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto created = std::make_shared<const FreeSpaceConvolver>(grid);
  cache.emplace(key, created);
  return created;
}

FreeSpaceConvolver::Spectrum FreeSpaceConvolver::transform(const ScalarField& f) const {
  const int n = grid_.n;
  const int m = 2 * n;
  fft::RealBuffer padded(plan_->real_size());
  std::memset(padded.data(), 0, sizeof(double) * padded.size());
  const auto src = f.values();
  for (int j = 0; j < n; ++j) {
    std::memcpy(padded.data() + static_cast<std::size_t>(j) * m,
                src.data() + static_cast<std::size_t>(j) * n, sizeof(double) * n);
  }
  Spectrum out{fft::ComplexBuffer(plan_->spectrum_size())};
  plan_->forward(padded, out.data);
  return out;
}

ScalarField FreeSpaceConvolver::combine(std::initializer_list<Term> terms) const {
  fft::ComplexBuffer acc(plan_->spectrum_size());
  const std::size_t count = acc.size();
  for (std::size_t k = 0; k < count; ++k) acc[k] = 0.0;
  for (const Term& t : terms) {
    const auto& kh = (t.kernel == Kernel::K1) ? k1_hat_ : k2_hat_;
    const auto& src = t.source->data;
    for (std::size_t k = 0; k < count; ++k) acc[k] += t.coefficient * kh[k] * src[k];
  }
  fft::RealBuffer out(plan_->real_size());
  plan_->inverse(acc, out);
  const int n = grid_.n;
  const int m = 2 * n;
  ScalarField result(grid_);
  auto dst = result.values();
  for (int j = 0; j < n; ++j) {
    std::memcpy(dst.data() + static_cast<std::size_t>(j) * n,
                out.data() + static_cast<std::size_t>(j) * m, sizeof(double) * n);
  }
  return result;
}

ScalarField FreeSpaceConvolver::convolve(const ScalarField& f, Kernel kernel) const {
  const Spectrum s = transform(f);
  return combine({{&s, kernel, 1.0}});
}

GaugeFields compute_gauge(const ScalarField& u) {
  const auto conv = FreeSpaceConvolver::for_grid(u.grid());
  const ScalarField rho = multiply(u, u);
  const auto rho_hat = conv->transform(rho);
  GaugeFields gf;
  gf.a1 = conv->combine({{&rho_hat, Kernel::K2, 0.5}});
  gf.a2 = conv->combine({{&rho_hat, Kernel::K1, -0.5}});
  const auto s2 = conv->transform(multiply(gf.a2, rho));
  const auto s1 = conv->transform(multiply(gf.a1, rho));
  gf.a0 = conv->combine({{&s2, Kernel::K1, 1.0}, {&s1, Kernel::K2, -1.0}});
  return gf;
}

GaugeVariation gauge_variation(const ScalarField& u, const ScalarField& v, const GaugeFields& gf) {
  const auto conv = FreeSpaceConvolver::for_grid(u.grid());
  const ScalarField sigma = multiply(u, v);
  const auto sigma_hat = conv->transform(sigma);
  GaugeVariation dv;
  dv.da1 = conv->combine({{&sigma_hat, Kernel::K2, 1.0}});
  dv.da2 = conv->combine({{&sigma_hat, Kernel::K1, -1.0}});
  ScalarField src2(u.grid());
  ScalarField src1(u.grid());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double rho = u[k] * u[k];
    src2[k] = dv.da2[k] * rho + 2.0 * gf.a2[k] * sigma[k];
    src1[k] = dv.da1[k] * rho + 2.0 * gf.a1[k] * sigma[k];
  }
  const auto s2 = conv->transform(src2);
  const auto s1 = conv->transform(src1);
  dv.da0 = conv->combine({{&s2, Kernel::K1, 1.0}, {&s1, Kernel::K2, -1.0}});
  return dv;
}

ScalarField fd_derivative(const ScalarField& f, int axis) {
  const int n = f.n();
  const double h = f.grid().h();
  ScalarField out(f.grid());
  auto at = [&](int i, int j, int s) { return axis == 0 ? f(i + s, j) : f(i, j + s); };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int pos = axis == 0 ? i : j;
      const int room = std::min(pos, n - 1 - pos);
      double d = 0.0;
      if (room >= 3) {
        d = (at(i, j, 3) - 9.0 * at(i, j, 2) + 45.0 * at(i, j, 1) - 45.0 * at(i, j, -1) +
             9.0 * at(i, j, -2) - at(i, j, -3)) / (60.0 * h);
      } else if (room == 2) {
        d = (-at(i, j, 2) + 8.0 * at(i, j, 1) - 8.0 * at(i, j, -1) + at(i, j, -2)) / (12.0 * h);
      } else if (room == 1) {
        d = (at(i, j, 1) - at(i, j, -1)) / (2.0 * h);
      } else if (pos == 0) {
        d = (-3.0 * at(i, j, 0) + 4.0 * at(i, j, 1) - at(i, j, 2)) / (2.0 * h);
      } else {
        d = (3.0 * at(i, j, 0) - 4.0 * at(i, j, -1) + at(i, j, -2)) / (2.0 * h);
      }
      out(i, j) = d;
    }
  }
  return out;
}

GaugeResiduals gauge_constraint_residuals(const GaugeFields& gf, const ScalarField& u) {
  const ScalarField d1a1 = fd_derivative(gf.a1, 0);
  const ScalarField d2a1 = fd_derivative(gf.a1, 1);
  const ScalarField d1a2 = fd_derivative(gf.a2, 0);
  const ScalarField d2a2 = fd_derivative(gf.a2, 1);
  const ScalarField d1a0 = fd_derivative(gf.a0, 0);
  const ScalarField d2a0 = fd_derivative(gf.a0, 1);

  const Grid2D& g = u.grid();
  ScalarField curl(g), half_rho(g), div(g), a0x(g), a0y(g), rhs_x(g), rhs_y(g);
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double rho = u[k] * u[k];
    half_rho[k] = 0.5 * rho;
    curl[k] = d1a2[k] - d2a1[k] - half_rho[k];
    div[k] = d1a1[k] + d2a2[k];
    rhs_x[k] = -gf.a2[k] * rho;
    rhs_y[k] = gf.a1[k] * rho;
    a0x[k] = d1a0[k] - rhs_x[k];
    a0y[k] = d2a0[k] - rhs_y[k];
  }
  auto ratio = [](double num, double den) { return den > kFloor ? num / den : num; };
  GaugeResiduals r;
  r.curl_res = ratio(l2_norm(curl), l2_norm(half_rho));
  r.div_res = ratio(l2_norm(div), std::hypot(l2_norm(d1a1), l2_norm(d2a2)));
  r.a0x_res = ratio(l2_norm(a0x), l2_norm(rhs_x));
  r.a0y_res = ratio(l2_norm(a0y), l2_norm(rhs_y));
  return r;
}

}  // namespace css
