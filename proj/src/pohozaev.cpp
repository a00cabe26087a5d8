#include "css_peaks/pohozaev.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <json.hpp>

#include "css_peaks/error.hpp"
#include "css_peaks/spectral.hpp"
#include "json_io.hpp"

namespace css {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

}  // namespace

PohozaevReport pohozaev_check(const ScalarField& u, const GaugeFields& gf, const Model& model,
                              Vec2 center, double d, int k, const PohozaevOptions& opts) {
  if (k != 1 && k != 2) throw PreconditionError("pohozaev_check: k must be 1 or 2");
  if (!(d > 0.0)) throw PreconditionError("pohozaev_check: radius must be positive");
  if (opts.m_quad < 8) throw PreconditionError("pohozaev_check: m_quad must be at least 8");
  const Grid2D& g = u.grid();
  const PotentialSpec& spec = model.potential();
  const double r0 = spec.half_min_separation();
  if (std::isfinite(r0) && !(d < r0)) {
    throw MarginError("pohozaev_check: radius exceeds half the inter-well distance");
  }
  const double margin = (opts.interp_order + 2) * g.h();
  const double lo = -g.L + margin;
  const double hi = g.L - g.h() - margin;
  if (center.x1 - d < lo || center.x1 + d > hi || center.x2 - d < lo || center.x2 + d > hi) {
    throw MarginError("pohozaev_check: ball leaves the grid interior");
  }

  const double eps2 = model.eps() * model.eps();
  const double p = model.p();
  const auto [ux, uy] = spectral_gradient(u);
  const int order = opts.interp_order;
  auto dV = [&](Vec2 x) { return k == 1 ? spec.gradient(x).x1 : spec.gradient(x).x2; };

  PohozaevReport rep;
  rep.center = center;
  rep.d = d;
  rep.k = k;

  if (opts.volume == VolumeQuadrature::Sharp) {
    double acc = 0.0;
    for (int j = 0; j < g.n; ++j) {
      for (int i = 0; i < g.n; ++i) {
        const Vec2 x = g.point(i, j);
        if (norm(x - center) < d) acc += dV(x) * u(i, j) * u(i, j);
      }
    }
    rep.lhs = 0.5 * acc * g.cell_area();
  } else {
    const int nr = std::max(16, static_cast<int>(std::ceil(2.0 * d / g.h())));
    std::vector<double> gx;
    std::vector<double> gw;
    gauss_legendre(nr, gx, gw);
    double acc = 0.0;
    for (int a = 0; a < nr; ++a) {
      const double r = 0.5 * d * (gx[a] + 1.0);
      const double wr = 0.5 * d * gw[a] * r;
      double ring = 0.0;
      for (int q = 0; q < opts.m_quad; ++q) {
        const double th = 2.0 * std::numbers::pi * q / opts.m_quad;
        const Vec2 x = center + Vec2{r * std::cos(th), r * std::sin(th)};
        const double uv = interpolate(u, x, order);
        ring += dV(x) * uv * uv;
      }
      acc += wr * ring * 2.0 * std::numbers::pi / opts.m_quad;
    }
    rep.lhs = 0.5 * acc;
  }

  std::array<double, 5> t{};
  const double ds = 2.0 * std::numbers::pi * d / opts.m_quad;
  for (int q = 0; q < opts.m_quad; ++q) {
    const double th = 2.0 * std::numbers::pi * q / opts.m_quad;
    const Vec2 nu{std::cos(th), std::sin(th)};
    const Vec2 x = center + d * nu;
    const double uv = interpolate(u, x, order);
    const double g1 = interpolate(ux, x, order);
    const double g2 = interpolate(uy, x, order);
    const double a0 = interpolate(gf.a0, x, order);
    const double a1 = interpolate(gf.a1, x, order);
    const double a2 = interpolate(gf.a2, x, order);
    const double v = spec.value(x);
    const double nk = k == 1 ? nu.x1 : nu.x2;
    const double gk = k == 1 ? g1 : g2;
    const double ak = k == 1 ? a1 : a2;
    const double u2 = uv * uv;
    t[0] += 0.5 * (eps2 * (g1 * g1 + g2 * g2) + v * u2) * nk;
    t[1] += -eps2 * (g1 * nu.x1 + g2 * nu.x2) * gk;
    t[2] += -std::pow(std::abs(uv), p) * nk / p;
    t[3] += -(a1 * nu.x1 + a2 * nu.x2) * ak * u2;
    t[4] += 0.5 * (a0 + a1 * a1 + a2 * a2) * u2 * nk;
  }
  for (double& term : t) term *= ds;
  rep.rhs_terms = t;
  rep.rhs = t[0] + t[1] + t[2] + t[3] + t[4];
  rep.abs_residual = std::abs(rep.lhs - rep.rhs);
  rep.rel_residual = rep.abs_residual / (std::abs(rep.lhs) + std::abs(rep.rhs) + opts.floor);
  return rep;
}

double tangency_residual(const ScalarField& u, const GaugeFields& gf, double floor) {
  const auto [ux, uy] = spectral_gradient(u);
  double num = 0.0;
  double a2 = 0.0;
  double g2 = 0.0;
  for (std::size_t q = 0; q < u.size(); ++q) {
    const double t = gf.a1[q] * ux[q] + gf.a2[q] * uy[q];
    num += t * t;
    a2 += gf.a1[q] * gf.a1[q] + gf.a2[q] * gf.a2[q];
    g2 += ux[q] * ux[q] + uy[q] * uy[q];
  }
  const double area = u.grid().cell_area();
  return std::sqrt(num * area) / (std::sqrt(a2 * area) * std::sqrt(g2 * area) + floor);
}

std::string to_json(const PohozaevReport& r) {
  nlohmann::ordered_json j;
  j["center"] = {r.center.x1, r.center.x2};
  j["d"] = r.d;
  j["k"] = r.k;
  j["lhs"] = r.lhs;
  j["rhs_terms"] = {{"flux", r.rhs_terms[0]},
                    {"normal_derivative", r.rhs_terms[1]},
                    {"nonlinear", r.rhs_terms[2]},
                    {"gauge_cross", r.rhs_terms[3]},
                    {"gauge_diagonal", r.rhs_terms[4]}};
  j["rhs"] = r.rhs;
  j["abs_residual"] = r.abs_residual;
  j["rel_residual"] = r.rel_residual;
  return dump_json(j);
}

}  // namespace css
