#include <doctest.h>

#include <cmath>

#include "css_peaks/error.hpp"
#include "css_peaks/grid.hpp"
#include "css_peaks/spectral.hpp"

using namespace css;

namespace {

ScalarField gaussian(const Grid2D& g, Vec2 c = {0.0, 0.0}) {
  return sample(g, [c](Vec2 x) {
    const Vec2 d = x - c;
    return std::exp(-0.5 * dot(d, d));
  });
}

}  // namespace

TEST_CASE("grid geometry and validation") {
  const Grid2D g{128, 2.0};
  CHECK(g.h() == doctest::Approx(2.0 * 2.0 / 128));
  CHECK(g.coord(0) == -2.0);
  CHECK(g.coord(64) == doctest::Approx(0.0));
  CHECK_NOTHROW(g.validate());
  CHECK_THROWS_AS((Grid2D{100, 1.0}.validate()), PreconditionError);
  CHECK_THROWS_AS((Grid2D{32, 1.0}.validate()), PreconditionError);
  CHECK_THROWS_AS((Grid2D{64, -1.0}.validate()), PreconditionError);
}

TEST_CASE("row-major storage with x1 fastest") {
  const Grid2D g{64, 1.0};
  ScalarField f(g);
  f(3, 5) = 7.0;
  CHECK(f[5 * 64 + 3] == 7.0);
}

TEST_CASE("constant field has zero gradient") {
  const Grid2D g{64, 1.0};
  const ScalarField c(g, 3.5);
  const auto [gx, gy] = spectral_gradient(c);
  CHECK(max_abs(gx) < 1e-12);
  CHECK(max_abs(gy) < 1e-12);
}

TEST_CASE("Gaussian Laplacian matches the analytic formula") {
  const Grid2D g{256, 8.0};
  const ScalarField f = gaussian(g);
  const ScalarField lap = spectral_laplacian(f);
  double worst = 0.0;
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const Vec2 x = g.point(i, j);
      const double r2 = dot(x, x);
      worst = std::max(worst, std::abs(lap(i, j) - (r2 - 2.0) * std::exp(-0.5 * r2)));
    }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("divergence of the gradient equals the Laplacian") {
  const Grid2D g{256, 8.0};
  const ScalarField f = gaussian(g, {0.3, -0.7});
  const auto [gx, gy] = spectral_gradient(f);
  const ScalarField dxx = spectral_gradient(gx).first;
  const ScalarField dyy = spectral_gradient(gy).second;
  const ScalarField lap = spectral_laplacian(f);
  CHECK(max_abs(dxx + dyy - lap) < 1e-10);
}

TEST_CASE("Dirichlet integral agrees with the gradient quadrature") {
  const Grid2D g{256, 8.0};
  const ScalarField f = gaussian(g, {0.2, 0.1});
  const auto [gx, gy] = spectral_gradient(f);
  const double direct = inner(gx, gx) + inner(gy, gy);
  CHECK(dirichlet_integral(f) == doctest::Approx(direct).epsilon(1e-10));
  CHECK(dirichlet_integral(f) == doctest::Approx(M_PI).epsilon(1e-10));
}

TEST_CASE("screened solve inverts -a Lap + b") {
  const Grid2D g{128, 6.0};
  const ScalarField f = gaussian(g);
  const ScalarField x = solve_screened(f, 0.3, 1.7);
  ScalarField back = spectral_laplacian(x);
  back *= -0.3;
  axpy(1.7, x, back);
  CHECK(max_abs(back - f) < 1e-12);
}

TEST_CASE("interpolation reproduces polynomials of its order") {
  const Grid2D g{64, 1.0};
  const ScalarField bilinear = sample(g, [](Vec2 x) { return 1.0 + 2.0 * x.x1 - x.x2 + 0.5 * x.x1 * x.x2; });
  const ScalarField cubic = sample(g, [](Vec2 x) { return x.x1 * x.x1 * x.x1 - 2.0 * x.x2 * x.x2 * x.x1 + x.x2; });
  const ScalarField quintic = sample(g, [](Vec2 x) { return std::pow(x.x1, 5) + std::pow(x.x1 * x.x2, 2) * x.x2; });
  const Vec2 p{0.1234, -0.3817};
  CHECK(interpolate(bilinear, p, 2) == doctest::Approx(1.0 + 2 * p.x1 - p.x2 + 0.5 * p.x1 * p.x2).epsilon(1e-13));
  CHECK(interpolate(cubic, p, 4) ==
        doctest::Approx(std::pow(p.x1, 3) - 2 * p.x2 * p.x2 * p.x1 + p.x2).epsilon(1e-12));
  CHECK(interpolate(quintic, p, 6) ==
        doctest::Approx(std::pow(p.x1, 5) + std::pow(p.x1 * p.x2, 2) * p.x2).epsilon(1e-11));
  CHECK_THROWS_AS(interpolate(bilinear, {0.999, 0.0}, 6), MarginError);
}

TEST_CASE("weighted inner product and norms") {
  const Grid2D g{64, 1.0};
  const ScalarField one(g, 1.0);
  CHECK(inner(one, one) == doctest::Approx(4.0));
  CHECK(l2_norm(one) == doctest::Approx(2.0));
  ScalarField f(g, 2.0);
  f(1, 1) = -5.0;
  CHECK(max_abs(f) == 5.0);
  CHECK(f.all_finite());
  f(2, 2) = std::nan("");
  CHECK_FALSE(f.all_finite());
}

TEST_CASE("grid transfers: coarsening inverts refinement, refinement is sixth order") {
  const Grid2D g{128, 2.0};
  auto gauss = [](Vec2 x) { return std::exp(-8.0 * dot(x, x)); };
  const ScalarField c = sample(g, gauss);
  const ScalarField f = refine(c);
  CHECK(f.n() == 256);
  CHECK(max_abs(coarsen(f) - c) == 0.0);
  const double e1 = max_abs(f - sample(f.grid(), gauss));
  const ScalarField c2 = sample(Grid2D{256, 2.0}, gauss);
  const double e2 = max_abs(refine(c2) - sample(Grid2D{512, 2.0}, gauss));
  CHECK(e1 < 1e-5);
  CHECK(std::log2(e1 / e2) > 5.5);
  CHECK_THROWS_AS(coarsen(ScalarField(Grid2D{64, 1.0})), PreconditionError);
}
