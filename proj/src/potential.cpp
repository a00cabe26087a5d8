#include "css_peaks/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "css_peaks/error.hpp"

namespace css {

namespace {

// Quintic smoothstep and its derivative on [0, 1].
double blend(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double blend_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}

}  // namespace

PotentialSpec::PotentialSpec(std::vector<Well> wells, double v_inf, double theta)
    : wells_(std::move(wells)), v_inf_(v_inf), theta_(theta) {
  validate();
}

PotentialSpec PotentialSpec::constant(double v) {
  if (!(v > 0.0)) throw PreconditionError("PotentialSpec: constant value must be positive");
  PotentialSpec spec;
  spec.v_inf_ = v;
  return spec;
}

double PotentialSpec::half_min_separation() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < wells_.size(); ++i) {
    for (std::size_t j = i + 1; j < wells_.size(); ++j) {
      best = std::min(best, norm(wells_[i].a - wells_[j].a));
    }
  }
  return 0.5 * best;
}

void PotentialSpec::validate() const {
  auto fail = [](const std::string& what) { throw PreconditionError("PotentialSpec: " + what); };
  if (wells_.empty()) fail("at least one well is required");
  if (!(theta_ > 0.0 && theta_ <= 1.0)) fail("theta must lie in (0, 1]");
  const double r0 = half_min_separation();
  for (std::size_t i = 0; i < wells_.size(); ++i) {
    const Well& w = wells_[i];
    std::ostringstream tag;
    tag << "well " << i << ": ";
    if (!(w.v_at_a > 0.0)) fail(tag.str() + "v_at_a must be positive");
    if (!(w.v_at_a < v_inf_)) fail(tag.str() + "v_at_a must be below v_inf");
    if (!(w.b.x1 > 0.0 && w.b.x2 > 0.0)) fail(tag.str() + "b coefficients must be positive");
    if (!(w.m > 1.0)) fail(tag.str() + "m must exceed 1");
    if (!(w.eta > 0.0)) fail(tag.str() + "eta must be positive");
    if (!(w.eta < r0)) fail(tag.str() + "eta must be below half the inter-well distance");
    // Upper bound of the polynomial on B_eta: keeps sup V <= v_inf.
    const double peak = w.v_at_a + (w.b.x1 + w.b.x2) * std::pow(w.eta, w.m);
    if (peak > v_inf_) fail(tag.str() + "well polynomial exceeds v_inf inside the well radius");
  }
}

double PotentialSpec::well_polynomial(std::size_t i, Vec2 x) const {
  const Well& w = wells_[i];
  return w.v_at_a + w.b.x1 * std::pow(std::abs(x.x1 - w.a.x1), w.m) +
         w.b.x2 * std::pow(std::abs(x.x2 - w.a.x2), w.m);
}

double PotentialSpec::value(Vec2 x) const {
  for (std::size_t i = 0; i < wells_.size(); ++i) {
    const Well& w = wells_[i];
    const double r = norm(x - w.a);
    if (r >= w.eta) continue;
    const double poly = well_polynomial(i, x);
    const double half = 0.5 * w.eta;
    if (r <= half) return poly;
    const double s = blend((r - half) / half);
    return (1.0 - s) * poly + s * v_inf_;
  }
  return v_inf_;
}

Vec2 PotentialSpec::gradient(Vec2 x) const {
  for (std::size_t i = 0; i < wells_.size(); ++i) {
    const Well& w = wells_[i];
    const Vec2 d = x - w.a;
    const double r = norm(d);
    if (r >= w.eta) continue;
    auto axis = [&](double dj, double bj) {
      if (dj == 0.0) return 0.0;
      return w.m * bj * std::pow(std::abs(dj), w.m - 1.0) * (dj > 0.0 ? 1.0 : -1.0);
    };
    const Vec2 grad_poly{axis(d.x1, w.b.x1), axis(d.x2, w.b.x2)};
    const double half = 0.5 * w.eta;
    if (r <= half) return grad_poly;
    const double t = (r - half) / half;
    const double s = blend(t);
    const double ds = blend_derivative(t) / half;
    const double poly = well_polynomial(i, x);
    return (1.0 - s) * grad_poly + (ds * (v_inf_ - poly) / r) * d;
  }
  return {0.0, 0.0};
}

double eval_potential(const PotentialSpec& spec, Vec2 x) { return spec.value(x); }
Vec2 grad_potential(const PotentialSpec& spec, Vec2 x) { return spec.gradient(x); }

}  // namespace css
