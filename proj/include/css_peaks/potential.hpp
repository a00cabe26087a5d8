#pragma once

#include <vector>

#include "css_peaks/vec2.hpp"

namespace css {

// One local minimum a of V with expansion
//   V(x) = v_at_a + b1 |x1 - a1|^m + b2 |x2 - a2|^m   on B_{eta/2}(a),
// blended to the background value over eta/2 <= |x - a| <= eta.
struct Well {
  Vec2 a;
  double v_at_a = 1.0;
  Vec2 b{1.0, 1.0};
  double m = 2.0;
  double eta = 0.5;
};

class PotentialSpec {
 public:
  PotentialSpec() = default;
  PotentialSpec(std::vector<Well> wells, double v_inf, double theta = 1.0);

  /// V identically equal to `v` (no wells); used for control experiments.
  static PotentialSpec constant(double v);

  /// Throws PreconditionError on overlapping wells, v_at_a >= v_inf,
  /// non-positive coefficients, or a well polynomial exceeding v_inf.
  void validate() const;

  double value(Vec2 x) const;
  Vec2 gradient(Vec2 x) const;

  /// The exact well polynomial of well i (no blending).
  double well_polynomial(std::size_t i, Vec2 x) const;

  const std::vector<Well>& wells() const { return wells_; }
  double v_inf() const { return v_inf_; }
  double theta() const { return theta_; }
  std::size_t size() const { return wells_.size(); }

  /// R0 = half the smallest inter-well distance (infinite for one well).
  double half_min_separation() const;

 private:
  std::vector<Well> wells_;
  double v_inf_ = 2.0;
  double theta_ = 1.0;
};

double eval_potential(const PotentialSpec& spec, Vec2 x);
Vec2 grad_potential(const PotentialSpec& spec, Vec2 x);

}  // namespace css
