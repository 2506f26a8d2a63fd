#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "epkit/locator.hpp"
#include "epkit/types.hpp"

namespace epk {

/// Closed curve in the parameter plane: either a polyline through `vertices`
/// (implicitly closed) or a circle. Traversal is parametrized by t in [0, 1)
/// starting at the first vertex (circle: angle 0) with the stated
/// orientation; `cycles` full traversals are tracked.
struct ParameterLoop {
  struct Circle {
    Params center;
    double radius = 0.0;
  };

  std::vector<Params> vertices;  // polyline form; empty when circle is set
  std::optional<Circle> circle;
  int samples_per_segment = 256;
  bool positive_orientation = true;
  int cycles = 1;

  void validate() const {
    if (circle && !vertices.empty())
      throw Error(ErrorKind::InvalidInput, "ParameterLoop: give either vertices or a circle");
    if (circle) {
      if (!(circle->radius > 0.0))
        throw Error(ErrorKind::InvalidInput, "ParameterLoop: circle radius must be positive");
      require_finite_params(circle->center, "ParameterLoop");
    } else {
      if (vertices.size() < 3)
        throw Error(ErrorKind::InvalidInput, "ParameterLoop: polyline needs at least 3 vertices");
      for (const Params& v : vertices) require_finite_params(v, "ParameterLoop");
    }
    if (samples_per_segment < 1)
      throw Error(ErrorKind::InvalidInput, "ParameterLoop: samples_per_segment must be positive");
    if (cycles < 1)
      throw Error(ErrorKind::InvalidInput, "ParameterLoop: cycles must be positive");
  }

  int segment_count() const { return circle ? 1 : static_cast<int>(vertices.size()); }

  /// Point at loop coordinate t (any real; wrapped into [0, 1)).
  Params point_at(double t) const {
    t -= std::floor(t);
    if (!positive_orientation && t > 0.0) t = 1.0 - t;
    if (circle) {
      constexpr double two_pi = 6.28318530717958647692;
      const double angle = two_pi * t;
      return {circle->center.alpha + circle->radius * std::cos(angle),
              circle->center.beta + circle->radius * std::sin(angle)};
    }
    const double scaled = t * static_cast<double>(vertices.size());
    const int seg = std::min(static_cast<int>(scaled), static_cast<int>(vertices.size()) - 1);
    const double local = scaled - seg;
    const Params& a = vertices[seg];
    const Params& b = vertices[(seg + 1) % vertices.size()];
    return {a.alpha + (b.alpha - a.alpha) * local, a.beta + (b.beta - a.beta) * local};
  }

  Params base_point() const { return point_at(0.0); }

  /// Axis-aligned bounding box as a (grid-less) region.
  Region bounding_box() const {
    Region r;
    if (circle) {
      r.alpha_min = circle->center.alpha - circle->radius;
      r.alpha_max = circle->center.alpha + circle->radius;
      r.beta_min = circle->center.beta - circle->radius;
      r.beta_max = circle->center.beta + circle->radius;
      return r;
    }
    r.alpha_min = r.alpha_max = vertices[0].alpha;
    r.beta_min = r.beta_max = vertices[0].beta;
    for (const Params& v : vertices) {
      r.alpha_min = std::min(r.alpha_min, v.alpha);
      r.alpha_max = std::max(r.alpha_max, v.alpha);
      r.beta_min = std::min(r.beta_min, v.beta);
      r.beta_max = std::max(r.beta_max, v.beta);
    }
    return r;
  }

  /// Geometric distance from a point to the curve.
  double distance_to(Params p) const {
    if (circle) return std::abs(distance(p, circle->center) - circle->radius);
    double best = std::numeric_limits<double>::infinity();
    const size_t k = vertices.size();
    for (size_t s = 0; s < k; ++s) {
      const Params& a = vertices[s];
      const Params& b = vertices[(s + 1) % k];
      const double dx = b.alpha - a.alpha, dy = b.beta - a.beta;
      const double len2 = dx * dx + dy * dy;
      double u = 0.0;
      if (len2 > 0.0)
        u = std::clamp(((p.alpha - a.alpha) * dx + (p.beta - a.beta) * dy) / len2, 0.0, 1.0);
      best = std::min(best, std::hypot(p.alpha - (a.alpha + u * dx), p.beta - (a.beta + u * dy)));
    }
    return best;
  }
};

/// Convenience constructors.
inline ParameterLoop circle_loop(Params center, double radius, int samples = 256, int cycles = 1,
                                 bool positive = true) {
  ParameterLoop loop;
  loop.circle = ParameterLoop::Circle{center, radius};
  loop.samples_per_segment = samples;
  loop.cycles = cycles;
  loop.positive_orientation = positive;
  return loop;
}

inline ParameterLoop rectangle_loop(double a0, double b0, double a1, double b1, int samples = 256,
                                    int cycles = 1, bool positive = true) {
  ParameterLoop loop;
  loop.vertices = {{a0, b0}, {a1, b0}, {a1, b1}, {a0, b1}};
  loop.samples_per_segment = samples;
  loop.cycles = cycles;
  loop.positive_orientation = positive;
  return loop;
}

}  // namespace epk
