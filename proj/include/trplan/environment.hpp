#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "trplan/errors.hpp"
#include "trplan/geometry.hpp"
#include "trplan/gmdm.hpp"

namespace trplan {

struct Bounds {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

using Polygon = std::vector<Vec2>;

struct Segment {
  Vec2 a;
  Vec2 b;
};

namespace detail {

inline int orientation(Vec2 a, Vec2 b, Vec2 c) noexcept {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

inline bool on_segment(Vec2 p, const Segment& s, double eps) noexcept {
  const Vec2 e = s.b - s.a;
  const double len2 = dot(e, e);
  const double t = len2 > 0.0 ? std::clamp(dot(p - s.a, e) / len2, 0.0, 1.0) : 0.0;
  return norm(p - (s.a + t * e)) <= eps;
}

inline bool segments_touch(const Segment& s, const Segment& t) noexcept {
  const int o1 = orientation(s.a, s.b, t.a);
  const int o2 = orientation(s.a, s.b, t.b);
  const int o3 = orientation(t.a, t.b, s.a);
  const int o4 = orientation(t.a, t.b, s.b);
  if (o1 != o2 && o3 != o4) return true;
  return (o1 == 0 && on_segment(t.a, s, 0.0)) || (o2 == 0 && on_segment(t.b, s, 0.0)) ||
         (o3 == 0 && on_segment(s.a, t, 0.0)) || (o4 == 0 && on_segment(s.b, t, 0.0));
}

inline bool is_simple(const Polygon& poly) noexcept {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Segment ei{poly[i], poly[(i + 1) % n]};
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_touch(ei, {poly[j], poly[(j + 1) % n]})) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Rectangular region with polygonal obstacles. Obstacle interiors and their
/// boundaries, along with the outer boundary itself, are not free. Immutable
/// after construction.
class Workspace {
 public:
  static constexpr double kBoundaryEps = 1e-12;
  static constexpr double kDefaultStep = 0.05;

  Workspace() = default;

  Workspace(Bounds bounds, std::vector<Polygon> obstacles)
      : bounds_(bounds), obstacles_(std::move(obstacles)) {
    if (!(bounds_.xmax > bounds_.xmin && bounds_.ymax > bounds_.ymin)) {
      throw ValidationError("workspace.bounds", "empty or inverted rectangle");
    }
    for (std::size_t i = 0; i < obstacles_.size(); ++i) {
      const Polygon& poly = obstacles_[i];
      const std::string field = "workspace.obstacles[" + std::to_string(i) + "]";
      if (poly.size() < 3) throw ValidationError(field, "polygon needs at least 3 vertices");
      for (Vec2 v : poly) {
        if (!std::isfinite(v.x) || !std::isfinite(v.y) || v.x < bounds_.xmin ||
            v.x > bounds_.xmax || v.y < bounds_.ymin || v.y > bounds_.ymax) {
          throw ValidationError(field, "vertex outside workspace bounds");
        }
      }
      if (!detail::is_simple(poly)) throw ValidationError(field, "polygon is self-intersecting");
    }
    build_index();
  }

  [[nodiscard]] const Bounds& bounds() const noexcept { return bounds_; }
  [[nodiscard]] const std::vector<Polygon>& obstacles() const noexcept { return obstacles_; }

  /// Obstacle edges followed by the four boundary edges.
  [[nodiscard]] const std::vector<Segment>& edges() const noexcept { return edges_; }

  [[nodiscard]] bool is_free(double x, double y) const noexcept {
    if (!(x > bounds_.xmin && x < bounds_.xmax && y > bounds_.ymin && y < bounds_.ymax)) {
      return false;
    }
    const Vec2 p{x, y};
    for (std::size_t i = 0; i < obstacles_.size(); ++i) {
      const Bounds& box = boxes_[i];
      if (x < box.xmin - kBoundaryEps || x > box.xmax + kBoundaryEps ||
          y < box.ymin - kBoundaryEps || y > box.ymax + kBoundaryEps) {
        continue;
      }
      if (inside_or_on(obstacles_[i], p)) return false;
    }
    return true;
  }

  [[nodiscard]] bool is_free(Vec2 p) const noexcept { return is_free(p.x, p.y); }

  /// Distance along the heading to the first obstacle edge or boundary wall.
  [[nodiscard]] double collision_distance(const Pose& p) const {
    if (!is_free(p.x, p.y)) throw InsideObstacle("ray origin is not in free space");
    const Vec2 origin = p.position();
    const Vec2 dir = unit(p.theta);
    double best = std::numeric_limits<double>::infinity();
    for (const Segment& s : edges_) {
      const Vec2 e = s.b - s.a;
      const double denom = cross(dir, e);
      if (denom == 0.0) continue;  // parallel; collinear hits land on a neighbouring edge
      const Vec2 w = s.a - origin;
      const double t = cross(w, e) / denom;
      const double u = cross(w, dir) / denom;
      if (t > 0.0 && u >= 0.0 && u <= 1.0) best = std::min(best, t);
    }
    return best;
  }

  /// Checks the points at arc lengths 0, step, 2·step, ... and the endpoint.
  [[nodiscard]] bool trajectory_is_free(const GmdmPath& path, double step = kDefaultStep) const {
    if (!(step > 0.0)) throw BadCount("collision-check step must be positive");
    Pose origin = path.start.pose;
    double seg_begin = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      const MotionPrimitive& m = path.segments[i];
      const double seg_end = seg_begin + m.length();
      for (double s = static_cast<double>(k) * step; s <= seg_end;
           s = static_cast<double>(++k) * step) {
        const Pose q = advance(origin, m, s - seg_begin);
        if (!is_free(q.x, q.y)) return false;
      }
      origin = apply_primitive(origin, m);
      seg_begin = seg_end;
    }
    return is_free(path.end.pose.x, path.end.pose.y);
  }

 private:
  void build_index() {
    edges_.clear();
    boxes_.clear();
    for (const Polygon& poly : obstacles_) {
      Bounds box{poly[0].x, poly[0].y, poly[0].x, poly[0].y};
      for (std::size_t i = 0; i < poly.size(); ++i) {
        edges_.push_back({poly[i], poly[(i + 1) % poly.size()]});
        box.xmin = std::min(box.xmin, poly[i].x);
        box.ymin = std::min(box.ymin, poly[i].y);
        box.xmax = std::max(box.xmax, poly[i].x);
        box.ymax = std::max(box.ymax, poly[i].y);
      }
      boxes_.push_back(box);
    }
    const Vec2 c00{bounds_.xmin, bounds_.ymin};
    const Vec2 c10{bounds_.xmax, bounds_.ymin};
    const Vec2 c11{bounds_.xmax, bounds_.ymax};
    const Vec2 c01{bounds_.xmin, bounds_.ymax};
    edges_.push_back({c00, c10});
    edges_.push_back({c10, c11});
    edges_.push_back({c11, c01});
    edges_.push_back({c01, c00});
  }

  // Even-odd crossing test; points on an edge count as inside.
  static bool inside_or_on(const Polygon& poly, Vec2 p) noexcept {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
      const Vec2 a = poly[j];
      const Vec2 b = poly[i];
      if (detail::on_segment(p, {a, b}, kBoundaryEps)) return true;
      if ((a.y > p.y) != (b.y > p.y)) {
        const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
        if (x_cross > p.x) inside = !inside;
      }
    }
    return inside;
  }

  Bounds bounds_{};
  std::vector<Polygon> obstacles_;
  std::vector<Segment> edges_;
  std::vector<Bounds> boxes_;
};

/// Convenience for the common axis-aligned rectangular obstacle.
inline Polygon rectangle(double x0, double y0, double x1, double y1) {
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

}  // namespace trplan
