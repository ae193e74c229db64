#pragma once

// Multi-speed Dubins steering: each of the three segments of a Dubins word
// carries its own speed, and every arc turns at the maximum turning rate, so
// its radius is speed / u_max.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "trplan/errors.hpp"
#include "trplan/geometry.hpp"

namespace trplan {

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // [0, 2π)

  [[nodiscard]] Vec2 position() const noexcept { return {x, y}; }
  friend bool operator==(const Pose&, const Pose&) = default;
};

inline Pose make_pose(double x, double y, double theta) noexcept {
  return {x, y, normalize_angle(theta)};
}

struct State {
  Pose pose;
  double v = 0.0;

  friend bool operator==(const State&, const State&) = default;
};

struct VehicleLimits {
  double v_min = 0.5;
  double v_max = 1.0;
  double u_max = 0.5;  // rad/s

  [[nodiscard]] double radius_for(double v) const noexcept { return v / u_max; }
  [[nodiscard]] double r_min() const noexcept { return radius_for(v_min); }
  [[nodiscard]] double r_max() const noexcept { return radius_for(v_max); }

  /// Membership of a (curvature, speed) control in the admissible set.
  [[nodiscard]] bool admissible(double kappa, double v) const noexcept {
    return v >= v_min && v <= v_max && std::abs(kappa) <= u_max / v;
  }

  [[nodiscard]] bool valid() const noexcept {
    return v_min > 0.0 && v_max >= v_min && u_max > 0.0 && std::isfinite(v_max) &&
           std::isfinite(u_max);
  }

  friend bool operator==(const VehicleLimits&, const VehicleLimits&) = default;
};

enum class SegmentKind : std::uint8_t { S, L, R };

/// +1 for a left turn, -1 for a right turn, 0 for straight.
inline constexpr int turn_sign(SegmentKind k) noexcept {
  return k == SegmentKind::L ? 1 : (k == SegmentKind::R ? -1 : 0);
}

struct MotionPrimitive {
  SegmentKind kind = SegmentKind::S;
  double sigma = 0.0;   // distance for S, rotation in [0, 2π) for L/R
  double speed = 0.0;
  double radius = 0.0;  // L/R only

  [[nodiscard]] double length() const noexcept {
    return kind == SegmentKind::S ? sigma : radius * sigma;
  }
  [[nodiscard]] double duration() const noexcept { return length() / speed; }

  friend bool operator==(const MotionPrimitive&, const MotionPrimitive&) = default;
};

namespace detail {

/// Straight move by `amount` metres, or an arc of rotation `amount` radians.
inline Pose move(const Pose& p, SegmentKind kind, double radius, double amount) noexcept {
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  switch (kind) {
    case SegmentKind::S:
      return make_pose(p.x + amount * c, p.y + amount * s, p.theta);
    case SegmentKind::L:
      return make_pose(p.x - radius * s + radius * std::sin(p.theta + amount),
                       p.y + radius * c - radius * std::cos(p.theta + amount), p.theta + amount);
    case SegmentKind::R:
      return make_pose(p.x + radius * s - radius * std::sin(p.theta - amount),
                       p.y - radius * c + radius * std::cos(p.theta - amount), p.theta - amount);
  }
  return p;
}

}  // namespace detail

inline Pose apply_primitive(const Pose& p, const MotionPrimitive& m) noexcept {
  return detail::move(p, m.kind, m.radius, m.sigma);
}

/// Pose reached after travelling `distance` metres along primitive `m`.
inline Pose advance(const Pose& p, const MotionPrimitive& m, double distance) noexcept {
  if (m.kind == SegmentKind::S) return detail::move(p, m.kind, 0.0, distance);
  return detail::move(p, m.kind, m.radius, distance / m.radius);
}

enum class PathType : std::uint8_t { LSL, LSR, RSL, RSR, LRL, RLR };

/// Canonical order; also the tie-break order among equal-cost candidates.
inline constexpr std::array<PathType, 6> kPathTypes = {PathType::LSL, PathType::LSR,
                                                       PathType::RSL, PathType::RSR,
                                                       PathType::LRL, PathType::RLR};

inline constexpr std::array<SegmentKind, 3> segment_kinds(PathType t) noexcept {
  using K = SegmentKind;
  switch (t) {
    case PathType::LSL: return {K::L, K::S, K::L};
    case PathType::LSR: return {K::L, K::S, K::R};
    case PathType::RSL: return {K::R, K::S, K::L};
    case PathType::RSR: return {K::R, K::S, K::R};
    case PathType::LRL: return {K::L, K::R, K::L};
    case PathType::RLR: return {K::R, K::L, K::R};
  }
  return {K::S, K::S, K::S};
}

inline constexpr bool is_csc(PathType t) noexcept {
  return t != PathType::LRL && t != PathType::RLR;
}

inline constexpr std::string_view to_string(PathType t) noexcept {
  constexpr std::array<std::string_view, 6> names = {"LSL", "LSR", "RSL", "RSR", "LRL", "RLR"};
  return names[static_cast<std::size_t>(t)];
}

/// (σ1, σ2, σ3): rotation or distance of each segment in type order.
using SegmentParams = std::array<double, 3>;

namespace detail {

inline constexpr double kFullTurnSnap = 1e-10;
inline constexpr double kGeomEps = 1e-12;

/// Arc rotation in [0, 2π); a rotation within round-off of a full turn is 0.
inline double arc_rotation(double a) noexcept {
  const double r = normalize_angle(a);
  return r > kTwoPi - kFullTurnSnap ? 0.0 : r;
}

/// Rotation needed to turn from heading `from` to heading `to` in direction `sign`.
inline double turn_between(int sign, double from, double to) noexcept {
  return arc_rotation(sign > 0 ? to - from : from - to);
}

inline Vec2 turn_center(const Pose& p, int sign, double radius) noexcept {
  return p.position() + (sign * radius) * left_normal(unit(p.theta));
}

}  // namespace detail

/// Curve-straight-curve connection between circles of radius r1 (about the
/// start) and r3 (about the end). Same-direction words use the outer tangent,
/// mixed words the inner tangent, which needs center distance ≥ r1 + r3.
inline std::optional<SegmentParams> solve_csc(const Pose& start, const Pose& end, PathType type,
                                              double r1, double r3) {
  const auto kinds = segment_kinds(type);
  if (!is_csc(type)) return std::nullopt;
  const int s1 = turn_sign(kinds[0]);
  const int s3 = turn_sign(kinds[2]);
  const Vec2 c1 = detail::turn_center(start, s1, r1);
  const Vec2 c3 = detail::turn_center(end, s3, r3);

  // With u the straight-line direction, c3 - c1 = d·u + a·left(u).
  const Vec2 delta = c3 - c1;
  const double a = s3 * r3 - s1 * r1;
  const double dist2 = dot(delta, delta);
  const double slack = detail::kGeomEps * std::max(1.0, a * a);
  if (dist2 < a * a - slack) return std::nullopt;
  const double straight = std::sqrt(std::max(0.0, dist2 - a * a));

  double heading = 0.0;
  if (dist2 < detail::kGeomEps * detail::kGeomEps && std::abs(a) < detail::kGeomEps) {
    heading = start.theta;  // coincident circles of equal radius: skip the first arc
  } else {
    heading = heading_of(delta) - std::atan2(a, straight);
  }
  return SegmentParams{detail::turn_between(s1, start.theta, heading), straight,
                       detail::turn_between(s3, heading, end.theta)};
}

/// Curve-curve-curve connection. The middle circle (radius r2) touches both
/// end circles; zero, one or two placements exist and all are returned.
inline std::vector<SegmentParams> solve_ccc(const Pose& start, const Pose& end, PathType type,
                                            double r1, double r2, double r3) {
  std::vector<SegmentParams> out;
  if (is_csc(type)) return out;
  const int s1 = turn_sign(segment_kinds(type)[0]);
  const int s2 = -s1;
  const Vec2 c1 = detail::turn_center(start, s1, r1);
  const Vec2 c3 = detail::turn_center(end, s1, r3);
  const double reach1 = r1 + r2;
  const double reach3 = r2 + r3;
  const Vec2 delta = c3 - c1;
  const double d = norm(delta);

  auto emit = [&](Vec2 c2) {
    const double h1 = heading_of(c2 - c1) + s1 * (kPi / 2);
    const double h2 = heading_of(c3 - c2) + s2 * (kPi / 2);
    out.push_back({detail::turn_between(s1, start.theta, h1), detail::turn_between(s2, h1, h2),
                   detail::turn_between(s1, h2, end.theta)});
  };

  const double scale = std::max(1.0, reach1 + reach3);
  if (d < detail::kGeomEps * scale) {
    if (std::abs(reach1 - reach3) > detail::kGeomEps * scale) return out;
    // Concentric end circles: every placement works, take the one opposite the start point.
    emit(c1 + reach1 * unit(start.theta + s1 * (kPi / 2)));
    return out;
  }
  const double tol = detail::kGeomEps * scale;
  if (d > reach1 + reach3 + tol || d < std::abs(reach1 - reach3) - tol) return out;

  const double along = (d * d + reach1 * reach1 - reach3 * reach3) / (2.0 * d);
  const double h = std::sqrt(std::max(0.0, reach1 * reach1 - along * along));
  const Vec2 base = c1 + (along / d) * delta;
  const Vec2 perp = (1.0 / d) * left_normal(delta);
  emit(base + h * perp);
  if (h > detail::kGeomEps * scale) emit(base - h * perp);
  return out;
}

/// Three-segment trajectory exactly connecting two states.
struct GmdmPath {
  PathType type = PathType::LSL;
  std::array<MotionPrimitive, 3> segments{};
  State start;
  State end;
  double length = 0.0;
  double duration = 0.0;

  friend bool operator==(const GmdmPath&, const GmdmPath&) = default;
};

/// Assembles a path from solved segment parameters and per-segment speeds.
inline GmdmPath make_path(PathType type, const State& start, const State& end,
                          const SegmentParams& params, const std::array<double, 3>& speeds,
                          double u_max) {
  GmdmPath path;
  path.type = type;
  path.start = start;
  path.end = end;
  const auto kinds = segment_kinds(type);
  for (std::size_t i = 0; i < 3; ++i) {
    MotionPrimitive& m = path.segments[i];
    m.kind = kinds[i];
    m.sigma = params[i];
    m.speed = speeds[i];
    m.radius = kinds[i] == SegmentKind::S ? 0.0 : speeds[i] / u_max;
    path.length += m.length();
    path.duration += m.duration();
  }
  return path;
}

/// Pose reached by chaining the three primitives from the start pose.
inline Pose chained_end(const GmdmPath& path) noexcept {
  Pose p = path.start.pose;
  for (const auto& m : path.segments) p = apply_primitive(p, m);
  return p;
}

/// Middle-segment speed grid: n uniformly spaced values spanning
/// [v_min, v_max] inclusive, or the midpoint when n == 1.
inline std::vector<double> middle_speeds(const VehicleLimits& limits, std::size_t n) {
  if (n == 0) throw BadCount("middle speed count must be at least 1");
  if (n == 1) return {0.5 * (limits.v_min + limits.v_max)};
  std::vector<double> speeds(n);
  const double span = limits.v_max - limits.v_min;
  for (std::size_t i = 0; i < n; ++i) {
    speeds[i] = limits.v_min + span * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  speeds.back() = limits.v_max;
  return speeds;
}

/// Every solvable path over the six words and the middle-speed grid, in
/// word-major, speed-minor order. Boundary segments run at the state speeds.
inline std::vector<GmdmPath> enumerate_candidates(const State& a, const State& b,
                                                  const VehicleLimits& limits,
                                                  std::size_t n_speeds) {
  if (a == b) throw DegenerateQuery("cannot steer a state to itself");
  const std::vector<double> mids = middle_speeds(limits, n_speeds);
  const double r1 = limits.radius_for(a.v);
  const double r3 = limits.radius_for(b.v);

  std::vector<GmdmPath> out;
  out.reserve(kPathTypes.size() * mids.size());
  for (PathType type : kPathTypes) {
    if (is_csc(type)) {
      const auto params = solve_csc(a.pose, b.pose, type, r1, r3);
      if (!params) continue;
      for (double vm : mids) {
        out.push_back(make_path(type, a, b, *params, {a.v, vm, b.v}, limits.u_max));
      }
    } else {
      for (double vm : mids) {
        for (const auto& params :
             solve_ccc(a.pose, b.pose, type, r1, limits.radius_for(vm), r3)) {
          out.push_back(make_path(type, a, b, params, {a.v, vm, b.v}, limits.u_max));
        }
      }
    }
  }
  return out;
}

/// State at arc length s. Junctions belong to the earlier segment, so the
/// returned speed is that segment's speed.
inline State point_at(const GmdmPath& path, double s) {
  const double slack = 1e-12 * std::max(1.0, path.length);
  if (!(s >= -slack && s <= path.length + slack)) {
    throw OutOfRange("arc length outside [0, length]");
  }
  s = std::clamp(s, 0.0, path.length);
  Pose p = path.start.pose;
  for (std::size_t i = 0; i < 3; ++i) {
    const MotionPrimitive& m = path.segments[i];
    const double len = m.length();
    if (s <= len || i == 2) {
      return {advance(p, m, std::min(s, len)), m.speed};
    }
    p = apply_primitive(p, m);
    s -= len;
  }
  return path.end;  // unreachable
}

/// M states uniformly spaced in arc length; the first and last are the
/// path's own endpoint states.
inline std::vector<State> interpolate_states(const GmdmPath& path, std::size_t count) {
  if (count < 2) throw BadCount("interpolation needs at least two states");
  std::vector<State> out;
  out.reserve(count);
  out.push_back(path.start);
  for (std::size_t j = 1; j + 1 < count; ++j) {
    out.push_back(
        point_at(path, path.length * static_cast<double>(j) / static_cast<double>(count - 1)));
  }
  out.push_back(path.end);
  return out;
}

}  // namespace trplan
