#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace trplan {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces an angle into [0, 2π).
inline double normalize_angle(double a) noexcept {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative value plus 2π rounds up to exactly 2π
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Shortest circular distance between two headings, in [0, π].
inline double angle_distance(double a, double b) noexcept {
  const double d = normalize_angle(a - b);
  return std::min(d, kTwoPi - d);
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) noexcept { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) noexcept = default;
};

inline constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) noexcept { return std::hypot(a.x, a.y); }
inline double heading_of(Vec2 a) noexcept { return std::atan2(a.y, a.x); }
inline Vec2 unit(double heading) noexcept { return {std::cos(heading), std::sin(heading)}; }
/// Counter-clockwise quarter rotation.
inline constexpr Vec2 left_normal(Vec2 a) noexcept { return {-a.y, a.x}; }

}  // namespace trplan
