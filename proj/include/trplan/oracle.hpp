#pragma once

// Reference implementations for tests. Nothing here calls into the steering,
// ray casting or cost code it is used to check: the classical Dubins words
// use the normalized-frame formulas, kinematics are integrated numerically,
// rays are cast in the ray's own frame, and multi-speed paths are found by
// root bracketing instead of closed-form tangents. Only plain data types
// (Pose, State, MotionPrimitive, Workspace geometry) are shared.

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "trplan/environment.hpp"
#include "trplan/gmdm.hpp"
#include "trplan/timerisk.hpp"

namespace trplan::oracle {

/// Outcome of checking a batch of cases against a tolerance.
struct OracleReport {
  struct Failure {
    std::string input;
    double expected;
    double got;
  };

  std::size_t cases = 0;
  double max_abs_error = 0.0;
  std::vector<Failure> failures;

  void record(const std::string& input, double expected, double got, double tol) {
    ++cases;
    const double err = (std::isinf(expected) && expected == got) ? 0.0 : std::abs(expected - got);
    if (!(err <= max_abs_error)) max_abs_error = err;
    if (!(err <= tol)) failures.push_back({input, expected, got});
  }

  [[nodiscard]] bool ok() const noexcept { return failures.empty(); }
};

namespace ref {

inline constexpr double kTau = 6.283185307179586476925286766559;

inline double wrap(double a) {
  double r = a - kTau * std::floor(a / kTau);
  return r >= kTau ? 0.0 : r;
}

}  // namespace ref

// ---------------------------------------------------------------------------
// Classical single-radius Dubins words

/// Length of one classical Dubins word, or empty if the word does not exist.
inline std::optional<double> dubins_word_length(const Pose& a, const Pose& b, double rho,
                                                PathType word) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double d = std::hypot(dx, dy) / rho;
  const double phi = d < 1e-14 ? a.theta : std::atan2(dy, dx);
  const double alpha = ref::wrap(a.theta - phi);
  const double beta = ref::wrap(b.theta - phi);
  const double sa = std::sin(alpha), sb = std::sin(beta);
  const double ca = std::cos(alpha), cb = std::cos(beta);
  const double c_ab = std::cos(alpha - beta);
  const double d_sq = d * d;
  double t = 0, p = 0, q = 0;
  switch (word) {
    case PathType::LSL: {
      const double p_sq = 2 + d_sq - 2 * c_ab + 2 * d * (sa - sb);
      if (p_sq < 0) return std::nullopt;
      const double tmp = std::atan2(cb - ca, d + sa - sb);
      t = ref::wrap(tmp - alpha);
      p = std::sqrt(p_sq);
      q = ref::wrap(beta - tmp);
      break;
    }
    case PathType::RSR: {
      const double p_sq = 2 + d_sq - 2 * c_ab + 2 * d * (sb - sa);
      if (p_sq < 0) return std::nullopt;
      const double tmp = std::atan2(ca - cb, d - sa + sb);
      t = ref::wrap(alpha - tmp);
      p = std::sqrt(p_sq);
      q = ref::wrap(tmp - beta);
      break;
    }
    case PathType::LSR: {
      const double p_sq = -2 + d_sq + 2 * c_ab + 2 * d * (sa + sb);
      if (p_sq < 0) return std::nullopt;
      p = std::sqrt(p_sq);
      const double tmp = std::atan2(-ca - cb, d + sa + sb) - std::atan2(-2.0, p);
      t = ref::wrap(tmp - alpha);
      q = ref::wrap(tmp - beta);
      break;
    }
    case PathType::RSL: {
      const double p_sq = -2 + d_sq + 2 * c_ab - 2 * d * (sa + sb);
      if (p_sq < 0) return std::nullopt;
      p = std::sqrt(p_sq);
      const double tmp = std::atan2(ca + cb, d - sa - sb) - std::atan2(2.0, p);
      t = ref::wrap(alpha - tmp);
      q = ref::wrap(beta - tmp);
      break;
    }
    case PathType::RLR: {
      const double tmp = (6.0 - d_sq + 2 * c_ab + 2 * d * (sa - sb)) / 8.0;
      if (std::abs(tmp) > 1.0) return std::nullopt;
      const double phi2 = std::atan2(ca - cb, d - sa + sb);
      p = ref::wrap(ref::kTau - std::acos(tmp));
      t = ref::wrap(alpha - phi2 + p / 2.0);
      q = ref::wrap(alpha - beta - t + p);
      break;
    }
    case PathType::LRL: {
      const double tmp = (6.0 - d_sq + 2 * c_ab + 2 * d * (sb - sa)) / 8.0;
      if (std::abs(tmp) > 1.0) return std::nullopt;
      const double phi2 = std::atan2(ca - cb, d + sa - sb);
      p = ref::wrap(ref::kTau - std::acos(tmp));
      t = ref::wrap(-alpha - phi2 + p / 2.0);
      q = ref::wrap(beta - alpha - t + p);
      break;
    }
  }
  return (t + p + q) * rho;
}

/// Shortest classical Dubins length with turning radius rho.
inline double dubins_reference(const Pose& a, const Pose& b, double rho) {
  if (a.x == b.x && a.y == b.y && ref::wrap(a.theta) == ref::wrap(b.theta)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (PathType w : kPathTypes) {
    if (auto len = dubins_word_length(a, b, rho, w)) best = std::min(best, *len);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Kinematics

/// RK4 integration of the unicycle model under the primitive's constant
/// controls, using the largest uniform step not exceeding dt.
inline Pose integrate_primitive(const Pose& p, const MotionPrimitive& m, double dt) {
  const double v = m.speed;
  double u = 0.0;
  if (m.kind == SegmentKind::L) u = v / m.radius;
  if (m.kind == SegmentKind::R) u = -v / m.radius;
  const double duration = (m.kind == SegmentKind::S ? m.sigma : m.radius * m.sigma) / v;
  if (duration <= 0.0) return p;
  const auto steps = static_cast<long>(std::ceil(duration / dt));
  const double h = duration / static_cast<double>(steps);

  std::array<double, 3> s{p.x, p.y, p.theta};
  auto f = [&](const std::array<double, 3>& q) {
    return std::array<double, 3>{v * std::cos(q[2]), v * std::sin(q[2]), u};
  };
  auto axpy = [](const std::array<double, 3>& q, double c, const std::array<double, 3>& k) {
    return std::array<double, 3>{q[0] + c * k[0], q[1] + c * k[1], q[2] + c * k[2]};
  };
  for (long i = 0; i < steps; ++i) {
    const auto k1 = f(s);
    const auto k2 = f(axpy(s, h / 2, k1));
    const auto k3 = f(axpy(s, h / 2, k2));
    const auto k4 = f(axpy(s, h, k3));
    for (int j = 0; j < 3; ++j) s[j] += h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
  }
  // θ is linear in time; rebuild it from the step count to avoid summed round-off.
  s[2] = p.theta + u * duration;
  return {s[0], s[1], ref::wrap(s[2])};
}

// ---------------------------------------------------------------------------
// Geometry

inline bool point_is_free(const Workspace& w, double x, double y) {
  const Bounds& b = w.bounds();
  if (!(x > b.xmin && x < b.xmax && y > b.ymin && y < b.ymax)) return false;
  for (const Polygon& poly : w.obstacles()) {
    int winding = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec2 a = poly[i];
      const Vec2 c = poly[(i + 1) % poly.size()];
      // distance to the edge
      const double ex = c.x - a.x, ey = c.y - a.y;
      const double len2 = ex * ex + ey * ey;
      double t = len2 > 0 ? ((x - a.x) * ex + (y - a.y) * ey) / len2 : 0.0;
      t = std::min(1.0, std::max(0.0, t));
      if (std::hypot(x - (a.x + t * ex), y - (a.y + t * ey)) <= 1e-12) return false;
      const double side = ex * (y - a.y) - ey * (x - a.x);
      if (a.y <= y) {
        if (c.y > y && side > 0) ++winding;
      } else if (c.y <= y && side < 0) {
        --winding;
      }
    }
    if (winding != 0) return false;
  }
  return true;
}

/// Ray cast done in the ray's own frame: every edge is moved so the ray is
/// the positive x axis, then crossings of y = 0 are collected.
inline double ray_cast(const Workspace& w, const Pose& p) {
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  auto to_frame = [&](Vec2 q) {
    const double dx = q.x - p.x, dy = q.y - p.y;
    return Vec2{c * dx + s * dy, -s * dx + c * dy};
  };
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](Vec2 a, Vec2 b) {
    const Vec2 fa = to_frame(a), fb = to_frame(b);
    if (fa.y == 0.0 && fb.y == 0.0) {
      for (double x : {fa.x, fb.x}) {
        if (x > 0) best = std::min(best, x);
      }
      return;
    }
    if ((fa.y > 0) == (fb.y > 0) && fa.y != 0.0 && fb.y != 0.0) return;
    const double x = fa.x + (0.0 - fa.y) * (fb.x - fa.x) / (fb.y - fa.y);
    if (x > 0) best = std::min(best, x);
  };
  for (const Polygon& poly : w.obstacles()) {
    for (std::size_t i = 0; i < poly.size(); ++i) consider(poly[i], poly[(i + 1) % poly.size()]);
  }
  const Bounds& b = w.bounds();
  const Vec2 corners[4] = {{b.xmin, b.ymin}, {b.xmax, b.ymin}, {b.xmax, b.ymax}, {b.xmin, b.ymax}};
  for (int i = 0; i < 4; ++i) consider(corners[i], corners[(i + 1) % 4]);
  return best;
}

// ---------------------------------------------------------------------------
// Multi-speed paths by root bracketing

namespace ref {

struct Piece {
  int turn;       // +1 left, -1 right, 0 straight
  double amount;  // radians or metres
  double speed;
  double radius;
  [[nodiscard]] double length() const { return turn == 0 ? amount : radius * amount; }
};

struct Path {
  Pose start;
  std::array<Piece, 3> pieces;
  double length() const { return pieces[0].length() + pieces[1].length() + pieces[2].length(); }
  double time() const {
    double t = 0;
    for (const auto& pc : pieces) t += pc.length() / pc.speed;
    return t;
  }
};

inline Vec2 center_of(const Pose& p, int turn, double r) {
  return {p.x - turn * r * std::sin(p.theta), p.y + turn * r * std::cos(p.theta)};
}

/// Rotation about `c` carrying point `from` to point `to` in direction `turn`.
inline double sweep(Vec2 c, Vec2 from, Vec2 to, int turn) {
  const double a0 = std::atan2(from.y - c.y, from.x - c.x);
  const double a1 = std::atan2(to.y - c.y, to.x - c.x);
  const double r = wrap(turn > 0 ? a1 - a0 : a0 - a1);
  return r > kTau - 1e-10 ? 0.0 : r;
}

/// Moves along a piece by rotating the point about the turn center.
inline Pose travel(const Pose& p, const Piece& pc, double dist) {
  if (pc.turn == 0) return {p.x + dist * std::cos(p.theta), p.y + dist * std::sin(p.theta), p.theta};
  const Vec2 c = center_of(p, pc.turn, pc.radius);
  const double ang = pc.turn * dist / pc.radius;
  const double rx = p.x - c.x, ry = p.y - c.y;
  return {c.x + std::cos(ang) * rx - std::sin(ang) * ry, c.y + std::sin(ang) * rx + std::cos(ang) * ry,
          p.theta + ang};
}

/// Pose and speed at arc length s; junctions belong to the earlier piece.
inline std::pair<Pose, double> sample(const Path& path, double s) {
  Pose p = path.start;
  for (std::size_t i = 0; i < 3; ++i) {
    const double len = path.pieces[i].length();
    if (s <= len || i == 2) return {travel(p, path.pieces[i], std::min(s, len)), path.pieces[i].speed};
    p = travel(p, path.pieces[i], len);
    s -= len;
  }
  return {p, path.pieces[2].speed};
}

/// All roots of f on [0, 2π) found by sign-change scanning plus bisection.
template <class F>
std::vector<double> roots(F f, int scan = 720) {
  std::vector<double> out;
  double x0 = 0.0;
  double f0 = f(x0);
  for (int i = 1; i <= scan; ++i) {
    const double x1 = kTau * i / scan;
    const double f1 = f(x1);
    if (f0 == 0.0) {
      out.push_back(x0);
    } else if ((f0 < 0) != (f1 < 0) && f1 != 0.0) {
      double lo = x0, hi = x1, flo = f0;
      for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    f0 = f1;
  }
  return out;
}

/// Every path of one word with first/middle/last radii and speeds.
inline std::vector<Path> solve_word(const Pose& a, const Pose& b, PathType word,
                                    const std::array<double, 3>& speeds, double u_max) {
  const auto kinds = segment_kinds(word);
  std::array<int, 3> turn{};
  for (int i = 0; i < 3; ++i) {
    turn[i] = kinds[i] == SegmentKind::L ? 1 : (kinds[i] == SegmentKind::R ? -1 : 0);
  }
  const double r1 = speeds[0] / u_max, r2 = speeds[1] / u_max, r3 = speeds[2] / u_max;
  const Vec2 c1 = center_of(a, turn[0], r1);
  const Vec2 c3 = center_of(b, turn[2], r3);
  std::vector<Path> out;

  if (turn[1] == 0) {
    auto tangents = [&](double phi) {
      const Vec2 n{-std::sin(phi), std::cos(phi)};  // left of the straight line
      const Vec2 p1{c1.x - turn[0] * r1 * n.x, c1.y - turn[0] * r1 * n.y};
      const Vec2 p3{c3.x - turn[2] * r3 * n.x, c3.y - turn[2] * r3 * n.y};
      return std::pair{p1, p3};
    };
    auto f = [&](double phi) {
      const auto [p1, p3] = tangents(phi);
      return std::cos(phi) * (p3.y - p1.y) - std::sin(phi) * (p3.x - p1.x);
    };
    for (double phi : roots(f)) {
      const auto [p1, p3] = tangents(phi);
      const double along = std::cos(phi) * (p3.x - p1.x) + std::sin(phi) * (p3.y - p1.y);
      if (along < 0) continue;
      Path path{a, {}};
      path.pieces[0] = {turn[0], sweep(c1, a.position(), p1, turn[0]), speeds[0], r1};
      path.pieces[1] = {0, along, speeds[1], 0.0};
      path.pieces[2] = {turn[2], sweep(c3, p3, b.position(), turn[2]), speeds[2], r3};
      out.push_back(path);
    }
    return out;
  }

  const double reach1 = r1 + r2, reach3 = r2 + r3;
  auto g = [&](double psi) {
    const Vec2 c2{c1.x + reach1 * std::cos(psi), c1.y + reach1 * std::sin(psi)};
    return std::hypot(c2.x - c3.x, c2.y - c3.y) - reach3;
  };
  for (double psi : roots(g)) {
    const Vec2 c2{c1.x + reach1 * std::cos(psi), c1.y + reach1 * std::sin(psi)};
    const Vec2 j1{c1.x + r1 * std::cos(psi), c1.y + r1 * std::sin(psi)};
    const double toward = std::atan2(c3.y - c2.y, c3.x - c2.x);
    const Vec2 j2{c2.x + r2 * std::cos(toward), c2.y + r2 * std::sin(toward)};
    Path path{a, {}};
    path.pieces[0] = {turn[0], sweep(c1, a.position(), j1, turn[0]), speeds[0], r1};
    path.pieces[1] = {turn[1], sweep(c2, j1, j2, turn[1]), speeds[1], r2};
    path.pieces[2] = {turn[2], sweep(c3, j2, b.position(), turn[2]), speeds[2], r3};
    out.push_back(path);
  }
  return out;
}

inline std::optional<double> joint_cost(const Path& path, const State& a, const State& b,
                                        const Workspace& w, const RiskParams& rp, double step,
                                        bool check_collisions) {
  const double length = path.length();
  double worst = 1.0;
  for (std::size_t j = 0; j < rp.M; ++j) {
    Pose q;
    double v;
    if (j == 0) {
      q = a.pose;
      v = a.v;
    } else if (j + 1 == rp.M) {
      q = b.pose;
      v = b.v;
    } else {
      std::tie(q, v) = sample(path, length * static_cast<double>(j) / static_cast<double>(rp.M - 1));
    }
    if (!point_is_free(w, q.x, q.y)) return std::nullopt;
    const double t = ray_cast(w, q) / v;
    const double risk = t < rp.t_star ? 1.0 + std::log(rp.t_star / t) : 1.0;
    worst = std::max(worst, risk);
  }
  if (check_collisions) {
    for (std::size_t k = 0;; ++k) {
      const double s = static_cast<double>(k) * step;
      if (s > length) break;
      const Pose q = sample(path, s).first;
      if (!point_is_free(w, q.x, q.y)) return std::nullopt;
    }
    if (!point_is_free(w, b.pose.x, b.pose.y)) return std::nullopt;
  }
  return std::pow(worst, rp.k) * path.time();
}

}  // namespace ref

/// Best joint cost over the six words and `n` uniformly spaced middle speeds
/// (inclusive grid; midpoint when n == 1). With `check_collisions` false the
/// paths are costed as if obstacles were absent between interpolated states.
inline double exhaustive_joint_cost(const State& a, const State& b, const VehicleLimits& limits,
                                    std::size_t n, const Workspace& w, const RiskParams& rp,
                                    bool check_collisions, double step = 0.05) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double vm = n == 1 ? 0.5 * (limits.v_min + limits.v_max)
                             : (i + 1 == n ? limits.v_max
                                           : limits.v_min + (limits.v_max - limits.v_min) *
                                                                static_cast<double>(i) /
                                                                static_cast<double>(n - 1));
    for (PathType word : kPathTypes) {
      for (const auto& path : ref::solve_word(a.pose, b.pose, word, {a.v, vm, b.v}, limits.u_max)) {
        if (auto j = ref::joint_cost(path, a, b, w, rp, step, check_collisions)) best = std::min(best, *j);
      }
    }
  }
  return best;
}

/// Best collision-free joint cost on a dense middle-speed grid.
inline double dense_speed_sweep(const State& a, const State& b, const VehicleLimits& limits,
                                std::size_t n_dense, const Workspace& w, const RiskParams& rp,
                                double step = 0.05) {
  return exhaustive_joint_cost(a, b, limits, n_dense, w, rp, true, step);
}

/// Chained end pose of three primitives, via RK4.
inline Pose integrate_path(const Pose& start, const std::array<MotionPrimitive, 3>& segs, double dt) {
  Pose p = start;
  for (const auto& m : segs) p = integrate_primitive(p, m, dt);
  return p;
}

inline std::string describe(const Pose& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << p.x << "," << p.y << "," << p.theta << ")";
  return os.str();
}

}  // namespace trplan::oracle
