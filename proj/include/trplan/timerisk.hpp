#pragma once

// Approximate time-risk edge cost. The risk of a state grows logarithmically
// once its collision time (ray distance / speed) drops below the safety
// threshold t*; an edge takes the worst of M interpolated states raised to the
// risk weight k, and its joint cost is that risk times travel time.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>

#include "trplan/environment.hpp"
#include "trplan/gmdm.hpp"

namespace trplan {

struct RiskParams {
  double t_star = 6.0;  // seconds
  double k = 2.0;
  std::size_t M = 4;

  [[nodiscard]] bool valid() const noexcept {
    return t_star > 0.0 && std::isfinite(t_star) && k >= 0.0 && std::isfinite(k) && M >= 2;
  }
  friend bool operator==(const RiskParams&, const RiskParams&) = default;
};

struct EdgeCost {
  double risk = 1.0;
  double time = 0.0;
  double joint = 0.0;

  friend bool operator==(const EdgeCost&, const EdgeCost&) = default;
};

inline double collision_time(const State& s, const Workspace& w) {
  return w.collision_distance(s.pose) / s.v;
}

/// Risk law on a collision time; natural logarithm.
inline double risk_for_collision_time(double t, double t_star) noexcept {
  return t < t_star ? 1.0 + std::log(t_star / t) : 1.0;
}

inline double state_risk(const State& s, const Workspace& w, const RiskParams& rp) {
  return risk_for_collision_time(collision_time(s, w), rp.t_star);
}

inline double edge_risk(const GmdmPath& path, const Workspace& w, const RiskParams& rp) {
  double worst = 1.0;
  for (const State& s : interpolate_states(path, rp.M)) worst = std::max(worst, state_risk(s, w, rp));
  return std::pow(worst, rp.k);
}

/// Travel time with piecewise-constant speed.
inline double edge_time(const GmdmPath& path) noexcept {
  double t = 0.0;
  for (const MotionPrimitive& m : path.segments) t += m.length() / m.speed;
  return t;
}

inline EdgeCost edge_cost(const GmdmPath& path, const Workspace& w, const RiskParams& rp) {
  EdgeCost c;
  c.risk = edge_risk(path, w, rp);
  c.time = edge_time(path);
  c.joint = c.risk * c.time;
  return c;
}

/// As edge_cost, but empty when an interpolated state is not free.
inline std::optional<EdgeCost> try_edge_cost(const GmdmPath& path, const Workspace& w,
                                             const RiskParams& rp) {
  double worst = 1.0;
  for (const State& s : interpolate_states(path, rp.M)) {
    if (!w.is_free(s.pose.x, s.pose.y)) return std::nullopt;
    worst = std::max(worst, state_risk(s, w, rp));
  }
  EdgeCost c;
  c.risk = std::pow(worst, rp.k);
  c.time = edge_time(path);
  c.joint = c.risk * c.time;
  return c;
}

}  // namespace trplan
