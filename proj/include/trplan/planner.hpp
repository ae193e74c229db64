#pragma once

// RRT*-style planner over (x, y, heading, speed) states. Multi-speed Dubins
// paths connect samples, the time-risk joint cost drives parent choice and
// rewiring, and neighbourhoods are Euclidean balls in the plane.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "trplan/environment.hpp"
#include "trplan/errors.hpp"
#include "trplan/gmdm.hpp"
#include "trplan/random.hpp"
#include "trplan/timerisk.hpp"

namespace trplan {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct PlannerConfig {
  std::size_t n_samples = 3000;
  std::size_t k_neighbors = 100;
  double max_connect = 3.0;  // metres
  std::size_t n_speeds = 3;
  double step = Workspace::kDefaultStep;
  double goal_bias = 0.05;
  std::uint64_t seed = 1;

  [[nodiscard]] bool valid() const noexcept {
    return n_samples >= 1 && k_neighbors >= 1 && max_connect > 0.0 && n_speeds >= 2 &&
           step > 0.0 && goal_bias >= 0.0 && goal_bias < 1.0;
  }
  friend bool operator==(const PlannerConfig&, const PlannerConfig&) = default;
};

struct Tree {
  std::vector<State> nodes;
  std::vector<std::optional<std::size_t>> parent;
  std::vector<double> cost_to_come;
  std::vector<std::optional<GmdmPath>> edge;  // from parent
  std::vector<EdgeCost> edge_cost;
  std::vector<std::vector<std::size_t>> children;

  [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
  [[nodiscard]] bool empty() const noexcept { return nodes.empty(); }

  std::size_t add_root(const State& s) {
    nodes.push_back(s);
    parent.emplace_back();
    cost_to_come.push_back(0.0);
    edge.emplace_back();
    edge_cost.emplace_back();
    children.emplace_back();
    return 0;
  }

  std::size_t add(const State& s, std::size_t from, GmdmPath path, EdgeCost cost) {
    const std::size_t id = nodes.size();
    nodes.push_back(s);
    parent.emplace_back(from);
    cost_to_come.push_back(cost_to_come[from] + cost.joint);
    edge.emplace_back(std::move(path));
    edge_cost.push_back(cost);
    children.emplace_back();
    children[from].push_back(id);
    return id;
  }

  /// Moves `node` under `from` and refreshes cost-to-come over its subtree.
  void reparent(std::size_t node, std::size_t from, GmdmPath path, EdgeCost cost) {
    auto& siblings = children[*parent[node]];
    siblings.erase(std::find(siblings.begin(), siblings.end(), node));
    parent[node] = from;
    children[from].push_back(node);
    edge[node] = std::move(path);
    edge_cost[node] = cost;
    std::vector<std::size_t> stack{node};
    while (!stack.empty()) {
      const std::size_t n = stack.back();
      stack.pop_back();
      cost_to_come[n] = cost_to_come[*parent[n]] + edge_cost[n].joint;
      stack.insert(stack.end(), children[n].begin(), children[n].end());
    }
  }
};

struct PathEdge {
  GmdmPath path;
  EdgeCost cost;

  friend bool operator==(const PathEdge&, const PathEdge&) = default;
};

struct PlanResult {
  std::vector<PathEdge> path;         // start -> goal, empty if never connected
  EdgeCost total{1.0, 0.0, 0.0};      // Σ time, Σ joint, max edge risk
  std::vector<double> trace;          // best goal cost after each sample, +∞ before
  std::size_t nodes_built = 0;

  [[nodiscard]] bool found() const noexcept { return !path.empty(); }
  friend bool operator==(const PlanResult&, const PlanResult&) = default;
};

/// Uniform over free positions × [0, 2π) × [v_min, v_max]; returns `goal`
/// with probability `goal_bias`.
inline State sample_state(Rng& rng, const Workspace& w, const VehicleLimits& limits,
                          double goal_bias, const State& goal) {
  if (rng.uniform() < goal_bias) return goal;
  const Bounds& b = w.bounds();
  constexpr int kMaxRejections = 10000;
  for (int tries = 0; tries < kMaxRejections; ++tries) {
    const double x = rng.uniform(b.xmin, b.xmax);
    const double y = rng.uniform(b.ymin, b.ymax);
    if (!w.is_free(x, y)) continue;
    const double theta = rng.uniform(0.0, kTwoPi);
    const double v = rng.uniform(limits.v_min, limits.v_max);
    return {{x, y, normalize_angle(theta)}, v};
  }
  throw SamplingStalled("no free position after 10000 draws");
}

inline State sample_state(Rng& rng, const Workspace& w, const VehicleLimits& limits) {
  return sample_state(rng, w, limits, 0.0, State{});
}

/// Cheapest joint cost over all candidates, ignoring obstacles between the
/// interpolated states; +∞ when nothing connects.
inline double distance(const State& a, const State& b, const Workspace& w,
                       const VehicleLimits& limits, const RiskParams& rp,
                       const PlannerConfig& cfg) {
  double best = kInfinity;
  for (const GmdmPath& c : enumerate_candidates(a, b, limits, cfg.n_speeds)) {
    if (auto cost = try_edge_cost(c, w, rp)) best = std::min(best, cost->joint);
  }
  return best;
}

/// Collision-free candidate of least joint cost. Only candidates cheaper than
/// `budget` are considered, which lets callers skip hopeless collision checks.
inline std::optional<PathEdge> steer(const State& a, const State& b, const Workspace& w,
                                     const VehicleLimits& limits, const RiskParams& rp,
                                     const PlannerConfig& cfg, double budget = kInfinity) {
  std::vector<GmdmPath> candidates = enumerate_candidates(a, b, limits, cfg.n_speeds);
  struct Scored {
    double joint;
    std::size_t index;
    EdgeCost cost;
  };
  std::vector<Scored> scored;
  scored.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].duration >= budget) continue;  // joint ≥ time
    auto cost = try_edge_cost(candidates[i], w, rp);
    if (!cost || !(cost->joint < budget)) continue;
    scored.push_back({cost->joint, i, *cost});
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const Scored& l, const Scored& r) { return l.joint < r.joint; });
  for (const Scored& sc : scored) {
    if (w.trajectory_is_free(candidates[sc.index], cfg.step)) {
      return PathEdge{std::move(candidates[sc.index]), sc.cost};
    }
  }
  return std::nullopt;
}

/// Up to k_neighbors nodes within max_connect of `s` in the plane, nearest
/// first, ties by index.
inline std::vector<std::size_t> near(const Tree& tree, const State& s, const PlannerConfig& cfg) {
  std::vector<std::pair<double, std::size_t>> within;
  const Vec2 p = s.pose.position();
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const double d = norm(tree.nodes[i].pose.position() - p);
    if (d <= cfg.max_connect) within.emplace_back(d, i);
  }
  const std::size_t keep = std::min(within.size(), cfg.k_neighbors);
  std::partial_sort(within.begin(), within.begin() + static_cast<std::ptrdiff_t>(keep),
                    within.end());
  std::vector<std::size_t> out(keep);
  for (std::size_t i = 0; i < keep; ++i) out[i] = within[i].second;
  return out;
}

inline std::size_t nearest(const Tree& tree, const State& s) {
  const Vec2 p = s.pose.position();
  std::size_t best = 0;
  double best_d = kInfinity;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const double d = norm(tree.nodes[i].pose.position() - p);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

class Planner {
 public:
  Planner(const Workspace& w, VehicleLimits limits, RiskParams risk, PlannerConfig cfg)
      : w_(w), limits_(limits), risk_(risk), cfg_(cfg) {}

  PlanResult plan(const State& start, const State& goal) {
    if (!w_.is_free(start.pose.x, start.pose.y)) throw InvalidEndpoints("start is not free");
    if (!w_.is_free(goal.pose.x, goal.pose.y)) throw InvalidEndpoints("goal is not free");
    if (start == goal) throw InvalidEndpoints("start equals goal");

    tree_ = Tree{};
    tree_.add_root(start);
    goal_edges_.clear();
    goal_ = goal;
    Rng rng(cfg_.seed);

    PlanResult result;
    result.trace.reserve(cfg_.n_samples);
    std::optional<std::size_t> best_goal_parent;
    double best_goal_cost = kInfinity;

    for (std::size_t iter = 0; iter < cfg_.n_samples; ++iter) {
      const State s = sample_state(rng, w_, limits_, cfg_.goal_bias, goal);
      if (s == goal) {
        for (std::size_t n : near(tree_, goal, cfg_)) try_goal(n);
      } else if (!is_duplicate(s)) {
        extend(s);
      }
      // Costs only fall and the goal list only grows, so this minimum never rises.
      best_goal_cost = kInfinity;
      for (const auto& [node, edge] : goal_edges_) {
        const double c = tree_.cost_to_come[node] + edge.cost.joint;
        if (c < best_goal_cost) {
          best_goal_cost = c;
          best_goal_parent = node;
        }
      }
      result.trace.push_back(best_goal_cost);
    }

    result.nodes_built = tree_.size();
    if (best_goal_parent) {
      std::vector<PathEdge> chain;
      const auto& goal_edge = std::find_if(goal_edges_.begin(), goal_edges_.end(),
                                           [&](const auto& g) { return g.first == *best_goal_parent; })
                                  ->second;
      chain.push_back(goal_edge);
      for (std::size_t n = *best_goal_parent; tree_.parent[n]; n = *tree_.parent[n]) {
        chain.push_back({*tree_.edge[n], tree_.edge_cost[n]});
      }
      std::reverse(chain.begin(), chain.end());
      result.path = std::move(chain);
      result.total = {1.0, 0.0, 0.0};
      for (const PathEdge& e : result.path) {
        result.total.risk = std::max(result.total.risk, e.cost.risk);
        result.total.time += e.cost.time;
        result.total.joint += e.cost.joint;
      }
    }
    return result;
  }

  [[nodiscard]] const Tree& tree() const noexcept { return tree_; }

 private:
  [[nodiscard]] bool is_duplicate(const State& s) const {
    return std::find(tree_.nodes.begin(), tree_.nodes.end(), s) != tree_.nodes.end();
  }

  // Euclidean lower bound on the joint cost of any connection between two nodes.
  [[nodiscard]] double cost_lower_bound(const State& a, const State& b) const {
    return norm(a.pose.position() - b.pose.position()) / limits_.v_max;
  }

  void extend(const State& s) {
    std::vector<std::size_t> nbrs = near(tree_, s, cfg_);
    if (nbrs.empty()) nbrs.push_back(nearest(tree_, s));

    std::optional<std::size_t> parent;
    std::optional<PathEdge> best_edge;
    double best = kInfinity;
    for (std::size_t n : nbrs) {
      const double ctc = tree_.cost_to_come[n];
      if (ctc + cost_lower_bound(tree_.nodes[n], s) >= best) continue;
      auto e = steer(tree_.nodes[n], s, w_, limits_, risk_, cfg_, best - ctc);
      if (e && ctc + e->cost.joint < best) {
        best = ctc + e->cost.joint;
        parent = n;
        best_edge = std::move(e);
      }
    }
    if (!parent) return;

    const std::size_t id = tree_.add(s, *parent, best_edge->path, best_edge->cost);
    for (std::size_t n : nbrs) {
      if (n == *parent) continue;
      const double through = tree_.cost_to_come[id];
      if (through + cost_lower_bound(s, tree_.nodes[n]) >= tree_.cost_to_come[n]) continue;
      auto e = steer(s, tree_.nodes[n], w_, limits_, risk_, cfg_, tree_.cost_to_come[n] - through);
      if (e && through + e->cost.joint < tree_.cost_to_come[n]) {
        tree_.reparent(n, id, std::move(e->path), e->cost);
      }
    }

    if (norm(s.pose.position() - goal_.pose.position()) <= cfg_.max_connect) try_goal(id);
  }

  void try_goal(std::size_t node) {
    for (const auto& g : goal_edges_) {
      if (g.first == node) return;
    }
    if (auto e = steer(tree_.nodes[node], goal_, w_, limits_, risk_, cfg_)) {
      goal_edges_.emplace_back(node, std::move(*e));
    }
  }

  const Workspace& w_;
  VehicleLimits limits_;
  RiskParams risk_;
  PlannerConfig cfg_;
  Tree tree_;
  State goal_;
  std::vector<std::pair<std::size_t, PathEdge>> goal_edges_;
};

inline PlanResult plan(const Workspace& w, const VehicleLimits& limits, const RiskParams& rp,
                       const PlannerConfig& cfg, const State& start, const State& goal) {
  Planner planner(w, limits, rp, cfg);
  return planner.plan(start, goal);
}

}  // namespace trplan
