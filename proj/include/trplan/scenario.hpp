#pragma once

// Scenario documents (JSON):
//
//   workspace { bounds {xmin, ymin, xmax, ymax}, obstacles [[[x, y], ...], ...] }
//   start/goal { x, y, theta, v }
//   limits { v_min, v_max, u_max }
//   risk { t_star, k, M }
//   planner { n_samples, k_neighbors, max_connect, n_speeds, step, goal_bias, seed }
//
// workspace.bounds, start, goal and limits are required; everything else has
// a default (see the default member initializers of the owning types).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "trplan/environment.hpp"
#include "trplan/errors.hpp"
#include "trplan/gmdm.hpp"
#include "trplan/planner.hpp"
#include "trplan/timerisk.hpp"

namespace trplan {

struct Scenario {
  Workspace workspace;
  State start;
  State goal;
  VehicleLimits limits;
  RiskParams risk;
  PlannerConfig planner;

  friend bool operator==(const Scenario& a, const Scenario& b) {
    return a.workspace.bounds() == b.workspace.bounds() &&
           a.workspace.obstacles() == b.workspace.obstacles() && a.start == b.start &&
           a.goal == b.goal && a.limits == b.limits && a.risk == b.risk && a.planner == b.planner;
  }
};

enum class Model { Gmdm, Dubins };

/// Single-speed comparison vehicle: everything runs at v_max, so every arc
/// has the maximum radius and there is one middle-speed option.
inline Scenario with_model(Scenario s, Model m) {
  if (m == Model::Dubins) {
    s.limits.v_min = s.limits.v_max;
    s.start.v = s.limits.v_max;
    s.goal.v = s.limits.v_max;
    s.planner.n_speeds = 1;
  }
  return s;
}

namespace detail {

using nlohmann::json;

inline const json& member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + "." + key + ": missing required field");
  return *it;
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path + ": expected a number");
  return j.get<double>();
}

inline double number_or(const json& obj, const std::string& key, const std::string& path,
                        double fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, path + "." + key);
}

inline std::uint64_t count_or(const json& obj, const std::string& key, const std::string& path,
                              std::uint64_t fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_unsigned()) {  // parsed non-negative integers are unsigned
    throw ParseError(path + "." + key + ": expected a non-negative integer");
  }
  return it->get<std::uint64_t>();
}

inline State parse_state(const json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  const double x = number(member(j, "x", path), path + ".x");
  const double y = number(member(j, "y", path), path + ".y");
  const double theta = number(member(j, "theta", path), path + ".theta");
  const double v = number(member(j, "v", path), path + ".v");
  return {make_pose(x, y, theta), v};
}

inline json state_json(const State& s) {
  return {{"x", s.pose.x}, {"y", s.pose.y}, {"theta", s.pose.theta}, {"v", s.v}};
}

inline void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ValidationError(field, what);
}

}  // namespace detail

inline Scenario parse_scenario(const nlohmann::json& doc) {
  using detail::member;
  using detail::number;
  if (!doc.is_object()) throw ParseError("scenario: expected a JSON object");
  Scenario sc;

  const auto& ws = member(doc, "workspace", "scenario");
  const auto& jb = member(ws, "bounds", "workspace");
  Bounds bounds{number(member(jb, "xmin", "workspace.bounds"), "workspace.bounds.xmin"),
                number(member(jb, "ymin", "workspace.bounds"), "workspace.bounds.ymin"),
                number(member(jb, "xmax", "workspace.bounds"), "workspace.bounds.xmax"),
                number(member(jb, "ymax", "workspace.bounds"), "workspace.bounds.ymax")};
  std::vector<Polygon> obstacles;
  if (auto it = ws.find("obstacles"); it != ws.end()) {
    if (!it->is_array()) throw ParseError("workspace.obstacles: expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string path = "workspace.obstacles[" + std::to_string(i) + "]";
      const auto& jp = (*it)[i];
      if (!jp.is_array()) throw ParseError(path + ": expected an array of [x, y] pairs");
      Polygon poly;
      for (const auto& v : jp) {
        if (!v.is_array() || v.size() != 2) throw ParseError(path + ": expected [x, y] pairs");
        poly.push_back({number(v[0], path), number(v[1], path)});
      }
      obstacles.push_back(std::move(poly));
    }
  }
  sc.workspace = Workspace(bounds, std::move(obstacles));

  sc.start = detail::parse_state(member(doc, "start", "scenario"), "start");
  sc.goal = detail::parse_state(member(doc, "goal", "scenario"), "goal");

  const auto& jl = member(doc, "limits", "scenario");
  sc.limits.v_min = number(member(jl, "v_min", "limits"), "limits.v_min");
  sc.limits.v_max = number(member(jl, "v_max", "limits"), "limits.v_max");
  sc.limits.u_max = number(member(jl, "u_max", "limits"), "limits.u_max");

  const nlohmann::json empty = nlohmann::json::object();
  const auto& jr = doc.contains("risk") ? doc["risk"] : empty;
  if (!jr.is_object()) throw ParseError("risk: expected an object");
  sc.risk.t_star = detail::number_or(jr, "t_star", "risk", sc.risk.t_star);
  sc.risk.k = detail::number_or(jr, "k", "risk", sc.risk.k);
  sc.risk.M = detail::count_or(jr, "M", "risk", sc.risk.M);

  const auto& jp = doc.contains("planner") ? doc["planner"] : empty;
  if (!jp.is_object()) throw ParseError("planner: expected an object");
  PlannerConfig& pc = sc.planner;
  pc.n_samples = detail::count_or(jp, "n_samples", "planner", pc.n_samples);
  pc.k_neighbors = detail::count_or(jp, "k_neighbors", "planner", pc.k_neighbors);
  pc.max_connect = detail::number_or(jp, "max_connect", "planner", pc.max_connect);
  pc.n_speeds = detail::count_or(jp, "n_speeds", "planner", pc.n_speeds);
  pc.step = detail::number_or(jp, "step", "planner", pc.step);
  pc.goal_bias = detail::number_or(jp, "goal_bias", "planner", pc.goal_bias);
  pc.seed = detail::count_or(jp, "seed", "planner", pc.seed);

  using detail::require;
  const VehicleLimits& l = sc.limits;
  require(l.v_min > 0.0, "limits.v_min", "must be positive");
  require(l.v_min <= l.v_max, "limits.v_min", "must not exceed limits.v_max");
  require(std::isfinite(l.v_max), "limits.v_max", "must be finite");
  require(l.u_max > 0.0 && std::isfinite(l.u_max), "limits.u_max", "must be positive");
  require(sc.risk.t_star > 0.0 && std::isfinite(sc.risk.t_star), "risk.t_star", "must be positive");
  require(sc.risk.k >= 0.0 && std::isfinite(sc.risk.k), "risk.k", "must be non-negative");
  require(sc.risk.M >= 2, "risk.M", "must be at least 2");
  require(pc.n_samples >= 1, "planner.n_samples", "must be at least 1");
  require(pc.k_neighbors >= 1, "planner.k_neighbors", "must be at least 1");
  require(pc.max_connect > 0.0, "planner.max_connect", "must be positive");
  require(pc.n_speeds >= 2, "planner.n_speeds", "must be at least 2");
  require(pc.step > 0.0, "planner.step", "must be positive");
  require(pc.goal_bias >= 0.0 && pc.goal_bias < 1.0, "planner.goal_bias", "must lie in [0, 1)");
  for (const auto& [name, s] : {std::pair{"start", sc.start}, std::pair{"goal", sc.goal}}) {
    require(s.v >= l.v_min && s.v <= l.v_max, std::string(name) + ".v",
            "speed outside [v_min, v_max]");
    require(sc.workspace.is_free(s.pose.x, s.pose.y), name, "position is not in free space");
  }
  return sc;
}

inline Scenario parse_scenario(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario(doc);
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

/// Canonical form: every field written, keys sorted.
inline nlohmann::json to_json(const Scenario& sc) {
  nlohmann::json obstacles = nlohmann::json::array();
  for (const Polygon& poly : sc.workspace.obstacles()) {
    nlohmann::json jp = nlohmann::json::array();
    for (Vec2 v : poly) jp.push_back({v.x, v.y});
    obstacles.push_back(std::move(jp));
  }
  const Bounds& b = sc.workspace.bounds();
  const PlannerConfig& pc = sc.planner;
  return {
      {"workspace",
       {{"bounds", {{"xmin", b.xmin}, {"ymin", b.ymin}, {"xmax", b.xmax}, {"ymax", b.ymax}}},
        {"obstacles", obstacles}}},
      {"start", detail::state_json(sc.start)},
      {"goal", detail::state_json(sc.goal)},
      {"limits", {{"v_min", sc.limits.v_min}, {"v_max", sc.limits.v_max}, {"u_max", sc.limits.u_max}}},
      {"risk", {{"t_star", sc.risk.t_star}, {"k", sc.risk.k}, {"M", sc.risk.M}}},
      {"planner",
       {{"n_samples", pc.n_samples},
        {"k_neighbors", pc.k_neighbors},
        {"max_connect", pc.max_connect},
        {"n_speeds", pc.n_speeds},
        {"step", pc.step},
        {"goal_bias", pc.goal_bias},
        {"seed", pc.seed}}},
  };
}

inline std::string write_scenario(const Scenario& sc) { return to_json(sc).dump(2) + "\n"; }

}  // namespace trplan
