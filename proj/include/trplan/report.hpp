#pragma once

// Planner output artifacts: path CSV, stats JSON, tree polylines and SVG
// figures (path coloured by speed and by risk, side by side).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "trplan/errors.hpp"
#include "trplan/planner.hpp"
#include "trplan/scenario.hpp"

namespace trplan {

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct PathRow {
  double s = 0.0;
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double v = 0.0;
  double risk = 1.0;  // state risk, before the k exponent
};

/// Resamples the edge chain at spacing no larger than `spacing`;
/// consecutive edges share their junction row.
inline std::vector<PathRow> sample_path(const PlanResult& result, const Workspace& w,
                                        const RiskParams& rp, double spacing = 0.1) {
  std::vector<PathRow> rows;
  double offset = 0.0;
  for (std::size_t e = 0; e < result.path.size(); ++e) {
    const GmdmPath& path = result.path[e].path;
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(path.length / spacing)));
    for (std::size_t j = (e == 0 ? 0 : 1); j <= n; ++j) {
      const double s = path.length * static_cast<double>(j) / static_cast<double>(n);
      const State st = j == 0 ? path.start : (j == n ? path.end : point_at(path, s));
      rows.push_back({offset + s, st.pose.x, st.pose.y, st.pose.theta, st.v, state_risk(st, w, rp)});
    }
    offset += path.length;
  }
  return rows;
}

inline void write_path_csv(std::ostream& os, const std::vector<PathRow>& rows) {
  os << "s,x,y,theta,v,risk\n";
  for (const PathRow& r : rows) {
    os << format_number(r.s) << ',' << format_number(r.x) << ',' << format_number(r.y) << ','
       << format_number(r.theta) << ',' << format_number(r.v) << ',' << format_number(r.risk)
       << '\n';
  }
}

inline std::vector<std::vector<double>> read_csv_numbers(std::istream& is, const std::string& header,
                                                         std::size_t columns) {
  std::string line;
  if (!std::getline(is, line) || line != header) throw ParseError("CSV header must be " + header);
  std::vector<std::vector<double>> out;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError("CSV line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (vals.size() != columns) {
      throw ParseError("CSV line " + std::to_string(lineno) + ": expected " +
                       std::to_string(columns) + " columns");
    }
    out.push_back(std::move(vals));
  }
  return out;
}

inline std::vector<PathRow> read_path_csv(std::istream& is) {
  std::vector<PathRow> rows;
  for (const auto& v : read_csv_numbers(is, "s,x,y,theta,v,risk", 6)) {
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
  }
  return rows;
}

using Polyline = std::vector<Vec2>;

/// Every tree edge sampled as a polyline, in node order.
inline std::vector<Polyline> tree_polylines(const Tree& tree, double spacing = 0.25) {
  std::vector<Polyline> out;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (!tree.edge[i]) continue;
    const GmdmPath& p = *tree.edge[i];
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(p.length / spacing)));
    Polyline line;
    for (std::size_t j = 0; j <= n; ++j) {
      line.push_back(point_at(p, p.length * static_cast<double>(j) / static_cast<double>(n))
                         .pose.position());
    }
    out.push_back(std::move(line));
  }
  return out;
}

inline void write_tree_csv(std::ostream& os, const std::vector<Polyline>& lines) {
  os << "edge,x,y\n";
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (Vec2 p : lines[i]) os << i << ',' << format_number(p.x) << ',' << format_number(p.y) << '\n';
  }
}

inline std::vector<Polyline> read_tree_csv(std::istream& is) {
  std::vector<Polyline> out;
  double current = -1.0;
  for (const auto& v : read_csv_numbers(is, "edge,x,y", 3)) {
    if (v[0] != current) {
      out.emplace_back();
      current = v[0];
    }
    out.back().push_back({v[1], v[2]});
  }
  return out;
}

inline nlohmann::json stats_json(const PlanResult& result, std::uint64_t seed,
                                 std::optional<double> wall_ms) {
  using nlohmann::json;
  auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json trace = json::array();
  for (double c : result.trace) trace.push_back(finite_or_null(c));
  json stats;
  stats["found"] = result.found();
  stats["total_time_s"] = result.found() ? json(result.total.time) : json(nullptr);
  stats["total_cost"] = result.found() ? json(result.total.joint) : json(nullptr);
  stats["max_edge_risk"] = result.found() ? json(result.total.risk) : json(nullptr);
  stats["edges"] = result.path.size();
  stats["nodes"] = result.nodes_built;
  stats["wall_ms"] = wall_ms ? json(*wall_ms) : json(nullptr);
  stats["seed"] = seed;
  stats["trace"] = std::move(trace);
  return stats;
}

// ---------------------------------------------------------------------------
// SVG

struct Rgb {
  int r, g, b;
};

inline Rgb mix(Rgb a, Rgb b, double t) {
  t = std::clamp(t, 0.0, 1.0);
  auto lerp = [t](int x, int y) { return static_cast<int>(std::lround(x + (y - x) * t)); };
  return {lerp(a.r, b.r), lerp(a.g, b.g), lerp(a.b, b.b)};
}

inline constexpr Rgb kSlowColor{0, 0, 255};
inline constexpr Rgb kFastColor{255, 0, 0};
inline constexpr Rgb kSafeColor{0, 170, 0};
inline constexpr Rgb kRiskyColor{255, 0, 0};

/// Linear from blue at v_min to red at v_max.
inline Rgb speed_color(double v, const VehicleLimits& limits) {
  const double span = limits.v_max - limits.v_min;
  return mix(kSlowColor, kFastColor, span > 0.0 ? (v - limits.v_min) / span : 1.0);
}

/// Green at risk 1, red at 3 and above, log-scaled between.
inline Rgb risk_color(double risk) {
  return mix(kSafeColor, kRiskyColor, std::log(std::max(risk, 1.0)) / std::log(3.0));
}

inline std::string css(Rgb c) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

/// Two panels over the same map: the path coloured by speed, then by risk.
inline std::string render_svg(const Scenario& sc, const std::vector<PathRow>& rows,
                              const std::vector<Polyline>* tree = nullptr) {
  const Bounds& b = sc.workspace.bounds();
  const double world_w = b.xmax - b.xmin;
  const double world_h = b.ymax - b.ymin;
  const double scale = 600.0 / std::max(world_w, world_h);
  const double margin = 20.0;
  const double panel_w = world_w * scale;
  const double panel_h = world_h * scale;
  const double legend_h = 60.0;
  const double width = 3 * margin + 2 * panel_w;
  const double height = 2 * margin + panel_h + legend_h;

  std::ostringstream os;
  auto num = [](double v) { return format_number(std::round(v * 100.0) / 100.0); };
  auto px = [&](double x, double ox) { return num(ox + (x - b.xmin) * scale); };
  auto py = [&](double y) { return num(margin + (b.ymax - y) * scale); };

  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width)
     << "\" height=\"" << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height)
     << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const std::string titles[2] = {"speed", "risk"};
  for (int panel = 0; panel < 2; ++panel) {
    const double ox = margin + panel * (panel_w + margin);
    os << "<g id=\"" << titles[panel] << "\">\n";
    os << "<rect x=\"" << num(ox) << "\" y=\"" << num(margin) << "\" width=\"" << num(panel_w)
       << "\" height=\"" << num(panel_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (const Polygon& poly : sc.workspace.obstacles()) {
      os << "<polygon fill=\"#888888\" points=\"";
      for (Vec2 v : poly) os << px(v.x, ox) << ',' << py(v.y) << ' ';
      os << "\"/>\n";
    }
    if (tree) {
      for (const Polyline& line : *tree) {
        os << "<polyline fill=\"none\" stroke=\"#cccccc\" stroke-width=\"0.5\" points=\"";
        for (Vec2 v : line) os << px(v.x, ox) << ',' << py(v.y) << ' ';
        os << "\"/>\n";
      }
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const PathRow& a = rows[i - 1];
      const PathRow& c = rows[i];
      const Rgb color = panel == 0 ? speed_color(c.v, sc.limits) : risk_color(std::max(a.risk, c.risk));
      os << "<line x1=\"" << px(a.x, ox) << "\" y1=\"" << py(a.y) << "\" x2=\"" << px(c.x, ox)
         << "\" y2=\"" << py(c.y) << "\" stroke=\"" << css(color)
         << "\" stroke-width=\"3\" stroke-linecap=\"round\"/>\n";
    }
    for (const auto& [st, label] : {std::pair{sc.start, "start"}, std::pair{sc.goal, "goal"}}) {
      os << "<circle cx=\"" << px(st.pose.x, ox) << "\" cy=\"" << py(st.pose.y)
         << "\" r=\"5\" fill=\"black\"><title>" << label << "</title></circle>\n";
    }

    // legend
    const double ly = margin + panel_h + 15.0;
    const std::string grad = "grad-" + titles[panel];
    os << "<defs><linearGradient id=\"" << grad << "\">";
    for (int k = 0; k <= 10; ++k) {
      const double t = k / 10.0;
      const Rgb c = panel == 0 ? mix(kSlowColor, kFastColor, t)
                               : risk_color(std::exp(t * std::log(3.0)));
      os << "<stop offset=\"" << num(t) << "\" stop-color=\"" << css(c) << "\"/>";
    }
    os << "</linearGradient></defs>\n";
    os << "<rect x=\"" << num(ox) << "\" y=\"" << num(ly) << "\" width=\"" << num(panel_w / 2)
       << "\" height=\"12\" fill=\"url(#" << grad << ")\"/>\n";
    const std::string lo = panel == 0 ? format_number(sc.limits.v_min) + " m/s" : "risk 1";
    const std::string hi = panel == 0 ? format_number(sc.limits.v_max) + " m/s" : "risk >= 3";
    os << "<text x=\"" << num(ox) << "\" y=\"" << num(ly + 28) << "\" font-size=\"12\">" << lo
       << "</text>\n";
    os << "<text x=\"" << num(ox + panel_w / 2) << "\" y=\"" << num(ly + 28)
       << "\" font-size=\"12\" text-anchor=\"end\">" << hi << "</text>\n";
    os << "<text x=\"" << num(ox + panel_w) << "\" y=\"" << num(ly + 10)
       << "\" font-size=\"14\" text-anchor=\"end\">" << titles[panel] << "</text>\n";
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace trplan
