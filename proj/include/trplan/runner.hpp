#pragma once

// Run orchestration shared by the command-line tool and the acceptance suite.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "trplan/planner.hpp"
#include "trplan/report.hpp"
#include "trplan/scenario.hpp"

namespace trplan {

struct RunOverrides {
  Model model = Model::Gmdm;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
};

inline Scenario apply_overrides(Scenario sc, const RunOverrides& o) {
  if (o.seed) sc.planner.seed = *o.seed;
  if (o.samples) sc.planner.n_samples = *o.samples;
  return with_model(std::move(sc), o.model);
}

struct RunOutcome {
  Scenario effective;  // after overrides
  PlanResult result;
  double wall_ms = 0.0;
  std::vector<Polyline> tree;  // filled when requested
};

inline RunOutcome execute(const Scenario& sc, const RunOverrides& o, bool keep_tree = false) {
  RunOutcome out;
  out.effective = apply_overrides(sc, o);
  const Scenario& e = out.effective;
  Planner planner(e.workspace, e.limits, e.risk, e.planner);
  const auto t0 = std::chrono::steady_clock::now();
  out.result = planner.plan(e.start, e.goal);
  out.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (keep_tree) out.tree = tree_polylines(planner.tree());
  return out;
}

struct ArtifactOptions {
  std::filesystem::path out_dir = ".";
  bool svg = false;
  bool tree = false;
  bool timing = false;  // wall-clock in stats.json makes it run-dependent
  double csv_spacing = 0.1;
};

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  os << text;
  if (!os) throw Error("write failed for " + path.string());
}

}  // namespace detail

/// Runs the planner and writes path.csv, stats.json and optionally
/// path.svg and tree.csv into the output directory.
inline RunOutcome run_plan(const Scenario& sc, const RunOverrides& o, const ArtifactOptions& a) {
  std::error_code ec;
  std::filesystem::create_directories(a.out_dir, ec);
  if (ec) throw Error("cannot create " + a.out_dir.string() + ": " + ec.message());

  RunOutcome out = execute(sc, o, a.tree);
  const Scenario& e = out.effective;
  const std::vector<PathRow> rows = sample_path(out.result, e.workspace, e.risk, a.csv_spacing);

  std::ostringstream csv;
  write_path_csv(csv, rows);
  detail::write_file(a.out_dir / "path.csv", csv.str());
  const auto stats = stats_json(out.result, e.planner.seed,
                                a.timing ? std::optional<double>(out.wall_ms) : std::nullopt);
  detail::write_file(a.out_dir / "stats.json", stats.dump(2) + "\n");
  if (a.tree) {
    std::ostringstream tree_csv;
    write_tree_csv(tree_csv, out.tree);
    detail::write_file(a.out_dir / "tree.csv", tree_csv.str());
  }
  if (a.svg) {
    detail::write_file(a.out_dir / "path.svg", render_svg(e, rows, a.tree ? &out.tree : nullptr));
  }
  return out;
}

struct ModelSummary {
  std::vector<double> time;      // +∞ for failed seeds
  std::vector<double> cost;
  std::vector<double> max_risk;
  std::size_t successes = 0;

  [[nodiscard]] double success_rate() const {
    return time.empty() ? 0.0 : static_cast<double>(successes) / static_cast<double>(time.size());
  }
};

inline double median(std::vector<double> v) {
  if (v.empty()) return kInfinity;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct SeedRun {
  std::uint64_t seed = 0;
  Model model = Model::Gmdm;
  PlanResult result;
  double wall_ms = 0.0;
};

/// Plans every (seed, model) pair, at most `jobs` at a time; results come back
/// in seed order with GMDM before Dubins for each seed.
inline std::vector<SeedRun> run_seeds(const Scenario& sc, const std::vector<std::uint64_t>& seeds,
                                      const std::vector<Model>& models,
                                      std::optional<std::size_t> samples, unsigned jobs = 0) {
  std::vector<SeedRun> runs;
  for (std::uint64_t s : seeds) {
    for (Model m : models) runs.push_back({s, m, {}, 0.0});
  }
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      try {
        RunOverrides o{runs[i].model, runs[i].seed, samples};
        RunOutcome r = execute(sc, o);
        runs[i].result = std::move(r.result);
        runs[i].wall_ms = r.wall_ms;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < std::min<std::size_t>(jobs, runs.size()); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  std::stable_sort(runs.begin(), runs.end(), [](const SeedRun& a, const SeedRun& b) {
    return a.seed < b.seed || (a.seed == b.seed && a.model < b.model);
  });
  return runs;
}

inline ModelSummary summarize(const std::vector<SeedRun>& runs, Model m) {
  ModelSummary s;
  for (const SeedRun& r : runs) {
    if (r.model != m) continue;
    const bool ok = r.result.found();
    s.successes += ok;
    s.time.push_back(ok ? r.result.total.time : kInfinity);
    s.cost.push_back(ok ? r.result.total.joint : kInfinity);
    s.max_risk.push_back(ok ? r.result.total.risk : kInfinity);
  }
  return s;
}

inline const char* model_name(Model m) { return m == Model::Gmdm ? "gmdm" : "dubins"; }

struct CompareReport {
  std::vector<SeedRun> runs;
  ModelSummary gmdm;
  ModelSummary dubins;

  [[nodiscard]] nlohmann::json to_json() const {
    using nlohmann::json;
    auto fin = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    json per_seed = json::array();
    for (const SeedRun& r : runs) {
      per_seed.push_back({{"seed", r.seed},
                          {"model", model_name(r.model)},
                          {"found", r.result.found()},
                          {"total_time_s", r.result.found() ? fin(r.result.total.time) : json(nullptr)},
                          {"total_cost", r.result.found() ? fin(r.result.total.joint) : json(nullptr)},
                          {"max_edge_risk", r.result.found() ? fin(r.result.total.risk) : json(nullptr)}});
    }
    auto summary = [&](const ModelSummary& s) {
      return json{{"median_time_s", fin(median(s.time))},
                  {"median_cost", fin(median(s.cost))},
                  {"median_max_risk", fin(median(s.max_risk))},
                  {"success_rate", s.success_rate()}};
    };
    return {{"runs", per_seed}, {"gmdm", summary(gmdm)}, {"dubins", summary(dubins)}};
  }

  [[nodiscard]] std::string table() const {
    std::ostringstream os;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-8s %-7s %12s %12s %12s\n", "seed", "model", "time_s", "cost",
                  "max_risk");
    os << buf;
    for (const SeedRun& r : runs) {
      if (r.result.found()) {
        std::snprintf(buf, sizeof buf, "%-8llu %-7s %12.3f %12.3f %12.3f\n",
                      static_cast<unsigned long long>(r.seed), model_name(r.model),
                      r.result.total.time, r.result.total.joint, r.result.total.risk);
      } else {
        std::snprintf(buf, sizeof buf, "%-8llu %-7s %12s %12s %12s\n",
                      static_cast<unsigned long long>(r.seed), model_name(r.model), "-", "-", "-");
      }
      os << buf;
    }
    for (const auto& [name, s] : {std::pair{"gmdm", &gmdm}, std::pair{"dubins", &dubins}}) {
      std::snprintf(buf, sizeof buf, "median   %-7s %12.3f %12.3f %12.3f   success %.0f%%\n", name,
                    median(s->time), median(s->cost), median(s->max_risk),
                    100.0 * s->success_rate());
      os << buf;
    }
    return os.str();
  }
};

inline CompareReport run_compare(const Scenario& sc, const std::vector<std::uint64_t>& seeds,
                                 std::optional<std::size_t> samples = std::nullopt,
                                 unsigned jobs = 0) {
  if (seeds.empty()) throw Error("compare needs at least one seed");
  CompareReport rep;
  rep.runs = run_seeds(sc, seeds, {Model::Gmdm, Model::Dubins}, samples, jobs);
  rep.gmdm = summarize(rep.runs, Model::Gmdm);
  rep.dubins = summarize(rep.runs, Model::Dubins);
  return rep;
}

}  // namespace trplan
