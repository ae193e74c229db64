// trplan: time-risk planning from scenario files.
//
//   trplan plan    --scenario S [--seed N] [--samples N] [--model gmdm|dubins]
//                  [--out DIR] [--svg] [--tree] [--timing]
//   trplan compare --scenario S (--seeds A B ... | --num-seeds N) [--samples N]
//                  [--out DIR] [--jobs N]
//   trplan render  --scenario S --out DIR [--tree]
//
// Exit codes: 0 success, 1 usage, 2 invalid input, 3 no path found.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trplan/trplan.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kInvalid = 2, kNoPath = 3 };

int cmd_plan(const std::string& scenario_path, const trplan::RunOverrides& o,
             const trplan::ArtifactOptions& a) {
  const trplan::Scenario sc = trplan::load_scenario(scenario_path);
  const trplan::RunOutcome out = trplan::run_plan(sc, o, a);
  const auto& r = out.result;
  if (!r.found()) {
    std::cerr << "no path found after " << out.effective.planner.n_samples << " samples ("
              << r.nodes_built << " nodes)\n";
    return kNoPath;
  }
  std::cout << "model " << trplan::model_name(o.model) << "  seed " << out.effective.planner.seed
            << "  edges " << r.path.size() << "  nodes " << r.nodes_built << "\n"
            << "time " << r.total.time << " s  cost " << r.total.joint << "  max edge risk "
            << r.total.risk << "  (" << out.wall_ms << " ms)\n"
            << "wrote " << (a.out_dir / "path.csv").string() << ", "
            << (a.out_dir / "stats.json").string() << "\n";
  return kOk;
}

int cmd_compare(const std::string& scenario_path, std::vector<std::uint64_t> seeds,
                std::size_t num_seeds, std::optional<std::size_t> samples,
                const std::string& out_dir, unsigned jobs) {
  if (seeds.empty() && num_seeds > 0) {
    seeds.resize(num_seeds);
    std::iota(seeds.begin(), seeds.end(), std::uint64_t{1});
  }
  if (seeds.empty()) {
    std::cerr << "compare: give --seeds or --num-seeds (at least one seed)\n";
    return kUsage;
  }
  const trplan::Scenario sc = trplan::load_scenario(scenario_path);
  const trplan::CompareReport rep = trplan::run_compare(sc, seeds, samples, jobs);
  std::cout << rep.table();
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream os(std::filesystem::path(out_dir) / "compare.json");
    if (!os) throw trplan::Error("cannot write " + out_dir + "/compare.json");
    os << rep.to_json().dump(2) << "\n";
  }
  return rep.gmdm.successes + rep.dubins.successes == 0 ? kNoPath : kOk;
}

int cmd_render(const std::string& scenario_path, const std::string& dir, bool tree) {
  const trplan::Scenario sc = trplan::load_scenario(scenario_path);
  const std::filesystem::path base(dir);
  std::ifstream path_in(base / "path.csv");
  if (!path_in) throw trplan::Error("cannot read " + (base / "path.csv").string());
  const auto rows = trplan::read_path_csv(path_in);
  std::vector<trplan::Polyline> lines;
  if (tree) {
    std::ifstream tree_in(base / "tree.csv");
    if (!tree_in) throw trplan::Error("cannot read " + (base / "tree.csv").string());
    lines = trplan::read_tree_csv(tree_in);
  }
  std::ofstream os(base / "path.svg");
  if (!os) throw trplan::Error("cannot write " + (base / "path.svg").string());
  os << trplan::render_svg(sc, rows, tree ? &lines : nullptr);
  std::cout << "wrote " << (base / "path.svg").string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-risk motion planning for multi-speed curvature-constrained vehicles"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::string model = "gmdm";
  bool svg = false, tree = false, timing = false;
  double csv_spacing = 0.1;
  const std::map<std::string, trplan::Model> models{{"gmdm", trplan::Model::Gmdm},
                                                    {"dubins", trplan::Model::Dubins}};

  auto* plan = app.add_subcommand("plan", "Plan one scenario and write path.csv/stats.json");
  plan->add_option("--scenario", scenario, "Scenario JSON file")->required();
  plan->add_option("--seed", seed, "Override planner.seed");
  plan->add_option("--samples", samples, "Override planner.n_samples")->check(CLI::PositiveNumber);
  plan->add_option("--model", model, "Steering model")->check(CLI::IsMember({"gmdm", "dubins"}));
  plan->add_option("--out", out_dir, "Output directory");
  plan->add_flag("--svg", svg, "Also write path.svg");
  plan->add_flag("--tree", tree, "Write tree.csv and draw the tree in the SVG");
  plan->add_flag("--timing", timing, "Record wall-clock time in stats.json");
  plan->add_option("--csv-step", csv_spacing, "Maximum spacing of path.csv rows (m)")
      ->check(CLI::PositiveNumber);

  std::vector<std::uint64_t> seeds;
  std::size_t num_seeds = 0;
  unsigned jobs = 0;
  std::string compare_out;
  auto* compare = app.add_subcommand("compare", "Run GMDM and max-speed Dubins over several seeds");
  compare->add_option("--scenario", scenario, "Scenario JSON file")->required();
  compare->add_option("--seeds", seeds, "Seed list");
  compare->add_option("--num-seeds", num_seeds, "Use seeds 1..N");
  compare->add_option("--samples", samples, "Override planner.n_samples")->check(CLI::PositiveNumber);
  compare->add_option("--out", compare_out, "Directory for compare.json");
  compare->add_option("--jobs", jobs, "Concurrent runs (default: hardware threads)");

  auto* render = app.add_subcommand("render", "Draw DIR/path.csv (and DIR/tree.csv) as DIR/path.svg");
  render->add_option("--scenario", scenario, "Scenario JSON file")->required();
  render->add_option("--out", out_dir, "Directory holding path.csv")->required();
  render->add_flag("--tree", tree, "Include DIR/tree.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*plan) {
      trplan::RunOverrides o{models.at(model), seed, samples};
      trplan::ArtifactOptions a{out_dir, svg, tree, timing, csv_spacing};
      return cmd_plan(scenario, o, a);
    }
    if (*compare) return cmd_compare(scenario, seeds, num_seeds, samples, compare_out, jobs);
    if (*render) return cmd_render(scenario, out_dir, tree);
  } catch (const trplan::ValidationError& e) {
    std::cerr << "invalid scenario: " << e.what() << "\n";
    return kInvalid;
  } catch (const trplan::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kInvalid;
  } catch (const trplan::InvalidEndpoints& e) {
    std::cerr << "invalid endpoints: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
