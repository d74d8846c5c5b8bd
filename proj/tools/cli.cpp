// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include "gsx/config_io.hpp"
#include "gsx/eval.hpp"
#include "gsx/image_io.hpp"
#include "gsx/map_io.hpp"
#include "gsx/render.hpp"
#include "gsx/sim.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace gsx::cli {
namespace {

namespace fs = std::filesystem;

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  const std::string text = path.empty() ? std::string("{}") : read_text(path);
  return parse_run_config(apply_overrides(text, overrides));
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

Pose parse_pose(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size() && item.find_first_not_of(' ', used) != std::string::npos) throw std::exception();
    } catch (...) {
      throw ConfigError("--pose: '" + item + "' is not a number");
    }
  }
  if (v.size() != 7) throw ConfigError("--pose expects x,y,z,qw,qx,qy,qz");
  try {
    return Pose::from_quaternion({v[0], v[1], v[2]}, v[3], v[4], v[5], v[6]);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

struct ExploreArgs {
  std::string scene, config, out;
  std::vector<std::string> overrides;
  int steps = 0;
  long long seed = -1;
  std::string variant;
  double noise = -1.0;
};

int explore(const ExploreArgs& a, std::ostream& err) {
  std::vector<std::string> overrides = a.overrides;
  if (a.steps > 0) overrides.push_back("exploration.budget_steps=" + std::to_string(a.steps));
  if (a.seed >= 0) overrides.push_back("exploration.seed=" + std::to_string(a.seed));
  if (!a.variant.empty()) overrides.push_back("exploration.variant=\"" + a.variant + "\"");
  if (a.noise >= 0) overrides.push_back("sensor.depth_noise_sigma=" + std::to_string(a.noise));
  const RunConfig cfg = load_config(a.config, overrides);
  const Scene scene = load_scene(a.scene, scene_collision(cfg.planner), cfg.planner.robot_height);
  err << "explore: " << scene.gt_map.size() << " ground-truth Gaussians, " << cfg.exploration.budget_steps
      << " steps, variant " << to_string(cfg.exploration.variant) << ", seed " << cfg.exploration.seed << '\n';

  const auto t0 = std::chrono::steady_clock::now();
  const RunArtifacts run = gsx::run(scene, cfg);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const fs::path dir(a.out);
  write_run_artifacts(dir, run);
  {
    auto out = open_out(dir / "config.json");
    out << dump_run_config(cfg);
  }
  const std::vector<Pose> poses = sample_test_poses(scene, cfg.eval.poses, cfg.eval.seed, cfg.planner);
  const MetricsReport report = evaluate(run.map, scene, poses, cfg.sensor);
  {
    auto out = open_out(dir / "metrics.csv");
    write_metrics_csv(out, report);
  }
  err << "explore: " << run.steps.size() << " steps in " << seconds << " s"
      << (run.exploration_complete ? " (exploration complete)" : "") << ", map " << run.map.size()
      << " Gaussians, PSNR " << report.psnr_db << " dB, SSIM " << report.ssim << ", depth RMSE "
      << report.depth_rmse_m << " m\n";
  return kExitOk;
}

struct EvalArgs {
  std::string map, scene, config, out;
  int poses = 100;
  long long seed = 7;
};

int eval(const EvalArgs& a, std::ostream& err) {
  const RunConfig cfg = load_config(a.config, {});
  const Scene scene = load_scene(a.scene, scene_collision(cfg.planner), cfg.planner.robot_height);
  const MapSnapshot snap = read_snapshot(fs::path(a.map));
  const std::vector<Pose> poses = sample_test_poses(scene, a.poses, static_cast<std::uint64_t>(a.seed), cfg.planner);
  const MetricsReport report = evaluate(snap.map, scene, poses, cfg.sensor);
  const fs::path out_path = a.out.empty() ? fs::path(a.map).replace_filename("eval.csv") : fs::path(a.out);
  auto out = open_out(out_path);
  write_metrics_csv(out, report);
  err << "eval: " << report.pose_count() << " poses, PSNR " << report.psnr_db << " dB, SSIM " << report.ssim
      << ", depth RMSE " << report.depth_rmse_m << " m -> " << out_path.string() << '\n';
  return kExitOk;
}

struct BenchArgs {
  std::vector<std::size_t> sizes{100000, 1000000};
  std::size_t points = 129;
  int repeats = 3;
  long long seed = 1;
  std::string out = "bench.csv";
};

int bench(const BenchArgs& a, std::ostream& err) {
  if (a.sizes.empty()) throw ConfigError("--sizes must not be empty");
  if (a.points == 0) throw ConfigError("--points must be positive");
  if (a.repeats < 1) throw ConfigError("--repeats must be >= 1");
  const std::vector<BenchRow> rows = bench_planner(a.sizes, a.points, a.repeats, static_cast<std::uint64_t>(a.seed));
  auto out = open_out(a.out);
  write_bench_csv(out, rows);
  for (const BenchRow& r : rows) {
    err << "bench: " << r.gaussian_count << " Gaussians, serial " << r.serial_ms << " ms, parallel "
        << r.parallel_ms << " ms (x" << r.speedup << "), plan " << r.plan_ms << " ms"
        << (r.identical ? "" : ", RESULTS DIFFER") << '\n';
  }
  return kExitOk;
}

struct RenderArgs {
  std::string map, pose, out, config, depth_out;
};

int render_cmd(const RenderArgs& a, std::ostream& err) {
  const RunConfig cfg = load_config(a.config, {});
  const Pose pose = parse_pose(a.pose);
  const MapSnapshot snap = read_snapshot(fs::path(a.map));
  const Frame frame = render(snap.map, pose, cfg.sensor.intr);
  if (fs::path(a.out).has_parent_path()) fs::create_directories(fs::path(a.out).parent_path());
  write_png(a.out, frame);
  if (!a.depth_out.empty()) write_depth_png(a.depth_out, frame, cfg.sensor.max_range);
  err << "render: " << snap.map.size() << " Gaussians -> " << a.out << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Active mapping with Gaussian splats: exploration, evaluation and benchmarks", "gsx"};
  app.require_subcommand(1);

  ExploreArgs ex;
  auto* explore_cmd = app.add_subcommand("explore", "Run one closed-loop exploration and write its logs");
  explore_cmd->add_option("--scene", ex.scene, "Scene JSON file")->required()->check(CLI::ExistingFile);
  explore_cmd->add_option("--config", ex.config, "Run config JSON file")->check(CLI::ExistingFile);
  explore_cmd->add_option("--out", ex.out, "Output directory")->required();
  explore_cmd->add_option("--steps", ex.steps, "Override exploration.budget_steps")->check(CLI::PositiveNumber);
  explore_cmd->add_option("--seed", ex.seed, "Override exploration.seed")->check(CLI::NonNegativeNumber);
  explore_cmd->add_option("--variant", ex.variant, "Override exploration.variant")
      ->check(CLI::IsMember({"standard", "sum", "squared"}));
  explore_cmd->add_option("--noise", ex.noise, "Override sensor.depth_noise_sigma")->check(CLI::NonNegativeNumber);
  explore_cmd->add_option("--set", ex.overrides, "Override any config field: section.key=value");

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a map snapshot on held-out poses");
  eval_cmd->add_option("--map", ev.map, "Map snapshot (.rtg)")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--scene", ev.scene, "Scene JSON file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--poses", ev.poses, "Number of test poses")->check(CLI::NonNegativeNumber);
  eval_cmd->add_option("--seed", ev.seed, "Test pose seed")->check(CLI::NonNegativeNumber);
  eval_cmd->add_option("--config", ev.config, "Run config JSON file (sensor and robot geometry)")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", ev.out, "Metrics CSV (default: eval.csv next to the map)");

  BenchArgs be;
  auto* bench_cmd = app.add_subcommand("bench", "Serial versus parallel collision checking and plan timing");
  bench_cmd->add_option("--sizes", be.sizes, "Gaussian counts")->delimiter(',');
  bench_cmd->add_option("--points", be.points, "Collision points per check");
  bench_cmd->add_option("--repeats", be.repeats, "Timing repeats");
  bench_cmd->add_option("--seed", be.seed, "Map seed")->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--out", be.out, "Benchmark CSV");

  RenderArgs re;
  auto* render_sub = app.add_subcommand("render", "Render a map snapshot to PNG");
  render_sub->add_option("--map", re.map, "Map snapshot (.rtg)")->required()->check(CLI::ExistingFile);
  render_sub->add_option("--pose", re.pose, "Camera pose x,y,z,qw,qx,qy,qz (world from camera)")->required();
  render_sub->add_option("--out", re.out, "Color PNG")->required();
  render_sub->add_option("--depth-out", re.depth_out, "Optional depth PNG");
  render_sub->add_option("--config", re.config, "Run config JSON file (intrinsics)")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    if (err.rdbuf() != nullptr) err << app.help();
    return kExitConfig;
  }

  try {
    if (*explore_cmd) return explore(ex, err);
    if (*eval_cmd) return eval(ev, err);
    if (*bench_cmd) return bench(be, err);
    if (*render_sub) return render_cmd(re, err);
  } catch (const ConfigError& e) {
    err << "gsx: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "gsx: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace gsx::cli
