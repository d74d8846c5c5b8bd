// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#include "gsx/config_io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

namespace gsx {
namespace {

using nlohmann::json;

// Reads the keys of one JSON object and remembers which ones were consumed.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  template <class T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    const std::string where = path_ + "." + key;
    if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) throw ConfigError(where + ": expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer()) throw ConfigError(where + ": expected an integer");
      if (std::is_unsigned_v<T> && it->template get<long long>() < 0) {
        throw ConfigError(where + ": expected a non-negative integer");
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!it->is_number()) throw ConfigError(where + ": expected a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!it->is_string()) throw ConfigError(where + ": expected a string");
    }
    out = it->template get<T>();
  }

  template <int N>
  void vec(const std::string& key, Eigen::Matrix<double, N, 1>& out) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    if (!it->is_array() || it->size() != N) {
      throw ConfigError(path_ + "." + key + ": expected an array of " + std::to_string(N) + " numbers");
    }
    for (int i = 0; i < N; ++i) {
      if (!(*it)[i].is_number()) throw ConfigError(path_ + "." + key + ": expected numbers");
      out[i] = (*it)[i].template get<double>();
    }
  }

  /// Nested object, or nullptr when absent.
  const json* child(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  const std::string& path() const { return path_; }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.contains(item.key())) throw ConfigError("unknown key '" + path_ + "." + item.key() + "'");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class Fn>
void section(Reader& parent, const std::string& key, Fn&& fn) {
  if (const json* j = parent.child(key)) {
    Reader r(*j, parent.path() + "." + key);
    fn(r);
    r.finish();
  }
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text) {
  const json root = parse_json(json_text);
  RunConfig cfg;
  Reader top(root, "config");
  section(top, "sensor", [&](Reader& r) {
    auto& s = cfg.sensor;
    r.get("fx", s.intr.fx);
    r.get("fy", s.intr.fy);
    r.get("cx", s.intr.cx);
    r.get("cy", s.intr.cy);
    r.get("width", s.intr.width);
    r.get("height", s.intr.height);
    r.get("max_range", s.max_range);
    r.get("depth_noise_sigma", s.depth_noise_sigma);
  });
  section(top, "mapper", [&](Reader& r) {
    auto& m = cfg.mapper;
    r.get("iterations_per_frame", m.iterations_per_frame);
    r.get("lr_mean", m.rates.mean);
    r.get("lr_color", m.rates.color);
    r.get("lr_opacity", m.rates.opacity);
    r.get("lr_radius", m.rates.radius);
    r.get("prune_opacity_min", m.prune_opacity_min);
    r.get("prune_radius_max", m.prune_radius_max);
    r.get("densify_stride", m.densify_stride);
    r.get("densify_alpha_max", m.densify_alpha_max);
    r.get("densify_depth_err", m.densify_depth_err);
    r.get("new_opacity", m.new_opacity);
    r.get("min_radius", m.min_radius);
    r.get("lambda1", m.loss.lambda1);
    r.get("lambda2", m.loss.lambda2);
  });
  section(top, "info", [&](Reader& r) {
    auto& i = cfg.info;
    r.get("lambda_xi", i.lambda_xi);
    r.get("cell_size", i.cell_size);
    r.get("ground_z", i.ground_z);
    r.get("top_k_regions", i.top_k_regions);
    r.get("viewpoints_per_region", i.viewpoints_per_region);
  });
  section(top, "planner", [&](Reader& r) {
    auto& p = cfg.planner;
    r.get("n_v", p.n_v);
    r.get("n_omega", p.n_omega);
    r.get("v_max", p.v_max);
    r.get("omega_max", p.omega_max);
    r.get("dt", p.dt);
    r.get("lambda_t", p.lambda_t);
    r.get("horizon", p.horizon);
    r.get("n_traj", p.n_traj);
    r.get("info_segments", p.info_segments);
    r.get("robot_radius", p.robot_radius);
    r.get("lambda_g", p.lambda_g);
    r.get("samples_per_primitive", p.samples_per_primitive);
    r.get("max_depth", p.max_depth);
    r.get("goal_radius", p.goal_radius);
    r.get("dedup", p.dedup);
    r.get("dedup_xy", p.dedup_xy);
    r.get("dedup_theta_deg", p.dedup_theta_deg);
    r.get("robot_height", p.robot_height);
    r.get("camera_height", p.camera_height);
    r.get("ground_z", p.ground_z);
    r.get("max_expansions", p.max_expansions);
  });
  section(top, "exploration", [&](Reader& r) {
    auto& e = cfg.exploration;
    r.get("budget_steps", e.budget_steps);
    r.get("seed", e.seed);
    std::string variant(to_string(e.variant));
    r.get("variant", variant);
    try {
      e.variant = parse_variant(variant);
    } catch (const std::invalid_argument& err) {
      throw ConfigError(std::string("config.exploration.variant: ") + err.what());
    }
    r.get("random_spawn", e.random_spawn);
    r.get("odometry_spacing", e.odometry_spacing);
    r.get("consume_radius", e.consume_radius);
  });
  section(top, "eval", [&](Reader& r) {
    r.get("poses", cfg.eval.poses);
    r.get("seed", cfg.eval.seed);
  });
  top.finish();

  try {
    cfg.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) { return parse_run_config(slurp(path)); }

std::string apply_overrides(std::string_view json_text, const std::vector<std::string>& assignments) {
  json root = json_text.empty() ? json::object() : parse_json(json_text);
  if (!root.is_object()) throw ConfigError("config: expected an object");
  for (const std::string& a : assignments) {
    const auto eq = a.find('=');
    const auto dot = a.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq || dot == 0 || dot + 1 == eq) {
      throw ConfigError("override '" + a + "' is not of the form section.key=value");
    }
    const std::string section = a.substr(0, dot);
    const std::string key = a.substr(dot + 1, eq - dot - 1);
    const std::string raw = a.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;
    if (!root.contains(section)) root[section] = json::object();
    if (!root[section].is_object()) throw ConfigError("config." + section + ": expected an object");
    root[section][key] = value;
  }
  return root.dump();
}

std::string dump_run_config(const RunConfig& cfg) {
  json j;
  const auto& s = cfg.sensor;
  j["sensor"] = {{"fx", s.intr.fx},       {"fy", s.intr.fy},         {"cx", s.intr.cx},
                 {"cy", s.intr.cy},       {"width", s.intr.width},   {"height", s.intr.height},
                 {"max_range", s.max_range}, {"depth_noise_sigma", s.depth_noise_sigma}};
  const auto& m = cfg.mapper;
  j["mapper"] = {{"iterations_per_frame", m.iterations_per_frame},
                 {"lr_mean", m.rates.mean},
                 {"lr_color", m.rates.color},
                 {"lr_opacity", m.rates.opacity},
                 {"lr_radius", m.rates.radius},
                 {"prune_opacity_min", m.prune_opacity_min},
                 {"prune_radius_max", m.prune_radius_max},
                 {"densify_stride", m.densify_stride},
                 {"densify_alpha_max", m.densify_alpha_max},
                 {"densify_depth_err", m.densify_depth_err},
                 {"new_opacity", m.new_opacity},
                 {"min_radius", m.min_radius},
                 {"lambda1", m.loss.lambda1},
                 {"lambda2", m.loss.lambda2}};
  const auto& i = cfg.info;
  j["info"] = {{"lambda_xi", i.lambda_xi},
               {"cell_size", i.cell_size},
               {"ground_z", i.ground_z},
               {"top_k_regions", i.top_k_regions},
               {"viewpoints_per_region", i.viewpoints_per_region}};
  const auto& p = cfg.planner;
  j["planner"] = {{"n_v", p.n_v},
                  {"n_omega", p.n_omega},
                  {"v_max", p.v_max},
                  {"omega_max", p.omega_max},
                  {"dt", p.dt},
                  {"lambda_t", p.lambda_t},
                  {"horizon", p.horizon},
                  {"n_traj", p.n_traj},
                  {"info_segments", p.info_segments},
                  {"robot_radius", p.robot_radius},
                  {"lambda_g", p.lambda_g},
                  {"samples_per_primitive", p.samples_per_primitive},
                  {"max_depth", p.max_depth},
                  {"goal_radius", p.goal_radius},
                  {"dedup", p.dedup},
                  {"dedup_xy", p.dedup_xy},
                  {"dedup_theta_deg", p.dedup_theta_deg},
                  {"robot_height", p.robot_height},
                  {"camera_height", p.camera_height},
                  {"ground_z", p.ground_z},
                  {"max_expansions", p.max_expansions}};
  const auto& e = cfg.exploration;
  j["exploration"] = {{"budget_steps", e.budget_steps},
                      {"seed", e.seed},
                      {"variant", std::string(to_string(e.variant))},
                      {"random_spawn", e.random_spawn},
                      {"odometry_spacing", e.odometry_spacing},
                      {"consume_radius", e.consume_radius}};
  j["eval"] = {{"poses", cfg.eval.poses}, {"seed", cfg.eval.seed}};
  return j.dump(2) + "\n";
}

Scene parse_scene(std::string_view json_text, const CollisionParams& collision, double robot_z) {
  const json root = parse_json(json_text);
  Reader top(root, "scene");
  if (!top.has("gaussians")) {
    SceneSpec spec;
    std::string kind(to_string(spec.kind));
    top.get("kind", kind);
    try {
      spec.kind = parse_scene_kind(kind);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("scene.kind: ") + e.what());
    }
    top.vec<2>("extent", spec.extent);
    top.get("height", spec.height);
    top.get("density", spec.density);
    top.get("corridor_width", spec.corridor_width);
    top.get("seed", spec.seed);
    top.finish();
    try {
      return generate_scene(spec, collision, robot_z);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  Scene scene;
  scene.ground_z = collision.ground_z;
  const json* list = top.child("gaussians");
  if (!list->is_array()) throw ConfigError("scene.gaussians: expected an array");
  for (std::size_t k = 0; k < list->size(); ++k) {
    Reader r((*list)[k], "scene.gaussians[" + std::to_string(k) + "]");
    Gaussian g;
    r.vec<3>("mean", g.mean);
    r.get("radius", g.radius);
    r.get("opacity", g.opacity);
    r.vec<3>("color", g.color);
    r.finish();
    if (!(g.radius > 0) || !(g.opacity >= 0 && g.opacity <= 1)) {
      throw ConfigError(r.path() + ": radius must be > 0 and opacity in [0, 1]");
    }
    scene.gt_map.add(g);
  }
  if (const json* b = top.child("bounds")) {
    Reader r(*b, "scene.bounds");
    r.vec<3>("min", scene.bounds.min);
    r.vec<3>("max", scene.bounds.max);
    r.finish();
  } else if (!scene.gt_map.empty()) {
    scene.bounds.min = scene.bounds.max = scene.gt_map[0].mean;
    for (const Gaussian& g : scene.gt_map.gaussians()) {
      scene.bounds.min = scene.bounds.min.cwiseMin(g.mean);
      scene.bounds.max = scene.bounds.max.cwiseMax(g.mean);
    }
  }
  Vec3 spawn(0.5 * (scene.bounds.min.x() + scene.bounds.max.x()), 0.5 * (scene.bounds.min.y() + scene.bounds.max.y()),
             0.0);
  top.vec<3>("spawn", spawn);
  top.finish();
  scene.spawn = {spawn.head<2>(), wrap_angle(spawn.z())};
  return scene;
}

Scene load_scene(const std::filesystem::path& path, const CollisionParams& collision, double robot_z) {
  return parse_scene(slurp(path), collision, robot_z);
}

}  // namespace gsx
