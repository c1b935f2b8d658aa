#include "volsafe/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "volsafe/errors.hpp"
#include "volsafe/scenario/model_io.hpp"

namespace volsafe::cli {

namespace fs = std::filesystem;

std::string_view to_string(Engine e) noexcept {
  switch (e) {
    case Engine::mc: return "mc";
    case Engine::ve: return "ve";
    case Engine::sob: return "sob";
    case Engine::cg: return "cg";
  }
  return "unknown";
}

Engine parse_engine(std::string_view s) {
  if (s == "mc") return Engine::mc;
  if (s == "ve") return Engine::ve;
  if (s == "sob") return Engine::sob;
  if (s == "cg") return Engine::cg;
  throw InvalidArgument("unknown engine '" + std::string(s) + "' (expected mc, ve, sob or cg)");
}

namespace {

std::string join(const std::string& ctx, const std::string& key) {
  return ctx.empty() ? key : ctx + "." + key;
}

std::string indexed(const std::string& ctx, std::size_t i) {
  return ctx + "[" + std::to_string(i) + "]";
}

void check_keys(const YAML::Node& node, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) throw ConfigError(ctx, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ConfigError(join(ctx, key), "unknown key");
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& path) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    if constexpr (std::is_floating_point_v<T>)
      throw ConfigError(path, "expected a number");
    else if constexpr (std::is_integral_v<T>)
      throw ConfigError(path, "expected an integer");
    else
      throw ConfigError(path, "expected a string");
  }
}

template <class T>
void read(const YAML::Node& node, const char* key, const std::string& ctx, T& dst) {
  if (const YAML::Node v = node[key]) dst = scalar<T>(v, join(ctx, key));
}

std::vector<std::string> string_list(const YAML::Node& v, const std::string& path) {
  std::vector<std::string> out;
  if (v.IsScalar()) {
    out.push_back(scalar<std::string>(v, path));
  } else if (v.IsSequence()) {
    for (std::size_t i = 0; i < v.size(); ++i)
      out.push_back(scalar<std::string>(v[i], indexed(path, i)));
  } else {
    throw ConfigError(path, "expected a string or a list of strings");
  }
  return out;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path q(p);
  return q.is_absolute() || base.empty() ? q : base / q;
}

YAML::Node load_yaml_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    YAML::Node n = YAML::Load(ss.str());
    return n.IsNull() ? YAML::Node(YAML::NodeType::Map) : n;
  } catch (const YAML::ParserException& e) {
    throw ParseError(static_cast<std::size_t>(e.mark.line + 1), path.string() + ": " + e.msg);
  }
}

void merge_into(YAML::Node dst, const YAML::Node& src) {
  for (const auto& kv : src) {
    const auto key = kv.first.as<std::string>();
    YAML::Node cur = dst[key];
    if (cur && cur.IsMap() && kv.second.IsMap())
      merge_into(cur, kv.second);
    else
      dst[key] = YAML::Clone(kv.second);
  }
}

/// Rewrites relative paths inside `node` against the directory of the
/// file that declared them, so includes from other directories work.
void anchor_paths(YAML::Node node, const fs::path& dir) {
  auto fix = [&](YAML::Node v) {
    if (v.IsScalar()) {
      v = resolve(dir, v.as<std::string>()).lexically_normal().string();
    } else if (v.IsSequence()) {
      for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i].IsScalar()) v[i] = resolve(dir, v[i].as<std::string>()).lexically_normal().string();
    }
  };
  if (!node.IsMap()) return;
  if (node["models"]) fix(node["models"]);
  if (node["out"]) fix(node["out"]);
  if (YAML::Node c = node["calibrate"]; c && c.IsMap() && c["inputs"]) fix(c["inputs"]);
}

YAML::Node load_tree(const fs::path& path, std::vector<fs::path>& stack) {
  const fs::path canon = fs::weakly_canonical(path);
  if (std::find(stack.begin(), stack.end(), canon) != stack.end())
    throw ConfigError(path.string(), "include cycle");
  stack.push_back(canon);

  YAML::Node own = load_yaml_file(path);
  if (!own.IsMap()) throw ConfigError(path.string(), "top level must be a mapping");
  const fs::path dir = path.parent_path();
  anchor_paths(own, dir);

  YAML::Node merged(YAML::NodeType::Map);
  if (const YAML::Node inc = own["include"]) {
    for (const auto& p : string_list(inc, path.string() + ": include"))
      merge_into(merged, load_tree(resolve(dir, p), stack));
    own.remove("include");
  }
  merge_into(merged, own);
  stack.pop_back();
  return merged;
}

void parse_bounds(const YAML::Node& n, ScenarioBounds& b) {
  const std::string ctx = "bounds";
  check_keys(n, ctx,
             {"horizon", "dt", "gap_min", "gap_max", "speed_min", "speed_max", "accel_min",
              "accel_max", "vehicle_length", "lane_count", "lane_change_duration"});
  read(n, "horizon", ctx, b.horizon);
  read(n, "dt", ctx, b.dt);
  read(n, "gap_min", ctx, b.gap_min);
  read(n, "gap_max", ctx, b.gap_max);
  read(n, "speed_min", ctx, b.speed_min);
  read(n, "speed_max", ctx, b.speed_max);
  read(n, "accel_min", ctx, b.accel_min);
  read(n, "accel_max", ctx, b.accel_max);
  read(n, "vehicle_length", ctx, b.vehicle_length);
  read(n, "lane_count", ctx, b.lane_count);
  read(n, "lane_change_duration", ctx, b.lane_change_duration);
}

void parse_mc(const YAML::Node& n, RunConfig& c) {
  const std::string ctx = "mc";
  check_keys(n, ctx,
             {"n_samples", "mode", "parallel_width", "max_draws_per_sample",
              "lateral_probability"});
  read(n, "n_samples", ctx, c.mc.n_samples);
  read(n, "parallel_width", ctx, c.mc.parallel_width);
  read(n, "max_draws_per_sample", ctx, c.mc.max_draws_per_sample);
  read(n, "lateral_probability", ctx, c.lateral_probability);
  if (const YAML::Node m = n["mode"]) {
    try {
      c.mc.mode = parse_domain_mode(scalar<std::string>(m, "mc.mode"));
    } catch (const InvalidArgument& e) {
      throw ConfigError("mc.mode", e.what());
    }
  }
}

void parse_poly(const YAML::Node& n, PolyVolSettings& p) {
  const std::string ctx = "poly";
  check_keys(n, ctx,
             {"eta", "horizons", "epsilon", "walk_length", "sob_factor", "cg_factor",
              "cooling_gamma", "ve_max_dimension"});
  read(n, "eta", ctx, p.eta);
  read(n, "epsilon", ctx, p.epsilon);
  read(n, "walk_length", ctx, p.walk_length);
  read(n, "sob_factor", ctx, p.sob_factor);
  read(n, "cg_factor", ctx, p.cg_factor);
  read(n, "cooling_gamma", ctx, p.cooling_gamma);
  read(n, "ve_max_dimension", ctx, p.ve_max_dimension);
  if (const YAML::Node h = n["horizons"]) {
    if (!h.IsSequence()) throw ConfigError("poly.horizons", "expected a list of integers");
    p.horizons.clear();
    for (std::size_t i = 0; i < h.size(); ++i)
      p.horizons.push_back(scalar<int>(h[i], indexed("poly.horizons", i)));
  }
}

void parse_calibrate(const YAML::Node& n, CalibrateSettings& s) {
  const std::string ctx = "calibrate";
  check_keys(n, ctx, {"form", "inputs", "delimiter", "columns"});
  if (const YAML::Node f = n["form"]) {
    try {
      s.form = parse_cf_form(scalar<std::string>(f, "calibrate.form"));
    } catch (const InvalidArgument& e) {
      throw ConfigError("calibrate.form", e.what());
    }
  }
  if (const YAML::Node in = n["inputs"]) {
    s.inputs.clear();
    for (const auto& p : string_list(in, "calibrate.inputs")) s.inputs.emplace_back(p);
  }
  if (const YAML::Node d = n["delimiter"]) {
    const auto v = scalar<std::string>(d, "calibrate.delimiter");
    if (v.size() != 1) throw ConfigError("calibrate.delimiter", "expected a single character");
    s.format.delimiter = v[0];
  }
  if (const YAML::Node cols = n["columns"]) {
    const std::string cctx = "calibrate.columns";
    check_keys(cols, cctx, {"time", "leader_speed", "follower_speed", "gap", "follower_accel"});
    read(cols, "time", cctx, s.format.time);
    read(cols, "leader_speed", cctx, s.format.leader_speed);
    read(cols, "follower_speed", cctx, s.format.follower_speed);
    read(cols, "gap", cctx, s.format.gap);
    read(cols, "follower_accel", cctx, s.format.follower_accel);
  }
}

}  // namespace

SamplingLayout RunConfig::layout() const {
  SamplingLayout l = SamplingLayout::for_bounds(bounds);
  l.lateral_probability = lateral_probability;
  return l;
}

void RunConfig::validate() const {
  auto wrap = [](const std::string& path, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const InvalidArgument& e) {
      throw ConfigError(path, e.what());
    }
  };
  wrap("bounds", [&] { bounds.validate(); });
  wrap("binning.thresholds", [&] { binning.validate(); });
  wrap("mc", [&] { mc.validate(); });
  wrap("mc.lateral_probability", [&] { layout().validate(bounds); });
  if (engines.empty()) throw ConfigError("engines", "at least one engine is required");
  if (!(poly.eta >= 0.0)) throw ConfigError("poly.eta", "must be non-negative");
  if (!(poly.epsilon > 0.0 && poly.epsilon < 1.0))
    throw ConfigError("poly.epsilon", "must lie in (0, 1)");
  if (poly.walk_length < 0) throw ConfigError("poly.walk_length", "must be non-negative");
  if (!(poly.sob_factor > 0.0)) throw ConfigError("poly.sob_factor", "must be positive");
  if (!(poly.cg_factor > 0.0)) throw ConfigError("poly.cg_factor", "must be positive");
  if (!(poly.cooling_gamma == 0.0 || (poly.cooling_gamma > 0.0 && poly.cooling_gamma < 1.0)))
    throw ConfigError("poly.cooling_gamma", "must be 0 (automatic) or lie in (0, 1)");
  if (poly.ve_max_dimension < 1) throw ConfigError("poly.ve_max_dimension", "must be positive");
  if (poly.horizons.empty()) throw ConfigError("poly.horizons", "at least one horizon is required");
  for (std::size_t i = 0; i < poly.horizons.size(); ++i)
    if (poly.horizons[i] < 1) throw ConfigError(indexed("poly.horizons", i), "must be >= 1");
  if (!(rank_eta >= 0.0)) throw ConfigError("rank.eta", "must be non-negative");
  for (std::size_t i = 0; i < models.size(); ++i)
    wrap(indexed("models", i), [&] { models[i].cf.validate(); });
}

RunConfig parse_run_config(const YAML::Node& tree, const fs::path& base_dir) {
  check_keys(tree, "",
             {"seed", "out", "bounds", "models", "binning", "engines", "mc", "poly", "rank",
              "calibrate"});
  RunConfig c;
  read(tree, "seed", "", c.seed);
  if (const YAML::Node o = tree["out"]) c.out_dir = resolve(base_dir, scalar<std::string>(o, "out"));
  if (const YAML::Node b = tree["bounds"]) parse_bounds(b, c.bounds);
  if (const YAML::Node m = tree["models"]) {
    const auto paths = string_list(m, "models");
    for (std::size_t i = 0; i < paths.size(); ++i) {
      const fs::path p = resolve(base_dir, paths[i]);
      if (!fs::exists(p)) throw ConfigError(indexed("models", i), "file not found: " + p.string());
      c.model_paths.push_back(p);
      c.models.push_back(load_model(p));
    }
  }
  if (const YAML::Node b = tree["binning"]) {
    check_keys(b, "binning", {"thresholds"});
    if (const YAML::Node t = b["thresholds"]) {
      if (!t.IsSequence()) throw ConfigError("binning.thresholds", "expected a list of numbers");
      c.binning.thresholds.clear();
      for (std::size_t i = 0; i < t.size(); ++i)
        c.binning.thresholds.push_back(scalar<double>(t[i], indexed("binning.thresholds", i)));
    }
  }
  if (const YAML::Node e = tree["engines"]) {
    const auto names = e.IsSequence() && e.size() == 0 ? std::vector<std::string>{}
                                                        : string_list(e, "engines");
    c.engines.clear();
    for (std::size_t i = 0; i < names.size(); ++i) {
      try {
        c.engines.push_back(parse_engine(names[i]));
      } catch (const InvalidArgument& ex) {
        throw ConfigError(indexed("engines", i), ex.what());
      }
    }
  }
  if (const YAML::Node m = tree["mc"]) parse_mc(m, c);
  if (const YAML::Node p = tree["poly"]) parse_poly(p, c.poly);
  if (const YAML::Node r = tree["rank"]) {
    check_keys(r, "rank", {"eta"});
    read(r, "eta", "rank", c.rank_eta);
  }
  if (const YAML::Node cal = tree["calibrate"]) {
    parse_calibrate(cal, c.calibrate);
    for (auto& p : c.calibrate.inputs) p = resolve(base_dir, p.string());
  }
  c.mc.seed = c.seed;
  return c;
}

YAML::Node load_config_tree(const fs::path& path) {
  std::vector<fs::path> stack;
  return load_tree(path, stack);
}

RunConfig load_run_config(const fs::path& path) {
  // load_tree already anchored relative paths, so no base directory here
  RunConfig c = parse_run_config(load_config_tree(path), {});
  c.source = path;
  return c;
}

nlohmann::json config_to_json(const RunConfig& c) {
  using nlohmann::json;
  const auto& b = c.bounds;
  json models = json::array();
  for (std::size_t i = 0; i < c.models.size(); ++i) {
    const auto& m = c.models[i];
    json jm = {{"name", m.name}, {"form", std::string(to_string(m.cf.form))},
               {"k1", m.cf.k1},  {"k2", m.cf.k2}};
    if (m.cf.form == CfForm::milanes)
      jm["t_hw"] = m.cf.t_hw;
    else
      jm.update({{"k3", m.cf.k3}, {"k4", m.cf.k4}});
    if (m.mobil)
      jm["mobil"] = {{"politeness", m.mobil->politeness},
                     {"threshold", m.mobil->threshold},
                     {"safe_braking", m.mobil->safe_braking}};
    if (i < c.model_paths.size()) jm["path"] = c.model_paths[i].string();
    models.push_back(jm);
  }
  json engines = json::array();
  for (Engine e : c.engines) engines.push_back(std::string(to_string(e)));
  json inputs = json::array();
  for (const auto& p : c.calibrate.inputs) inputs.push_back(p.string());
  const auto& f = c.calibrate.format;
  return {
      {"source", c.source.string()},
      {"seed", c.seed},
      {"out", c.out_dir.string()},
      {"bounds",
       {{"horizon", b.horizon},
        {"dt", b.dt},
        {"gap_min", b.gap_min},
        {"gap_max", b.gap_max},
        {"speed_min", b.speed_min},
        {"speed_max", b.speed_max},
        {"accel_min", b.accel_min},
        {"accel_max", b.accel_max},
        {"vehicle_length", b.vehicle_length},
        {"lane_count", b.lane_count},
        {"lane_change_duration", b.lane_change_duration}}},
      {"models", models},
      {"binning", {{"thresholds", c.binning.thresholds}}},
      {"engines", engines},
      {"mc",
       {{"n_samples", c.mc.n_samples},
        {"mode", std::string(to_string(c.mc.mode))},
        {"parallel_width", c.mc.parallel_width},
        {"max_draws_per_sample", c.mc.max_draws_per_sample},
        {"lateral_probability", c.lateral_probability}}},
      {"poly",
       {{"eta", c.poly.eta},
        {"horizons", c.poly.horizons},
        {"epsilon", c.poly.epsilon},
        {"walk_length", c.poly.walk_length},
        {"sob_factor", c.poly.sob_factor},
        {"cg_factor", c.poly.cg_factor},
        {"cooling_gamma", c.poly.cooling_gamma},
        {"ve_max_dimension", c.poly.ve_max_dimension}}},
      {"rank", {{"eta", c.rank_eta}}},
      {"calibrate",
       {{"form", std::string(to_string(c.calibrate.form))},
        {"inputs", inputs},
        {"delimiter", std::string(1, f.delimiter)},
        {"columns",
         {{"time", f.time},
          {"leader_speed", f.leader_speed},
          {"follower_speed", f.follower_speed},
          {"gap", f.gap},
          {"follower_accel", f.follower_accel}}}}},
  };
}

}  // namespace volsafe::cli
