#include "volsafe/scenario/model_io.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "volsafe/errors.hpp"

namespace volsafe {

namespace {

std::string join(const std::string& ctx, const std::string& key) {
  return ctx.empty() ? key : ctx + "." + key;
}

double number(const YAML::Node& node, const std::string& key, const std::string& ctx,
              std::optional<double> fallback) {
  const YAML::Node v = node[key];
  if (!v) {
    if (fallback) return *fallback;
    throw ConfigError(join(ctx, key), "missing required field");
  }
  try {
    return v.as<double>();
  } catch (const YAML::Exception&) {
    throw ConfigError(join(ctx, key), "expected a number");
  }
}

}  // namespace

BehaviorModel parse_model(const YAML::Node& node, const std::string& ctx) {
  if (!node.IsMap()) throw ConfigError(ctx, "model must be a mapping");
  BehaviorModel m;
  if (node["name"]) m.name = node["name"].as<std::string>();

  const std::string form = node["form"] ? node["form"].as<std::string>() : "milanes";
  try {
    m.cf.form = parse_cf_form(form);
  } catch (const InvalidArgument& e) {
    throw ConfigError(join(ctx, "form"), e.what());
  }
  m.cf.k1 = number(node, "k1", ctx, std::nullopt);
  m.cf.k2 = number(node, "k2", ctx, std::nullopt);
  if (m.cf.form == CfForm::milanes) {
    m.cf.t_hw = number(node, "t_hw", ctx, std::nullopt);
  } else {
    m.cf.k3 = number(node, "k3", ctx, std::nullopt);
    m.cf.k4 = number(node, "k4", ctx, 0.0);
    m.cf.t_hw = 0.0;
  }
  try {
    m.cf.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(ctx, e.what());
  }

  if (const YAML::Node mb = node["mobil"]) {
    const std::string mctx = join(ctx, "mobil");
    if (!mb.IsMap()) throw ConfigError(mctx, "expected a mapping");
    const MobilParams d;
    MobilParams p;
    p.politeness = number(mb, "politeness", mctx, d.politeness);
    p.threshold = number(mb, "threshold", mctx, d.threshold);
    p.safe_braking = number(mb, "safe_braking", mctx, d.safe_braking);
    try {
      p.validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError(mctx, e.what());
    }
    m.mobil = p;
  }
  return m;
}

BehaviorModel parse_model_text(const std::string& text, const std::string& ctx) {
  YAML::Node node;
  try {
    node = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ParseError(static_cast<std::size_t>(e.mark.line + 1), e.msg);
  }
  return parse_model(node, ctx);
}

BehaviorModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open model file");
  std::stringstream ss;
  ss << in.rdbuf();
  BehaviorModel m = parse_model_text(ss.str(), path.string());
  if (m.name.empty()) m.name = path.stem().string();
  return m;
}

std::string format_model(const BehaviorModel& m) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  if (!m.name.empty()) out << YAML::Key << "name" << YAML::Value << m.name;
  out << YAML::Key << "form" << YAML::Value << std::string(to_string(m.cf.form));
  out << YAML::Key << "k1" << YAML::Value << m.cf.k1;
  out << YAML::Key << "k2" << YAML::Value << m.cf.k2;
  if (m.cf.form == CfForm::milanes) {
    out << YAML::Key << "t_hw" << YAML::Value << m.cf.t_hw;
  } else {
    out << YAML::Key << "k3" << YAML::Value << m.cf.k3;
    out << YAML::Key << "k4" << YAML::Value << m.cf.k4;
  }
  if (m.mobil) {
    out << YAML::Key << "mobil" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "politeness" << YAML::Value << m.mobil->politeness;
    out << YAML::Key << "threshold" << YAML::Value << m.mobil->threshold;
    out << YAML::Key << "safe_braking" << YAML::Value << m.mobil->safe_braking;
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

void save_model(const BehaviorModel& m, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError(path.string(), "cannot write model file");
  f << format_model(m);
}

}  // namespace volsafe
