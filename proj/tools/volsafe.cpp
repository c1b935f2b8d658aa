#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "volsafe/cli/commands.hpp"
#include "volsafe/errors.hpp"

namespace {

using namespace volsafe;
using namespace volsafe::cli;

std::vector<Engine> parse_engine_list(const std::string& text) {
  std::vector<Engine> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(parse_engine(item));
    } catch (const InvalidArgument& e) {
      throw ConfigError("--engines", e.what());
    }
  }
  if (out.empty()) throw ConfigError("--engines", "at least one engine is required");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Volume-based safety evaluation of automated-vehicle car-following models"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir, mode, engines, form;
  std::uint64_t samples = 0;
  int horizon = 0;
  std::vector<std::string> inputs;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config,-c", config_path, "YAML run configuration");
    if (config_required) opt->required();
    opt->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Master seed (overrides config)");
    sub->add_option("--out,-o", out_dir, "Output directory (overrides config)");
  };
  auto add_sampling = [&](CLI::App* sub) {
    sub->add_option("--samples,-n", samples, "Monte Carlo sample count");
    sub->add_option("--mode", mode, "clamping or polytope_consistent");
    sub->add_option("--horizon,-T", horizon, "Horizon T in steps");
  };

  CLI::App* mc_eval = app.add_subcommand("mc-eval", "Risk histogram per model by Monte Carlo");
  add_common(mc_eval, true);
  add_sampling(mc_eval);

  CLI::App* poly = app.add_subcommand("poly-vol", "Dangerous share by MC and polytope volumes");
  add_common(poly, true);
  add_sampling(poly);
  poly->add_option("--engines", engines, "Comma-separated subset of mc,ve,sob,cg");

  CLI::App* rank = app.add_subcommand("rank", "Rank two or more models by dangerous share");
  add_common(rank, true);
  add_sampling(rank);

  CLI::App* calib = app.add_subcommand("calibrate", "Fit car-following parameters to trajectories");
  add_common(calib, false);
  calib->add_option("--form", form, "milanes or generalized");
  calib->add_option("inputs", inputs, "Trajectory CSV files (override calibrate.inputs)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    Overrides o;
    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--seed")) o.seed = seed;
    if (sub->count("--out")) o.out = out_dir;
    if (sub->get_option_no_throw("--samples") && sub->count("--samples")) o.samples = samples;
    if (sub->get_option_no_throw("--mode") && sub->count("--mode")) {
      try {
        o.mode = parse_domain_mode(mode);
      } catch (const InvalidArgument& e) {
        throw ConfigError("--mode", e.what());
      }
    }
    if (sub->get_option_no_throw("--horizon") && sub->count("--horizon")) o.horizon = horizon;
    if (sub->get_option_no_throw("--engines") && sub->count("--engines"))
      o.engines = parse_engine_list(engines);
    if (sub->get_option_no_throw("--form") && sub->count("--form")) {
      try {
        o.form = parse_cf_form(form);
      } catch (const InvalidArgument& e) {
        throw ConfigError("--form", e.what());
      }
    }
    for (const auto& p : inputs) o.inputs.emplace_back(p);
    apply_overrides(cfg, o);

    CommandResult res;
    if (sub == mc_eval) {
      res = cmd_mc_eval(cfg);
    } else if (sub == poly) {
      res = cmd_poly_vol(cfg);
    } else if (sub == rank) {
      res = cmd_rank(cfg);
    } else {
      res = cmd_calibrate(cfg);
    }
    for (const auto& f : res.files) std::cout << f.string() << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}
