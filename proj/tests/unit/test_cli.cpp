#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "synthetic.hpp"
#include "volsafe/cli/commands.hpp"
#include "volsafe/cli/config.hpp"
#include "volsafe/errors.hpp"
#include "volsafe/scenario/model_io.hpp"

using namespace volsafe;
using namespace volsafe::cli;
namespace fs = std::filesystem;

namespace {

const std::string kRoot = VOLSAFE_SOURCE_DIR;

/// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) {
    path = fs::temp_directory_path() / ("volsafe_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = path / name;
    std::ofstream(p) << text;
    return p;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(VOLSAFE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string models_yaml(const std::vector<std::string>& names) {
  std::string s = "models:\n";
  for (const auto& n : names) s += "  - " + kRoot + "/models/" + n + "\n";
  return s;
}

}  // namespace

TEST_CASE("config includes merge and resolve relative paths") {
  TempDir d("include");
  fs::create_directories(d.path / "sub");
  d.write("base.yaml", "seed: 3\nbounds:\n  horizon: 7\n  vehicle_length: 0.0\nmc:\n  n_samples: 10\n");
  d.write("sub/run.yaml", "include: ../base.yaml\nseed: 4\nout: results\nbounds:\n  horizon: 9\n" +
                              models_yaml({"veh_a.yaml"}));
  const auto c = load_run_config(d.path / "sub/run.yaml");
  CHECK(c.seed == 4);
  CHECK(c.bounds.horizon == 9);
  CHECK(c.bounds.vehicle_length == 0.0);
  CHECK(c.mc.n_samples == 10);
  CHECK(fs::weakly_canonical(c.out_dir) == fs::weakly_canonical(d.path / "sub/results"));
  REQUIRE(c.models.size() == 1);
  CHECK(c.models[0].cf.k1 == doctest::Approx(0.018));

  const auto j = config_to_json(c);
  CHECK(j.at("seed").get<std::uint64_t>() == 4);
}

TEST_CASE("config errors name the field") {
  TempDir d("errors");
  auto path_of = [&](const std::string& text) -> std::string {
    const auto p = d.write("c.yaml", text);
    try {
      load_run_config(p).validate();
    } catch (const ConfigError& e) {
      return e.path();
    }
    return "<none>";
  };
  const std::string m = models_yaml({"veh_a.yaml"});
  CHECK(path_of(m + "mc:\n  n_sampels: 5\n") == "mc.n_sampels");
  CHECK(path_of(m + "colour: red\n") == "colour");
  CHECK(path_of(m + "engines: []\n") == "engines");
  CHECK(path_of(m + "engines: [mc, warp]\n") == "engines[1]");
  CHECK(path_of(m + "bounds:\n  dt: fast\n") == "bounds.dt");
  CHECK(path_of(m + "poly:\n  horizons: [1, 0]\n") == "poly.horizons[1]");
  CHECK(path_of("models: [nowhere.yaml]\n") == "models[0]");
  d.write("a.yaml", "include: b.yaml\n");
  d.write("b.yaml", "include: a.yaml\n");
  CHECK_THROWS_AS(load_run_config(d.path / "a.yaml"), ConfigError);
}

TEST_CASE("mc-eval output is reproducible") {
  TempDir d("mc");
  const auto p = d.write("c.yaml", "seed: 5\nout: o1\nmc:\n  n_samples: 3000\n" +
                                       models_yaml({"milanes_thw1.0.yaml", "milanes_thw1.5.yaml"}));
  RunConfig c = load_run_config(p);
  const auto r1 = cmd_mc_eval(c);
  Overrides o;
  o.out = d.path / "o2";
  apply_overrides(c, o);
  const auto r2 = cmd_mc_eval(c);
  REQUIRE(r1.files.size() == 4);
  REQUIRE(r2.files.size() == 4);
  for (std::size_t i = 0; i < r1.files.size(); ++i) {
    CHECK(r1.files[i].filename() == r2.files[i].filename());
    if (r1.files[i].extension() == ".csv") CHECK(slurp(r1.files[i]) == slurp(r2.files[i]));
  }
  CHECK(r1.report.at("command") == "mc-eval");
}

TEST_CASE("poly-vol rows") {
  TempDir d("poly");
  const auto p = d.write("c.yaml", "out: o\nengines: [ve, mc]\nmc:\n  n_samples: 20000\npoly:\n"
                                   "  horizons: [1, 2, 10]\n" +
                                       models_yaml({"milanes_thw1.5.yaml"}));
  RunConfig c = load_run_config(p);
  std::vector<PolyVolRow> rows;
  c.engines = {Engine::ve};
  c.poly.horizons = {10};
  cmd_poly_vol(c, &rows);
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].feasible);

  c = load_run_config(p);
  c.poly.horizons = {1, 2};
  const auto r = cmd_poly_vol(c, &rows);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    CHECK(row.feasible);
    if (row.engine == Engine::mc) {
      REQUIRE(row.rel_error_vs_ve.has_value());
      CHECK(std::abs(*row.rel_error_vs_ve) < 15.0);
    }
  }
  CHECK(fs::exists(d.path / "o/poly_vol.csv"));
  std::istringstream csv(slurp(d.path / "o/poly_vol.csv"));
  std::string header;
  std::getline(csv, header);
  CHECK(header == "horizon,engine,status,percent,runtime_seconds,rel_error_vs_ve_percent");

  c.bounds.lane_count = 3;
  CHECK_THROWS_AS(cmd_poly_vol(c), ConfigError);
}

TEST_CASE("rank needs two models and flags ties") {
  TempDir d("rank");
  const auto one = d.write("one.yaml", "out: o\nmc:\n  n_samples: 100\n" +
                                           models_yaml({"veh_a.yaml"}));
  CHECK_THROWS_AS(cmd_rank(load_run_config(one)), ConfigError);

  const auto two = d.write("two.yaml", "out: o\nmc:\n  n_samples: 3000\n" +
                                           models_yaml({"veh_a.yaml", "veh_a.yaml"}));
  const auto r = cmd_rank(load_run_config(two));
  const auto& ranking = r.report.at("ranking").at("ranking");
  REQUIRE(ranking.size() == 2);
  CHECK(ranking[0].at("tie_with_next").get<bool>());
  CHECK(fs::exists(d.path / "o/ranking.csv"));
}

TEST_CASE("calibrate writes loadable model files") {
  TempDir d("calib");
  const auto recs = volsafe::testing::synthetic_trajectory(
      milanes_to_generalized(LinearCfParams::milanes(0.23, 0.07, 1.5)), 300, 11);
  {
    std::ofstream f(d.path / "run1.csv");
    write_trajectory_csv(f, recs);
  }
  RunConfig c;
  c.out_dir = d.path / "o";
  c.calibrate.inputs = {d.path / "run1.csv"};
  const auto r = cmd_calibrate(c);
  const auto m = load_model(d.path / "o/run1.yaml");
  CHECK(m.cf.form == CfForm::milanes);
  CHECK(m.cf.t_hw == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(fs::exists(d.path / "o/calibration.csv"));

  c.calibrate.inputs.clear();
  CHECK_THROWS_AS(cmd_calibrate(c), ConfigError);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ConfigError("x", "y")) == kExitValidation);
  CHECK(exit_code_for(ParseError(3, "y")) == kExitValidation);
  CHECK(exit_code_for(InvalidArgument("y")) == kExitValidation);
  CHECK(exit_code_for(InfeasibleError("y")) == kExitInfeasible);
  CHECK(exit_code_for(std::runtime_error("y")) == kExitRuntime);

  TempDir d("exit");
  const auto good = d.write("good.yaml", "out: " + (d.path / "o").string() +
                                             "\nmc:\n  n_samples: 200\n" +
                                             models_yaml({"veh_a.yaml"}));
  CHECK(run_cli("mc-eval -c " + good.string()) == 0);
  CHECK(run_cli("mc-eval -c " + good.string() + " --seed 2 -n 50 -T 5") == 0);
  CHECK(run_cli("mc-eval -c " + (d.path / "missing.yaml").string()) == kExitValidation);
  CHECK(run_cli("mc-eval") == kExitValidation);
  CHECK(run_cli("frobnicate") == kExitValidation);
  CHECK(run_cli("mc-eval -c " + good.string() + " --mode sideways") == kExitValidation);

  const auto bad = d.write("bad.yaml", "mc:\n  n_sampels: 3\n" + models_yaml({"veh_a.yaml"}));
  CHECK(run_cli("mc-eval -c " + bad.string()) == kExitValidation);
  CHECK(run_cli("rank -c " + good.string()) == kExitValidation);
  CHECK(run_cli("poly-vol -c " + good.string() + " --engines ve -T 10") == 0);

  const auto csv = d.write("broken.csv", "time,leader_speed,follower_speed,gap\n0,1,1,10\n0,1,1\n");
  CHECK(run_cli("calibrate -o " + (d.path / "c").string() + " " + csv.string()) ==
        kExitValidation);
  CHECK(run_cli("calibrate -o " + (d.path / "c").string()) == kExitValidation);
}
