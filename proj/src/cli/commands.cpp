#include "volsafe/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "volsafe/calibrate/fit.hpp"
#include "volsafe/errors.hpp"
#include "volsafe/format.hpp"
#include "volsafe/mc/report.hpp"
#include "volsafe/polytope/proportion.hpp"
#include "volsafe/scenario/model_io.hpp"

namespace volsafe::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const InfeasibleError*>(&e)) return kExitInfeasible;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const InvalidArgument*>(&e))
    return kExitValidation;
  return kExitRuntime;
}

void apply_overrides(RunConfig& c, const Overrides& o) {
  if (o.seed) {
    c.seed = *o.seed;
    c.mc.seed = *o.seed;
  }
  if (o.out) c.out_dir = *o.out;
  if (o.samples) c.mc.n_samples = *o.samples;
  if (o.mode) c.mc.mode = *o.mode;
  if (o.engines) c.engines = *o.engines;
  if (o.horizon) {
    c.bounds.horizon = *o.horizon;
    c.poly.horizons = {*o.horizon};
  }
  if (o.form) c.calibrate.form = *o.form;
  if (!o.inputs.empty()) c.calibrate.inputs = o.inputs;
}

namespace {

void write_file(const fs::path& path, const std::string& text, CommandResult& res) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
  if (!f) throw Error("write failed: " + path.string());
  res.files.push_back(path);
}

void prepare_out(const RunConfig& c) {
  std::error_code ec;
  fs::create_directories(c.out_dir, ec);
  if (ec) throw Error("cannot create output directory " + c.out_dir.string() + ": " + ec.message());
}

/// File-system friendly, unique per position.
std::vector<std::string> file_stems(const std::vector<BehaviorModel>& models) {
  std::vector<std::string> out;
  std::map<std::string, int> seen;
  for (std::size_t i = 0; i < models.size(); ++i) {
    std::string s = models[i].name.empty() ? "model" + std::to_string(i) : models[i].name;
    for (char& ch : s)
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.'))
        ch = '_';
    const int n = ++seen[s];
    out.push_back(n == 1 ? s : s + "_" + std::to_string(n));
  }
  return out;
}

json base_report(const char* command, const RunConfig& c) {
  return {{"command", command}, {"seed", c.seed}, {"config", config_to_json(c)}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void require_models(const RunConfig& c, std::size_t n) {
  if (c.models.size() < n)
    throw ConfigError("models", "at least " + std::to_string(n) + " model" + (n > 1 ? "s" : "") +
                                    " required, got " + std::to_string(c.models.size()));
}

}  // namespace

CommandResult cmd_mc_eval(const RunConfig& c) {
  c.validate();
  require_models(c, 1);
  prepare_out(c);
  CommandResult res;
  res.report = base_report("mc-eval", c);
  json results = json::array();
  const auto stems = file_stems(c.models);
  const SamplingLayout layout = c.layout();
  for (std::size_t i = 0; i < c.models.size(); ++i) {
    const RiskHistogram h = mc_estimate(c.models[i], c.bounds, c.binning, c.mc, layout);
    std::ostringstream csv;
    write_histogram_csv(csv, h);
    write_file(c.out_dir / (stems[i] + "_histogram.csv"), csv.str(), res);
    json model_report = base_report("mc-eval", c);
    model_report["model"] = c.models[i].name;
    model_report["histogram"] = histogram_to_json(h);
    write_file(c.out_dir / (stems[i] + "_report.json"), dump(model_report), res);
    results.push_back({{"model", c.models[i].name}, {"histogram", model_report["histogram"]}});
  }
  res.report["results"] = results;
  return res;
}

CommandResult cmd_poly_vol(const RunConfig& c, std::vector<PolyVolRow>* rows_out) {
  c.validate();
  require_models(c, 1);
  if (c.bounds.lane_count != 1)
    throw ConfigError("bounds.lane_count", "poly-vol covers the single-lane scenario only");
  if (!(c.poly.eta > 0.0)) throw ConfigError("poly.eta", "must be positive for poly-vol");
  prepare_out(c);

  const BehaviorModel& model = c.models.front();
  VolumeOptions vo;
  vo.ve.max_dimension = c.poly.ve_max_dimension;
  vo.sob.epsilon = vo.cg.epsilon = c.poly.epsilon;
  vo.sob.walk_length = vo.cg.walk_length = c.poly.walk_length;
  vo.sob.sample_factor = c.poly.sob_factor;
  vo.cg.sample_factor = c.poly.cg_factor;
  vo.cg.cooling_gamma = c.poly.cooling_gamma;
  vo.sob.seed = vo.cg.seed = c.seed;

  McConfig mc = c.mc;
  mc.mode = DomainMode::polytope_consistent;
  const RiskBinning binning{{c.poly.eta}};

  std::vector<PolyVolRow> rows;
  for (int T : c.poly.horizons) {
    ScenarioBounds b = c.bounds;
    b.horizon = T;
    std::optional<double> ve_percent;
    const std::size_t first = rows.size();
    for (Engine e : c.engines) {
      PolyVolRow row;
      row.horizon = T;
      row.engine = e;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        if (e == Engine::mc) {
          const RiskHistogram h = mc_estimate(model, b, binning, mc, SamplingLayout::single_lane());
          row.percent = 100.0 * h.dangerous_proportion(c.poly.eta);
          row.note = "accepted " + std::to_string(h.total_samples) + ", rejected " +
                     std::to_string(h.rejected_samples);
        } else {
          const VolumeMethod m = e == Engine::ve    ? VolumeMethod::ve
                                 : e == Engine::sob ? VolumeMethod::sob
                                                    : VolumeMethod::cg;
          if (m == VolumeMethod::ve && T + 3 > c.poly.ve_max_dimension)
            throw InfeasibleError("dimension " + std::to_string(T + 3) +
                                  " exceeds the vertex-enumeration guard " +
                                  std::to_string(c.poly.ve_max_dimension));
          const PolytopeProportion pp = dangerous_proportion_polytope(model.cf, b, c.poly.eta, m, vo);
          row.percent = 100.0 * pp.proportion;
          if (m == VolumeMethod::ve) {
            ve_percent = row.percent;
            row.note = "vertices " + std::to_string(pp.safe.vertices_found) + " / " +
                       std::to_string(pp.omega.vertices_found);
          } else {
            row.note = "samples " + std::to_string(pp.safe.samples_used + pp.omega.samples_used);
          }
        }
      } catch (const InfeasibleError& ex) {
        row.feasible = false;
        row.percent = std::nan("");
        row.note = ex.what();
      }
      row.runtime_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      rows.push_back(row);
    }
    if (ve_percent && *ve_percent > 0.0) {
      for (std::size_t k = first; k < rows.size(); ++k) {
        if (rows[k].feasible && rows[k].engine != Engine::ve)
          rows[k].rel_error_vs_ve = 100.0 * std::abs(rows[k].percent - *ve_percent) / *ve_percent;
      }
    }
  }

  CommandResult res;
  std::ostringstream csv;
  csv << "horizon,engine,status,percent,runtime_seconds,rel_error_vs_ve_percent\n";
  json jrows = json::array();
  for (const auto& r : rows) {
    const std::string engine(to_string(r.engine));
    csv << r.horizon << ',' << engine << ',' << (r.feasible ? "ok" : "infeasible") << ','
        << (r.feasible ? format_number(r.percent) : "") << ',' << format_number(r.runtime_seconds)
        << ',' << (r.rel_error_vs_ve ? format_number(*r.rel_error_vs_ve) : "") << '\n';
    jrows.push_back({{"horizon", r.horizon},
                     {"engine", engine},
                     {"status", r.feasible ? "ok" : "infeasible"},
                     {"percent", r.feasible ? json(r.percent) : json(nullptr)},
                     {"runtime_seconds", r.runtime_seconds},
                     {"rel_error_vs_ve_percent",
                      r.rel_error_vs_ve ? json(*r.rel_error_vs_ve) : json(nullptr)},
                     {"note", r.note}});
  }
  write_file(c.out_dir / "poly_vol.csv", csv.str(), res);
  res.report = base_report("poly-vol", c);
  res.report["model"] = model.name;
  res.report["eta"] = c.poly.eta;
  res.report["rows"] = jrows;
  write_file(c.out_dir / "poly_vol_report.json", dump(res.report), res);
  if (rows_out) *rows_out = std::move(rows);
  return res;
}

CommandResult cmd_rank(const RunConfig& c) {
  c.validate();
  require_models(c, 2);
  try {
    c.binning.bins_at_or_below(c.rank_eta);
  } catch (const InvalidArgument& e) {
    throw ConfigError("rank.eta", e.what());
  }
  prepare_out(c);
  const Ranking r = rank_models(c.models, c.bounds, c.binning, c.mc, c.layout(), c.rank_eta);

  CommandResult res;
  std::ostringstream csv;
  csv << "rank,name,dangerous_proportion,wilson_lower,wilson_upper,tie_with_next\n";
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    const auto& e = r.entries[i];
    csv << i + 1 << ',' << e.name << ',' << format_number(e.dangerous) << ','
        << format_number(e.interval.lower) << ',' << format_number(e.interval.upper) << ','
        << (i < r.tie_with_next.size() && r.tie_with_next[i] ? 1 : 0) << '\n';
  }
  write_file(c.out_dir / "ranking.csv", csv.str(), res);

  std::vector<BehaviorModel> ordered;
  for (const auto& e : r.entries) ordered.push_back(BehaviorModel{e.name, {}, {}});
  const auto stems = file_stems(ordered);
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    std::ostringstream h;
    write_histogram_csv(h, r.entries[i].histogram);
    write_file(c.out_dir / (stems[i] + "_cumulative.csv"), h.str(), res);
  }

  res.report = base_report("rank", c);
  res.report["ranking"] = ranking_to_json(r);
  write_file(c.out_dir / "ranking.json", dump(res.report), res);
  return res;
}

CommandResult cmd_calibrate(const RunConfig& c) {
  if (c.calibrate.inputs.empty())
    throw ConfigError("calibrate.inputs", "at least one trajectory file is required");
  prepare_out(c);

  CommandResult res;
  std::ostringstream csv;
  csv << "input,form,k1,k2,k3,k4,t_hw,rmse,n_points,residual_min,residual_max,residual_mean,"
         "warnings\n";
  json results = json::array();
  std::map<std::string, int> seen;
  for (std::size_t i = 0; i < c.calibrate.inputs.size(); ++i) {
    const fs::path& in_path = c.calibrate.inputs[i];
    std::ifstream in(in_path);
    if (!in) throw ConfigError("calibrate.inputs[" + std::to_string(i) + "]",
                               "cannot open " + in_path.string());
    std::vector<TrajectoryRecord> recs;
    try {
      recs = ingest_trajectory(in, c.calibrate.format);
    } catch (const ParseError& e) {
      throw ConfigError(in_path.string(), e.what());
    }
    const CalibrationResult fit = fit_linear(recs, c.calibrate.form);

    std::string stem = in_path.stem().string();
    if (const int n = ++seen[stem]; n > 1) stem += "_" + std::to_string(n);
    const BehaviorModel model{stem, fit.params, std::nullopt};
    const fs::path model_path = c.out_dir / (stem + ".yaml");
    write_file(model_path, format_model(model), res);

    std::string warnings;
    for (const auto& w : fit.warnings) warnings += (warnings.empty() ? "" : "; ") + w;
    const auto& p = fit.params;
    csv << in_path.string() << ',' << to_string(p.form) << ',' << format_number(p.k1) << ','
        << format_number(p.k2) << ',' << format_number(p.k3) << ',' << format_number(p.k4) << ','
        << format_number(p.t_hw) << ',' << format_number(fit.rmse) << ',' << fit.n_points << ','
        << format_number(fit.residual_min) << ',' << format_number(fit.residual_max) << ','
        << format_number(fit.residual_mean) << ",\"" << warnings << "\"\n";
    results.push_back({{"input", in_path.string()},
                       {"model_file", model_path.string()},
                       {"form", std::string(to_string(p.form))},
                       {"k1", p.k1},
                       {"k2", p.k2},
                       {"k3", p.k3},
                       {"k4", p.k4},
                       {"t_hw", p.t_hw},
                       {"rmse", fit.rmse},
                       {"n_points", fit.n_points},
                       {"residual", {{"min", fit.residual_min},
                                     {"max", fit.residual_max},
                                     {"mean", fit.residual_mean}}},
                       {"warnings", fit.warnings}});
  }
  write_file(c.out_dir / "calibration.csv", csv.str(), res);
  res.report = base_report("calibrate", c);
  res.report["results"] = results;
  write_file(c.out_dir / "calibration_report.json", dump(res.report), res);
  return res;
}

}  // namespace volsafe::cli
