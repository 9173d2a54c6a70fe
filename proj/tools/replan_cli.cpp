#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "replan/errors.hpp"
#include "replan/pipeline.hpp"

namespace fs = std::filesystem;
using namespace replan;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  fs::create_directories(fs::path(path).parent_path().empty()
                             ? fs::path(".")
                             : fs::path(path).parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

struct Paths {
  std::string dir;
  std::string nominal() const { return dir + "/nominal.json"; }
  std::string screening() const { return dir + "/screening.json"; }
  std::string grid_reduced() const { return dir + "/grid_reduced.bin"; }
  std::string grid_full() const { return dir + "/grid_full.bin"; }
  std::string records() const { return dir + "/records.csv"; }
  std::string summary() const { return dir + "/summary.json"; }
  std::string histograms() const { return dir + "/histogram.json"; }
  std::string timing() const { return dir + "/timing.json"; }
  std::string report() const { return dir + "/report.md"; }
};

NominalResult load_nominal(const Paths& p, const ExperimentConfig& cfg) {
  return NominalResult::from_json(slurp(p.nominal()), cfg);
}

ScreeningReport load_screening(const Paths& p) {
  return ScreeningReport::from_json(slurp(p.screening()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory replanning toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_override;
  std::optional<std::uint64_t> seed_override;
  std::optional<int> samples_override;
  std::optional<std::string> mode_override;
  app.add_option("--config", config_path, "key=value experiment config file");
  app.add_option("--out", out_override, "output directory (overrides config)");
  auto* seed_opt = app.add_option("--seed", "sweep RNG seed (overrides config)");
  auto* samples_opt = app.add_option("--samples", "QMC sample count (overrides config)");
  auto* mode_opt =
      app.add_option("--mode", "sweep mode: reduced or full (overrides config)");

  auto* c_nominal = app.add_subcommand("nominal", "solve the nominal problem");
  auto* c_screen = app.add_subcommand("screen", "parameter screening (DGSM + Sobol bounds)");
  auto* c_pre = app.add_subcommand("precompute", "build the sensitivity grid(s)");
  std::string grid_path_override;
  c_pre->add_option("--grid", grid_path_override, "reduced-grid output path");
  auto* c_sim = app.add_subcommand("simulate", "one mid-flight parameter change");
  int sim_draw = 0;
  c_sim->add_option("--draw", sim_draw, "draw index for the RNG substream");
  auto* c_sweep = app.add_subcommand("sweep", "Monte Carlo sweep over parameter changes");
  auto* c_report = app.add_subcommand("report", "render markdown report from sweep outputs");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{}
                                               : ExperimentConfig::from_file(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (seed_opt->count()) cfg.seed = seed_opt->as<std::uint64_t>();
    if (samples_opt->count()) cfg.qmc_samples = samples_opt->as<int>();
    if (mode_opt->count()) cfg.mode = mode_opt->as<std::string>();
    cfg.validate();
    Paths paths{cfg.out_dir};
    fs::create_directories(paths.dir);

    if (c_nominal->parsed()) {
      const NominalResult nom = run_nominal(cfg);
      spit(paths.nominal(), nom.to_json());
      std::cout << "nominal: cost " << nom.report.cost << ", grad norm "
                << nom.report.grad_norm << ", " << nom.report.iterations
                << " iterations -> " << paths.nominal() << "\n";
    } else if (c_screen->parsed()) {
      const NominalResult nom = load_nominal(paths, cfg);
      const ScreeningReport rep = run_screening(cfg, nom);
      spit(paths.screening(), rep.to_json());
      std::cout << "screening: " << rep.important.size() << " important parameters -> "
                << paths.screening() << "\n";
    } else if (c_pre->parsed()) {
      const NominalResult nom = load_nominal(paths, cfg);
      const ScreeningReport scr = load_screening(paths);
      const std::string reduced_path =
          grid_path_override.empty() ? paths.grid_reduced() : grid_path_override;
      const JacobianGrid gr = run_precompute(cfg, nom, scr.important, cfg.grid_m);
      save_grid(gr, reduced_path);
      std::cout << "precompute: reduced grid, " << gr.n_nodes() << " nodes -> "
                << reduced_path << "\n";
      if (cfg.mode == "full") {
        std::vector<int> all_dims(shuttle::kNumParams);
        for (int j = 0; j < shuttle::kNumParams; ++j) all_dims[j] = j;
        const JacobianGrid gf = run_precompute(cfg, nom, all_dims, cfg.grid_m_full);
        save_grid(gf, paths.grid_full());
        std::cout << "precompute: full grid, " << gf.n_nodes() << " nodes -> "
                  << paths.grid_full() << "\n";
      }
    } else if (c_sim->parsed() || c_sweep->parsed()) {
      const NominalResult nom = load_nominal(paths, cfg);
      const ScreeningReport scr = load_screening(paths);
      const JacobianGrid gr = load_grid(paths.grid_reduced());
      std::optional<JacobianGrid> gf;
      if (cfg.mode == "full") gf = load_grid(paths.grid_full());
      const SweepContext ctx =
          make_sweep_context(cfg, nom, scr, &gr, gf ? &*gf : nullptr);

      if (c_sim->parsed()) {
        DrawRng rng(cfg.seed, static_cast<std::uint64_t>(sim_draw));
        Eigen::VectorXd theta1 = Eigen::VectorXd::Zero(shuttle::kNumParams);
        if (cfg.mode == "full")
          for (int j = 0; j < shuttle::kNumParams; ++j) theta1[j] = rng.uniform_pm1();
        else
          for (int j : scr.important) theta1[j] = rng.uniform_pm1();
        SweepResult one;
        one.mode = cfg.mode;
        one.nominal_u = nom.u_star;
        one.nominal_cost = nom.report.cost;
        one.records.push_back(simulate_change(cfg, ctx, sim_draw, theta1));
        std::cout << records_csv(one);
      } else {
        const SweepResult res = run_sweep(cfg, ctx);
        spit(paths.records(), records_csv(res));
        spit(paths.summary(), summary_json(res));
        spit(paths.histograms(), histogram_json(res));
        spit(paths.timing(), timing_json(res));
        std::cout << "sweep: " << res.records.size() << " draws -> " << paths.records()
                  << ", " << paths.summary() << ", " << paths.histograms() << "\n";
      }
    } else if (c_report->parsed()) {
      const std::string timing_text =
          fs::exists(paths.timing()) ? slurp(paths.timing()) : std::string();
      const std::string md =
          render_report(slurp(paths.summary()), slurp(paths.screening()), timing_text);
      spit(paths.report(), md);
      std::cout << md;
    }
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"]["message"] = e.what();
    std::cerr << err.dump() << std::endl;
    return 1;
  }
  return 0;
}
