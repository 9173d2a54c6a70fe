#ifndef REPLAN_PIPELINE_HPP
#define REPLAN_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "replan/approx.hpp"
#include "replan/gsa.hpp"
#include "replan/shuttle.hpp"

namespace replan {

/// Everything one experiment run needs; loadable from a key=value config file.
struct ExperimentConfig {
  shuttle::ShuttleConfig problem;
  double u_init = 0.3;        // initial guess, rad, all coefficients
  int qmc_samples = 200;      // screening sample count M
  int grid_m = 5;             // reduced-grid nodes per dimension
  int grid_m_full = 3;        // full-space grid nodes per dimension
  int homotopy_steps = 16;    // M_h
  int sweep_size = 100;
  std::uint64_t seed = 2026;
  double t_change = 1000.0;   // s, halfway through the flight
  double threshold = 0.1;     // Sobol-bound screening threshold
  std::string mode = "reduced";  // "reduced" or "full"
  std::string out_dir = "out";
  OptimizerConfig opt{.max_iters = 4000, .grad_tol = 1e-6,
                      .lower = -M_PI / 2.0, .upper = M_PI / 2.0};
  HdsaConfig hdsa;

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_text(const std::string& text);
  void set(const std::string& key, const std::string& value);
  void validate() const;
};

/// Deterministic per-draw RNG substream (splitmix64).
class DrawRng {
 public:
  DrawRng(std::uint64_t seed, std::uint64_t draw);
  double uniform_pm1();  // U(-1, 1)

 private:
  std::uint64_t state_;
};

struct NominalResult {
  ProblemSpec spec;  // scales frozen from the nominal optimal trajectory
  Eigen::VectorXd u_star;
  OptimReport report;
  ThetaVector theta0;
  Eigen::MatrixXd hinv_seed;  // curvature_seed(H) at u*, for warm restarts

  std::string to_json() const;
  /// Rebuilds spec from the config; restores frozen scales, u*, and the
  /// curvature seed.
  static NominalResult from_json(const std::string& text, const ExperimentConfig& cfg);
};

/// Algorithm step 1: solve theta = 0, freeze normalization scales from the
/// optimal trajectory, re-solve under the frozen scales.
NominalResult run_nominal(const ExperimentConfig& cfg);

/// Algorithm step 3: QMC loop of re-optimize + HDSA, DGSMs, Sobol bounds,
/// important-parameter selection. Throws TooManyFailedSamples if more than
/// 20% of the QMC points fail to optimize.
ScreeningReport run_screening(const ExperimentConfig& cfg, const NominalResult& nom);

/// Algorithm steps 2/4: Jacobian grid over the given dimensions.
JacobianGrid run_precompute(const ExperimentConfig& cfg, const NominalResult& nom,
                            const std::vector<int>& dims, int nodes_per_dim);

enum class ReplanMethod { kReoptimize, kLinear, kInterpolated };

struct MethodOutcome {
  Eigen::VectorXd u;          // full-horizon replanned coefficients
  double cost = 0.0;          // penalty cost of the realized spliced trajectory
  double replan_seconds = 0.0;
  bool converged = true;
  std::uint64_t dynamics_calls = 0;  // instrumentation during the replan step
  std::uint64_t cost_calls = 0;
};

struct SweepRecord {
  int draw = 0;
  Eigen::VectorXd theta1;
  // full mode: index 0 = 7-parameter variant, 1 = reduced variant
  std::vector<MethodOutcome> reopt, linear, interpolated;
};

/// Inputs shared across draws: nominal solution, nominal HDSA matrix for the
/// Taylor step, and the grids each mode needs.
struct SweepContext {
  const NominalResult& nom;
  const ScreeningReport& screening;
  SensitivityMatrix d_nominal;               // full P columns
  const JacobianGrid* grid_reduced = nullptr;
  const JacobianGrid* grid_full = nullptr;   // required in full mode
};

SweepContext make_sweep_context(const ExperimentConfig& cfg, const NominalResult& nom,
                                const ScreeningReport& screening,
                                const JacobianGrid* grid_reduced,
                                const JacobianGrid* grid_full);

/// One mid-trajectory parameter change: nominal flight to t_change under
/// theta0, replan by each method, splice at the first controller node at or
/// after t_change, realized trajectory under theta1 from the realized state.
SweepRecord simulate_change(const ExperimentConfig& cfg, const SweepContext& ctx,
                            int draw, const Eigen::VectorXd& theta1);

struct SweepResult {
  std::vector<SweepRecord> records;
  std::string mode;
  Eigen::VectorXd nominal_u;
  double nominal_cost = 0.0;
};

/// Seeded sweep: draws theta1 on the active parameter set and runs
/// simulate_change per draw.
SweepResult run_sweep(const ExperimentConfig& cfg, const SweepContext& ctx);

/// Deterministic text outputs (doubles printed with %.17g). Wall times are
/// deliberately excluded so reruns with the same config + seed are
/// byte-identical; timing lives in timing_json.
std::string records_csv(const SweepResult& res);
std::string summary_json(const SweepResult& res);
std::string histogram_json(const SweepResult& res);

/// Replan wall-time statistics and the reopt/interpolated speedup. Not
/// deterministic across runs (real timings); kept out of the other outputs.
std::string timing_json(const SweepResult& res);

/// Markdown tables from summary.json + screening.json (+ optional timing.json).
std::string render_report(const std::string& summary_json_text,
                          const std::string& screening_json_text,
                          const std::string& timing_json_text = "");

}  // namespace replan

#endif  // REPLAN_PIPELINE_HPP
