#include "replan/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "replan/errors.hpp"
#include "replan/eval_counters.hpp"
#include "replan/ode.hpp"

namespace replan {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(const Clock::time_point& t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Run fn(0..n-1) on worker threads; deterministic output slots, first
// exception rethrown by index.
void parallel_for(int n, const std::function<void(int)>& fn) {
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int workers = std::max(1, std::min(hw, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errs(n);
  std::atomic<int> next{0};
  auto body = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

double median_of(std::vector<double> v) {
  v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return !std::isfinite(x); }),
          v.end());
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  int n = 0;
  for (double x : v)
    if (std::isfinite(x)) {
      s += x;
      ++n;
    }
  return n ? s / n : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

DrawRng::DrawRng(std::uint64_t seed, std::uint64_t draw)
    : state_(seed ^ (0x9e3779b97f4a7c15ull * (draw + 1))) {
  // burn-in decorrelates nearby seeds
  splitmix64(state_);
  splitmix64(state_);
}

double DrawRng::uniform_pm1() {
  const std::uint64_t bits = splitmix64(state_);
  const double u01 = (bits >> 11) * 0x1.0p-53;  // [0, 1)
  return 2.0 * u01 - 1.0;
}

std::string NominalResult::to_json() const {
  nlohmann::ordered_json j;
  j["u_star"] = std::vector<double>(u_star.data(), u_star.data() + u_star.size());
  j["xbar"] = std::vector<double>(spec.xbar.data(), spec.xbar.data() + 4);
  j["cost"] = report.cost;
  j["grad_norm"] = report.grad_norm;
  j["iterations"] = report.iterations;
  j["converged"] = report.converged;
  j["wall_time_s"] = report.wall_time_s;
  return j.dump(2) + "\n";
}

NominalResult NominalResult::from_json(const std::string& text, const ExperimentConfig& cfg) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("nominal result: bad JSON: ") + e.what());
  }
  NominalResult nom{shuttle::shuttle_problem(cfg.problem), {}, {}, {}, {}};
  auto u = j.at("u_star").get<std::vector<double>>();
  auto xb = j.at("xbar").get<std::vector<double>>();
  if (xb.size() != 4) throw IoError("nominal result: xbar must have 4 entries");
  nom.u_star = Eigen::Map<Eigen::VectorXd>(u.data(), u.size());
  nom.spec.xbar = Eigen::Map<Eigen::Vector4d>(xb.data());
  nom.report.u = nom.u_star;
  nom.report.cost = j.at("cost").get<double>();
  nom.report.grad_norm = j.at("grad_norm").get<double>();
  nom.report.iterations = j.at("iterations").get<int>();
  nom.report.converged = j.at("converged").get<bool>();
  nom.report.wall_time_s = j.at("wall_time_s").get<double>();
  nom.theta0 = shuttle::nominal_theta(cfg.problem.beta0);
  const GradFn grad = gradient_fn(nom.spec, nom.theta0);
  nom.hinv_seed =
      curvature_seed(hessian(grad, nom.u_star, nom.theta0.theta, cfg.hdsa.step_u));
  return nom;
}

NominalResult run_nominal(const ExperimentConfig& cfg) {
  cfg.validate();
  const ProblemSpec spec0 = shuttle::shuttle_problem(cfg.problem);
  const ThetaVector theta0 = shuttle::nominal_theta(cfg.problem.beta0);
  const Eigen::VectorXd theta_z = theta0.theta;

  const Eigen::VectorXd u0 =
      Eigen::VectorXd::Constant(spec0.control_grid.n_nodes(), cfg.u_init);

  auto solve = [&](const ProblemSpec& spec, const Eigen::VectorXd& start,
                   const Eigen::MatrixXd* seed) {
    const GradFn grad = gradient_fn(spec, theta0);
    const CostFn costf = cost_fn(spec, theta0);
    return minimize([&](const Eigen::VectorXd& u) { return costf(u, theta_z); },
                    [&](const Eigen::VectorXd& u) { return grad(u, theta_z); }, start,
                    cfg.opt, seed);
  };

  // Pass 1 with seed scales, then freeze scales from the resulting optimal
  // trajectory and re-solve under them, seeding the second pass with the
  // curvature at the first-pass optimum.
  const OptimReport pass1 = solve(spec0, u0, nullptr);
  const Trajectory traj1 =
      integrate(spec0.dynamics, spec0.x0, spec0.integ_grid,
                spec0.make_controller(pass1.u), dimensionalize(theta0));
  const ProblemSpec spec = spec0.with_scales_from(traj1);
  const GradFn grad2 = gradient_fn(spec, theta0);
  const Eigen::MatrixXd seed1 =
      curvature_seed(hessian(grad2, pass1.u, theta_z, cfg.hdsa.step_u));
  const OptimReport pass2 = solve(spec, pass1.u, &seed1);

  if (!pass2.converged && pass2.grad_norm > 100.0 * cfg.opt.grad_tol)
    throw OptimizationFailed("run_nominal: nominal solve did not converge (grad norm " +
                             std::to_string(pass2.grad_norm) + ")");
  const Eigen::MatrixXd hinv =
      curvature_seed(hessian(grad2, pass2.u, theta_z, cfg.hdsa.step_u));
  return NominalResult{spec, pass2.u, pass2, theta0, hinv};
}

ScreeningReport run_screening(const ExperimentConfig& cfg, const NominalResult& nom) {
  const int P = shuttle::kNumParams;
  const int M = cfg.qmc_samples;
  const Eigen::MatrixXd pts = qmc_samples(P, M);
  const GradFn grad = gradient_fn(nom.spec, nom.theta0);
  const CostFn costf = cost_fn(nom.spec, nom.theta0);

  std::vector<std::optional<SensitivityMatrix>> ds(M);
  std::vector<std::optional<Eigen::VectorXd>> us(M);
  parallel_for(M, [&](int k) {
    const Eigen::VectorXd theta = pts.row(k).transpose();
    try {
      const OptimReport rep = minimize_restarted(
          [&](const Eigen::VectorXd& u) { return costf(u, theta); },
          [&](const Eigen::VectorXd& u) { return grad(u, theta); }, nom.u_star, cfg.opt,
          &nom.hinv_seed, 2, cfg.hdsa.step_u);
      if (!rep.converged && rep.grad_norm > 10.0 * cfg.opt.grad_tol) return;
      ds[k] = hdsa_at(grad, rep.u, theta, cfg.hdsa);
      us[k] = rep.u;
    } catch (const Error&) {
      // sample skipped and logged via samples_used
    }
  });

  std::vector<SensitivityMatrix> d_samples;
  std::vector<Eigen::VectorXd> u_samples;
  for (int k = 0; k < M; ++k)
    if (ds[k]) {
      d_samples.push_back(*ds[k]);
      u_samples.push_back(*us[k]);
    }
  const int used = static_cast<int>(d_samples.size());
  if (used < M - M / 5)
    throw TooManyFailedSamples("run_screening: only " + std::to_string(used) + " of " +
                               std::to_string(M) + " QMC samples optimized");

  const Eigen::VectorXd dgsm = dgsm_estimate(d_samples);
  const double tr = trace_covariance(u_samples);
  std::vector<std::string> names(shuttle::kParamNames, shuttle::kParamNames + P);
  ScreeningReport rep = screen(dgsm, tr, cfg.threshold, used, std::move(names));
  if (rep.important.empty())
    throw EmptyImportantSet("run_screening: no parameter exceeds the Sobol-bound threshold");
  return rep;
}

JacobianGrid run_precompute(const ExperimentConfig& cfg, const NominalResult& nom,
                            const std::vector<int>& dims, int nodes_per_dim) {
  GridBuildSettings settings;
  settings.nodes_per_dim = nodes_per_dim;
  settings.opt = cfg.opt;
  settings.hdsa = cfg.hdsa;
  settings.h0_inv = &nom.hinv_seed;
  return build_jacobian_grid(nom.spec, nom.theta0, nom.u_star, dims, settings);
}

SweepContext make_sweep_context(const ExperimentConfig& cfg, const NominalResult& nom,
                                const ScreeningReport& screening,
                                const JacobianGrid* grid_reduced,
                                const JacobianGrid* grid_full) {
  if (!grid_reduced) throw ConfigError("sweep: reduced grid is required");
  if (cfg.mode == "full" && !grid_full)
    throw ConfigError("sweep: full mode requires the full-space grid");
  const GradFn grad = gradient_fn(nom.spec, nom.theta0);
  SensitivityMatrix d0 = hdsa_at(grad, nom.u_star, nom.theta0.theta, cfg.hdsa);
  return SweepContext{nom, screening, std::move(d0), grid_reduced, grid_full};
}

namespace {

// Nominal flight until t_change, then the spliced controller under theta1.
struct RealizedEvaluator {
  const ExperimentConfig& cfg;
  const NominalResult& nom;
  int k_change;   // integration node index of the parameter jump
  int splice_at;  // first controller node at or after t_change
  Trajectory head;  // nominal flight on [0, t_change]
  // Remaining-flight problem: same penalties and controller basis, but
  // integrated from the realized state at t_change. Head penalty terms are
  // constant w.r.t. the tail coefficients, so minimizing this matches
  // minimizing the realized spliced cost.
  ProblemSpec tail_spec;

  RealizedEvaluator(const ExperimentConfig& c, const NominalResult& n) : cfg(c), nom(n) {
    const TimeGrid& ig = nom.spec.integ_grid;
    k_change = static_cast<int>(std::lround(c.t_change / ig.dt()));
    k_change = std::clamp(k_change, 0, ig.n_steps);
    const TimeGrid& cg = nom.spec.control_grid;
    splice_at =
        static_cast<int>(std::ceil((c.t_change - cg.t0) / cg.dt() - 1e-9));
    splice_at = std::clamp(splice_at, 0, cg.n_steps);
    tail_spec = nom.spec;
    if (k_change > 0) {
      const TimeGrid head_grid(ig.t0, ig.node(k_change), k_change);
      head = integrate(nom.spec.dynamics, nom.spec.x0, head_grid,
                       nom.spec.make_controller(nom.u_star), dimensionalize(nom.theta0));
      if (k_change < ig.n_steps) {
        tail_spec.integ_grid = TimeGrid(ig.node(k_change), ig.T, ig.n_steps - k_change);
        tail_spec.x0 = head.final_state();
      }
    }
  }

  double realized_cost(const Eigen::VectorXd& u_new, const ThetaVector& theta1) const {
    Eigen::VectorXd spliced = nom.u_star;
    spliced.tail(spliced.size() - splice_at) = u_new.tail(u_new.size() - splice_at);

    const TimeGrid& ig = nom.spec.integ_grid;
    Trajectory full;
    full.grid = ig;
    if (k_change == 0) {
      full = integrate(nom.spec.dynamics, nom.spec.x0, ig,
                       nom.spec.make_controller(spliced), dimensionalize(theta1));
    } else if (k_change == ig.n_steps) {
      full = head;
    } else {
      const TimeGrid tail_grid(ig.node(k_change), ig.T, ig.n_steps - k_change);
      const Trajectory tail =
          integrate(nom.spec.dynamics, head.final_state(), tail_grid,
                    nom.spec.make_controller(spliced), dimensionalize(theta1));
      full.states = head.states;
      full.states.insert(full.states.end(), tail.states.begin() + 1, tail.states.end());
    }
    return cost_of_trajectory(nom.spec, full);
  }
};

MethodOutcome finish_outcome(const RealizedEvaluator& ev, Eigen::VectorXd u,
                             const ThetaVector& theta1, double secs, bool converged,
                             const EvalCounters::Snapshot& before) {
  MethodOutcome out;
  out.u = std::move(u);
  out.replan_seconds = secs;
  out.converged = converged;
  const auto d = EvalCounters::delta(before);
  out.dynamics_calls = d.dynamics;
  out.cost_calls = d.cost;
  try {
    out.cost = ev.realized_cost(out.u, theta1);
  } catch (const Error&) {
    out.cost = std::numeric_limits<double>::quiet_NaN();  // flagged, not discarded
    out.converged = false;
  }
  return out;
}

}  // namespace

SweepRecord simulate_change(const ExperimentConfig& cfg, const SweepContext& ctx, int draw,
                            const Eigen::VectorXd& theta1_full) {
  const NominalResult& nom = ctx.nom;
  const RealizedEvaluator ev(cfg, nom);
  const double bound = nom.spec.u_bound;

  Eigen::VectorXd theta_masked = Eigen::VectorXd::Zero(theta1_full.size());
  for (int j : ctx.screening.important) theta_masked[j] = theta1_full[j];

  // In reduced mode the draw is already restricted to the important set; a
  // single variant per method. Full mode adds the 7-parameter variant first.
  std::vector<Eigen::VectorXd> variants;
  if (cfg.mode == "full") variants.push_back(theta1_full);
  variants.push_back(theta_masked);

  SweepRecord rec;
  rec.draw = draw;
  rec.theta1 = theta1_full;

  for (size_t vi = 0; vi < variants.size(); ++vi) {
    const Eigen::VectorXd& th1 = variants[vi];
    const ThetaVector tv1 = nom.theta0.with_theta(th1);
    const bool use_full_grid = (cfg.mode == "full" && vi == 0);

    if (th1.isZero(0.0)) {
      // Exact no-op perturbation: every method keeps the nominal controller.
      // (u* is not exactly stationary for the spliced objective, so without
      // this the tail reopt would drift off the nominal by ~grad tolerance.)
      for (auto* dst : {&rec.reopt, &rec.linear, &rec.interpolated}) {
        const auto before = EvalCounters::snapshot();
        dst->push_back(finish_outcome(ev, nom.u_star, tv1, 0.0, true, before));
      }
      continue;
    }

    {  // re-optimization of the realized spliced cost over the tail nodes
      const auto before = EvalCounters::snapshot();
      const auto t0 = Clock::now();
      bool conv = false;
      Eigen::VectorXd u = nom.u_star;
      const Eigen::Index n_tail = nom.u_star.size() - ev.splice_at;
      if (ev.k_change >= nom.spec.integ_grid.n_steps || n_tail == 0) {
        conv = true;  // the jump lands at the horizon; nothing left to replan
      } else {
        const GradFn tail_grad = gradient_fn(ev.tail_spec, nom.theta0);
        const CostFn tail_cost = cost_fn(ev.tail_spec, nom.theta0);
        const auto embed = [&](const Eigen::VectorXd& v) {
          Eigen::VectorXd full = nom.u_star;
          full.tail(n_tail) = v;
          return full;
        };
        const Eigen::MatrixXd seed = nom.hinv_seed.bottomRightCorner(n_tail, n_tail);
        try {
          const OptimReport rep = minimize_restarted(
              [&](const Eigen::VectorXd& v) { return tail_cost(embed(v), th1); },
              [&](const Eigen::VectorXd& v) {
                return Eigen::VectorXd(tail_grad(embed(v), th1).tail(n_tail));
              },
              nom.u_star.tail(n_tail), cfg.opt, &seed, 2, cfg.hdsa.step_u);
          u = embed(rep.u);
          conv = rep.converged;
        } catch (const Error&) {
        }
      }
      rec.reopt.push_back(finish_outcome(ev, u, tv1, seconds_since(t0), conv, before));
    }

    {  // first-order Taylor step from the nominal sensitivities
      const auto before = EvalCounters::snapshot();
      const auto t0 = Clock::now();
      Eigen::VectorXd u = linear_approx(nom.u_star, ctx.d_nominal,
                                        Eigen::VectorXd::Zero(th1.size()), th1, bound);
      rec.linear.push_back(finish_outcome(ev, u, tv1, seconds_since(t0), true, before));
    }

    {  // interpolated forward-Euler homotopy
      const JacobianGrid* grid = use_full_grid ? ctx.grid_full : ctx.grid_reduced;
      Eigen::VectorXd th1_r(grid->dim());
      for (int k = 0; k < grid->dim(); ++k) th1_r[k] = th1[grid->dims[k]];
      const auto before = EvalCounters::snapshot();
      const auto t0 = Clock::now();
      HomotopyConfig hc{.steps = cfg.homotopy_steps, .u_bound = bound};
      bool ok = true;
      Eigen::VectorXd u = nom.u_star;
      try {
        u = homotopy_approx(nom.u_star, Eigen::VectorXd::Zero(grid->dim()), th1_r, hc,
                            grid_provider(*grid));
      } catch (const Error&) {
        ok = false;
      }
      rec.interpolated.push_back(
          finish_outcome(ev, u, tv1, seconds_since(t0), ok, before));
    }
  }
  return rec;
}

SweepResult run_sweep(const ExperimentConfig& cfg, const SweepContext& ctx) {
  cfg.validate();
  const int P = shuttle::kNumParams;
  std::vector<int> active;
  if (cfg.mode == "full")
    for (int j = 0; j < P; ++j) active.push_back(j);
  else
    active = ctx.screening.important;

  SweepResult res;
  res.mode = cfg.mode;
  res.nominal_u = ctx.nom.u_star;
  res.nominal_cost = ctx.nom.report.cost;
  res.records.resize(cfg.sweep_size);

  parallel_for(cfg.sweep_size, [&](int draw) {
    DrawRng rng(cfg.seed, static_cast<std::uint64_t>(draw));
    Eigen::VectorXd theta1 = Eigen::VectorXd::Zero(P);
    for (int j : active) theta1[j] = rng.uniform_pm1();
    res.records[draw] = simulate_change(cfg, ctx, draw, theta1);
  });
  return res;
}

namespace {

struct Columns {
  std::vector<std::string> names;
  std::map<std::string, std::vector<double>> data;

  void add(const std::string& name) {
    names.push_back(name);
    data[name] = {};
  }
  void push(const std::string& name, double v) { data[name].push_back(v); }
};

Columns tabulate(const SweepResult& res) {
  const bool full = res.mode == "full";
  Columns c;
  c.add("draw");
  for (int j = 0; j < shuttle::kNumParams; ++j)
    c.add(std::string("theta1_") + shuttle::kParamNames[j]);
  const std::vector<std::string> methods = {"opt", "lin", "is"};
  const std::vector<std::string> variants =
      full ? std::vector<std::string>{"7", "3"} : std::vector<std::string>{""};
  for (const auto& v : variants)
    for (const auto& m : methods) c.add("J_" + m + v);
  for (const auto& v : variants) c.add("conv_opt" + v);
  if (full) {
    c.add("norm_opt7_opt3");
    c.add("norm_lin7_lin3");
    c.add("norm_is7_is3");
  }
  for (const auto& v : variants) {
    c.add("norm_opt" + v + "_lin" + v);
    c.add("norm_opt" + v + "_is" + v);
  }
  c.add("is_dynamics_calls");
  c.add("is_cost_calls");

  for (const auto& r : res.records) {
    c.push("draw", r.draw);
    for (int j = 0; j < shuttle::kNumParams; ++j)
      c.push(std::string("theta1_") + shuttle::kParamNames[j], r.theta1[j]);
    for (size_t vi = 0; vi < variants.size(); ++vi) {
      const auto& v = variants[vi];
      c.push("J_opt" + v, r.reopt[vi].cost);
      c.push("J_lin" + v, r.linear[vi].cost);
      c.push("J_is" + v, r.interpolated[vi].cost);
    }
    for (size_t vi = 0; vi < variants.size(); ++vi)
      c.push("conv_opt" + variants[vi], r.reopt[vi].converged ? 1.0 : 0.0);
    if (full) {
      c.push("norm_opt7_opt3", (r.reopt[0].u - r.reopt[1].u).norm());
      c.push("norm_lin7_lin3", (r.linear[0].u - r.linear[1].u).norm());
      c.push("norm_is7_is3", (r.interpolated[0].u - r.interpolated[1].u).norm());
    }
    for (size_t vi = 0; vi < variants.size(); ++vi) {
      const auto& v = variants[vi];
      c.push("norm_opt" + v + "_lin" + v, (r.reopt[vi].u - r.linear[vi].u).norm());
      c.push("norm_opt" + v + "_is" + v, (r.reopt[vi].u - r.interpolated[vi].u).norm());
    }
    c.push("is_dynamics_calls", static_cast<double>(r.interpolated.back().dynamics_calls));
    c.push("is_cost_calls", static_cast<double>(r.interpolated.back().cost_calls));
  }
  return c;
}

}  // namespace

std::string records_csv(const SweepResult& res) {
  const Columns c = tabulate(res);
  std::ostringstream out;
  for (size_t i = 0; i < c.names.size(); ++i)
    out << (i ? "," : "") << c.names[i];
  out << "\n";
  const size_t rows = res.records.size();
  for (size_t r = 0; r < rows; ++r) {
    for (size_t i = 0; i < c.names.size(); ++i)
      out << (i ? "," : "") << fmt(c.data.at(c.names[i])[r]);
    out << "\n";
  }
  return out.str();
}

std::string summary_json(const SweepResult& res) {
  const Columns c = tabulate(res);
  const bool full = res.mode == "full";
  nlohmann::ordered_json j;
  j["mode"] = res.mode;
  j["n_records"] = res.records.size();
  j["nominal_cost"] = res.nominal_cost;
  j["nominal_u_norm"] = res.nominal_u.norm();

  nlohmann::ordered_json stats;
  for (const auto& name : c.names) {
    if (name == "draw" || name.rfind("theta1_", 0) == 0) continue;
    const auto& col = c.data.at(name);
    int failures = 0;
    for (double x : col)
      if (!std::isfinite(x)) ++failures;
    nlohmann::ordered_json s;
    s["mean"] = mean_of(col);
    s["median"] = median_of(col);
    if (failures) s["non_finite"] = failures;
    stats[name] = s;
  }
  j["stats"] = stats;

  const std::string opt_is = full ? "norm_opt3_is3" : "norm_opt_is";
  const auto& norms = c.data.at(full ? "norm_opt3_is3" : "norm_opt_is");
  int below_abs = 0, below_rel = 0, finite = 0;
  const double rel_thresh = 0.2 * res.nominal_u.norm();
  for (double x : norms)
    if (std::isfinite(x)) {
      ++finite;
      if (x < 0.2) ++below_abs;
      if (x < rel_thresh) ++below_rel;
    }
  j["p_norm_below_0.2_abs"] = finite ? static_cast<double>(below_abs) / finite : 0.0;
  j["p_norm_below_0.2_rel"] = finite ? static_cast<double>(below_rel) / finite : 0.0;
  j["p_norm_column"] = opt_is;
  return j.dump(2) + "\n";
}

std::string timing_json(const SweepResult& res) {
  const bool full = res.mode == "full";
  const std::vector<std::string> variants =
      full ? std::vector<std::string>{"7", "3"} : std::vector<std::string>{""};
  auto times_of = [&](auto member, size_t vi) {
    std::vector<double> t;
    for (const auto& r : res.records) t.push_back((r.*member)[vi].replan_seconds);
    return t;
  };

  nlohmann::ordered_json j;
  j["mode"] = res.mode;
  for (size_t vi = 0; vi < variants.size(); ++vi) {
    const auto& v = variants[vi];
    const auto t_opt = times_of(&SweepRecord::reopt, vi);
    const auto t_lin = times_of(&SweepRecord::linear, vi);
    const auto t_is = times_of(&SweepRecord::interpolated, vi);
    j["t_opt" + v] = {{"mean", mean_of(t_opt)}, {"median", median_of(t_opt)}};
    j["t_lin" + v] = {{"mean", mean_of(t_lin)}, {"median", median_of(t_lin)}};
    j["t_is" + v] = {{"mean", mean_of(t_is)}, {"median", median_of(t_is)}};
  }
  const auto t_opt = times_of(&SweepRecord::reopt, variants.size() - 1);
  const auto t_is = times_of(&SweepRecord::interpolated, variants.size() - 1);
  const double mo = mean_of(t_opt), mi = mean_of(t_is);
  j["mean_replan_time_reopt_s"] = mo;
  j["mean_replan_time_interpolated_s"] = mi;
  j["speedup_reopt_over_interpolated"] = mi > 0.0 ? mo / mi : 0.0;
  return j.dump(2) + "\n";
}

std::string histogram_json(const SweepResult& res) {
  const Columns c = tabulate(res);
  const bool full = res.mode == "full";
  auto hist = [](const std::vector<double>& raw, int bins) {
    std::vector<double> v;
    for (double x : raw)
      if (std::isfinite(x)) v.push_back(x);
    nlohmann::ordered_json h;
    if (v.empty()) {
      h["counts"] = std::vector<int>{};
      h["edges"] = std::vector<double>{};
      return h;
    }
    const double lo = *std::min_element(v.begin(), v.end());
    const double hi_raw = *std::max_element(v.begin(), v.end());
    const double hi = hi_raw > lo ? hi_raw : lo + 1.0;
    std::vector<int> counts(bins, 0);
    for (double x : v) {
      int b = static_cast<int>((x - lo) / (hi - lo) * bins);
      counts[std::clamp(b, 0, bins - 1)]++;
    }
    std::vector<double> edges(bins + 1);
    for (int i = 0; i <= bins; ++i) edges[i] = lo + (hi - lo) * i / bins;
    h["counts"] = counts;
    h["edges"] = edges;
    return h;
  };

  std::vector<double> cost_diff;
  const auto& j_is = c.data.at(full ? "J_is3" : "J_is");
  const auto& j_opt = c.data.at(full ? "J_opt3" : "J_opt");
  for (size_t i = 0; i < j_is.size(); ++i) cost_diff.push_back(j_is[i] - j_opt[i]);

  nlohmann::ordered_json j;
  j["cost_difference"] = hist(cost_diff, 40);
  j["error_norm"] = hist(c.data.at(full ? "norm_opt3_is3" : "norm_opt_is"), 40);
  return j.dump(2) + "\n";
}

std::string render_report(const std::string& summary_json_text,
                          const std::string& screening_json_text,
                          const std::string& timing_json_text) {
  std::ostringstream out;
  try {
    if (!screening_json_text.empty()) {
      const ScreeningReport s = ScreeningReport::from_json(screening_json_text);
      out << "## Screening\n\n| parameter | DGSM | Sobol upper bound | important |\n";
      out << "|---|---|---|---|\n";
      for (int j : s.ranking) {
        const bool imp =
            std::find(s.important.begin(), s.important.end(), j) != s.important.end();
        out << "| " << s.param_names[j] << " | " << fmt(s.dgsm[j]) << " | "
            << fmt(s.bounds[j]) << " | " << (imp ? "yes" : "no") << " |\n";
      }
      out << "\n";
    }
    if (!summary_json_text.empty()) {
      const auto j = nlohmann::json::parse(summary_json_text);
      out << "## Sweep (" << j.at("mode").get<std::string>() << " mode, "
          << j.at("n_records").get<int>() << " draws)\n\n";
      out << "| metric | mean | median |\n|---|---|---|\n";
      for (const auto& [name, s] : j.at("stats").items())
        out << "| " << name << " | " << fmt(s.at("mean").get<double>()) << " | "
            << fmt(s.at("median").get<double>()) << " |\n";
      out << "\nP(" << j.at("p_norm_column").get<std::string>() << " < 0.2 abs) = "
          << fmt(j.at("p_norm_below_0.2_abs").get<double>()) << "\n";
      out << "P(< 0.2 * ||u*||) = " << fmt(j.at("p_norm_below_0.2_rel").get<double>())
          << "\n";
    }
    if (!timing_json_text.empty()) {
      const auto j = nlohmann::json::parse(timing_json_text);
      out << "\n## Timing\n\nMean replan time: reopt "
          << fmt(j.at("mean_replan_time_reopt_s").get<double>()) << " s, interpolated "
          << fmt(j.at("mean_replan_time_interpolated_s").get<double>()) << " s\n";
      out << "Replan speedup (reopt / interpolated): "
          << fmt(j.at("speedup_reopt_over_interpolated").get<double>()) << "x\n";
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("report: bad input JSON: ") + e.what());
  }
  return out.str();
}

}  // namespace replan
