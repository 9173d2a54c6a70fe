#include <fstream>
#include <sstream>

#include "replan/errors.hpp"
#include "replan/pipeline.hpp"

namespace replan {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for " + key + ": '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  const int i = static_cast<int>(d);
  if (i != d) throw ConfigError("config: expected integer for " + key);
  return i;
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "T") problem.T = to_double(key, value);
  else if (key == "n_steps") problem.n_steps = to_int(key, value);
  else if (key == "N") problem.N = to_int(key, value);
  else if (key == "beta0") problem.beta0 = to_double(key, value);
  else if (key == "beta1") problem.beta1 = to_double(key, value);
  else if (key == "beta2") problem.beta2 = to_double(key, value);
  else if (key == "beta3") problem.beta3 = to_double(key, value);
  else if (key == "beta4") problem.beta4 = to_double(key, value);
  else if (key == "beta5") problem.beta5 = to_double(key, value);
  else if (key == "beta6") problem.beta6 = to_double(key, value);
  else if (key == "beta7") problem.beta7 = to_double(key, value);
  else if (key == "u_init") u_init = to_double(key, value);
  else if (key == "qmc_samples") qmc_samples = to_int(key, value);
  else if (key == "grid_m") grid_m = to_int(key, value);
  else if (key == "grid_m_full") grid_m_full = to_int(key, value);
  else if (key == "homotopy_steps") homotopy_steps = to_int(key, value);
  else if (key == "sweep_size") sweep_size = to_int(key, value);
  else if (key == "seed") seed = static_cast<std::uint64_t>(to_double(key, value));
  else if (key == "t_change") t_change = to_double(key, value);
  else if (key == "threshold") threshold = to_double(key, value);
  else if (key == "mode") mode = value;
  else if (key == "out_dir") out_dir = value;
  else if (key == "max_iters") opt.max_iters = to_int(key, value);
  else if (key == "grad_tol") opt.grad_tol = to_double(key, value);
  else if (key == "hdsa_step_u") hdsa.step_u = to_double(key, value);
  else if (key == "hdsa_step_theta") hdsa.step_theta = to_double(key, value);
  else throw ConfigError("config: unknown key '" + key + "'");
}

void ExperimentConfig::validate() const {
  if (sweep_size < 1) throw ConfigError("config: sweep_size must be >= 1");
  if (qmc_samples < 1) throw ConfigError("config: qmc_samples must be >= 1");
  if (t_change < 0.0 || t_change > problem.T)
    throw ConfigError("config: t_change must lie in [0, T]");
  if (mode != "reduced" && mode != "full")
    throw ConfigError("config: mode must be 'reduced' or 'full'");
  if (grid_m < 2 || grid_m_full < 2)
    throw ConfigError("config: grid nodes per dim must be >= 2");
  if (homotopy_steps < 1) throw ConfigError("config: homotopy_steps must be >= 1");
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + " is not key = value");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

}  // namespace replan
