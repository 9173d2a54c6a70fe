#include "replan/gsa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "replan/errors.hpp"

namespace replan {

Eigen::VectorXd dgsm_estimate(const std::vector<SensitivityMatrix>& d_samples) {
  if (d_samples.empty()) throw ShapeMismatch("dgsm_estimate: no samples");
  const auto rows = d_samples.front().d.rows();
  const auto cols = d_samples.front().d.cols();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(cols);
  for (const auto& s : d_samples) {
    if (s.d.rows() != rows || s.d.cols() != cols)
      throw ShapeMismatch("dgsm_estimate: sample shapes disagree");
    acc += s.d.array().square().colwise().sum().matrix().transpose();
  }
  return acc / static_cast<double>(d_samples.size());
}

Eigen::VectorXd sobol_upper_bound(const Eigen::VectorXd& dgsm, double trace_gamma,
                                  double a, double b) {
  if (!(trace_gamma > 0.0)) throw NonPositiveTrace("sobol_upper_bound: tr(Gamma) must be > 0");
  if (!(b > a)) throw ConfigError("sobol_upper_bound: need b > a");
  const double c = (b - a) * (b - a) / (M_PI * M_PI);
  return (c / trace_gamma) * dgsm;
}

double trace_covariance(const std::vector<Eigen::VectorXd>& u_samples) {
  const int M = static_cast<int>(u_samples.size());
  if (M < 2) throw ShapeMismatch("trace_covariance: need at least 2 samples");
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(u_samples.front().size());
  for (const auto& u : u_samples) mean += u;
  mean /= static_cast<double>(M);
  double tr = 0.0;
  for (const auto& u : u_samples) tr += (u - mean).squaredNorm();
  return tr / static_cast<double>(M - 1);
}

ScreeningReport screen(const Eigen::VectorXd& dgsm, double trace_gamma, double threshold,
                       int samples_used, std::vector<std::string> param_names) {
  ScreeningReport rep;
  rep.dgsm = dgsm;
  rep.trace_gamma = trace_gamma;
  rep.threshold = threshold;
  rep.samples_used = samples_used;
  rep.bounds = sobol_upper_bound(dgsm, trace_gamma);
  rep.param_names = std::move(param_names);
  if (rep.param_names.empty())
    for (int j = 0; j < dgsm.size(); ++j) rep.param_names.push_back("p" + std::to_string(j));

  rep.ranking.resize(dgsm.size());
  std::iota(rep.ranking.begin(), rep.ranking.end(), 0);
  std::stable_sort(rep.ranking.begin(), rep.ranking.end(),
                   [&](int a, int b) { return rep.bounds[a] > rep.bounds[b]; });
  for (int j : rep.ranking)
    if (rep.bounds[j] > threshold) rep.important.push_back(j);
  std::sort(rep.important.begin(), rep.important.end());
  return rep;
}

std::string ScreeningReport::to_json() const {
  nlohmann::ordered_json j;
  j["samples_used"] = samples_used;
  j["threshold"] = threshold;
  j["trace_gamma"] = trace_gamma;
  j["param_names"] = param_names;
  j["dgsm"] = std::vector<double>(dgsm.data(), dgsm.data() + dgsm.size());
  j["sobol_upper_bounds"] = std::vector<double>(bounds.data(), bounds.data() + bounds.size());
  j["ranking"] = ranking;
  j["important"] = important;
  return j.dump(2) + "\n";
}

ScreeningReport ScreeningReport::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("ScreeningReport: bad JSON: ") + e.what());
  }
  ScreeningReport rep;
  rep.samples_used = j.at("samples_used").get<int>();
  rep.threshold = j.at("threshold").get<double>();
  rep.trace_gamma = j.at("trace_gamma").get<double>();
  rep.param_names = j.at("param_names").get<std::vector<std::string>>();
  auto dg = j.at("dgsm").get<std::vector<double>>();
  auto bd = j.at("sobol_upper_bounds").get<std::vector<double>>();
  rep.dgsm = Eigen::Map<Eigen::VectorXd>(dg.data(), dg.size());
  rep.bounds = Eigen::Map<Eigen::VectorXd>(bd.data(), bd.size());
  rep.ranking = j.at("ranking").get<std::vector<int>>();
  rep.important = j.at("important").get<std::vector<int>>();
  return rep;
}

}  // namespace replan
