#include "sparsefs/solver_common.hpp"

#include "sparsefs/core_linalg.hpp"

#include <json.hpp>

#include <cmath>
#include <random>
#include <string>

namespace sparsefs {

std::string to_string(WoodburyMode mode) {
  switch (mode) {
    case WoodburyMode::automatic:
      return "auto";
    case WoodburyMode::force_direct:
      return "force_direct";
    case WoodburyMode::force_woodbury:
      return "force_woodbury";
  }
  throw config_error("to_string: unknown woodbury mode");
}

WoodburyMode woodbury_mode_from_string(const std::string& s) {
  if (s == "auto") return WoodburyMode::automatic;
  if (s == "force_direct") return WoodburyMode::force_direct;
  if (s == "force_woodbury") return WoodburyMode::force_woodbury;
  throw config_error("unknown woodbury mode '" + s +
                     "' (expected auto, force_direct or force_woodbury)");
}

void SolverConfig::validate() const {
  std::string problems;
  auto complain = [&problems](const std::string& p) {
    if (!problems.empty()) problems += "; ";
    problems += p;
  };
  if (!(lambda > 0.0)) complain("lambda must be > 0");
  if (!(eta >= 0.0)) complain("eta must be >= 0");
  if (!(eps1 > 0.0)) complain("eps1 must be > 0");
  if (!(eps2 > 0.0)) complain("eps2 must be > 0");
  if (!(eps3 > 0.0)) complain("eps3 must be > 0");
  if (!(stop_tol > 0.0)) complain("stop_tol must be > 0");
  if (max_iter < 1) complain("max_iter must be >= 1");
  if (!problems.empty()) {
    throw config_error("invalid solver config: " + problems);
  }
}

std::string config_to_json(const SolverConfig& config) {
  nlohmann::json j;
  j["lambda"] = config.lambda;
  j["eta"] = config.eta;
  j["eps1"] = config.eps1;
  j["eps2"] = config.eps2;
  j["eps3"] = config.eps3;
  j["stop_tol"] = config.stop_tol;
  j["max_iter"] = config.max_iter;
  j["relative_stop"] = config.relative_stop;
  j["psd_projection"] = config.psd_projection;
  j["woodbury"] = to_string(config.woodbury);
  j["seed"] = config.seed;
  return j.dump(2);
}

SolverConfig config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config JSON malformed: ") + e.what());
  }
  SolverConfig config;
  try {
    if (j.contains("lambda")) config.lambda = j.at("lambda").get<double>();
    if (j.contains("eta")) config.eta = j.at("eta").get<double>();
    if (j.contains("eps1")) config.eps1 = j.at("eps1").get<double>();
    if (j.contains("eps2")) config.eps2 = j.at("eps2").get<double>();
    if (j.contains("eps3")) config.eps3 = j.at("eps3").get<double>();
    if (j.contains("stop_tol"))
      config.stop_tol = j.at("stop_tol").get<double>();
    if (j.contains("max_iter")) config.max_iter = j.at("max_iter").get<int>();
    if (j.contains("relative_stop"))
      config.relative_stop = j.at("relative_stop").get<bool>();
    if (j.contains("psd_projection"))
      config.psd_projection = j.at("psd_projection").get<bool>();
    if (j.contains("woodbury"))
      config.woodbury =
          woodbury_mode_from_string(j.at("woodbury").get<std::string>());
    if (j.contains("seed"))
      config.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config JSON field error: ") + e.what());
  }
  return config;
}

Vector feature_weights(const Matrix& omega, double eps1) {
  if (!(eps1 > 0.0)) {
    throw config_error("feature_weights: eps1 must be > 0");
  }
  return (2.0 * (omega.colwise().squaredNorm().array() + eps1).sqrt())
      .inverse()
      .matrix()
      .transpose();
}

Vector sample_weights(const Matrix& residual, double eps1) {
  if (!(eps1 > 0.0)) {
    throw config_error("sample_weights: eps1 must be > 0");
  }
  return (2.0 * (residual.colwise().squaredNorm().array() + eps1).sqrt())
      .inverse()
      .matrix()
      .transpose();
}

Matrix init_omega(Index d, std::uint64_t seed) {
  if (d < 1) {
    throw config_error("init_omega: d must be >= 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix A(d, d);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) {
      A(i, j) = gauss(rng);
    }
  }
  return gram(A) / static_cast<double>(d);
}

bool stop_check(const std::vector<double>& trace, double stop_tol,
                bool relative) {
  if (trace.size() < 2) return false;
  const double prev = trace[trace.size() - 2];
  const double diff = std::abs(trace.back() - prev);
  const double threshold =
      relative ? stop_tol * std::max(1.0, std::abs(prev)) : stop_tol;
  return diff < threshold;
}

double l21_smoothed(const Matrix& A, double eps) {
  return (A.colwise().squaredNorm().array() + eps).sqrt().sum();
}

}  // namespace sparsefs
