#pragma once

#include "sparsefs/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sparsefs {

enum class WoodburyMode { automatic, force_direct, force_woodbury };

std::string to_string(WoodburyMode mode);
WoodburyMode woodbury_mode_from_string(const std::string& s);

// Shared solver configuration.
//   lambda         sparsity weight (> 0)
//   eta            trace / low-rank weight (>= 0; must be 0 for awspca_psd)
//   eps1           guard added under the square root in the reweighting
//                  diagonals
//   eps2           ridge added to the matrix being inverted
//   eps3           guard added to diagonal entries before inverting them on
//                  the Woodbury path
//   stop_tol       threshold on the objective difference between adjacent
//                  iterations
//   relative_stop  if true, the difference is compared against
//                  stop_tol * max(1, |previous objective|)
//   psd_projection false runs the raw reweighted iteration with no cone
//                  projection (ablation mode)
//   woodbury       inverse branch selection; automatic picks Woodbury iff
//                  d > n
struct SolverConfig {
  double lambda = 1.0;
  double eta = 0.0;
  double eps1 = 1e-6;
  double eps2 = 1e-6;
  double eps3 = 1e-12;
  double stop_tol = 1e-5;
  int max_iter = 100;
  bool relative_stop = false;
  bool psd_projection = true;
  WoodburyMode woodbury = WoodburyMode::automatic;
  std::uint64_t seed = 0;

  // Throws config_error listing every violated constraint.
  void validate() const;
};

// JSON (snake_case keys) round trip for SolverConfig.
std::string config_to_json(const SolverConfig& config);
SolverConfig config_from_json(const std::string& text);

// Result of one solver run. objective_trace holds the smoothed objective
// recorded after each full iteration: the residual term plus
// lambda * sum_j sqrt(||omega_j||^2 + eps1) + eta * tr(Omega)
// + eps2 * ||Omega||_F^2. This is the quantity the reweighted iteration
// provably decreases when projection is off; it differs from the exact
// objective by at most lambda * d * sqrt(eps1) + eps2 * ||Omega||_F^2.
struct SolverRun {
  Matrix omega;
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
  double wall_time_seconds = 0.0;
};

// w_j = 1 / (2 * sqrt(omega_j^T omega_j + eps1)) over columns j.
Vector feature_weights(const Matrix& omega, double eps1);

// ws_i = 1 / (2 * sqrt(||r_i||^2 + eps1)) over residual columns i.
Vector sample_weights(const Matrix& residual, double eps1);

// Deterministic random PSD start: A * A^T / d with A a d x d standard-normal
// draw from the given seed.
Matrix init_omega(Index d, std::uint64_t seed);

// True once the last two trace entries differ by less than the threshold
// (absolute by default, relative to max(1, |previous|) when requested).
bool stop_check(const std::vector<double>& trace, double stop_tol,
                bool relative = false);

// sum_j sqrt(||a_j||^2 + eps) over columns: the smoothed l2,1 norm used by
// the recorded objective.
double l21_smoothed(const Matrix& A, double eps);

}  // namespace sparsefs
