#include "sparsefs/cspca_psd.hpp"

#include "sparsefs/core_linalg.hpp"

#include <Eigen/Cholesky>

#include <chrono>
#include <string>

namespace sparsefs {

double objective_cspca_psd(const Matrix& X, const Matrix& omega, double lambda,
                           double eta) {
  if (omega.rows() != omega.cols() || omega.rows() != X.rows()) {
    throw shape_error("objective_cspca_psd: omega must be square with side " +
                      std::to_string(X.rows()));
  }
  return l21_norm(X - omega * X) + lambda * l21_norm(omega) +
         eta * omega.trace();
}

Matrix update_omega_cspca(const Matrix& X, const Vector& Ws, const Vector& Wf,
                          double lambda, double eta, double eps2) {
  const Index d = X.rows();
  const Index n = X.cols();
  if (Ws.size() != n) {
    throw shape_error("update_omega_cspca: Ws has " +
                      std::to_string(Ws.size()) + " entries for " +
                      std::to_string(n) + " samples");
  }
  if (Wf.size() != d) {
    throw shape_error("update_omega_cspca: Wf has " +
                      std::to_string(Wf.size()) + " entries for " +
                      std::to_string(d) + " features");
  }
  if (lambda < 0.0) {
    throw config_error("update_omega_cspca: lambda must be >= 0");
  }
  if (eps2 < 0.0) {
    throw config_error("update_omega_cspca: eps2 must be >= 0");
  }
  // Sw = X Ws X^T formed as (X sqrt(Ws)) (X sqrt(Ws))^T so it is exactly
  // symmetric.
  const Matrix Sw = gram(X * Ws.cwiseSqrt().asDiagonal());
  Matrix A = Sw;
  A.diagonal().array() += lambda * Wf.array() + eps2;
  Matrix B = Sw;
  B.diagonal().array() -= 0.5 * eta;
  Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success) {
    throw numeric_error(
        "update_omega_cspca: Cholesky factorization failed; the regularized "
        "matrix is not positive definite (try a larger eps2)");
  }
  return llt.solve(B).transpose();
}

SolverRun solve_cspca_psd(const DataMatrix& X, const SolverConfig& config) {
  config.validate();
  if (!X.centered) {
    throw config_error(
        "solve_cspca_psd: X must be centered (apply center_columns first)");
  }
  const Index d = X.d();

  const auto t0 = std::chrono::steady_clock::now();
  Matrix omega = init_omega(d, config.seed);

  SolverRun run;
  for (int it = 1; it <= config.max_iter; ++it) {
    const Matrix residual = X.values - omega * X.values;
    const Vector Ws = sample_weights(residual, config.eps1);
    const Vector Wf = feature_weights(omega, config.eps1);
    Matrix cand = update_omega_cspca(X.values, Ws, Wf, config.lambda,
                                     config.eta, config.eps2);
    omega = config.psd_projection ? project_psd(cand) : std::move(cand);

    const Matrix post = X.values - omega * X.values;
    const double obj = l21_smoothed(post, config.eps1) +
                       config.lambda * l21_smoothed(omega, config.eps1) +
                       config.eta * omega.trace() +
                       config.eps2 * omega.squaredNorm();
    run.objective_trace.push_back(obj);
    run.iterations = it;
    if (stop_check(run.objective_trace, config.stop_tol,
                   config.relative_stop)) {
      run.converged = true;
      break;
    }
  }
  run.omega = std::move(omega);
  run.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return run;
}

}  // namespace sparsefs
