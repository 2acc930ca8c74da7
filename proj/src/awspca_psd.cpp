#include "sparsefs/awspca_psd.hpp"

#include "sparsefs/core_linalg.hpp"

#include <Eigen/Cholesky>

#include <chrono>
#include <string>

namespace sparsefs {

double objective_awspca_psd(const Matrix& X, const Matrix& omega,
                            const MeanOffset& v, double lambda) {
  if (omega.rows() != omega.cols() || omega.rows() != X.rows()) {
    throw shape_error("objective_awspca_psd: omega must be square with side " +
                      std::to_string(X.rows()));
  }
  if (v.size() != X.rows()) {
    throw shape_error("objective_awspca_psd: v has " +
                      std::to_string(v.size()) + " entries for " +
                      std::to_string(X.rows()) + " features");
  }
  const Matrix residual = (X - omega * X).colwise() - v;
  return l21_norm(residual) + lambda * l21_norm(omega);
}

MeanOffset update_v(const Matrix& X, const Matrix& omega, const Vector& Ws) {
  if (omega.rows() != omega.cols() || omega.rows() != X.rows()) {
    throw shape_error("update_v: omega must be square with side " +
                      std::to_string(X.rows()));
  }
  if (Ws.size() != X.cols()) {
    throw shape_error("update_v: Ws has " + std::to_string(Ws.size()) +
                      " entries for " + std::to_string(X.cols()) + " samples");
  }
  const double total = Ws.sum();
  if (!(total > 0.0)) {
    throw numeric_error("update_v: sample weights must sum to a positive "
                        "value");
  }
  return (X - omega * X) * Ws / total;
}

Matrix update_omega_aw(const Matrix& X, const MeanOffset& v, const Vector& Ws,
                       const Vector& Wf, double lambda, double eps2) {
  const Index d = X.rows();
  const Index n = X.cols();
  if (v.size() != d) {
    throw shape_error("update_omega_aw: v has " + std::to_string(v.size()) +
                      " entries for " + std::to_string(d) + " features");
  }
  if (Ws.size() != n) {
    throw shape_error("update_omega_aw: Ws has " + std::to_string(Ws.size()) +
                      " entries for " + std::to_string(n) + " samples");
  }
  if (Wf.size() != d) {
    throw shape_error("update_omega_aw: Wf has " + std::to_string(Wf.size()) +
                      " entries for " + std::to_string(d) + " features");
  }
  if (lambda < 0.0) {
    throw config_error("update_omega_aw: lambda must be >= 0");
  }
  if (eps2 < 0.0) {
    throw config_error("update_omega_aw: eps2 must be >= 0");
  }
  const Matrix Sw = gram(X * Ws.cwiseSqrt().asDiagonal());
  Matrix A = Sw;
  A.diagonal().array() += lambda * Wf.array() + eps2;
  // B = (X - v 1^T) Ws X^T is not symmetric, so solve against B^T.
  const Matrix B = (X.colwise() - v) * Ws.asDiagonal() * X.transpose();
  Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success) {
    throw numeric_error(
        "update_omega_aw: Cholesky factorization failed; the regularized "
        "matrix is not positive definite (try a larger eps2)");
  }
  return llt.solve(B.transpose()).transpose();
}

AwRun solve_awspca_psd(const DataMatrix& X, const SolverConfig& config) {
  config.validate();
  if (config.eta != 0.0) {
    throw config_error(
        "solve_awspca_psd: eta must be 0: this model has no trace term");
  }
  const Index d = X.d();

  const auto t0 = std::chrono::steady_clock::now();
  Matrix omega = init_omega(d, config.seed);
  MeanOffset v = Vector::Zero(d);

  SolverRun run;
  for (int it = 1; it <= config.max_iter; ++it) {
    const Matrix residual = (X.values - omega * X.values).colwise() - v;
    const Vector Ws = sample_weights(residual, config.eps1);
    const Vector Wf = feature_weights(omega, config.eps1);
    v = update_v(X.values, omega, Ws);
    Matrix cand =
        update_omega_aw(X.values, v, Ws, Wf, config.lambda, config.eps2);
    omega = config.psd_projection ? project_psd(cand) : std::move(cand);

    const Matrix post = (X.values - omega * X.values).colwise() - v;
    const double obj = l21_smoothed(post, config.eps1) +
                       config.lambda * l21_smoothed(omega, config.eps1) +
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
  return {std::move(run), std::move(v)};
}

}  // namespace sparsefs
