#include "sparsefs/spca_psd.hpp"

#include "sparsefs/core_linalg.hpp"

#include <Eigen/Cholesky>

#include <chrono>
#include <string>

namespace sparsefs {

namespace {

void check_problem_shapes(const char* who, const Matrix& X,
                          const Matrix& omega) {
  if (omega.rows() != omega.cols()) {
    throw shape_error(std::string(who) + ": omega must be square, got " +
                      std::to_string(omega.rows()) + "x" +
                      std::to_string(omega.cols()));
  }
  if (omega.rows() != X.rows()) {
    throw shape_error(std::string(who) + ": omega is " +
                      std::to_string(omega.rows()) + "x" +
                      std::to_string(omega.cols()) + " but X has " +
                      std::to_string(X.rows()) + " features");
  }
}

}  // namespace

double objective_spca_psd(const Matrix& X, const Matrix& omega, double lambda,
                          double eta) {
  check_problem_shapes("objective_spca_psd", X, omega);
  const double rss = (X - omega * X).squaredNorm();
  return rss + lambda * l21_norm(omega) + eta * omega.trace();
}

Matrix update_omega_direct(const Matrix& S, const Vector& W, double lambda,
                           double eta, double eps2) {
  if (S.rows() != S.cols()) {
    throw shape_error("update_omega_direct: S must be square");
  }
  if (W.size() != S.rows()) {
    throw shape_error("update_omega_direct: W has " +
                      std::to_string(W.size()) + " entries for a " +
                      std::to_string(S.rows()) + "-feature problem");
  }
  if (lambda < 0.0) {
    throw config_error("update_omega_direct: lambda must be >= 0");
  }
  if (eps2 < 0.0) {
    throw config_error("update_omega_direct: eps2 must be >= 0");
  }
  // A = S + lambda W + eps2 I is symmetric positive definite whenever the
  // weights are positive; B = S - (eta/2) I stays symmetric, so
  // Omega = B A^{-1} = (A^{-1} B)^T.
  Matrix A = S;
  A.diagonal().array() += lambda * W.array() + eps2;
  Matrix B = S;
  B.diagonal().array() -= 0.5 * eta;
  Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success) {
    throw numeric_error(
        "update_omega_direct: Cholesky factorization failed; the regularized "
        "matrix is not positive definite (try a larger eps2)");
  }
  return llt.solve(B).transpose();
}

Matrix update_omega_woodbury(const Matrix& X, const Vector& W, double lambda,
                             double eta, double eps3) {
  const Index d = X.rows();
  const Index n = X.cols();
  if (W.size() != d) {
    throw shape_error("update_omega_woodbury: W has " +
                      std::to_string(W.size()) + " entries for a " +
                      std::to_string(d) + "-feature problem");
  }
  if (!(lambda > 0.0)) {
    throw config_error(
        "update_omega_woodbury: lambda must be > 0 (the identity divides by "
        "lambda); use the direct branch instead");
  }
  if (eps3 < 0.0) {
    throw config_error("update_omega_woodbury: eps3 must be >= 0");
  }
  // G = (lambda (W + eps3 I))^{-1}, diagonal. Expanding
  // (X X^T + G^{-1})^{-1} through the identity gives the stationary point as
  //   Omega = (I + (eta/2) G) N G - (eta/2) G,  N = X (I_n + X^T G X)^{-1} X^T,
  // which touches only an n x n inverse.
  const Vector g = (lambda * (W.array() + eps3)).inverse();
  Matrix Xg = X;
  Xg.array().colwise() *= g.array();
  Matrix K = Matrix::Identity(n, n) + X.transpose() * Xg;
  K = 0.5 * (K + K.transpose());
  Eigen::LLT<Matrix> llt(K);
  if (llt.info() != Eigen::Success) {
    throw numeric_error(
        "update_omega_woodbury: Cholesky factorization of the n x n core "
        "failed");
  }
  const Matrix N = X * llt.solve(X.transpose());
  Matrix omega = N;
  omega.array().colwise() *= (1.0 + 0.5 * eta * g.array());
  omega.array().rowwise() *= g.transpose().array();
  omega.diagonal().array() -= 0.5 * eta * g.array();
  return omega;
}

SolverRun solve_spca_psd(const DataMatrix& X, const SolverConfig& config) {
  config.validate();
  if (!X.centered) {
    throw config_error(
        "solve_spca_psd: X must be centered (apply center_columns first)");
  }
  const Index d = X.d();
  const Index n = X.n();
  const bool use_woodbury =
      config.woodbury == WoodburyMode::force_woodbury ||
      (config.woodbury == WoodburyMode::automatic && d > n);

  const auto t0 = std::chrono::steady_clock::now();
  Matrix omega = init_omega(d, config.seed);
  Vector W = feature_weights(omega, config.eps1);

  Matrix S;
  if (!use_woodbury) {
    S = gram(X.values);
  }

  SolverRun run;
  for (int it = 1; it <= config.max_iter; ++it) {
    Matrix cand =
        use_woodbury
            ? update_omega_woodbury(X.values, W, config.lambda, config.eta,
                                    config.eps3)
            : update_omega_direct(S, W, config.lambda, config.eta,
                                  config.eps2);
    omega = config.psd_projection ? project_psd(cand) : std::move(cand);
    W = feature_weights(omega, config.eps1);

    const double rss = (X.values - omega * X.values).squaredNorm();
    const double obj = rss + config.lambda * l21_smoothed(omega, config.eps1) +
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
