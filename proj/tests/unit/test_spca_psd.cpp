#include "sparsefs/spca_psd.hpp"

#include "sparsefs/core_linalg.hpp"
#include "sparsefs/feature_scoring.hpp"
#include "sparsefs/synth_data.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sparsefs;
using testutil::centered_data;
using testutil::randn;

namespace {

// W-frozen surrogate the closed form minimizes.
double surrogate(const Matrix& X, const Matrix& omega, const Vector& W,
                 double lambda, double eta, double eps2) {
  double weighted = 0;
  for (Index j = 0; j < omega.cols(); ++j)
    weighted += W(j) * omega.col(j).squaredNorm();
  return (X - omega * X).squaredNorm() + lambda * weighted +
         eta * omega.trace() + eps2 * omega.squaredNorm();
}

Matrix fd_gradient(const Matrix& X, const Matrix& omega, const Vector& W,
                   double lambda, double eta, double eps2, double h) {
  Matrix g(omega.rows(), omega.cols());
  Matrix probe = omega;
  for (Index j = 0; j < omega.cols(); ++j) {
    for (Index i = 0; i < omega.rows(); ++i) {
      probe(i, j) = omega(i, j) + h;
      const double up = surrogate(X, probe, W, lambda, eta, eps2);
      probe(i, j) = omega(i, j) - h;
      const double down = surrogate(X, probe, W, lambda, eta, eps2);
      probe(i, j) = omega(i, j);
      g(i, j) = (up - down) / (2 * h);
    }
  }
  return g;
}

}  // namespace

TEST_CASE("objective hand values") {
  DataMatrix X = centered_data(3, 10, 1);
  CHECK(objective_spca_psd(X.values, Matrix::Identity(3, 3), 0, 0) ==
        doctest::Approx(0.0));
  CHECK(objective_spca_psd(X.values, Matrix::Zero(3, 3), 0, 0) ==
        doctest::Approx(X.values.squaredNorm()));
  CHECK(objective_spca_psd(X.values, Matrix::Identity(3, 3), 1, 1) ==
        doctest::Approx(6.0));
  CHECK_THROWS_AS(objective_spca_psd(X.values, Matrix::Zero(2, 2), 0, 0),
                  shape_error);
}

TEST_CASE("direct update at lambda 0 returns the identity") {
  Matrix S = gram(randn(3, 10, 2));  // full rank with n >> d
  Matrix omega = update_omega_direct(S, Vector::Ones(3), 0.0, 0.0, 0.0);
  CHECK((omega - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("direct update on a diagonal gram matrix") {
  Matrix S = Matrix::Zero(2, 2);
  S(0, 0) = 4;
  S(1, 1) = 1;
  Matrix omega = update_omega_direct(S, Vector::Ones(2), 0.0, 2.0, 0.0);
  CHECK(omega(0, 0) == doctest::Approx(0.75));
  CHECK(omega(1, 1) == doctest::Approx(0.0));
  CHECK(std::abs(omega(0, 1)) + std::abs(omega(1, 0)) <= 1e-14);
}

TEST_CASE("direct update zeroes the frozen-surrogate gradient") {
  Matrix X = center_columns(randn(5, 12, 3));
  Matrix S = gram(X);
  Vector W = feature_weights(init_omega(5, 4), 1e-6);
  const double lambda = 0.7, eta = 0.3, eps2 = 1e-6;
  Matrix omega = update_omega_direct(S, W, lambda, eta, eps2);
  Matrix g = fd_gradient(X, omega, W, lambda, eta, eps2, 1e-5);
  CHECK(g.cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("finite differences match the analytic gradient off-stationary") {
  Matrix X = center_columns(randn(4, 9, 5));
  Matrix S = gram(X);
  Matrix omega = init_omega(4, 6);
  Vector W = feature_weights(omega, 1e-6);
  const double lambda = 1.3, eta = 0.4, eps2 = 1e-6;
  Matrix analytic = 2.0 * (omega * S - S) + eta * Matrix::Identity(4, 4) +
                    2.0 * eps2 * omega;
  for (Index j = 0; j < 4; ++j) analytic.col(j) += 2.0 * lambda * W(j) * omega.col(j);
  Matrix fd = fd_gradient(X, omega, W, lambda, eta, eps2, 1e-5);
  CHECK((analytic - fd).cwiseAbs().maxCoeff() <=
        1e-6 * std::max(1.0, analytic.cwiseAbs().maxCoeff()));
}

TEST_CASE("direct update argument validation") {
  Matrix S = gram(randn(3, 5, 7));
  CHECK_THROWS_AS(update_omega_direct(S, Vector::Ones(3), -1.0, 0.0, 0.0),
                  config_error);
  CHECK_THROWS_AS(update_omega_direct(S, Vector::Ones(3), 1.0, 0.0, -1.0),
                  config_error);
  CHECK_THROWS_AS(update_omega_direct(S, Vector::Ones(2), 1.0, 0.0, 0.0),
                  shape_error);
}

TEST_CASE("woodbury update reproduces the scalar hand value") {
  Matrix X(1, 1);
  X << 2;
  Matrix omega = update_omega_woodbury(X, Vector::Ones(1), 1.0, 0.0, 0.0);
  CHECK(omega(0, 0) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("woodbury equals an in-test longhand expansion at eta 0") {
  Matrix X = randn(6, 4, 8);
  Vector W(6);
  W << 0.3, 1.1, 0.7, 2.0, 0.5, 0.9;
  const double lambda = 1.7;
  Matrix omega = update_omega_woodbury(X, W, lambda, 0.0, 0.0);
  // longhand: Omega = X (I + X^T G X)^{-1} X^T G with G = (lambda W)^{-1}
  Matrix G = (lambda * W).cwiseInverse().asDiagonal();
  Matrix K = Matrix::Identity(4, 4) + X.transpose() * G * X;
  Matrix expect = X * K.inverse() * X.transpose() * G;
  CHECK((omega - expect).norm() <= 1e-10 * std::max(1.0, expect.norm()));
}

TEST_CASE("woodbury agrees with the direct path with guards at zero") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  const double lams[] = {0.1, 1.0, 10.0};
  const double etas[] = {0.0, 1.0, 10.0};
  for (int t = 0; t < 9; ++t) {
    const Index d = 5 + t, n = 12 - t % 4;
    Matrix X = randn(d, n, 100 + t);
    Vector W(d);
    for (Index i = 0; i < d; ++i) W(i) = u(rng);
    Matrix a = update_omega_direct(gram(X), W, lams[t % 3], etas[t / 3], 0.0);
    Matrix b = update_omega_woodbury(X, W, lams[t % 3], etas[t / 3], 0.0);
    CHECK((a - b).norm() <= 1e-8 * std::max(1.0, a.norm()));
  }
  CHECK_THROWS_AS(
      update_omega_woodbury(randn(3, 2, 1), Vector::Ones(3), 0.0, 0.0, 0.0),
      config_error);
}

TEST_CASE("solver requires centered input") {
  DataMatrix X{randn(3, 8, 10), false, {}};
  SolverConfig cfg;
  CHECK_THROWS_AS(solve_spca_psd(X, cfg), config_error);
}

TEST_CASE("solver converges quickly at lambda = eta = 10") {
  SynthResult moons = generate({});
  DataMatrix X = center_columns(moons.X);
  SolverConfig cfg;
  cfg.lambda = 10;
  cfg.eta = 10;
  SolverRun run = solve_spca_psd(X, cfg);
  CHECK(run.converged);
  CHECK(run.iterations <= 100);
  CHECK(run.iterations == static_cast<int>(run.objective_trace.size()));
}

TEST_CASE("a single nonzero feature row earns the top score") {
  Matrix raw = Matrix::Zero(4, 10);
  raw.row(2) = randn(1, 10, 3);
  DataMatrix X = center_columns(DataMatrix{raw, false, {}});
  SolverConfig cfg;
  cfg.lambda = 1e-3;
  SolverRun run = solve_spca_psd(X, cfg);
  Vector scores = score_features(run.omega);
  Index top;
  scores.maxCoeff(&top);
  CHECK(top == 2);
  for (Index j = 0; j < 4; ++j) {
    if (j != 2) CHECK(scores(j) <= 1e-8);
  }
}

TEST_CASE("max_iter 1 stops unconverged") {
  DataMatrix X = centered_data(4, 9, 11);
  SolverConfig cfg;
  cfg.max_iter = 1;
  SolverRun run = solve_spca_psd(X, cfg);
  CHECK(run.iterations == 1);
  CHECK_FALSE(run.converged);
  CHECK(run.objective_trace.size() == 1);
}

TEST_CASE("final omega is symmetric PSD when projection is on") {
  DataMatrix X = centered_data(6, 14, 12);
  SolverConfig cfg;
  cfg.lambda = 2;
  cfg.eta = 1;
  SolverRun run = solve_spca_psd(X, cfg);
  CHECK((run.omega - run.omega.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
  EigenDecomposition e = symmetric_eig(run.omega);
  CHECK(e.eigenvalues.minCoeff() >=
        -1e-9 * std::max(1.0, run.omega.trace()));
}

TEST_CASE("raw iteration descends monotonically") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<Index> dd(3, 8);
  std::uniform_real_distribution<double> lu(-1, 1);
  for (int t = 0; t < 10; ++t) {
    const Index d = dd(rng);
    std::uniform_int_distribution<Index> nn(d + 2, 16);
    DataMatrix X = centered_data(d, nn(rng), 200 + t);
    SolverConfig cfg;
    cfg.lambda = std::pow(10.0, lu(rng));
    cfg.eta = std::pow(10.0, lu(rng));
    cfg.psd_projection = false;
    cfg.stop_tol = 1e-14;
    cfg.max_iter = 40;
    cfg.seed = t;
    SolverRun run = solve_spca_psd(X, cfg);
    for (std::size_t i = 1; i < run.objective_trace.size(); ++i) {
      CHECK(run.objective_trace[i] <= run.objective_trace[i - 1] + 1e-9);
    }
  }
}

TEST_CASE("automatic branch matches the forced branch on both sides") {
  SolverConfig cfg;
  cfg.lambda = 2;
  cfg.eta = 0.5;

  DataMatrix tall = centered_data(12, 5, 14);  // d > n: auto takes woodbury
  cfg.woodbury = WoodburyMode::automatic;
  SolverRun auto_run = solve_spca_psd(tall, cfg);
  cfg.woodbury = WoodburyMode::force_woodbury;
  SolverRun wb_run = solve_spca_psd(tall, cfg);
  CHECK((auto_run.omega - wb_run.omega).cwiseAbs().maxCoeff() == 0.0);

  DataMatrix wide = centered_data(5, 12, 15);  // d <= n: auto takes direct
  cfg.woodbury = WoodburyMode::automatic;
  SolverRun auto2 = solve_spca_psd(wide, cfg);
  cfg.woodbury = WoodburyMode::force_direct;
  SolverRun dir2 = solve_spca_psd(wide, cfg);
  CHECK((auto2.omega - dir2.omega).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("direct and woodbury solver branches land on the same solution") {
  DataMatrix X = centered_data(30, 12, 16);
  SolverConfig cfg;
  cfg.lambda = 2;
  cfg.eta = 0.5;
  cfg.woodbury = WoodburyMode::force_direct;
  SolverRun a = solve_spca_psd(X, cfg);
  cfg.woodbury = WoodburyMode::force_woodbury;
  SolverRun b = solve_spca_psd(X, cfg);
  CHECK((a.omega - b.omega).norm() <= 1e-3 * std::max(1.0, a.omega.norm()));
  CHECK(testutil::argsort_desc(score_features(a.omega)) ==
        testutil::argsort_desc(score_features(b.omega)));
}

TEST_CASE("runs are deterministic for a fixed seed") {
  DataMatrix X = centered_data(5, 11, 17);
  SolverConfig cfg;
  cfg.lambda = 1.5;
  cfg.eta = 0.2;
  cfg.seed = 5;
  SolverRun a = solve_spca_psd(X, cfg);
  SolverRun b = solve_spca_psd(X, cfg);
  CHECK((a.omega - b.omega).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.objective_trace == b.objective_trace);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("smoothed trace approaches the exact objective as guards shrink") {
  DataMatrix X = centered_data(5, 12, 19);
  SolverConfig cfg;
  cfg.lambda = 2;
  cfg.eta = 1;
  cfg.eps1 = 1e-14;
  cfg.eps2 = 1e-12;
  cfg.stop_tol = 1e-10;
  cfg.max_iter = 500;
  SolverRun run = solve_spca_psd(X, cfg);
  const double exact = objective_spca_psd(X.values, run.omega, 2, 1);
  CHECK(std::abs(run.objective_trace.back() - exact) <=
        1e-6 * std::max(1.0, std::abs(exact)));
}
