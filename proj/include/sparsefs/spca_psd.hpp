#pragma once

#include "sparsefs/solver_common.hpp"
#include "sparsefs/types.hpp"

namespace sparsefs {

// ||X - Omega X||_F^2 + lambda * l21(Omega) + eta * tr(Omega).
double objective_spca_psd(const Matrix& X, const Matrix& omega, double lambda,
                          double eta);

// Stationary point of the weight-frozen surrogate:
//   (S - (eta/2) I) (S + lambda W + eps2 I)^{-1}
// with S = X X^T and W the feature-weight diagonal.
Matrix update_omega_direct(const Matrix& S, const Vector& W, double lambda,
                           double eta, double eps2);

// Same stationary point computed through the Woodbury identity so only an
// n x n system is solved; intended for d >> n. Requires lambda > 0.
// Diagonal inverses are guarded as 1 / (w_ii + eps3).
Matrix update_omega_woodbury(const Matrix& X, const Vector& W, double lambda,
                             double eta, double eps3);

// Alternate the closed-form update with PSD projection until the objective
// difference falls under config.stop_tol or config.max_iter is reached.
// X must be centered.
SolverRun solve_spca_psd(const DataMatrix& X, const SolverConfig& config);

}  // namespace sparsefs
