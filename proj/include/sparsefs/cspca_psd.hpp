#pragma once

#include "sparsefs/solver_common.hpp"
#include "sparsefs/types.hpp"

namespace sparsefs {

// l21(X - Omega X) + lambda * l21(Omega) + eta * tr(Omega).
double objective_cspca_psd(const Matrix& X, const Matrix& omega, double lambda,
                           double eta);

// Stationary point of the doubly reweighted surrogate
//   tr((X - Omega X) Ws (X - Omega X)^T) + lambda tr(Omega Wf Omega^T)
//   + eta tr(Omega) + eps2 ||Omega||_F^2
// with both weight diagonals frozen:
//   (X Ws X^T - (eta/2) I) (X Ws X^T + lambda Wf + eps2 I)^{-1}.
Matrix update_omega_cspca(const Matrix& X, const Vector& Ws, const Vector& Wf,
                          double lambda, double eta, double eps2);

// Reweighted iteration: refresh Ws from the residual and Wf from Omega, take
// the closed-form step, project onto the PSD cone (unless ablated).
SolverRun solve_cspca_psd(const DataMatrix& X, const SolverConfig& config);

}  // namespace sparsefs
