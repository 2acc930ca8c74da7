#pragma once

#include "sparsefs/solver_common.hpp"
#include "sparsefs/types.hpp"

namespace sparsefs {

// Robust mean offset learned alongside Omega.
using MeanOffset = Vector;

// l21(X - Omega X - v 1^T) + lambda * l21(Omega).
double objective_awspca_psd(const Matrix& X, const Matrix& omega,
                            const MeanOffset& v, double lambda);

// Weighted column mean of the residual X - Omega X:
//   v = (X - Omega X) Ws 1 / (1^T Ws 1).
MeanOffset update_v(const Matrix& X, const Matrix& omega, const Vector& Ws);

// Stationary point of the weight-frozen surrogate in Omega:
//   ((X - v 1^T) Ws X^T) (X Ws X^T + lambda Wf + eps2 I)^{-1}.
Matrix update_omega_aw(const Matrix& X, const MeanOffset& v, const Vector& Ws,
                       const Vector& Wf, double lambda, double eps2);

struct AwRun {
  SolverRun run;
  MeanOffset v;
};

// Per iteration: weights from the current residual, then v, then Omega (with
// PSD projection unless ablated). config.eta must be 0: this model carries no
// trace term. Centering is optional; the offset absorbs the mean.
AwRun solve_awspca_psd(const DataMatrix& X, const SolverConfig& config);

}  // namespace sparsefs
