#include "sparsefs/core_linalg.hpp"

#include <Eigen/Eigenvalues>

#include <string>

namespace sparsefs {

Matrix center_columns(const Matrix& X) {
  if (X.cols() < 2) {
    throw config_error("center_columns: need at least 2 samples, got " +
                       std::to_string(X.cols()));
  }
  return X.colwise() - X.rowwise().mean();
}

DataMatrix center_columns(const DataMatrix& X) {
  DataMatrix out;
  out.values = center_columns(X.values);
  out.centered = true;
  out.feature_ids = X.feature_ids;
  return out;
}

Matrix gram(const Matrix& X) {
  Matrix S = Matrix::Zero(X.rows(), X.rows());
  S.selfadjointView<Eigen::Upper>().rankUpdate(X);
  S.triangularView<Eigen::StrictlyLower>() = S.transpose();
  return S;
}

double l21_norm(const Matrix& A) { return A.colwise().norm().sum(); }

EigenDecomposition symmetric_eig(const Matrix& A) {
  if (A.rows() != A.cols()) {
    throw shape_error("symmetric_eig: input is not square");
  }
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * scale) {
    throw shape_error("symmetric_eig: input asymmetric beyond tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(A);
  if (solver.info() != Eigen::Success) {
    throw numeric_error(
        "symmetric_eig: eigensolver failed to converge (d = " +
        std::to_string(A.rows()) + ", status " +
        std::to_string(static_cast<int>(solver.info())) + ")");
  }
  // Eigen returns ascending order; flip to descending.
  EigenDecomposition out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

Matrix project_symmetric(const Matrix& M) {
  if (M.rows() != M.cols()) {
    throw shape_error("project_symmetric: input is not square");
  }
  return 0.5 * (M + M.transpose());
}

Matrix project_psd(const Matrix& M) {
  const EigenDecomposition eig = symmetric_eig(project_symmetric(M));
  const Vector clamped = eig.eigenvalues.cwiseMax(0.0);
  Matrix P = eig.eigenvectors * clamped.asDiagonal() *
             eig.eigenvectors.transpose();
  // The floating-point product can be off-symmetric in the last ulp.
  return 0.5 * (P + P.transpose());
}

}  // namespace sparsefs
