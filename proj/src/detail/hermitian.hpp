#pragma once

#include <Eigen/Dense>

namespace chfn::detail {

// Smallest eigenvalue of a Hermitian matrix (only the lower triangle is read).
inline double hermitian_min_eig(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace chfn::detail
