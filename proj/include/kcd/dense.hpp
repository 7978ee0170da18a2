#pragma once

#include <Eigen/Dense>

namespace kcd {

struct HermitianEigen {
  Eigen::VectorXd values;     // ascending
  Eigen::MatrixXcd vectors;   // columns match `values`
};

/// Full eigendecomposition of a Hermitian matrix (LAPACK zheevd). Only the
/// lower triangle is read.
HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& h);
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& h);

/// Singular values in descending order (LAPACK zgesdd, no vectors).
Eigen::VectorXd singular_values(Eigen::MatrixXcd m);

/// exp(-i t H) for Hermitian H via its eigendecomposition.
Eigen::MatrixXcd unitary_exponential(const Eigen::MatrixXcd& h, double t);

}  // namespace kcd
