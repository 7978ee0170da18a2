#include "kcd/dense.hpp"

#include <lapacke.h>

#include <complex>
#include <stdexcept>
#include <string>

namespace kcd {

namespace {

lapack_complex_double* as_lapack(std::complex<double>* p) { return reinterpret_cast<lapack_complex_double*>(p); }

void check_square(const Eigen::MatrixXcd& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("matrix is not square");
}

}  // namespace

HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& h) {
  check_square(h);
  HermitianEigen out;
  out.vectors = h;
  out.values.resize(h.rows());
  if (h.rows() == 0) return out;
  const lapack_int n = static_cast<lapack_int>(h.rows());
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, as_lapack(out.vectors.data()), n,
                                         out.values.data());
  if (info != 0) throw std::runtime_error("zheevd failed, info = " + std::to_string(info));
  return out;
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& h) {
  check_square(h);
  Eigen::MatrixXcd a = h;
  Eigen::VectorXd w(h.rows());
  if (h.rows() == 0) return w;
  const lapack_int n = static_cast<lapack_int>(h.rows());
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, as_lapack(a.data()), n, w.data());
  if (info != 0) throw std::runtime_error("zheevd failed, info = " + std::to_string(info));
  return w;
}

Eigen::VectorXd singular_values(Eigen::MatrixXcd m) {
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  Eigen::VectorXd s(std::min(rows, cols));
  if (s.size() == 0) return s;
  const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', rows, cols, as_lapack(m.data()), rows, s.data(),
                                         nullptr, 1, nullptr, 1);
  if (info != 0) throw std::runtime_error("zgesdd failed, info = " + std::to_string(info));
  return s;
}

Eigen::MatrixXcd unitary_exponential(const Eigen::MatrixXcd& h, double t) {
  const auto eig = hermitian_eigen(h);
  Eigen::VectorXcd phases(eig.values.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases[k] = std::exp(std::complex<double>(0, -t * eig.values[k]));
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

}  // namespace kcd
