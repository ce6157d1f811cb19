#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

#include "scig/errors.hpp"

namespace scig {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// One complex matrix per anchor frequency.
using MatrixList = std::vector<CMatrix>;

/// The m x m sub-block (q, l) of an (mp) x (mp) matrix; nodes are 0-based.
template <typename Derived>
auto node_block(Eigen::MatrixBase<Derived>& a, int m, int q, int l) {
  return a.block(q * m, l * m, m, m);
}

template <typename Derived>
auto node_block(const Eigen::MatrixBase<Derived>& a, int m, int q, int l) {
  return a.block(q * m, l * m, m, m);
}

/// (A + A^H) / 2.
inline CMatrix hermitian_part(const CMatrix& a) { return (a + a.adjoint()) * 0.5; }

inline double hermitian_defect(const CMatrix& a) { return (a - a.adjoint()).norm(); }

/// Frobenius norm of the concatenation [A_1, ..., A_M].
inline double stacked_norm(const MatrixList& list) {
  double sq = 0.0;
  for (const auto& a : list) sq += a.squaredNorm();
  return std::sqrt(sq);
}

/// ||Omega^{(q l M)}||_F: the (q, l) block stacked across all frequencies.
inline double stacked_block_norm(const MatrixList& list, int m, int q, int l) {
  double sq = 0.0;
  for (const auto& a : list) sq += node_block(a, m, q, l).squaredNorm();
  return std::sqrt(sq);
}

inline MatrixList zero_list(int count, int dim) {
  return MatrixList(static_cast<std::size_t>(count), CMatrix::Zero(dim, dim));
}

/// Log-determinant of a Hermitian positive-definite matrix via Cholesky.
inline double hermitian_logdet(const CMatrix& a) {
  Eigen::LLT<CMatrix> llt(hermitian_part(a));
  if (llt.info() != Eigen::Success) fail(ErrorKind::invalid_input, "matrix is not positive definite");
  double acc = 0.0;
  const CMatrix& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) acc += std::log(l(i, i).real());
  return 2.0 * acc;
}

inline double min_eigenvalue(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Eigenvalues below `floor` are raised to `floor`.
inline CMatrix project_to_pd(const CMatrix& a, double floor) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a));
  Vector ev = es.eigenvalues().cwiseMax(floor);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace scig
