#pragma once

// Whittle negative log-likelihood and the penalized objectives built on it.

#include <cmath>
#include <string>

#include "scig/diagnostics.hpp"
#include "scig/linalg.hpp"
#include "scig/penalty.hpp"

namespace scig {

/// sum_k ( -ln|Phi_k| + Re tr(S_k Phi_k) ). Throws invalid_input when a Phi_k is not PD.
inline double whittle_nll(const MatrixList& phi, const MatrixList& psd) {
  require(phi.size() == psd.size(), ErrorKind::invalid_input, "frequency count mismatch");
  double total = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const Complex trace = (psd[k].cwiseProduct(phi[k].transpose())).sum();
    if (std::abs(trace.imag()) > 1e-8 * std::max(1.0, std::abs(trace.real())))
      warn("tr(S_k Phi_k) has imaginary part " + std::to_string(trace.imag()) + " at k = " + std::to_string(k));
    total += -hermitian_logdet(phi[k]) + trace.real();
  }
  return total;
}

/// alpha * sum_k sum_{i != j} w_kij |W_kij| + (1 - alpha) m sqrt(M) sum_{q != l} w_ql ||W^{(qlM)}||_F.
inline double weighted_penalty(const MatrixList& w, const LlaWeights& weights, double alpha) {
  const int m = weights.m;
  const int p = weights.p;
  const int mp = m * p;
  double elementwise = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k)
    for (int j = 0; j < mp; ++j)
      for (int i = 0; i < mp; ++i)
        if (i != j) elementwise += weights.elementwise[k](i, j) * std::abs(w[k](i, j));
  double group = 0.0;
  for (int q = 0; q < p; ++q)
    for (int l = 0; l < p; ++l)
      if (q != l) group += weights.groupwise(q, l) * stacked_block_norm(w, m, q, l);
  const double scale = m * std::sqrt(static_cast<double>(w.size()));
  return alpha * elementwise + (1.0 - alpha) * scale * group;
}

/// The sparse-group penalty with the true (possibly non-convex) rho_lambda.
inline double true_penalty(const MatrixList& w, const PenaltySpec& spec, int m, int p) {
  const int mp = m * p;
  double elementwise = 0.0;
  for (const auto& wk : w)
    for (int j = 0; j < mp; ++j)
      for (int i = 0; i < mp; ++i)
        if (i != j) elementwise += penalty_value(std::abs(wk(i, j)), spec);
  double group = 0.0;
  for (int q = 0; q < p; ++q)
    for (int l = 0; l < p; ++l)
      if (q != l) group += penalty_value(stacked_block_norm(w, m, q, l), spec);
  const double scale = m * std::sqrt(static_cast<double>(w.size()));
  return spec.alpha * elementwise + (1.0 - spec.alpha) * scale * group;
}

/// Hermitian part of each W_k with eigenvalues floored so the likelihood is finite.
/// Matrices that are already PD pass through unchanged.
inline MatrixList pd_projection(const MatrixList& w, double relative_floor = 1e-10) {
  MatrixList out;
  out.reserve(w.size());
  for (const auto& wk : w) {
    CMatrix h = hermitian_part(wk);
    Eigen::LLT<CMatrix> llt(h);
    if (llt.info() == Eigen::Success) {
      out.push_back(std::move(h));
      continue;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    const double top = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1.0);
    out.push_back(project_to_pd(h, relative_floor * top));
  }
  return out;
}

/// Penalized Whittle objective with the true penalty, evaluated at the sparse iterate W.
inline double penalized_objective(const MatrixList& w, const MatrixList& psd, const PenaltySpec& spec, int m, int p) {
  return whittle_nll(pd_projection(w), psd) + true_penalty(w, spec, m, p);
}

}  // namespace scig
