#pragma once

// ADMM for the LLA-weighted sparse-group Whittle objective.
//
// Splitting: Phi_k (likelihood side, kept PD) and W_k (penalty side, exactly
// sparse), scaled duals U_k, one penalty parameter rho shared by all frequencies.

#include <algorithm>
#include <cmath>
#include <string>

#include "scig/errors.hpp"
#include "scig/linalg.hpp"
#include "scig/objective.hpp"
#include "scig/penalty.hpp"
#include "scig/spectral.hpp"

namespace scig {

/// How the (q, l) group shrinkage measures ||B||_F.
/// `stacked` uses the block concatenated over all frequencies (exact prox of the
/// group penalty); `per_frequency` uses each m x m block on its own.
enum class GroupProxMode { per_frequency, stacked };

inline GroupProxMode parse_group_prox_mode(const std::string& name) {
  if (name == "stacked") return GroupProxMode::stacked;
  if (name == "per-frequency" || name == "per_frequency") return GroupProxMode::per_frequency;
  fail(ErrorKind::invalid_config, "unknown group prox mode '" + name + "'");
}

inline const char* to_string(GroupProxMode mode) {
  return mode == GroupProxMode::stacked ? "stacked" : "per-frequency";
}

struct AdmmConfig {
  double rho_bar = 2.0;
  double mu_bar = 10.0;
  double tau_abs = 1e-4;
  double tau_rel = 1e-4;
  int max_iterations = 200;
  GroupProxMode group_prox = GroupProxMode::stacked;

  void validate() const {
    require(rho_bar > 0.0, ErrorKind::invalid_config, "rho_bar must be > 0");
    require(mu_bar > 1.0, ErrorKind::invalid_config, "mu_bar must be > 1");
    require(tau_abs > 0.0 && tau_rel > 0.0, ErrorKind::invalid_config, "tolerances must be > 0");
    require(max_iterations >= 1, ErrorKind::invalid_config, "max_iterations must be >= 1");
  }
};

struct AdmmState {
  MatrixList phi;
  MatrixList w;
  MatrixList u;
  double rho = 2.0;
  int iteration = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

namespace detail {
inline void check_hermitian(const CMatrix& a, const char* what) {
  const double scale = std::max(1.0, a.norm());
  if (hermitian_defect(a) > 1e-8 * scale) fail(ErrorKind::invalid_input, std::string(what) + " is not Hermitian");
}
}  // namespace detail

/// argmin_Phi -ln|Phi| + tr(S Phi) + (rho/2)||Phi - W + U||_F^2, in closed form
/// through the eigendecomposition of S - rho (W - U).
inline CMatrix phi_update(const CMatrix& psd, const CMatrix& w, const CMatrix& u, double rho) {
  require(rho > 0.0, ErrorKind::invalid_input, "rho must be > 0");
  detail::check_hermitian(psd, "PSD estimate");
  detail::check_hermitian(w, "W");
  detail::check_hermitian(u, "U");
  const CMatrix target = hermitian_part(psd - rho * (w - u));
  Eigen::SelfAdjointEigenSolver<CMatrix> es(target);
  if (es.info() != Eigen::Success || !es.eigenvalues().allFinite())
    fail(ErrorKind::numerical_failure, "eigendecomposition failed in Phi update");
  Vector shrunk(target.rows());
  for (Eigen::Index i = 0; i < shrunk.size(); ++i) {
    const double j = es.eigenvalues()(i);
    const double root = std::sqrt(j * j + 4.0 * rho);
    // (-j + root) / (2 rho), rewritten to avoid cancellation for large positive j.
    shrunk(i) = j > 0.0 ? 2.0 / (j + root) : (root - j) / (2.0 * rho);
  }
  if (!shrunk.allFinite() || shrunk.minCoeff() <= 0.0)
    fail(ErrorKind::numerical_failure, "Phi update produced a non-positive eigenvalue");
  return hermitian_part(es.eigenvectors() * shrunk.asDiagonal() * es.eigenvectors().adjoint());
}

/// T_st(a, beta) = (1 - beta/|a|)_+ a.
inline double soft_threshold(double a, double beta) {
  const double mag = std::abs(a);
  return mag > beta ? (1.0 - beta / mag) * a : 0.0;
}

inline Complex soft_threshold(Complex a, double beta) {
  const double mag = std::abs(a);
  return mag > beta ? (1.0 - beta / mag) * a : Complex(0.0, 0.0);
}

/// Proximal step for the weighted sparse-group penalty, applied to A_k = Phi_k + U_k.
inline MatrixList w_update(const MatrixList& a, const LlaWeights& weights, double alpha, double rho,
                           GroupProxMode mode) {
  require(rho > 0.0, ErrorKind::invalid_input, "rho must be > 0");
  const int m = weights.m;
  const int p = weights.p;
  const int mp = m * p;
  const int count = static_cast<int>(a.size());
  require(weights.frequencies() == count, ErrorKind::invalid_input, "weights/frequency count mismatch");
  for (const auto& ak : a) require(ak.rows() == mp && ak.cols() == mp, ErrorKind::invalid_input, "A has wrong shape");

  MatrixList out = zero_list(count, mp);
  // Elementwise soft thresholding everywhere except the diagonal, which is copied.
  for (int k = 0; k < count; ++k) {
    const Matrix& lam = weights.elementwise[static_cast<std::size_t>(k)];
    for (int j = 0; j < mp; ++j) {
      for (int i = 0; i < mp; ++i) {
        out[k](i, j) = i == j ? Complex(a[k](i, i).real(), 0.0) : soft_threshold(a[k](i, j), alpha * lam(i, j) / rho);
      }
    }
  }

  const double group_scale = (1.0 - alpha) * m * std::sqrt(static_cast<double>(count)) / rho;
  auto shrink_factor = [&](double norm, double weight) {
    if (norm <= 0.0) return 0.0;
    return std::max(0.0, 1.0 - group_scale * weight / norm);
  };
  for (int q = 0; q < p; ++q) {
    for (int l = 0; l < p; ++l) {
      if (q == l) continue;
      const double weight = weights.groupwise(q, l);
      if (mode == GroupProxMode::stacked) {
        const double factor = shrink_factor(stacked_block_norm(out, m, q, l), weight);
        for (auto& wk : out) node_block(wk, m, q, l) *= factor;
      } else {
        for (auto& wk : out) {
          const double factor = shrink_factor(node_block(wk, m, q, l).norm(), weight);
          node_block(wk, m, q, l) *= factor;
        }
      }
    }
  }
  for (auto& wk : out) wk = hermitian_part(wk);
  return out;
}

inline MatrixList dual_update(const MatrixList& u, const MatrixList& phi, const MatrixList& w) {
  require(u.size() == phi.size() && u.size() == w.size(), ErrorKind::invalid_input, "dual update shape mismatch");
  MatrixList out(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = u[k] + (phi[k] - w[k]);
  return out;
}

struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
  double primal_tolerance = 0.0;
  double dual_tolerance = 0.0;

  bool converged() const { return primal <= primal_tolerance && dual <= dual_tolerance; }
};

/// Primal/dual residual norms and their stopping thresholds for the state after an
/// iteration; `w_prev` holds the W iterate from before it.
inline Residuals residuals(const AdmmState& state, const MatrixList& w_prev, const AdmmConfig& config) {
  require(state.phi.size() == state.w.size() && state.w.size() == w_prev.size() && state.u.size() == state.w.size(),
          ErrorKind::invalid_input, "residual shape mismatch");
  const std::size_t count = state.phi.size();
  const double mp = count == 0 ? 0.0 : static_cast<double>(state.phi.front().rows());
  double primal_sq = 0.0;
  double dual_sq = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    primal_sq += (state.phi[k] - state.w[k]).squaredNorm();
    dual_sq += (state.w[k] - w_prev[k]).squaredNorm();
  }
  const double e1 = stacked_norm(state.phi);
  const double e2 = stacked_norm(state.w);
  const double e3 = stacked_norm(state.u);
  const double floor = mp * std::sqrt(static_cast<double>(count)) * config.tau_abs;
  Residuals r;
  r.primal = std::sqrt(primal_sq);
  r.dual = state.rho * std::sqrt(dual_sq);
  r.primal_tolerance = floor + config.tau_rel * std::max(e1, e2);
  r.dual_tolerance = floor + config.tau_rel * e3 / state.rho;
  return r;
}

struct RhoUpdate {
  double rho;
  MatrixList u;
};

/// Residual balancing: double rho (and halve the scaled dual) when the primal
/// residual dominates, the reverse when the dual residual does.
inline RhoUpdate rho_update(double rho, double primal, double dual, double mu_bar, MatrixList u) {
  require(rho > 0.0 && mu_bar > 1.0, ErrorKind::invalid_input, "rho update needs rho > 0 and mu_bar > 1");
  if (primal > mu_bar * dual) {
    for (auto& uk : u) uk *= 0.5;
    return {2.0 * rho, std::move(u)};
  }
  if (dual > mu_bar * primal) {
    for (auto& uk : u) uk *= 2.0;
    return {rho / 2.0, std::move(u)};
  }
  return {rho, std::move(u)};
}

struct AdmmResult {
  MatrixList phi;  // dense, Hermitian PD
  MatrixList w;    // exactly sparse
  int iterations = 0;
  bool converged = false;
  double objective = 0.0;  // weighted objective at the PD projection of W
  double rho = 0.0;
};

/// Runs the ADMM iterations until both residuals are under their tolerances or
/// `config.max_iterations` is reached. `init` seeds W (zeros on a cold start).
inline AdmmResult admm_run(const SpectralStatistics& stats, const LlaWeights& weights, double alpha,
                           const AdmmConfig& config, const MatrixList& init) {
  config.validate();
  const int count = stats.frequencies();
  const int mp = stats.channels();
  require(count >= 1, ErrorKind::invalid_input, "no PSD matrices");
  require(weights.frequencies() == count && weights.channels() == mp, ErrorKind::invalid_input,
          "weights do not match the spectral statistics");
  require(init.empty() || static_cast<int>(init.size()) == count, ErrorKind::invalid_input,
          "initial guess has the wrong number of frequencies");

  AdmmState state;
  state.rho = config.rho_bar;
  state.w = init.empty() ? zero_list(count, mp) : init;
  for (auto& wk : state.w) {
    require(wk.rows() == mp && wk.cols() == mp, ErrorKind::invalid_input, "initial guess has the wrong dimension");
    wk = hermitian_part(wk);
  }
  state.u = zero_list(count, mp);
  state.phi = zero_list(count, mp);

  bool converged = false;
  while (!converged && state.iteration < config.max_iterations) {
    for (int k = 0; k < count; ++k) state.phi[k] = phi_update(stats.psd[k], state.w[k], state.u[k], state.rho);

    MatrixList a(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) a[k] = state.phi[k] + state.u[k];
    MatrixList w_prev = std::move(state.w);
    state.w = w_update(a, weights, alpha, state.rho, config.group_prox);
    state.u = dual_update(state.u, state.phi, state.w);

    const Residuals r = residuals(state, w_prev, config);
    state.primal_residual = r.primal;
    state.dual_residual = r.dual;
    converged = r.converged();
    ++state.iteration;

    auto next = rho_update(state.rho, r.primal, r.dual, config.mu_bar, std::move(state.u));
    state.rho = next.rho;
    state.u = std::move(next.u);
  }

  AdmmResult result;
  result.objective = whittle_nll(pd_projection(state.w), stats.psd) + weighted_penalty(state.w, weights, alpha);
  result.phi = std::move(state.phi);
  result.w = std::move(state.w);
  result.iterations = state.iteration;
  result.converged = converged;
  result.rho = state.rho;
  return result;
}

}  // namespace scig
