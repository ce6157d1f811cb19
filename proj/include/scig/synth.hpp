#pragma once

// Synthetic multi-attribute VAR(L) benchmarks with known conditional-independence graphs.

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "scig/diagnostics.hpp"
#include "scig/errors.hpp"
#include "scig/graph.hpp"
#include "scig/linalg.hpp"
#include "scig/spectral.hpp"

namespace scig {

using Rng = std::mt19937_64;

struct VarModel {
  int m = 0;
  int p = 0;
  std::vector<Matrix> coefficients;  // A_1 .. A_L
  Matrix innovation_precision;       // symmetric PD

  int order() const { return static_cast<int>(coefficients.size()); }
  int channels() const { return m * p; }
};

struct ModelOptions {
  int model = 1;            // 1: cluster precision; 2: adds Erdos-Renyi cross terms
  int p = 64;
  int m = 4;
  int order = 3;
  int clusters = 8;
  double density = 0.10;
  double coefficient_bound = 0.6;
  double target_radius = 0.95;
  double min_eigenvalue = 0.5;
  double er_probability = 0.002;
  double er_low = 0.1;
  double er_high = 0.4;

  void validate() const {
    require(model == 1 || model == 2, ErrorKind::invalid_config, "model must be 1 or 2");
    require(p >= 1 && m >= 1 && order >= 1, ErrorKind::invalid_config, "p, m and order must be >= 1");
    require(clusters >= 1 && p % clusters == 0, ErrorKind::invalid_config,
            "p = " + std::to_string(p) + " is not divisible by the cluster count " + std::to_string(clusters));
    require(density > 0.0 && density <= 1.0, ErrorKind::invalid_config, "density must lie in (0, 1]");
    require(er_probability >= 0.0 && er_probability <= 1.0, ErrorKind::invalid_config, "p_er must lie in [0, 1]");
    require(0.0 < er_low && er_low <= er_high, ErrorKind::invalid_config, "bad Erdos-Renyi value range");
  }
};

/// Adds gamma I so that the smallest eigenvalue of `a` equals `target`.
inline Matrix shift_min_eigenvalue(const Matrix& a, double target) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  const double gamma = target - es.eigenvalues()(0);
  return a + gamma * Matrix::Identity(a.rows(), a.cols());
}

/// Cluster precision: node pairs in the same cluster (including a node with
/// itself) share the m x m block T with T_uv = 0.5^|u-v| for u != v and zero
/// diagonal; blocks across clusters are zero. Shifted to minimum eigenvalue 0.5.
inline Matrix model1_precision(int p, int m, int clusters = 8, double min_eigenvalue = 0.5) {
  require(p >= 1 && m >= 1, ErrorKind::invalid_input, "p and m must be >= 1");
  require(clusters >= 1 && p % clusters == 0, ErrorKind::invalid_input,
          "p = " + std::to_string(p) + " is not divisible by the cluster count " + std::to_string(clusters));
  Matrix t = Matrix::Zero(m, m);
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v)
      if (u != v) t(u, v) = std::pow(0.5, std::abs(u - v));
  const int size = p / clusters;
  Matrix omega = Matrix::Zero(m * p, m * p);
  for (int q = 0; q < p; ++q)
    for (int l = 0; l < p; ++l)
      if (q / size == l / size) node_block(omega, m, q, l) = t;
  return shift_min_eigenvalue(omega, min_eigenvalue);
}

/// Erdos-Renyi addend: each unordered node pair is connected with probability
/// `p_er`; a connected block gets i.i.d. entries uniform on [-high,-low] U [low,high].
inline Matrix model2_addend(int p, int m, double p_er, double low, double high, Rng& rng) {
  require(p_er >= 0.0 && p_er <= 1.0, ErrorKind::invalid_input, "p_er must lie in [0, 1]");
  Matrix omega = Matrix::Zero(m * p, m * p);
  std::bernoulli_distribution connect(p_er);
  std::uniform_real_distribution<double> magnitude(low, high);
  std::bernoulli_distribution sign(0.5);
  for (int q = 0; q < p; ++q) {
    for (int l = q + 1; l < p; ++l) {
      if (!connect(rng)) continue;
      for (int u = 0; u < m; ++u)
        for (int v = 0; v < m; ++v) omega(q * m + u, l * m + v) = (sign(rng) ? 1.0 : -1.0) * magnitude(rng);
      node_block(omega, m, l, q) = node_block(omega, m, q, l).transpose();
    }
  }
  return omega;
}

/// [[A_1 ... A_L], [I 0 ...], [0 I 0 ...], ...].
inline Matrix companion_matrix(const std::vector<Matrix>& coefficients) {
  require(!coefficients.empty(), ErrorKind::invalid_input, "need at least one coefficient matrix");
  const Eigen::Index d = coefficients.front().rows();
  const Eigen::Index order = static_cast<Eigen::Index>(coefficients.size());
  Matrix c = Matrix::Zero(d * order, d * order);
  for (Eigen::Index i = 0; i < order; ++i) {
    const Matrix& a = coefficients[static_cast<std::size_t>(i)];
    require(a.rows() == d && a.cols() == d, ErrorKind::invalid_input, "coefficient matrices must be square and equal");
    c.block(0, i * d, d, d) = a;
    if (i > 0) c.block(i * d, (i - 1) * d, d, d).setIdentity();
  }
  return c;
}

namespace detail {

inline double dense_companion_radius(const std::vector<Matrix>& coefficients) {
  const Matrix c = companion_matrix(coefficients);
  Eigen::EigenSolver<Matrix> es(c, false);
  if (es.info() != Eigen::Success) fail(ErrorKind::numerical_failure, "companion eigensolver failed");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace detail

/// Channels that never interact through any A_i form independent subsystems, and
/// the companion spectrum is the union of theirs; each component is solved alone.
inline double companion_spectral_radius(const std::vector<Matrix>& coefficients) {
  const Matrix c = companion_matrix(coefficients);  // validates shapes
  const int d = static_cast<int>(coefficients.front().rows());
  std::vector<int> parent(static_cast<std::size_t>(d));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& a : coefficients)
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i)
        if (i != j && a(i, j) != 0.0) parent[find(i)] = find(j);

  std::vector<std::vector<int>> components(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) components[find(i)].push_back(i);
  double radius = 0.0;
  for (const auto& members : components) {
    if (members.empty()) continue;
    const int size = static_cast<int>(members.size());
    std::vector<Matrix> sub;
    for (const auto& a : coefficients) {
      Matrix b(size, size);
      for (int j = 0; j < size; ++j)
        for (int i = 0; i < size; ++i) b(i, j) = a(members[i], members[j]);
      sub.push_back(std::move(b));
    }
    radius = std::max(radius, detail::dense_companion_radius(sub));
  }
  return radius;
}

/// Applies the geometric rescaling when the companion radius exceeds `target`.
inline std::vector<Matrix> stabilize(std::vector<Matrix> coefficients, double target = 0.95) {
  const double radius = companion_spectral_radius(coefficients);
  if (radius > target) {
    const double gamma = target / radius;
    double scale = 1.0;
    for (auto& a : coefficients) {
      scale *= gamma;
      a *= scale;
    }
  }
  return coefficients;
}

/// Node-block-diagonal coefficients: within each node block an entry is nonzero
/// with probability `density`, uniform on [-bound, bound]. Rescaled as
/// A_i <- (target/r)^i A_i when the companion radius r exceeds `target`.
inline std::vector<Matrix> gen_var_coefficients(int p, int m, int order, Rng& rng, double density = 0.10,
                                                 double bound = 0.6, double target = 0.95) {
  require(order >= 1, ErrorKind::invalid_input, "order must be >= 1");
  require(density > 0.0 && density <= 1.0, ErrorKind::invalid_input, "density must lie in (0, 1]");
  std::bernoulli_distribution nonzero(density);
  std::uniform_real_distribution<double> value(-bound, bound);
  std::vector<Matrix> coefficients;
  for (int i = 0; i < order; ++i) {
    Matrix a = Matrix::Zero(m * p, m * p);
    for (int q = 0; q < p; ++q)
      for (int v = 0; v < m; ++v)
        for (int u = 0; u < m; ++u)
          if (nonzero(rng)) a(q * m + u, q * m + v) = value(rng);
    coefficients.push_back(std::move(a));
  }
  return stabilize(std::move(coefficients), target);
}

inline VarModel make_model(const ModelOptions& options, Rng& rng) {
  options.validate();
  VarModel model;
  model.m = options.m;
  model.p = options.p;
  Matrix omega = model1_precision(options.p, options.m, options.clusters, options.min_eigenvalue);
  if (options.model == 2) {
    omega += model2_addend(options.p, options.m, options.er_probability, options.er_low, options.er_high, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> es(omega, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < options.min_eigenvalue) omega = shift_min_eigenvalue(omega, options.min_eigenvalue);
  }
  model.innovation_precision = omega;
  model.coefficients = gen_var_coefficients(options.p, options.m, options.order, rng, options.density,
                                            options.coefficient_bound, options.target_radius);
  return model;
}

/// x(t) = sum_i A_i x(t-i) + w(t), w ~ N(0, Omega^{-1}), zero initial state;
/// the first `burn_in` samples are dropped.
inline MultiAttributeSeries simulate_var(const VarModel& model, int n, Rng& rng, int burn_in = 100) {
  require(n >= 2, ErrorKind::invalid_input, "need n >= 2");
  require(burn_in >= 0, ErrorKind::invalid_input, "burn-in must be >= 0");
  const int d = model.channels();
  const int order = model.order();
  Eigen::LLT<Matrix> llt(model.innovation_precision);
  require(llt.info() == Eigen::Success, ErrorKind::invalid_input, "innovation precision is not PD");
  // Omega = L L^T  =>  w = L^{-T} z has covariance Omega^{-1}.
  const Matrix lt = llt.matrixU();

  std::normal_distribution<double> normal(0.0, 1.0);
  const int total = n + burn_in;
  Matrix history = Matrix::Zero(total, d);
  Vector z(d);
  for (int t = 0; t < total; ++t) {
    for (int c = 0; c < d; ++c) z(c) = normal(rng);
    Vector x = lt.triangularView<Eigen::Upper>().solve(z);
    for (int i = 1; i <= order && t - i >= 0; ++i)
      x.noalias() += model.coefficients[static_cast<std::size_t>(i - 1)] * history.row(t - i).transpose();
    history.row(t) = x.transpose();
  }
  return MultiAttributeSeries(history.bottomRows(n), model.p, model.m);
}

/// I - sum_i A_i e^{-i 2 pi f i}.
inline CMatrix transfer_inverse(const VarModel& model, double f) {
  const int d = model.channels();
  CMatrix g = CMatrix::Identity(d, d);
  for (int i = 1; i <= model.order(); ++i) {
    const Complex phase = std::polar(1.0, -2.0 * std::numbers::pi * f * i);
    g -= phase * model.coefficients[static_cast<std::size_t>(i - 1)].cast<Complex>();
  }
  return g;
}

/// S(f) = H(f) Omega^{-1} H(f)^H with H(f) = (I - sum_i A_i e^{-i 2 pi f i})^{-1}.
inline CMatrix true_psd(const VarModel& model, double f) {
  const CMatrix g = transfer_inverse(model, f);
  Eigen::PartialPivLU<CMatrix> lu(g);
  const CMatrix h = lu.inverse();
  const double rcond = lu.rcond();
  if (rcond < 1e-12) warn("transfer function is ill-conditioned at f = " + std::to_string(f));
  const Matrix cov = model.innovation_precision.llt().solve(Matrix::Identity(model.channels(), model.channels()));
  return hermitian_part(h * cov.cast<Complex>() * h.adjoint());
}

/// S^{-1}(f) = G(f)^H Omega G(f), G = I - sum_i A_i e^{-i 2 pi f i}.
inline CMatrix true_inverse_psd(const VarModel& model, double f) {
  const CMatrix g = transfer_inverse(model, f);
  return hermitian_part(g.adjoint() * model.innovation_precision.cast<Complex>() * g);
}

/// Frequencies 0, step, ..., 0.5 (endpoints included).
inline std::vector<double> truth_frequencies(double f_step) {
  require(f_step > 0.0 && f_step <= 0.5, ErrorKind::invalid_input, "frequency step must lie in (0, 0.5]");
  std::vector<double> freqs;
  const int count = static_cast<int>(std::floor(0.5 / f_step + 1e-9));
  for (int i = 0; i <= count; ++i) freqs.push_back(i * f_step);
  return freqs;
}

inline bool node_block_diagonal(const VarModel& model) {
  for (const auto& a : model.coefficients)
    for (int q = 0; q < model.p; ++q)
      for (int l = 0; l < model.p; ++l)
        if (q != l && node_block(a, model.m, q, l).cwiseAbs().maxCoeff() > 0.0) return false;
  return true;
}

/// Node-pair energies sqrt(sum_f ||(S^{-1}(f))^{(ql)}||_F^2) on the truth grid.
inline Matrix true_block_energy(const VarModel& model, double f_step = 0.01) {
  const int p = model.p;
  const int m = model.m;
  Matrix energy = Matrix::Zero(p, p);
  const bool blockwise = node_block_diagonal(model);
  const CMatrix omega = model.innovation_precision.cast<Complex>();
  for (double f : truth_frequencies(f_step)) {
    if (blockwise) {
      // G is node-block-diagonal, so (G^H Omega G)^{(ql)} = G_q^H Omega^{(ql)} G_l.
      const CMatrix g = transfer_inverse(model, f);
      for (int q = 0; q < p; ++q) {
        const CMatrix gq = node_block(g, m, q, q).adjoint();
        for (int l = 0; l < p; ++l) {
          const auto block = node_block(omega, m, q, l);
          if (block.cwiseAbs().maxCoeff() == 0.0) continue;
          energy(q, l) += (gq * block * node_block(g, m, l, l)).squaredNorm();
        }
      }
      continue;
    }
    const CMatrix inv = true_inverse_psd(model, f);
    for (int q = 0; q < p; ++q)
      for (int l = 0; l < p; ++l) energy(q, l) += node_block(inv, m, q, l).squaredNorm();
  }
  return energy.cwiseSqrt();
}

/// Edge {q, l} when its energy exceeds `rel_threshold` times the largest off-diagonal energy.
inline EdgeSet true_edges(const VarModel& model, double f_step = 0.01, double rel_threshold = 1e-2) {
  const Matrix energy = true_block_energy(model, f_step);
  double top = 0.0;
  for (int q = 0; q < model.p; ++q)
    for (int l = 0; l < model.p; ++l)
      if (q != l) top = std::max(top, energy(q, l));
  EdgeSet edges(model.p);
  if (top <= 0.0) return edges;
  for (int q = 0; q < model.p; ++q)
    for (int l = q + 1; l < model.p; ++l)
      if (energy(q, l) > rel_threshold * top) edges.add(q, l, energy(q, l));
  return edges;
}

/// log10(sum_f |[S^{-1}(f)]_ij|) per channel pair on the truth grid.
inline Matrix true_log_heatmap(const VarModel& model, double f_step = 0.01) {
  Matrix acc = Matrix::Zero(model.channels(), model.channels());
  for (double f : truth_frequencies(f_step)) acc += true_inverse_psd(model, f).cwiseAbs();
  return acc.array().log10().matrix();
}

struct GroundTruth {
  VarModel model;
  EdgeSet edges;
};

inline GroundTruth make_ground_truth(const ModelOptions& options, Rng& rng) {
  GroundTruth truth;
  truth.model = make_model(options, rng);
  truth.edges = true_edges(truth.model);
  return truth;
}

}  // namespace scig
