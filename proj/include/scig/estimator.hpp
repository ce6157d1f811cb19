#pragma once

// Outer estimation loop: LLA passes around the ADMM core, BIC selection of
// lambda and extraction of the node-level graph.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "scig/admm.hpp"
#include "scig/diagnostics.hpp"
#include "scig/graph.hpp"
#include "scig/objective.hpp"
#include "scig/penalty.hpp"
#include "scig/spectral.hpp"

namespace scig {

/// Inverse-PSD estimates: dense PD `phi` from the likelihood step and the
/// exactly-sparse companion `sparse` (the ADMM splitting variable).
struct PrecisionSpectrum {
  int m = 0;
  int p = 0;
  MatrixList phi;
  MatrixList sparse;

  int frequencies() const { return static_cast<int>(phi.size()); }
  int channels() const { return m * p; }
};

enum class LambdaSelection { fixed, bic_grid };

struct FitConfig {
  PenaltySpec penalty;
  AdmmConfig admm;
  int half_window = 1;
  int lla_iterations = 2;
  LambdaSelection selection = LambdaSelection::fixed;
  int grid_size = 10;
  bool warm_start = true;
  double gamma = 0.0;

  void validate() const {
    penalty.validate();
    admm.validate();
    require(lla_iterations >= 1, ErrorKind::invalid_config, "lla_iterations must be >= 1");
    require(grid_size >= 1, ErrorKind::invalid_config, "lambda grid must not be empty");
    require(gamma >= 0.0, ErrorKind::invalid_config, "gamma must be >= 0");
  }
};

/// Node pairs whose stacked sparse block norm exceeds `gamma`.
inline EdgeSet extract_edges(const PrecisionSpectrum& prec, double gamma = 0.0) {
  require(gamma >= 0.0, ErrorKind::invalid_input, "gamma must be >= 0");
  EdgeSet edges(prec.p);
  for (int q = 0; q < prec.p; ++q) {
    for (int l = q + 1; l < prec.p; ++l) {
      const double norm = stacked_block_norm(prec.sparse, prec.m, q, l);
      if (norm > gamma) edges.add(q, l, norm);
    }
  }
  return edges;
}

inline std::size_t count_nonzeros(const MatrixList& list) {
  std::size_t nnz = 0;
  for (const auto& a : list)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index i = 0; i < a.rows(); ++i)
        if (std::abs(a(i, j)) > 0.0) ++nnz;
  return nnz;
}

/// 2K sum_k(-ln|Phi_k| + tr(S_k Phi_k)) + ln(2KM) * (nonzeros of the sparse iterate).
inline double bic(const PrecisionSpectrum& prec, const SpectralStatistics& stats) {
  require(prec.frequencies() == stats.frequencies() && prec.channels() == stats.channels(), ErrorKind::invalid_input,
          "estimate and statistics dimensions differ");
  const double k_span = stats.grid.span();
  const double m_count = stats.frequencies();
  const double likelihood = whittle_nll(prec.phi, stats.psd);
  return 2.0 * k_span * likelihood +
         std::log(2.0 * k_span * m_count) * static_cast<double>(count_nonzeros(prec.sparse));
}

/// Result of the LLA pass stack at one lambda.
struct LlaFit {
  PrecisionSpectrum estimate;
  std::vector<MatrixList> pass_sparse;     // W after each pass
  std::vector<double> pass_objectives;     // true-penalty objective after each pass
  bool converged = true;
  int iterations = 0;
};

/// Runs the LLA stack at a single lambda: a first pass with weights from a zero
/// estimate (lasso weights), then re-weighted passes for non-convex families.
inline LlaFit fit_lambda(const SpectralStatistics& stats, int m, int p, const FitConfig& config, double lambda,
                         const LlaFit* warm = nullptr) {
  config.validate();
  require(stats.channels() == m * p, ErrorKind::invalid_input, "statistics do not match m * p");
  const PenaltySpec spec = config.penalty.with_lambda(lambda);
  spec.validate();
  const int count = stats.frequencies();
  const int passes = spec.family == PenaltyFamily::lasso ? 1 : config.lla_iterations;

  LlaFit out;
  out.estimate.m = m;
  out.estimate.p = p;
  MatrixList current = zero_list(count, m * p);
  for (int pass = 0; pass < passes; ++pass) {
    const LlaWeights weights = lla_weights(current, spec, count, m, p);
    MatrixList init;
    if (pass == 0) {
      if (warm != nullptr && !warm->pass_sparse.empty()) init = warm->pass_sparse.front();
    } else {
      init = current;
    }
    AdmmResult run = admm_run(stats, weights, spec.alpha, config.admm, init);
    out.converged = out.converged && run.converged;
    out.iterations += run.iterations;
    current = run.w;
    out.pass_sparse.push_back(run.w);
    out.pass_objectives.push_back(penalized_objective(run.w, stats.psd, spec, m, p));
    out.estimate.phi = std::move(run.phi);
    out.estimate.sparse = std::move(run.w);
  }

  const double radius = convexity_radius(spec, m, count);
  if (std::isfinite(radius)) {
    for (int k = 0; k < count; ++k) {
      Eigen::SelfAdjointEigenSolver<CMatrix> es(out.estimate.phi[k], Eigen::EigenvaluesOnly);
      const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
      if (norm > radius) {
        warn("||Phi_" + std::to_string(k) + "|| = " + std::to_string(norm) + " exceeds the convexity radius " +
             std::to_string(radius));
        break;
      }
    }
  }
  return out;
}

struct LambdaRange {
  double smallest_empty = 0.0;  // lambda_sm
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> grid;     // descending, both ends included
};

/// `count` log-spaced points from `high` down to `low`, both ends included.
inline std::vector<double> log_spaced_descending(double low, double high, int count) {
  require(count >= 1 && low > 0.0 && high >= low, ErrorKind::invalid_input, "bad log grid");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  if (count == 1) return {high};
  const double step = std::log(high / low) / (count - 1);
  for (int i = 0; i < count; ++i) grid.push_back(i == count - 1 ? low : high * std::exp(-step * i));
  return grid;
}

/// Brackets and bisects the smallest lambda giving an empty graph under the lasso
/// penalty (relative precision 5%), then returns [lambda_sm/20, lambda_sm/2].
inline LambdaRange lambda_grid(const SpectralStatistics& stats, int m, int p, const FitConfig& config) {
  config.validate();
  FitConfig lasso = config;
  lasso.penalty.family = PenaltyFamily::lasso;
  lasso.lla_iterations = 1;
  auto empty_at = [&](double lambda) {
    return extract_edges(fit_lambda(stats, m, p, lasso, lambda).estimate, config.gamma).empty();
  };

  constexpr double floor_lambda = 1e-6;
  constexpr double ceiling_lambda = 1e6;
  double hi = 1.0;
  double lo = 0.0;
  if (empty_at(hi)) {
    lo = hi / 10.0;
    while (empty_at(lo)) {
      hi = lo;
      if (lo <= floor_lambda)
        fail(ErrorKind::search_failure, "graph is already empty at lambda = " + std::to_string(lo));
      lo = std::max(lo / 10.0, floor_lambda);
    }
  } else {
    lo = hi;
    hi *= 10.0;
    while (!empty_at(hi)) {
      lo = hi;
      if (hi >= ceiling_lambda)
        fail(ErrorKind::search_failure, "graph is not empty at lambda = " + std::to_string(hi));
      hi = std::min(hi * 10.0, ceiling_lambda);
    }
  }
  while (hi / lo > 1.05) {
    const double mid = std::sqrt(hi * lo);
    if (empty_at(mid))
      hi = mid;
    else
      lo = mid;
  }

  LambdaRange range;
  range.smallest_empty = hi;
  range.upper = hi / 2.0;
  range.lower = range.upper / 10.0;
  range.grid = log_spaced_descending(range.lower, range.upper, config.grid_size);
  return range;
}

struct BicPoint {
  double lambda = 0.0;
  double bic = 0.0;
  std::size_t edges = 0;
};

struct FitResult {
  PrecisionSpectrum estimate;
  EdgeSet edges;
  double lambda = 0.0;
  std::vector<BicPoint> bic_trace;
  std::vector<double> pass_objectives;
  bool converged = true;
  int frequencies = 0;
};

/// Fits from precomputed spectral statistics.
inline FitResult fit(const SpectralStatistics& stats, int m, int p, const FitConfig& config) {
  config.validate();
  FitResult result;
  result.frequencies = stats.frequencies();
  auto finish = [&](LlaFit&& chosen, double lambda) {
    result.edges = extract_edges(chosen.estimate, config.gamma);
    result.lambda = lambda;
    result.converged = chosen.converged;
    result.pass_objectives = std::move(chosen.pass_objectives);
    result.estimate = std::move(chosen.estimate);
  };

  if (config.selection == LambdaSelection::fixed) {
    finish(fit_lambda(stats, m, p, config, config.penalty.lambda), config.penalty.lambda);
    return result;
  }

  const LambdaRange range = lambda_grid(stats, m, p, config);
  require(!range.grid.empty(), ErrorKind::invalid_config, "empty lambda grid");
  std::optional<LlaFit> best;
  std::optional<LlaFit> previous;
  double best_bic = std::numeric_limits<double>::infinity();
  double best_lambda = range.grid.front();
  for (double lambda : range.grid) {
    const LlaFit* warm = config.warm_start && previous ? &*previous : nullptr;
    LlaFit candidate = fit_lambda(stats, m, p, config, lambda, warm);
    const double score = bic(candidate.estimate, stats);
    result.bic_trace.push_back({lambda, score, extract_edges(candidate.estimate, config.gamma).size()});
    if (score < best_bic) {
      best_bic = score;
      best_lambda = lambda;
      best = candidate;
    }
    previous = std::move(candidate);
  }
  finish(std::move(*best), best_lambda);
  return result;
}

inline FitResult fit(const MultiAttributeSeries& series, const FitConfig& config) {
  config.validate();
  const SpectralStatistics stats = spectral_statistics(series, config.half_window);
  return fit(stats, series.attributes(), series.nodes(), config);
}

/// log10 of sqrt(sum_k |[Phi_k]_ij|^2) per channel pair.
inline Matrix log_magnitude_heatmap(const MatrixList& phi) {
  require(!phi.empty(), ErrorKind::invalid_input, "no matrices");
  Matrix acc = Matrix::Zero(phi.front().rows(), phi.front().cols());
  for (const auto& a : phi) acc += a.cwiseAbs2();
  return acc.cwiseSqrt().array().log10().matrix();
}

}  // namespace scig
