#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "scig/errors.hpp"
#include "scig/linalg.hpp"

namespace scig {

enum class PenaltyFamily { lasso, logsum, scad };

inline const char* to_string(PenaltyFamily family) {
  switch (family) {
    case PenaltyFamily::lasso: return "lasso";
    case PenaltyFamily::logsum: return "logsum";
    case PenaltyFamily::scad: return "scad";
  }
  return "unknown";
}

inline PenaltyFamily parse_penalty_family(const std::string& name) {
  if (name == "lasso") return PenaltyFamily::lasso;
  if (name == "logsum" || name == "log-sum") return PenaltyFamily::logsum;
  if (name == "scad") return PenaltyFamily::scad;
  fail(ErrorKind::invalid_config, "unknown penalty family '" + name + "'");
}

/// Penalty family with its tuning parameters. `alpha` balances the elementwise
/// (alpha) and group (1 - alpha) terms.
struct PenaltySpec {
  PenaltyFamily family = PenaltyFamily::lasso;
  double lambda = 1.0;
  double alpha = 0.05;
  double epsilon = 1e-4;  // log-sum only
  double scad_a = 3.7;    // SCAD only

  void validate() const {
    require(std::isfinite(lambda) && lambda >= 0.0, ErrorKind::invalid_config, "lambda must be >= 0");
    require(alpha >= 0.0 && alpha <= 1.0, ErrorKind::invalid_config, "alpha must lie in [0, 1]");
    if (family == PenaltyFamily::logsum)
      require(epsilon > 0.0, ErrorKind::invalid_config, "log-sum epsilon must be > 0");
    if (family == PenaltyFamily::scad)
      require(scad_a > 2.0, ErrorKind::invalid_config, "SCAD a must be > 2");
  }

  PenaltySpec with_lambda(double value) const {
    PenaltySpec copy = *this;
    copy.lambda = value;
    return copy;
  }
};

inline double penalty_value(double u, const PenaltySpec& spec) {
  const double x = std::abs(u);
  const double lam = spec.lambda;
  switch (spec.family) {
    case PenaltyFamily::lasso:
      return lam * x;
    case PenaltyFamily::logsum:
      return lam * spec.epsilon * std::log1p(x / spec.epsilon);
    case PenaltyFamily::scad: {
      const double a = spec.scad_a;
      if (x <= lam) return lam * x;
      if (x < a * lam) return (2.0 * a * lam * x - x * x - lam * lam) / (2.0 * (a - 1.0));
      return lam * lam * (a + 1.0) / 2.0;
    }
  }
  return 0.0;
}

/// d rho / d|u| at |u|; at 0 this is the right limit, lambda.
inline double penalty_derivative(double u, const PenaltySpec& spec) {
  const double x = std::abs(u);
  const double lam = spec.lambda;
  switch (spec.family) {
    case PenaltyFamily::lasso:
      return lam;
    case PenaltyFamily::logsum:
      return lam * spec.epsilon / (x + spec.epsilon);
    case PenaltyFamily::scad: {
      const double a = spec.scad_a;
      if (x <= lam) return lam;
      if (x <= a * lam) return (a * lam - x) / (a - 1.0);
      return 0.0;
    }
  }
  return 0.0;
}

/// mu such that rho(u) + (mu/2) u^2 is convex.
inline double amenability_constant(const PenaltySpec& spec) {
  switch (spec.family) {
    case PenaltyFamily::lasso: return 0.0;
    case PenaltyFamily::logsum: return spec.lambda / spec.epsilon;
    case PenaltyFamily::scad: return 1.0 / (spec.scad_a - 1.0);
  }
  return 0.0;
}

/// delta_lambda: radius on which rho(u) >= (lambda/2)|u| holds.
inline double lower_bound_radius(const PenaltySpec& spec) {
  switch (spec.family) {
    case PenaltyFamily::lasso: return std::numeric_limits<double>::infinity();
    case PenaltyFamily::logsum: return spec.epsilon;
    case PenaltyFamily::scad: return spec.lambda;
  }
  return 0.0;
}

/// Spectral-norm radius inside which the penalized objective stays strictly convex.
/// Infinite for the lasso.
inline double convexity_radius(const PenaltySpec& spec, int m, int frequencies) {
  const double mu = amenability_constant(spec);
  if (mu == 0.0) return std::numeric_limits<double>::infinity();
  return 0.99 * std::sqrt(2.0 / (m * mu * std::sqrt(static_cast<double>(frequencies))));
}

/// Per-entry weights lambda_{kij} (diagonal entries unused, stored as 0) and
/// per-node-pair group weights lambda_{qlM} (diagonal stored as 0).
struct LlaWeights {
  int m = 0;
  int p = 0;
  std::vector<Matrix> elementwise;
  Matrix groupwise;

  int frequencies() const { return static_cast<int>(elementwise.size()); }
  int channels() const { return m * p; }

  static LlaWeights uniform(double lambda, int m, int p, int frequencies) {
    LlaWeights w;
    w.m = m;
    w.p = p;
    const int mp = m * p;
    Matrix e = Matrix::Constant(mp, mp, lambda);
    e.diagonal().setZero();
    w.elementwise.assign(static_cast<std::size_t>(frequencies), e);
    w.groupwise = Matrix::Constant(p, p, lambda);
    w.groupwise.diagonal().setZero();
    return w;
  }
};

/// Tangent weights of the penalty at the current estimate `omega_bar`.
inline LlaWeights lla_weights(const MatrixList& omega_bar, const PenaltySpec& spec, int frequencies, int m, int p) {
  require(static_cast<int>(omega_bar.size()) == frequencies, ErrorKind::invalid_input,
          "estimate has " + std::to_string(omega_bar.size()) + " frequencies, expected " + std::to_string(frequencies));
  const int mp = m * p;
  for (const auto& phi : omega_bar)
    require(phi.rows() == mp && phi.cols() == mp, ErrorKind::invalid_input, "estimate block has wrong dimension");

  const double lam = spec.lambda;
  auto weight = [&](double magnitude) {
    if (spec.family == PenaltyFamily::lasso) return lam;
    return std::clamp(penalty_derivative(magnitude, spec), 0.0, lam);
  };

  LlaWeights w;
  w.m = m;
  w.p = p;
  w.elementwise.reserve(static_cast<std::size_t>(frequencies));
  for (const auto& phi : omega_bar) {
    Matrix e(mp, mp);
    for (int j = 0; j < mp; ++j)
      for (int i = 0; i < mp; ++i) e(i, j) = i == j ? 0.0 : weight(std::abs(phi(i, j)));
    w.elementwise.push_back(std::move(e));
  }
  w.groupwise = Matrix::Zero(p, p);
  for (int q = 0; q < p; ++q)
    for (int l = 0; l < p; ++l)
      if (q != l) w.groupwise(q, l) = weight(stacked_block_norm(omega_bar, m, q, l));
  return w;
}

}  // namespace scig
