#pragma once

// Independent reference computations used only by tests. Nothing here calls into
// the implementation paths these values are checked against.

#include <unsupported/Eigen/Polynomials>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "scig/linalg.hpp"
#include "scig/penalty.hpp"

namespace scig::oracle {

/// (1/sqrt(n)) sum_t x(t) e^{-i 2 pi l t / n}, straight from the definition.
inline Complex direct_dft(const Vector& x, int l) {
  const int n = static_cast<int>(x.size());
  Complex acc(0.0, 0.0);
  for (int t = 0; t < n; ++t) acc += x(t) * std::polar(1.0, -2.0 * std::numbers::pi * l * t / n);
  return acc / std::sqrt(static_cast<double>(n));
}

inline CMatrix random_hermitian(int dim, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  CMatrix a(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) a(i, j) = Complex(normal(rng), normal(rng));
  return (a + a.adjoint()) * 0.5;
}

inline CMatrix random_hpd(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix a(dim, dim + 2);
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < dim; ++i) a(i, j) = Complex(normal(rng), normal(rng));
  return a * a.adjoint() / static_cast<double>(a.cols()) + 0.1 * CMatrix::Identity(dim, dim);
}

/// (rho/2) sum_k ||W_k - A_k||^2 + alpha sum_k sum_{i!=j} w_kij |W_kij|
///   + (1-alpha) m sqrt(M) sum_{q!=l} w_ql ||W^{(qlM)}||_F   (stacked group).
inline double prox_objective(const MatrixList& w, const MatrixList& a, const LlaWeights& weights, double alpha,
                             double rho) {
  const int m = weights.m;
  const int p = weights.p;
  const int mp = m * p;
  const int count = static_cast<int>(w.size());
  double fit = 0.0;
  double elem = 0.0;
  for (int k = 0; k < count; ++k) {
    fit += (w[k] - a[k]).squaredNorm();
    for (int j = 0; j < mp; ++j)
      for (int i = 0; i < mp; ++i)
        if (i != j) elem += weights.elementwise[k](i, j) * std::abs(w[k](i, j));
  }
  double group = 0.0;
  for (int q = 0; q < p; ++q)
    for (int l = 0; l < p; ++l) {
      if (q == l) continue;
      double sq = 0.0;
      for (int k = 0; k < count; ++k) sq += w[k].block(q * m, l * m, m, m).squaredNorm();
      group += weights.groupwise(q, l) * std::sqrt(sq);
    }
  return 0.5 * rho * fit + alpha * elem + (1.0 - alpha) * m * std::sqrt(static_cast<double>(count)) * group;
}

/// Minimizes a convex function of r >= 0 by golden-section search on [0, hi].
inline double golden_min(const std::function<double(double)>& f, double hi) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = f(x2);
    }
  }
  const double mid = 0.5 * (lo + hi);
  return f(0.0) <= f(mid) ? 0.0 : mid;
}

/// Coordinate descent on the prox objective, one complex entry (and its Hermitian
/// mirror) at a time. For an entry with a: the minimizer's phase is a's phase and
/// the modulus solves a one-dimensional convex problem, done by golden section.
inline MatrixList coordinate_descent_prox(const MatrixList& a, const LlaWeights& weights, double alpha, double rho,
                                          int sweeps = 400) {
  const int m = weights.m;
  const int p = weights.p;
  const int mp = m * p;
  const int count = static_cast<int>(a.size());
  const double gscale = (1.0 - alpha) * m * std::sqrt(static_cast<double>(count));
  MatrixList w(a.size());
  for (int k = 0; k < count; ++k) {
    w[k] = CMatrix::Zero(mp, mp);
    for (int i = 0; i < mp; ++i) w[k](i, i) = a[k](i, i).real();
  }
  auto group_rest = [&](int k0, int i0, int j0) {
    const int q = i0 / m;
    const int l = j0 / m;
    double sq = 0.0;
    for (int k = 0; k < count; ++k)
      for (int v = 0; v < m; ++v)
        for (int u = 0; u < m; ++u) {
          const int i = q * m + u;
          const int j = l * m + v;
          if (k == k0 && i == i0 && j == j0) continue;
          sq += std::norm(w[k](i, j));
        }
    return sq;
  };
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (int k = 0; k < count; ++k) {
      for (int j = 0; j < mp; ++j) {
        for (int i = j + 1; i < mp; ++i) {
          // Entry (i,j) and its conjugate (j,i) contribute twice to every term.
          const Complex target = a[k](i, j);
          const double mag = std::abs(target);
          const double lam = weights.elementwise[k](i, j);
          const bool grouped = (i / m) != (j / m);
          const double gw = grouped ? weights.groupwise(i / m, j / m) : 0.0;
          const double rest = grouped ? group_rest(k, i, j) : 0.0;
          auto f = [&](double r) {
            double v = rho * (r - mag) * (r - mag) + 2.0 * alpha * lam * r;
            if (grouped) v += 2.0 * gscale * gw * std::sqrt(r * r + rest);
            return v;
          };
          const double r = golden_min(f, mag + 1.0);
          const Complex phase = mag > 0.0 ? target / mag : Complex(1.0, 0.0);
          w[k](i, j) = r * phase;
          w[k](j, i) = std::conj(w[k](i, j));
        }
      }
    }
  }
  return w;
}

/// Largest |z| with det(z^L I - sum_i A_i z^{L-i}) = 0, via polynomial
/// interpolation on roots of unity and a companion-free polynomial solver.
inline double determinant_root_radius(const std::vector<Matrix>& coefficients) {
  const int order = static_cast<int>(coefficients.size());
  const int d = static_cast<int>(coefficients.front().rows());
  const int degree = order * d;
  const int samples = degree + 1;
  std::vector<Complex> values(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * s / samples);
    CMatrix poly = std::pow(z, order) * CMatrix::Identity(d, d);
    for (int i = 1; i <= order; ++i) poly -= std::pow(z, order - i) * coefficients[i - 1].cast<Complex>();
    values[static_cast<std::size_t>(s)] = poly.determinant();
  }
  // c_j = (1/N) sum_s v_s z_s^{-j}
  Eigen::VectorXcd coeffs(samples);
  for (int j = 0; j < samples; ++j) {
    Complex acc(0.0, 0.0);
    for (int s = 0; s < samples; ++s)
      acc += values[static_cast<std::size_t>(s)] * std::polar(1.0, -2.0 * std::numbers::pi * j * s / samples);
    coeffs(j) = acc / static_cast<double>(samples);
  }
  Eigen::VectorXd real_coeffs = coeffs.real();
  int top = degree;
  while (top > 0 && std::abs(real_coeffs(top)) < 1e-14) --top;
  if (top == 0) return 0.0;
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(real_coeffs.head(top + 1));
  double radius = 0.0;
  for (Eigen::Index i = 0; i < solver.roots().size(); ++i) radius = std::max(radius, std::abs(solver.roots()(i)));
  return radius;
}

}  // namespace scig::oracle
