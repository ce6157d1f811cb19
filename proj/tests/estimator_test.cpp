#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "scig/estimator.hpp"
#include "scig/eval.hpp"
#include "scig/synth.hpp"

namespace scig {
namespace {

SpectralStatistics stats_from(MatrixList psd, int half_window = 0) {
  SpectralStatistics s;
  s.grid = FrequencyGrid{64, half_window, static_cast<int>(psd.size())};
  s.psd = std::move(psd);
  return s;
}

MultiAttributeSeries white_noise(int n, int p, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x(n, p * m);
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) = normal(rng);
  return MultiAttributeSeries(x, p, m);
}

FitConfig lasso_fixed(double lambda, int half_window) {
  FitConfig c;
  c.penalty.family = PenaltyFamily::lasso;
  c.penalty.lambda = lambda;
  c.half_window = half_window;
  return c;
}

TEST(ExtractEdges, Examples) {
  PrecisionSpectrum prec;
  prec.m = 2;
  prec.p = 3;
  prec.sparse = zero_list(2, 6);
  prec.phi = prec.sparse;
  EXPECT_TRUE(extract_edges(prec).empty());

  prec.sparse[0](0, 2) = 0.3;
  prec.sparse[0](2, 0) = 0.3;
  const auto one = extract_edges(prec);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.edges()[0].a, 0);
  EXPECT_EQ(one.edges()[0].b, 1);
  EXPECT_NEAR(one.edges()[0].weight, 0.3, 1e-15);

  const double nu = 2.0;
  prec.sparse = zero_list(2, 6);
  prec.sparse[1](0, 2) = prec.sparse[1](2, 0) = 0.6 * nu;
  prec.sparse[1](2, 4) = prec.sparse[1](4, 2) = 0.4 * nu;
  const auto kept = extract_edges(prec, 0.5 * nu);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_TRUE(kept.contains(0, 1));
  EXPECT_THROW(extract_edges(prec, -1.0), Error);
}

TEST(Bic, HandValue) {
  PrecisionSpectrum prec;
  prec.m = prec.p = 1;
  prec.phi = {CMatrix::Constant(1, 1, 1.0)};
  prec.sparse = prec.phi;
  const auto stats = stats_from({CMatrix::Constant(1, 1, 1.0)});
  EXPECT_NEAR(bic(prec, stats), 2.0 + std::log(2.0), 1e-12);
  EXPECT_NEAR(bic(prec, stats), 2.6931, 1e-4);
}

TEST(Bic, ExactInverseLikelihoodPart) {
  std::mt19937_64 rng(2);
  MatrixList psd{oracle::random_hpd(3, rng), oracle::random_hpd(3, rng)};
  const auto stats = stats_from(psd, 2);
  PrecisionSpectrum prec;
  prec.m = 1;
  prec.p = 3;
  for (const auto& s : psd) prec.phi.push_back(s.inverse());
  prec.sparse = zero_list(2, 3);
  double expected = 0.0;
  for (const auto& s : psd) expected += std::log(s.determinant().real()) + 3.0;
  EXPECT_NEAR(bic(prec, stats), 2.0 * 5.0 * expected, 1e-9 * std::abs(expected) * 10.0);
}

TEST(Bic, ComplexityTermIsAdditive) {
  std::mt19937_64 rng(3);
  MatrixList psd{oracle::random_hpd(3, rng)};
  const auto stats = stats_from(psd, 1);
  PrecisionSpectrum prec;
  prec.m = 1;
  prec.p = 3;
  prec.phi = {psd[0].inverse()};
  prec.sparse = {CMatrix::Identity(3, 3)};
  const double base = bic(prec, stats);
  const double step = std::log(2.0 * 3.0 * 1.0);
  prec.sparse[0](0, 1) = prec.sparse[0](1, 0) = 0.1;
  EXPECT_NEAR(bic(prec, stats) - base, 2.0 * step, 1e-9);
  EXPECT_GT(bic(prec, stats), base);
  prec.sparse[0](0, 2) = 0.2;
  EXPECT_NEAR(bic(prec, stats) - base, 3.0 * step, 1e-9);
}

TEST(LambdaGrid, LogSpacing) {
  const auto g = log_spaced_descending(0.05, 0.5, 10);
  ASSERT_EQ(g.size(), 10u);
  EXPECT_DOUBLE_EQ(g.front(), 0.5);
  EXPECT_DOUBLE_EQ(g.back(), 0.05);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(g[i - 1] / g[i], std::pow(10.0, 1.0 / 9.0), 1e-12);
  EXPECT_THROW(log_spaced_descending(0.0, 1.0, 3), Error);
}

TEST(LambdaGrid, BracketsSmallestEmptyLambda) {
  const auto stats = spectral_statistics(white_noise(512, 3, 2, 4), 4);
  FitConfig config;
  const auto range = lambda_grid(stats, 2, 3, config);
  EXPECT_DOUBLE_EQ(range.upper, range.smallest_empty / 2.0);
  EXPECT_DOUBLE_EQ(range.lower, range.upper / 10.0);
  ASSERT_EQ(range.grid.size(), 10u);
  EXPECT_DOUBLE_EQ(range.grid.front(), range.upper);
  // Empty at lambda_sm and above; nonempty just below the 5% bracket.
  for (double factor : {1.0, 1.3, 3.0})
    EXPECT_TRUE(extract_edges(fit_lambda(stats, 2, 3, lasso_fixed(range.smallest_empty * factor, 4),
                                         range.smallest_empty * factor)
                                  .estimate)
                    .empty());
  EXPECT_FALSE(extract_edges(fit_lambda(stats, 2, 3, lasso_fixed(0.0, 4), range.smallest_empty / 1.06).estimate)
                   .empty());
}

TEST(LambdaGrid, DiagonalStatisticsFailTheSearch) {
  MatrixList psd{CMatrix::Identity(4, 4), 2.0 * CMatrix::Identity(4, 4)};
  try {
    lambda_grid(stats_from(psd, 1), 2, 2, FitConfig{});
    FAIL() << "expected search_failure";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::search_failure);
  }
}

TEST(Fit, UnpenalizedLimitIsDenseInverse) {
  const auto series = white_noise(512, 2, 2, 8);
  auto config = lasso_fixed(0.0, 4);
  config.admm.tau_abs = config.admm.tau_rel = 1e-8;
  config.admm.max_iterations = 2000;
  const auto stats = spectral_statistics(series, 4);
  const auto result = fit(series, config);
  EXPECT_EQ(result.edges.size(), 1u);
  for (int k = 0; k < stats.frequencies(); ++k) {
    const CMatrix inv = stats.psd[k].inverse();
    EXPECT_LE((result.estimate.phi[k] - inv).norm() / inv.norm(), 1e-4);
  }
}

TEST(Fit, LargeLambdaEmptiesGraph) {
  const auto series = white_noise(512, 3, 2, 9);
  const auto stats = spectral_statistics(series, 4);
  const auto range = lambda_grid(stats, 2, 3, FitConfig{});
  for (auto family : {PenaltyFamily::lasso, PenaltyFamily::logsum, PenaltyFamily::scad}) {
    auto config = lasso_fixed(range.smallest_empty, 4);
    config.penalty.family = family;
    EXPECT_TRUE(fit(series, config).edges.empty()) << to_string(family);
  }
}

TEST(Fit, DeterministicEdgeSets) {
  const auto series = white_noise(256, 3, 2, 10);
  FitConfig config;
  config.penalty.family = PenaltyFamily::logsum;
  config.selection = LambdaSelection::bic_grid;
  config.half_window = 3;
  config.grid_size = 4;
  const auto a = fit(series, config);
  const auto b = fit(series, config);
  EXPECT_EQ(a.lambda, b.lambda);
  ASSERT_EQ(a.edges.size(), b.edges.size());
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    EXPECT_EQ(a.edges.edges()[i].a, b.edges.edges()[i].a);
    EXPECT_EQ(a.edges.edges()[i].b, b.edges.edges()[i].b);
    EXPECT_EQ(a.edges.edges()[i].weight, b.edges.edges()[i].weight);
  }
  ASSERT_EQ(a.bic_trace.size(), 4u);
  for (std::size_t i = 1; i < a.bic_trace.size(); ++i) EXPECT_LT(a.bic_trace[i].lambda, a.bic_trace[i - 1].lambda);
}

TEST(Fit, LlaPassesDoNotIncreaseTrueObjective) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    ModelOptions options;
    options.p = 6;
    options.m = 2;
    options.clusters = 3;
    const auto truth = make_ground_truth(options, rng);
    const auto series = simulate_var(truth.model, 512, rng);
    const auto stats = spectral_statistics(series, 10);
    const auto range = lambda_grid(stats, 2, 6, FitConfig{});
    for (auto family : {PenaltyFamily::logsum, PenaltyFamily::scad}) {
      FitConfig config;
      config.penalty.family = family;
      config.lla_iterations = 4;
      config.half_window = 10;
      const auto fitted = fit_lambda(stats, 2, 6, config, range.upper / 3.0);
      for (std::size_t i = 1; i < fitted.pass_objectives.size(); ++i)
        EXPECT_LE(fitted.pass_objectives[i], fitted.pass_objectives[i - 1] + 1e-6) << "seed " << seed;
    }
  }
}

TEST(Fit, LassoObjectiveBeatsTruth) {
  // At the fitted lambda the lasso objective at the estimate is no larger than at
  // the true inverse PSD sampled on the same anchors.
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    Rng rng(seed + 40);
    ModelOptions options;
    options.p = 4;
    options.m = 2;
    options.clusters = 2;
    const auto truth = make_ground_truth(options, rng);
    const auto series = simulate_var(truth.model, 1024, rng);
    const auto stats = spectral_statistics(series, 20);
    auto config = lasso_fixed(0.05, 20);
    config.admm.tau_abs = config.admm.tau_rel = 1e-7;
    config.admm.max_iterations = 5000;
    const auto fitted = fit_lambda(stats, 2, 4, config, 0.05);
    MatrixList true_phi;
    for (int k = 0; k < stats.frequencies(); ++k)
      true_phi.push_back(true_inverse_psd(truth.model, stats.grid.anchor(k)));
    const PenaltySpec spec = config.penalty.with_lambda(0.05);
    const double at_estimate = penalized_objective(fitted.estimate.sparse, stats.psd, spec, 2, 4);
    const double at_truth = penalized_objective(true_phi, stats.psd, spec, 2, 4);
    EXPECT_LE(at_estimate, at_truth + 1e-6);
  }
}

TEST(Fit, RecoversModelOneGraphByBic) {
  ModelOptions options;
  options.p = 8;
  options.m = 2;
  options.clusters = 4;
  FitConfig config;
  config.penalty.family = PenaltyFamily::logsum;
  config.selection = LambdaSelection::bic_grid;
  config.half_window = largest_half_window(1024, 4);
  int good = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(1000 + seed);
    const auto truth = make_ground_truth(options, rng);
    const auto series = simulate_var(truth.model, 1024, rng);
    const auto result = fit(series, config);
    const double f1 = f1_score(result.edges, truth.edges);
    if (f1 >= 0.85) ++good;
  }
  EXPECT_GE(good, 8);
}

TEST(Heatmap, Log10OfStackedMagnitude) {
  MatrixList phi{CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)};
  phi[0](0, 1) = phi[0](1, 0) = Complex(0.3, 0.4);
  phi[1](0, 1) = phi[1](1, 0) = Complex(0.0, 0.0);
  const Matrix h = log_magnitude_heatmap(phi);
  EXPECT_NEAR(h(0, 0), std::log10(std::sqrt(2.0)), 1e-15);
  EXPECT_NEAR(h(0, 1), std::log10(0.5), 1e-15);
}

}  // namespace
}  // namespace scig
