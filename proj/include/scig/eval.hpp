#pragma once

// Edge-recovery scoring and the Monte-Carlo benchmark harness.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scig/estimator.hpp"
#include "scig/graph.hpp"
#include "scig/synth.hpp"

namespace scig {

inline std::size_t common_edges(const EdgeSet& a, const EdgeSet& b) {
  std::size_t overlap = 0;
  for (const auto& e : a.edges())
    if (b.contains(e.a, e.b)) ++overlap;
  return overlap;
}

/// 2PR/(P+R). Both sets empty scores 1; exactly one empty scores 0.
inline double f1_score(const EdgeSet& estimate, const EdgeSet& truth) {
  require(estimate.nodes() == truth.nodes(), ErrorKind::invalid_input, "edge sets have different node counts");
  if (estimate.empty() && truth.empty()) return 1.0;
  if (estimate.empty() || truth.empty()) return 0.0;
  const double overlap = static_cast<double>(common_edges(estimate, truth));
  if (overlap == 0.0) return 0.0;
  const double precision = overlap / static_cast<double>(estimate.size());
  const double recall = overlap / static_cast<double>(truth.size());
  return 2.0 * precision * recall / (precision + recall);
}

/// Size of the symmetric difference of the two unordered edge sets.
inline double hamming(const EdgeSet& estimate, const EdgeSet& truth) {
  require(estimate.nodes() == truth.nodes(), ErrorKind::invalid_input, "edge sets have different node counts");
  const std::size_t overlap = common_edges(estimate, truth);
  return static_cast<double>(estimate.size() + truth.size() - 2 * overlap);
}

enum class LambdaPolicy { fixed, bic, oracle };
enum class OracleScope { per_scenario, per_run };

inline LambdaPolicy parse_lambda_policy(const std::string& name) {
  if (name == "fixed") return LambdaPolicy::fixed;
  if (name == "bic") return LambdaPolicy::bic;
  if (name == "oracle") return LambdaPolicy::oracle;
  fail(ErrorKind::invalid_config, "unknown lambda policy '" + name + "'");
}

inline const char* to_string(LambdaPolicy policy) {
  switch (policy) {
    case LambdaPolicy::fixed: return "fixed";
    case LambdaPolicy::bic: return "bic";
    case LambdaPolicy::oracle: return "oracle";
  }
  return "unknown";
}

struct Scenario {
  ModelOptions model;
  int n = 1024;
  int half_window = 1;
  std::vector<PenaltyFamily> families{PenaltyFamily::lasso, PenaltyFamily::logsum};
  LambdaPolicy policy = LambdaPolicy::oracle;
  OracleScope scope = OracleScope::per_scenario;
  FitConfig fit;             // penalty family is overridden per cell; lambda used by the fixed policy
  int oracle_grid_size = 10;
  int burn_in = 100;
};

struct RunReport {
  std::uint64_t seed = 0;
  PenaltyFamily family = PenaltyFamily::lasso;
  double f1 = 0.0;
  double hamming = 0.0;
  double seconds = 0.0;
  double lambda = 0.0;
  bool converged = false;
  bool failed = false;
  std::string error;
  std::size_t true_edges = 0;
  std::size_t estimated_edges = 0;
};

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;
};

/// Mean and sample standard deviation (0 for a single value).
inline MeanStd summarize(const std::vector<double>& values) {
  MeanStd s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

struct CellSummary {
  PenaltyFamily family = PenaltyFamily::lasso;
  int n = 0;
  int runs = 0;
  int failures = 0;
  double lambda = std::numeric_limits<double>::quiet_NaN();  // common oracle lambda (per-scenario scope)
  MeanStd f1;
  MeanStd hamming;
  MeanStd seconds;
};

struct BenchmarkTable {
  LambdaPolicy policy = LambdaPolicy::oracle;
  std::vector<CellSummary> cells;
  std::vector<RunReport> runs;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct RunInput {
  std::uint64_t seed = 0;
  std::optional<GroundTruth> truth;
  std::optional<SpectralStatistics> stats;
  std::optional<LambdaRange> range;
  std::string error;
};

struct SweepPoint {
  double lambda = 0.0;
  double f1 = 0.0;
  double hamming = 0.0;
  double seconds = 0.0;
  bool converged = false;
  std::size_t edges = 0;
};

/// Runs `task(i)` for i in [0, count) on up to `jobs` threads; results land by index.
template <typename Task>
void parallel_for(std::size_t count, int jobs, Task&& task) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::vector<std::future<void>> workers;
  const std::size_t stride = static_cast<std::size_t>(jobs);
  for (std::size_t w = 0; w < stride && w < count; ++w) {
    workers.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < count; i += stride) task(i);
    }));
  }
  for (auto& f : workers) f.get();
}

inline RunReport report_from(const RunInput& in, PenaltyFamily family, const SweepPoint& point) {
  RunReport r;
  r.seed = in.seed;
  r.family = family;
  r.f1 = point.f1;
  r.hamming = point.hamming;
  r.seconds = point.seconds;
  r.lambda = point.lambda;
  r.converged = point.converged;
  r.true_edges = in.truth->edges.size();
  r.estimated_edges = point.edges;
  return r;
}

inline RunReport failed_report(std::uint64_t seed, PenaltyFamily family, const std::string& error) {
  RunReport r;
  r.seed = seed;
  r.family = family;
  r.failed = true;
  r.error = error;
  return r;
}

}  // namespace detail

/// Fresh synthetic model + series per seed, fitted per penalty family under the
/// scenario's lambda policy. Run failures are recorded; half or more failing in a
/// cell aborts the scenario.
inline BenchmarkTable monte_carlo(const Scenario& scenario, std::span<const std::uint64_t> seeds, int jobs = 1) {
  require(!seeds.empty(), ErrorKind::invalid_config, "benchmark needs at least one run");
  require(!scenario.families.empty(), ErrorKind::invalid_config, "benchmark needs at least one penalty family");
  scenario.model.validate();
  scenario.fit.validate();
  require(scenario.oracle_grid_size >= 1, ErrorKind::invalid_config, "oracle grid must not be empty");

  const std::size_t runs = seeds.size();
  const int m = scenario.model.m;
  const int p = scenario.model.p;
  FitConfig base = scenario.fit;
  base.half_window = scenario.half_window;

  std::vector<detail::RunInput> inputs(runs);
  detail::parallel_for(runs, jobs, [&](std::size_t i) {
    auto& in = inputs[i];
    in.seed = seeds[i];
    try {
      Rng rng(in.seed);
      in.truth = make_ground_truth(scenario.model, rng);
      const auto series = simulate_var(in.truth->model, scenario.n, rng, scenario.burn_in);
      in.stats = spectral_statistics(series, scenario.half_window);
      if (scenario.policy == LambdaPolicy::oracle) in.range = lambda_grid(*in.stats, m, p, base);
    } catch (const Error& e) {
      in.error = e.what();
    }
  });

  BenchmarkTable table;
  table.policy = scenario.policy;

  // Common oracle grid spanning every run's [lambda_l, lambda_u].
  std::vector<double> common_grid;
  if (scenario.policy == LambdaPolicy::oracle) {
    double low = std::numeric_limits<double>::infinity();
    double high = 0.0;
    for (const auto& in : inputs) {
      if (!in.range) continue;
      low = std::min(low, in.range->lower);
      high = std::max(high, in.range->upper);
    }
    if (high > 0.0) common_grid = log_spaced_descending(low, high, scenario.oracle_grid_size);
  }

  for (PenaltyFamily family : scenario.families) {
    FitConfig config = base;
    config.penalty.family = family;
    std::vector<RunReport> reports(runs);

    if (scenario.policy == LambdaPolicy::oracle) {
      // sweeps[i][g]: run i at grid point g.
      std::vector<std::vector<detail::SweepPoint>> sweeps(runs);
      std::vector<std::string> errors(runs);
      detail::parallel_for(runs, jobs, [&](std::size_t i) {
        const auto& in = inputs[i];
        if (!in.error.empty()) {
          errors[i] = in.error;
          return;
        }
        const std::vector<double>& grid =
            scenario.scope == OracleScope::per_scenario
                ? common_grid
                : log_spaced_descending(in.range->lower, in.range->upper, scenario.oracle_grid_size);
        try {
          std::optional<LlaFit> previous;
          for (double lambda : grid) {
            const auto start = detail::Clock::now();
            LlaFit fitted = fit_lambda(*in.stats, m, p, config, lambda,
                                       config.warm_start && previous ? &*previous : nullptr);
            const EdgeSet est = extract_edges(fitted.estimate, config.gamma);
            const double elapsed = detail::seconds_since(start);
            sweeps[i].push_back({lambda, f1_score(est, in.truth->edges), hamming(est, in.truth->edges), elapsed,
                                 fitted.converged, est.size()});
            previous = std::move(fitted);
          }
        } catch (const Error& e) {
          errors[i] = e.what();
          sweeps[i].clear();
        }
      });

      std::optional<std::size_t> chosen;
      if (scenario.scope == OracleScope::per_scenario && !common_grid.empty()) {
        double best = -1.0;
        for (std::size_t g = 0; g < common_grid.size(); ++g) {
          double sum = 0.0;
          std::size_t used = 0;
          for (std::size_t i = 0; i < runs; ++i) {
            if (sweeps[i].empty()) continue;
            sum += sweeps[i][g].f1;
            ++used;
          }
          if (used == 0) continue;
          const double mean = sum / static_cast<double>(used);
          if (mean > best) {
            best = mean;
            chosen = g;
          }
        }
      }
      for (std::size_t i = 0; i < runs; ++i) {
        if (sweeps[i].empty()) {
          reports[i] = detail::failed_report(inputs[i].seed, family, errors[i].empty() ? "no sweep" : errors[i]);
          continue;
        }
        std::size_t pick = 0;
        if (scenario.scope == OracleScope::per_scenario) {
          pick = chosen.value_or(0);
        } else {
          for (std::size_t g = 1; g < sweeps[i].size(); ++g)
            if (sweeps[i][g].f1 > sweeps[i][pick].f1) pick = g;
        }
        reports[i] = detail::report_from(inputs[i], family, sweeps[i][pick]);
      }
      CellSummary cell;
      if (chosen) cell.lambda = common_grid[*chosen];
      table.cells.push_back(cell);
    } else {
      if (scenario.policy == LambdaPolicy::bic) config.selection = LambdaSelection::bic_grid;
      else config.selection = LambdaSelection::fixed;
      detail::parallel_for(runs, jobs, [&](std::size_t i) {
        const auto& in = inputs[i];
        if (!in.error.empty()) {
          reports[i] = detail::failed_report(in.seed, family, in.error);
          return;
        }
        try {
          const auto start = detail::Clock::now();
          FitResult fitted = fit(*in.stats, m, p, config);
          const double elapsed = detail::seconds_since(start);
          reports[i] = detail::report_from(in, family,
                                           {fitted.lambda, f1_score(fitted.edges, in.truth->edges),
                                            hamming(fitted.edges, in.truth->edges), elapsed, fitted.converged,
                                            fitted.edges.size()});
        } catch (const Error& e) {
          reports[i] = detail::failed_report(in.seed, family, e.what());
        }
      });
      table.cells.push_back(CellSummary{});
    }

    CellSummary& cell = table.cells.back();
    cell.family = family;
    cell.n = scenario.n;
    cell.runs = static_cast<int>(runs);
    std::vector<double> f1s, hams, secs;
    for (const auto& r : reports) {
      if (r.failed) {
        ++cell.failures;
        continue;
      }
      f1s.push_back(r.f1);
      hams.push_back(r.hamming);
      secs.push_back(r.seconds);
    }
    if (2 * static_cast<std::size_t>(cell.failures) >= runs) {
      std::string first_error;
      for (const auto& r : reports)
        if (r.failed) {
          first_error = r.error;
          break;
        }
      fail(ErrorKind::numerical_failure, std::string("scenario failed for ") + to_string(family) + ": " +
                                             std::to_string(cell.failures) + " of " + std::to_string(runs) +
                                             " runs failed (first: " + first_error + ")");
    }
    cell.f1 = summarize(f1s);
    cell.hamming = summarize(hams);
    cell.seconds = summarize(secs);
    table.runs.insert(table.runs.end(), reports.begin(), reports.end());
  }
  return table;
}

}  // namespace scig
