// Simulate a small clustered VAR process, fit it with the log-sum penalty and
// compare the recovered graph against the truth.
#include <iostream>

#include "scig/estimator.hpp"
#include "scig/eval.hpp"
#include "scig/synth.hpp"

int main() {
  scig::ModelOptions model;
  model.p = 8;
  model.m = 2;
  model.clusters = 4;

  scig::Rng rng(1);
  const auto truth = scig::make_ground_truth(model, rng);
  const auto series = scig::simulate_var(truth.model, 2048, rng);

  scig::FitConfig config;
  config.penalty.family = scig::PenaltyFamily::logsum;
  config.selection = scig::LambdaSelection::bic_grid;
  config.half_window = scig::largest_half_window(series.samples(), 4);
  const auto result = scig::fit(series, config);

  std::cout << "lambda " << result.lambda << '\n';
  for (const auto& e : result.edges.edges()) std::cout << "edge " << e.a << " - " << e.b << "  weight " << e.weight << '\n';
  std::cout << "F1 vs truth " << scig::f1_score(result.edges, truth.edges) << '\n';
}
