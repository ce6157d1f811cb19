#pragma once

// Command-line front end: simulate | fit | benchmark | heatmap.
//
// Exit codes: 0 ok, 1 usage or configuration, 2 data, 3 numerical. Errors go to
// stderr as one JSON object per line.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "scig/eval.hpp"
#include "scig/estimator.hpp"
#include "scig/synth.hpp"
#include "scig/tsio.hpp"

namespace scig::cli {

using nlohmann::ordered_json;

/// Everything any command can be told, with library defaults.
struct Options {
  // data / model
  int p = 16;
  int m = 2;
  int n = 1024;
  int model = 1;
  int clusters = 8;
  int order = 3;
  double er_probability = 0.002;
  std::uint64_t seed = 1;
  // spectral
  int mt = 0;           // 0: derive from `anchors`
  int anchors = 4;      // target number of anchor frequencies M
  // fit
  std::string penalty = "logsum";
  double alpha = 0.05;
  double lambda = 0.1;
  std::string lambda_policy = "bic";
  double epsilon = 1e-4;
  double scad_a = 3.7;
  double rho_bar = 2.0;
  double mu_bar = 10.0;
  int t_max = 200;
  double tau_abs = 1e-4;
  double tau_rel = 1e-4;
  int lla_iters = 2;
  std::string group_prox = "stacked";
  double gamma = 0.0;
  int grid_size = 10;
  bool warm_start = true;
  // io
  std::string input;
  std::string truth;
  std::string layout = "node-major";
  std::string missing = "reject";
  bool preprocess = false;
  std::string out;
  std::string table;
  std::string heatmap;
  // benchmark
  int runs = 10;
  int jobs = 1;
  std::vector<std::string> families{"lasso", "logsum"};
  std::string oracle_scope = "per-scenario";
};

namespace detail {

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_config: return 1;
    case ErrorKind::invalid_input:
    case ErrorKind::missing_value:
    case ErrorKind::window_too_large: return 2;
    case ErrorKind::numerical_failure:
    case ErrorKind::search_failure: return 3;
  }
  return 3;
}

inline void report_error(std::ostream& err, const std::string& kind, const std::string& message) {
  ordered_json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  err << j.dump() << '\n';
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  T value{};
  std::istringstream in(text);
  in >> std::boolalpha >> value;
  require(!in.fail() && (in >> std::ws).eof(), ErrorKind::invalid_config,
          "config key '" + key + "': cannot parse '" + text + "'");
  return value;
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = scig::detail::trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

/// Setters for every config-file key (dotted names group related settings).
inline std::map<std::string, std::function<void(Options&, const std::string&)>> config_keys() {
  std::map<std::string, std::function<void(Options&, const std::string&)>> keys;
  auto add_int = [&](const std::string& key, int Options::*field) {
    keys[key] = [key, field](Options& o, const std::string& v) { o.*field = parse_value<int>(key, v); };
  };
  auto add_double = [&](const std::string& key, double Options::*field) {
    keys[key] = [key, field](Options& o, const std::string& v) { o.*field = parse_value<double>(key, v); };
  };
  auto add_string = [&](const std::string& key, std::string Options::*field) {
    keys[key] = [field](Options& o, const std::string& v) { o.*field = v; };
  };
  add_int("data.p", &Options::p);
  add_int("data.m", &Options::m);
  add_int("data.n", &Options::n);
  add_string("data.input", &Options::input);
  add_string("data.layout", &Options::layout);
  add_string("data.missing", &Options::missing);
  keys["data.preprocess"] = [](Options& o, const std::string& v) { o.preprocess = parse_value<bool>("data.preprocess", v); };
  add_int("model.model", &Options::model);
  add_int("model.clusters", &Options::clusters);
  add_int("model.order", &Options::order);
  add_double("model.er_probability", &Options::er_probability);
  keys["seed"] = [](Options& o, const std::string& v) { o.seed = parse_value<std::uint64_t>("seed", v); };
  add_int("spectral.mt", &Options::mt);
  add_int("spectral.anchors", &Options::anchors);
  add_string("penalty.family", &Options::penalty);
  add_double("penalty.alpha", &Options::alpha);
  add_double("penalty.lambda", &Options::lambda);
  add_double("penalty.epsilon", &Options::epsilon);
  add_double("penalty.scad_a", &Options::scad_a);
  add_double("admm.rho_bar", &Options::rho_bar);
  add_double("admm.mu_bar", &Options::mu_bar);
  add_int("admm.t_max", &Options::t_max);
  add_double("admm.tau_abs", &Options::tau_abs);
  add_double("admm.tau_rel", &Options::tau_rel);
  add_string("admm.group_prox", &Options::group_prox);
  add_string("fit.lambda_policy", &Options::lambda_policy);
  add_int("fit.lla_iterations", &Options::lla_iters);
  add_double("fit.gamma", &Options::gamma);
  add_int("fit.grid_size", &Options::grid_size);
  keys["fit.warm_start"] = [](Options& o, const std::string& v) { o.warm_start = parse_value<bool>("fit.warm_start", v); };
  add_int("benchmark.runs", &Options::runs);
  add_int("benchmark.jobs", &Options::jobs);
  keys["benchmark.families"] = [](Options& o, const std::string& v) { o.families = split_list(v); };
  add_string("benchmark.oracle_scope", &Options::oracle_scope);
  return keys;
}

/// Flat `key = value` lines; '#' starts a comment. Unknown keys are errors.
inline void apply_config(Options& options, std::istream& in, const std::string& origin) {
  const auto keys = config_keys();
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = scig::detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorKind::invalid_config,
            origin + ":" + std::to_string(number) + ": expected 'key = value'");
    const std::string key = scig::detail::trim(line.substr(0, eq));
    const std::string value = scig::detail::trim(line.substr(eq + 1));
    const auto it = keys.find(key);
    require(it != keys.end(), ErrorKind::invalid_config,
            origin + ":" + std::to_string(number) + ": unknown key '" + key + "'");
    it->second(options, value);
  }
}

inline void apply_config_file(Options& options, const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::invalid_config, "cannot open config file '" + path + "'");
  apply_config(options, in, path);
}

inline int half_window(const Options& o, int n) {
  if (o.mt > 0) return o.mt;
  return largest_half_window(n, o.anchors);
}

inline ModelOptions model_options(const Options& o) {
  ModelOptions mo;
  mo.model = o.model;
  mo.p = o.p;
  mo.m = o.m;
  mo.order = o.order;
  mo.clusters = o.clusters;
  mo.er_probability = o.er_probability;
  mo.validate();
  return mo;
}

inline FitConfig fit_config(const Options& o, int n) {
  FitConfig c;
  c.penalty.family = parse_penalty_family(o.penalty);
  c.penalty.alpha = o.alpha;
  c.penalty.lambda = o.lambda;
  c.penalty.epsilon = o.epsilon;
  c.penalty.scad_a = o.scad_a;
  c.admm.rho_bar = o.rho_bar;
  c.admm.mu_bar = o.mu_bar;
  c.admm.max_iterations = o.t_max;
  c.admm.tau_abs = o.tau_abs;
  c.admm.tau_rel = o.tau_rel;
  c.admm.group_prox = parse_group_prox_mode(o.group_prox);
  c.half_window = half_window(o, n);
  c.lla_iterations = o.lla_iters;
  c.grid_size = o.grid_size;
  c.warm_start = o.warm_start;
  c.gamma = o.gamma;
  c.validate();
  return c;
}

inline ordered_json edges_json(const EdgeSet& edges) {
  ordered_json list = ordered_json::array();
  const EdgeSet scaled = edges.normalized();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges.edges()[i];
    list.push_back({{"a", e.a + 1}, {"b", e.b + 1}, {"weight", e.weight}, {"normalized", scaled.edges()[i].weight}});
  }
  return list;
}

inline EdgeSet edges_from_json(const ordered_json& j, int p) {
  EdgeSet edges(p);
  require(j.contains("edges") && j["edges"].is_array(), ErrorKind::invalid_input, "truth file has no 'edges' array");
  for (const auto& e : j["edges"]) {
    require(e.contains("a") && e.contains("b"), ErrorKind::invalid_input, "edge entries need 'a' and 'b'");
    edges.add(e["a"].get<int>() - 1, e["b"].get<int>() - 1, e.value("weight", 1.0));
  }
  return edges;
}

/// Opens `path` for writing, or hands back `fallback` when the path is empty or "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty() || path == "-") return;
    file_.open(path);
    require(file_.good(), ErrorKind::invalid_input, "cannot write '" + path + "'");
    stream_ = &file_;
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

inline void write_matrix(std::ostream& out, const Matrix& a) {
  out << std::setprecision(10);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (j > 0) out << ',';
      out << a(i, j);
    }
    out << '\n';
  }
}

inline MultiAttributeSeries read_input(const Options& o) {
  require(!o.input.empty(), ErrorKind::invalid_config, "--input is required");
  // Bad names are configuration errors, reported before touching the file.
  parse_penalty_family(o.penalty);
  parse_group_prox_mode(o.group_prox);
  parse_lambda_policy(o.lambda_policy);
  const MissingPolicy policy = o.missing == "forward-fill" || o.missing == "forward_fill"
                                   ? MissingPolicy::forward_fill
                                   : MissingPolicy::reject;
  require(policy == MissingPolicy::forward_fill || o.missing == "reject", ErrorKind::invalid_config,
          "unknown missing-value policy '" + o.missing + "'");
  auto series = load_series(o.input, parse_layout(o.layout), o.p, o.m, policy);
  if (o.preprocess) series = preprocess(series);
  return series;
}

// ---- commands ---------------------------------------------------------------

inline void cmd_simulate(const Options& o, std::ostream& out) {
  const ModelOptions mo = model_options(o);
  Rng rng(o.seed);
  const GroundTruth truth = make_ground_truth(mo, rng);
  const auto series = simulate_var(truth.model, o.n, rng);

  ordered_json j;
  j["model"] = o.model;
  j["p"] = o.p;
  j["m"] = o.m;
  j["n"] = o.n;
  j["order"] = o.order;
  j["clusters"] = o.clusters;
  j["seed"] = o.seed;
  j["companion_radius"] = companion_spectral_radius(truth.model.coefficients);
  j["edges"] = edges_json(truth.edges);

  if (o.out.empty() || o.out == "-") {
    write_series(out, series);
  } else {
    Sink sink(o.out, out);
    write_series(*sink, series);
  }
  const std::string truth_path = !o.truth.empty() ? o.truth : (o.out.empty() || o.out == "-" ? "" : o.out + ".truth.json");
  if (!truth_path.empty()) {
    Sink sink(truth_path, out);
    *sink << j.dump(2) << '\n';
  }
}

struct Estimate {
  FitResult result;
  std::string policy;
  std::optional<double> oracle_f1;
};

inline Estimate estimate(const Options& o, const MultiAttributeSeries& series) {
  FitConfig config = fit_config(o, series.samples());
  const auto stats = spectral_statistics(series, config.half_window);
  const int m = series.attributes();
  const int p = series.nodes();
  Estimate est;
  est.policy = o.lambda_policy;
  const LambdaPolicy policy = parse_lambda_policy(o.lambda_policy);
  if (policy == LambdaPolicy::fixed) {
    config.selection = LambdaSelection::fixed;
    est.result = fit(stats, m, p, config);
    return est;
  }
  if (policy == LambdaPolicy::bic) {
    config.selection = LambdaSelection::bic_grid;
    est.result = fit(stats, m, p, config);
    return est;
  }
  // Oracle: sweep the grid and keep the fit that best matches the supplied truth.
  require(!o.truth.empty(), ErrorKind::invalid_config, "--lambda-policy oracle needs --truth");
  std::ifstream in(o.truth);
  require(in.good(), ErrorKind::invalid_input, "cannot open '" + o.truth + "'");
  ordered_json tj;
  try {
    tj = ordered_json::parse(in);
  } catch (const std::exception& e) {
    fail(ErrorKind::invalid_input, "truth file: " + std::string(e.what()));
  }
  const EdgeSet truth = edges_from_json(tj, p);
  const LambdaRange range = lambda_grid(stats, m, p, config);
  std::optional<LlaFit> previous;
  double best = -1.0;
  for (double lambda : range.grid) {
    LlaFit fitted = fit_lambda(stats, m, p, config, lambda, config.warm_start && previous ? &*previous : nullptr);
    const EdgeSet edges = extract_edges(fitted.estimate, config.gamma);
    const double f1 = f1_score(edges, truth);
    est.result.bic_trace.push_back({lambda, bic(fitted.estimate, stats), edges.size()});
    if (f1 > best) {
      best = f1;
      est.result.estimate = fitted.estimate;
      est.result.edges = edges;
      est.result.lambda = lambda;
      est.result.converged = fitted.converged;
      est.result.pass_objectives = fitted.pass_objectives;
    }
    previous = std::move(fitted);
  }
  est.result.frequencies = stats.frequencies();
  est.oracle_f1 = best;
  return est;
}

inline void cmd_fit(const Options& o, std::ostream& out) {
  const auto series = read_input(o);
  const FitConfig config = fit_config(o, series.samples());
  const Estimate est = estimate(o, series);
  const FitResult& r = est.result;

  ordered_json j;
  j["p"] = series.nodes();
  j["m"] = series.attributes();
  j["n"] = series.samples();
  j["half_window"] = config.half_window;
  j["frequencies"] = r.frequencies;
  j["penalty"] = {{"family", to_string(config.penalty.family)},
                  {"alpha", config.penalty.alpha},
                  {"epsilon", config.penalty.epsilon},
                  {"scad_a", config.penalty.scad_a}};
  j["lambda_policy"] = est.policy;
  j["lambda"] = r.lambda;
  j["converged"] = r.converged;
  if (est.oracle_f1) j["oracle_f1"] = *est.oracle_f1;
  j["edges"] = edges_json(r.edges);
  ordered_json trace = ordered_json::array();
  for (const auto& b : r.bic_trace) trace.push_back({{"lambda", b.lambda}, {"bic", b.bic}, {"edges", b.edges}});
  j["bic_trace"] = trace;
  j["pass_objectives"] = r.pass_objectives;

  Sink sink(o.out, out);
  *sink << j.dump(2) << '\n';
  if (!o.heatmap.empty()) {
    Sink hm(o.heatmap, out);
    write_matrix(*hm, log_magnitude_heatmap(r.estimate.phi));
  }
}

inline void cmd_heatmap(const Options& o, std::ostream& out) {
  Sink sink(o.out, out);
  if (o.input.empty()) {
    // No data: the model's own inverse PSD from the seed.
    Rng rng(o.seed);
    const VarModel model = make_model(model_options(o), rng);
    write_matrix(*sink, true_log_heatmap(model));
    return;
  }
  const auto series = read_input(o);
  write_matrix(*sink, log_magnitude_heatmap(estimate(o, series).result.estimate.phi));
}

inline std::string format_mean_std(const MeanStd& s, int precision) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << s.mean << " +- " << s.stddev;
  return os.str();
}

inline void write_table(std::ostream& out, const BenchmarkTable& table) {
  out << std::left << std::setw(8) << "penalty" << std::right << std::setw(7) << "n" << std::setw(6) << "runs"
      << std::setw(6) << "fail" << std::setw(12) << "lambda" << std::setw(20) << "F1" << std::setw(20) << "Hamming"
      << std::setw(22) << "seconds" << '\n';
  for (const auto& c : table.cells) {
    std::ostringstream lam;
    if (std::isfinite(c.lambda))
      lam << std::setprecision(4) << c.lambda;
    else
      lam << "per-run";
    out << std::left << std::setw(8) << to_string(c.family) << std::right << std::setw(7) << c.n << std::setw(6)
        << c.runs << std::setw(6) << c.failures << std::setw(12) << lam.str() << std::setw(20)
        << format_mean_std(c.f1, 4) << std::setw(20) << format_mean_std(c.hamming, 2) << std::setw(22)
        << format_mean_std(c.seconds, 3) << '\n';
  }
}

inline ordered_json table_json(const BenchmarkTable& table, const Options& o) {
  auto stats = [](const MeanStd& s) { return ordered_json{{"mean", s.mean}, {"std", s.stddev}}; };
  ordered_json j;
  j["policy"] = to_string(table.policy);
  j["model"] = o.model;
  j["p"] = o.p;
  j["m"] = o.m;
  ordered_json cells = ordered_json::array();
  for (const auto& c : table.cells) {
    ordered_json cell{{"penalty", to_string(c.family)}, {"n", c.n}, {"runs", c.runs}, {"failures", c.failures}};
    cell["lambda"] = std::isfinite(c.lambda) ? ordered_json(c.lambda) : ordered_json(nullptr);
    cell["f1"] = stats(c.f1);
    cell["hamming"] = stats(c.hamming);
    cell["seconds"] = stats(c.seconds);
    cells.push_back(cell);
  }
  j["cells"] = cells;
  ordered_json runs = ordered_json::array();
  for (const auto& r : table.runs) {
    ordered_json run{{"seed", r.seed}, {"penalty", to_string(r.family)}};
    if (r.failed) {
      run["error"] = r.error;
    } else {
      run["f1"] = r.f1;
      run["hamming"] = r.hamming;
      run["lambda"] = r.lambda;
      run["true_edges"] = r.true_edges;
      run["estimated_edges"] = r.estimated_edges;
      run["converged"] = r.converged;
      run["seconds"] = r.seconds;
    }
    runs.push_back(run);
  }
  j["runs"] = runs;
  return j;
}

inline void cmd_benchmark(const Options& o, std::ostream& out) {
  require(o.runs >= 1, ErrorKind::invalid_config, "--runs must be >= 1");
  require(o.jobs >= 1, ErrorKind::invalid_config, "--jobs must be >= 1");
  Scenario scenario;
  scenario.model = model_options(o);
  scenario.n = o.n;
  scenario.fit = fit_config(o, o.n);
  scenario.half_window = scenario.fit.half_window;
  scenario.policy = parse_lambda_policy(o.lambda_policy);
  require(o.oracle_scope == "per-scenario" || o.oracle_scope == "per-run", ErrorKind::invalid_config,
          "unknown oracle scope '" + o.oracle_scope + "'");
  scenario.scope = o.oracle_scope == "per-run" ? OracleScope::per_run : OracleScope::per_scenario;
  scenario.oracle_grid_size = o.grid_size;
  scenario.families.clear();
  for (const auto& f : o.families) scenario.families.push_back(parse_penalty_family(f));

  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(o.runs));
  std::iota(seeds.begin(), seeds.end(), o.seed);
  const BenchmarkTable table = monte_carlo(scenario, seeds, o.jobs);

  // JSON to --out (stdout by default); the text table to --table, or to stdout
  // when the JSON went to a file.
  const bool json_to_stdout = o.out.empty() || o.out == "-";
  {
    Sink sink(o.out, out);
    *sink << table_json(table, o).dump(2) << '\n';
  }
  if (!o.table.empty() || !json_to_stdout) {
    Sink text(o.table, out);
    write_table(*text, table);
  }
}

/// Finds `--config PATH` / `--config=PATH` ahead of the real parse.
inline std::string config_path(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  if (const char* env = std::getenv("SPECTRAL_CIG_CONFIG"); env != nullptr && *env != '\0') return env;
  return {};
}

inline void add_shared(CLI::App& app, Options& o) {
  app.add_option("--p", o.p, "Number of nodes");
  app.add_option("--m", o.m, "Attributes per node");
  app.add_option("--n", o.n, "Samples");
  app.add_option("--mt", o.mt, "Smoothing half-window (overrides --anchors)");
  app.add_option("--anchors", o.anchors, "Number of anchor frequencies when --mt is not given");
  app.add_option("--model", o.model, "Synthetic model (1 or 2)");
  app.add_option("--clusters", o.clusters, "Cluster count for synthetic models");
  app.add_option("--order", o.order, "VAR order for synthetic models");
  app.add_option("--p-er", o.er_probability, "Cross-cluster connection probability (model 2)");
  app.add_option("--seed", o.seed, "Random seed (first seed for benchmark)");
  app.add_option("--penalty", o.penalty, "lasso | logsum | scad");
  app.add_option("--alpha", o.alpha, "Elementwise / group mix");
  app.add_option("--lambda", o.lambda, "Penalty level for the fixed policy");
  app.add_option("--lambda-policy", o.lambda_policy, "fixed | bic | oracle");
  app.add_option("--epsilon", o.epsilon, "Log-sum epsilon");
  app.add_option("--scad-a", o.scad_a, "SCAD a");
  app.add_option("--rho-bar", o.rho_bar, "Initial ADMM penalty parameter");
  app.add_option("--mu-bar", o.mu_bar, "Residual balancing factor");
  app.add_option("--t-max", o.t_max, "ADMM iteration cap");
  app.add_option("--tau-abs", o.tau_abs, "Absolute tolerance");
  app.add_option("--tau-rel", o.tau_rel, "Relative tolerance");
  app.add_option("--lla-iters", o.lla_iters, "LLA passes for non-convex penalties");
  app.add_option("--group-prox", o.group_prox, "stacked | per-frequency");
  app.add_option("--gamma", o.gamma, "Edge threshold on block norms");
  app.add_option("--grid-size", o.grid_size, "Lambda grid points");
  app.add_option("--jobs", o.jobs, "Worker threads (benchmark)");
  app.add_option("--out", o.out, "Output path ('-' for stdout)");
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Options o;
  try {
    if (const std::string path = detail::config_path(argc, argv); !path.empty()) detail::apply_config_file(o, path);
  } catch (const Error& e) {
    detail::report_error(err, to_string(e.kind()), e.what());
    return detail::exit_code(e.kind());
  }

  CLI::App app{"Sparse inverse-PSD graph estimation for multi-attribute time series", "scig"};
  app.require_subcommand(1);
  std::string config_file;
  app.add_option("--config", config_file, "key = value config file (also SPECTRAL_CIG_CONFIG)");

  auto* simulate = app.add_subcommand("simulate", "Simulate a synthetic series and its ground-truth graph");
  auto* fit_cmd = app.add_subcommand("fit", "Estimate the conditional independence graph of a series");
  auto* bench = app.add_subcommand("benchmark", "Monte-Carlo edge-recovery benchmark on synthetic models");
  auto* heat = app.add_subcommand("heatmap", "log10 magnitude matrix of an estimated or true inverse PSD");
  for (auto* sub : {simulate, fit_cmd, bench, heat}) {
    detail::add_shared(*sub, o);
    sub->add_option("--config", config_file, "key = value config file");
  }
  simulate->add_option("--truth", o.truth, "Ground-truth JSON path (default: <out>.truth.json)");
  for (auto* sub : {fit_cmd, heat}) {
    sub->add_option("--input", o.input, "Delimited input series");
    sub->add_option("--layout", o.layout, "node-major | attribute-major");
    sub->add_option("--missing", o.missing, "reject | forward-fill");
    sub->add_flag("--preprocess", o.preprocess, "Log-ratio, detrend and unit-power preprocessing");
    sub->add_option("--truth", o.truth, "Ground-truth JSON for the oracle policy");
  }
  fit_cmd->add_option("--heatmap", o.heatmap, "Also write the log10 magnitude matrix here");
  bench->add_option("--runs", o.runs, "Monte-Carlo runs");
  bench->add_option("--families", o.families, "Penalty families")->delimiter(',');
  bench->add_option("--oracle-scope", o.oracle_scope, "per-scenario | per-run");
  bench->add_option("--table", o.table, "Aligned text table path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    detail::report_error(err, "usage", e.what());
    return 1;
  }

  try {
    if (simulate->parsed()) detail::cmd_simulate(o, out);
    if (fit_cmd->parsed()) detail::cmd_fit(o, out);
    if (bench->parsed()) detail::cmd_benchmark(o, out);
    if (heat->parsed()) detail::cmd_heatmap(o, out);
  } catch (const Error& e) {
    detail::report_error(err, to_string(e.kind()), e.what());
    return detail::exit_code(e.kind());
  } catch (const nlohmann::json::exception& e) {
    detail::report_error(err, "invalid_input", e.what());
    return 2;
  } catch (const std::exception& e) {
    detail::report_error(err, "numerical_failure", e.what());
    return 3;
  }
  return 0;
}

}  // namespace scig::cli
