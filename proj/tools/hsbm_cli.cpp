// hsbm: command-line front end for the HSBM library.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 infeasible configuration,
// 3 solver non-convergence in `recover`, 4 recovery failed (rounding,
// counting or tie).

#include "hsbm/hsbm.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

struct Globals {
  std::uint64_t seed = 0;
  double C = 1.0;
  double eta = 2.0;
  std::optional<double> gamma;
  std::string out = "-";
  std::string format = "csv";
  unsigned workers = 1;
};

struct ConfigSource {
  std::string file;
  int example = 0;
  std::size_t n = 0;
  std::vector<std::string> params;
};

struct InfeasibleConfig : std::runtime_error {
  using std::runtime_error::runtime_error;
};

hsbm::PresetParams parse_params(const std::vector<std::string>& items) {
  hsbm::PresetParams out;
  for (const auto& s : items) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--param", "expected key=value, got '" + s + "'");
    try {
      std::size_t used = 0;
      const double v = std::stod(s.substr(eq + 1), &used);
      if (used != s.size() - eq - 1) throw std::invalid_argument(s);
      out[s.substr(0, eq)] = v;
    } catch (const std::logic_error&) {
      throw CLI::ValidationError("--param", "bad value in '" + s + "'");
    }
  }
  return out;
}

hsbm::ModelConfig with_gamma(const hsbm::ModelConfig& c, std::optional<double> gamma) {
  if (!gamma) return c;
  return hsbm::ModelConfig(c.n(), c.clusters(), c.q(), *gamma);
}

/// Builds the model from a file or an example preset. Configuration errors
/// become InfeasibleConfig so main can map them to exit code 2.
hsbm::ModelConfig load_config(const ConfigSource& src, const Globals& g,
                              std::vector<std::string>* warnings = nullptr) {
  try {
    if (!src.file.empty()) {
      std::ifstream in(src.file);
      if (!in) throw std::runtime_error("cannot open config file '" + src.file + "'");
      return with_gamma(hsbm::read_config(in), g.gamma);
    }
    if (src.example == 0) throw CLI::ValidationError("config", "give --config FILE or --example ID --n N");
    auto preset = hsbm::example_config(src.example, src.n, parse_params(src.params));
    if (warnings) *warnings = preset.warnings;
    for (const auto& w : preset.warnings) std::cerr << "warning: " << w << '\n';
    return with_gamma(preset.config, g.gamma);
  } catch (const hsbm::ConfigError& e) {
    throw InfeasibleConfig(e.what());
  }
}

void add_config_options(CLI::App* sub, ConfigSource& src) {
  auto* file = sub->add_option("--config", src.file, "Config file (text or JSON)");
  auto* ex = sub->add_option("--example", src.example, "Example preset id")->check(CLI::Range(1, 6));
  sub->add_option("--n", src.n, "Number of nodes for --example");
  sub->add_option("--param", src.params, "Preset constant override key=value (repeatable)");
  file->excludes(ex);
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void check_format(const Globals& g) {
  if (g.format != "csv" && g.format != "json")
    throw CLI::ValidationError("--format", "expected csv or json");
}

// ---- generate -------------------------------------------------------------

struct GenerateArgs {
  ConfigSource src;
  std::string labels_out;
};

int run_generate(const GenerateArgs& a, const Globals& g) {
  const auto config = load_config(a.src, g);
  const auto planted = hsbm::planted_partition(config);
  Output out(g.out);
  if (config.gamma() < 1.0)
    hsbm::write_observed(out.stream(), hsbm::sample_observed(config, planted, g.seed));
  else
    hsbm::write_adjacency(out.stream(), hsbm::sample_adjacency(config, planted, g.seed));
  if (!a.labels_out.empty()) {
    Output lab(a.labels_out);
    lab.stream() << "node,label\n";
    for (std::size_t v = 0; v < planted.n(); ++v) lab.stream() << v << ',' << planted[v] << '\n';
  }
  return 0;
}

// ---- classify -------------------------------------------------------------

struct ClassifyArgs {
  ConfigSource src;
  std::string id = "config";
};

int run_classify(const ClassifyArgs& a, const Globals& g) {
  const auto config = load_config(a.src, g);
  hsbm::ClassifyOptions opt;
  opt.C = g.C;
  opt.eta = g.eta;
  const auto rep = hsbm::classify(config, opt);
  Output out(g.out);
  if (g.format == "json") {
    auto j = hsbm::to_json(rep);
    j["config_id"] = a.id;
    j["config"] = hsbm::to_json(config);
    out.stream() << j.dump(2) << '\n';
  } else {
    out.stream() << hsbm::regime_csv_header(rep) << '\n' << hsbm::regime_csv_row(a.id, rep) << '\n';
  }
  std::cerr << "regime=" << hsbm::to_string(rep.regime) << '\n';
  return 0;
}

// ---- recover --------------------------------------------------------------

struct RecoverArgs {
  ConfigSource src;
  std::string graph;
  std::string algorithm = "convex";
  hsbm::SolverOptions solver;
  int restarts = 10;
};

int run_recover(const RecoverArgs& a, const Globals& g) {
  const auto config = load_config(a.src, g);
  std::ifstream gin(a.graph);
  if (!gin) throw std::runtime_error("cannot open graph file '" + a.graph + "'");
  const auto graph = hsbm::read_graph(gin);
  const hsbm::Adjacency adj = std::holds_alternative<hsbm::Adjacency>(graph)
                                  ? std::get<hsbm::Adjacency>(graph)
                                  : std::get<hsbm::ObservedMatrix>(graph).to_adjacency();
  if (adj.n() != config.n()) throw std::runtime_error("graph size does not match the configuration");

  const auto algo = hsbm::parse_algorithm(a.algorithm);
  hsbm::RecoveryOutcome outcome;
  json extra = json::object();
  switch (algo) {
    case hsbm::Algorithm::convex: {
      const auto rec = hsbm::recover_convex(adj.to_dense(), config, a.solver);
      outcome = rec.outcome;
      extra["iterations"] = rec.solver.iterations;
      extra["converged"] = rec.solver.converged;
      extra["residual"] = rec.solver.residuals.max();
      break;
    }
    case hsbm::Algorithm::exhaustive: {
      if (config.n() > hsbm::kMaxEnumerationN)
        throw std::runtime_error("exhaustive search needs n <= " + std::to_string(hsbm::kMaxEnumerationN));
      const auto ex = hsbm::solve_exhaustive(adj, config.sizes());
      extra["maximizers"] = ex.maximizers;
      extra["enumerated"] = ex.enumerated;
      outcome = ex.unique() ? hsbm::RecoveryOutcome::success(ex.argmax.front())
                            : hsbm::RecoveryOutcome::fail(hsbm::FailureKind::tie,
                                                          std::to_string(ex.maximizers) + " maximizers");
      break;
    }
    case hsbm::Algorithm::counting:
      outcome = hsbm::recover_counting(adj, config.collapsed());
      break;
    case hsbm::Algorithm::local_search:
      outcome = hsbm::RecoveryOutcome::success(
          hsbm::local_search(adj, config.sizes(), g.seed, a.restarts).partition);
      break;
  }

  Output out(g.out);
  if (g.format == "json") {
    json j{{"algorithm", hsbm::to_string(algo)}, {"failure", hsbm::to_string(outcome.failure)}};
    if (!outcome.message.empty()) j["message"] = outcome.message;
    if (outcome.ok()) {
      j["labels"] = outcome.partition->labels();
      j["objective"] = hsbm::objective(adj, *outcome.partition);
    }
    j["details"] = extra;
    out.stream() << j.dump(2) << '\n';
  } else if (outcome.ok()) {
    out.stream() << "node,label\n";
    for (std::size_t v = 0; v < outcome.partition->n(); ++v)
      out.stream() << v << ',' << (*outcome.partition)[v] << '\n';
  }
  if (outcome.ok()) return 0;
  std::cerr << "recovery failed (" << hsbm::to_string(outcome.failure) << "): " << outcome.message << '\n';
  return outcome.failure == hsbm::FailureKind::nonconvergence ? 3 : 4;
}

// ---- bench-spectral -------------------------------------------------------

struct BenchArgs {
  ConfigSource src;
  std::size_t trials = 50;
};

int run_bench(const BenchArgs& a, const Globals& g) {
  const auto config = load_config(a.src, g);
  const auto stats = hsbm::concentration_experiment(config, a.trials, g.seed, g.workers);
  Output out(g.out);
  if (g.format == "json") {
    json rows = json::array();
    for (const auto& t : stats.trials)
      rows.push_back({{"trial", t.trial}, {"seed", t.seed}, {"norm", t.norm}, {"bound", t.bound}, {"ratio", t.ratio}});
    out.stream() << json{{"trials", rows},
                         {"min_ratio", stats.min_ratio},
                         {"mean_ratio", stats.mean_ratio},
                         {"max_ratio", stats.max_ratio}}
                        .dump(2)
                 << '\n';
  } else {
    out.stream() << "trial,norm,bound,ratio\n";
    for (const auto& t : stats.trials)
      out.stream() << t.trial << ',' << hsbm::detail::csv_number(t.norm) << ','
                   << hsbm::detail::csv_number(t.bound) << ',' << hsbm::detail::csv_number(t.ratio) << '\n';
  }
  return 0;
}

// ---- montecarlo -----------------------------------------------------------

struct MonteCarloArgs {
  ConfigSource src;
  std::string spec_file;
  std::string id = "config";
  std::vector<std::string> algorithms;
  std::size_t trials = 0;
  std::string summary_out;
  bool timing = false;
  hsbm::SolverOptions solver;
  int restarts = 10;
};

/// Spec file (JSON):
///   {"config_id": "easy", "config": {...} | "config_file": "path" |
///    "example": {"id": 2, "n": 10000, "params": {"c_small": 4}},
///    "algorithms": ["convex"], "trials": 50, "seed": 1, "gamma": 0.6,
///    "solver": {"max_iter": 2000, "tol_feasibility": 1e-6, "tol_change": 1e-7,
///               "step": 1, "relaxation": 1, "rounding_threshold": 0.5,
///               "radius": 0, "diagonal": 1},
///    "local_search_restarts": 10}
/// Command-line flags given explicitly take precedence.
hsbm::ExperimentSpec load_spec(const MonteCarloArgs& a, const Globals& g, bool seed_given, bool gamma_given) {
  json j = json::object();
  if (!a.spec_file.empty()) {
    std::ifstream in(a.spec_file);
    if (!in) throw std::runtime_error("cannot open spec file '" + a.spec_file + "'");
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw std::runtime_error(std::string("spec file: ") + e.what());
    }
  }

  Globals eff = g;
  if (!gamma_given && j.contains("gamma")) eff.gamma = j.at("gamma").get<double>();

  std::optional<hsbm::ModelConfig> config;
  if (!a.src.file.empty() || a.src.example != 0) {
    config = load_config(a.src, eff);
  } else if (j.contains("config")) {
    try {
      config = with_gamma(hsbm::config_from_json(j.at("config")), eff.gamma);
    } catch (const hsbm::ConfigError& e) {
      throw InfeasibleConfig(e.what());
    }
  } else if (j.contains("config_file")) {
    ConfigSource s;
    s.file = j.at("config_file").get<std::string>();
    config = load_config(s, eff);
  } else if (j.contains("example")) {
    const auto& e = j.at("example");
    ConfigSource s;
    s.example = e.at("id").get<int>();
    s.n = e.at("n").get<std::size_t>();
    if (e.contains("params"))
      for (const auto& [k, v] : e.at("params").items())
        s.params.push_back(k + "=" + hsbm::detail::shortest(v.get<double>()));
    config = load_config(s, eff);
  } else {
    throw CLI::ValidationError("montecarlo", "no configuration given");
  }

  hsbm::ExperimentSpec spec(*config);
  spec.config_id = j.value("config_id", a.id);
  if (a.id != "config") spec.config_id = a.id;
  spec.algorithms.clear();
  std::vector<std::string> names = a.algorithms;
  if (names.empty() && j.contains("algorithms")) names = j.at("algorithms").get<std::vector<std::string>>();
  if (names.empty()) names = {"convex"};
  for (const auto& s : names) spec.algorithms.push_back(hsbm::parse_algorithm(s));
  spec.trials = a.trials > 0 ? a.trials : j.value("trials", std::size_t(1));
  spec.base_seed = seed_given ? g.seed : j.value("seed", g.seed);
  spec.workers = g.workers;
  spec.solver = a.solver;
  spec.local_search_restarts = j.value("local_search_restarts", a.restarts);
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    spec.solver.max_iter = s.value("max_iter", spec.solver.max_iter);
    spec.solver.tol_feasibility = s.value("tol_feasibility", spec.solver.tol_feasibility);
    spec.solver.tol_change = s.value("tol_change", spec.solver.tol_change);
    spec.solver.step = s.value("step", spec.solver.step);
    spec.solver.relaxation = s.value("relaxation", spec.solver.relaxation);
    spec.solver.rounding_threshold = s.value("rounding_threshold", spec.solver.rounding_threshold);
    spec.solver.radius = s.value("radius", spec.solver.radius);
    spec.solver.diagonal = s.value("diagonal", spec.solver.diagonal);
  }
  return spec;
}

int run_montecarlo(const MonteCarloArgs& a, const Globals& g, bool seed_given, bool gamma_given) {
  const auto spec = load_spec(a, g, seed_given, gamma_given);
  const auto res = hsbm::run_monte_carlo(spec);
  Output out(g.out);
  if (g.format == "json") {
    json rows = json::array();
    for (const auto& r : res.rows) {
      json row{{"config_id", r.config_id},       {"algorithm", hsbm::to_string(r.algorithm)},
               {"trial", r.trial},               {"seed", r.seed},
               {"success", r.success},           {"failure", hsbm::to_string(r.failure)},
               {"objective", r.objective}};
      if (a.timing) row["wall_seconds"] = r.wall_seconds;
      rows.push_back(row);
    }
    json summary = json::array();
    for (const auto& s : res.summary) {
      json f = json::object();
      for (const auto& [kind, count] : s.failures) f[hsbm::to_string(kind)] = count;
      summary.push_back({{"algorithm", hsbm::to_string(s.algorithm)},
                         {"trials", s.trials},
                         {"successes", s.successes},
                         {"rate", s.rate},
                         {"ci_low", s.ci_low},
                         {"ci_high", s.ci_high},
                         {"failures", f}});
    }
    out.stream() << json{{"config_id", spec.config_id},
                         {"config", hsbm::to_json(spec.config)},
                         {"base_seed", spec.base_seed},
                         {"rows", rows},
                         {"summary", summary}}
                        .dump(2)
                 << '\n';
  } else {
    hsbm::write_rows_csv(out.stream(), res.rows, a.timing);
  }
  if (!a.summary_out.empty()) {
    Output s(a.summary_out);
    hsbm::write_summary_csv(s.stream(), spec.config_id, res.summary);
  }
  for (const auto& s : res.summary)
    std::cerr << hsbm::to_string(s.algorithm) << ": " << s.successes << '/' << s.trials << " exact ["
              << s.ci_low << ", " << s.ci_high << "]\n";
  return 0;
}

// ---- table1 ---------------------------------------------------------------

struct Table1Args {
  std::vector<double> n_grid{1e4, 1e5, 1e6, 1e7};
  std::vector<int> examples{1, 2, 3, 4, 5, 6};
  std::map<int, std::vector<std::string>> params;
  std::vector<std::string> raw_params;
};

int run_table1_cmd(const Table1Args& a, const Globals& g) {
  std::vector<std::size_t> grid;
  for (double v : a.n_grid) {
    if (!(v >= 16.0) || v != std::floor(v)) throw CLI::ValidationError("--n-grid", "sizes must be integers >= 16");
    grid.push_back(std::size_t(v));
  }
  hsbm::Table1Options opt;
  opt.C = g.C;
  opt.eta = g.eta;
  opt.examples = a.examples;
  // --param ID:key=value replaces that example's table constants.
  for (const auto& s : a.raw_params) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--param", "expected ID:key=value");
    const int id = std::stoi(s.substr(0, colon));
    auto& p = opt.params.try_emplace(id, hsbm::table1_params().count(id) ? hsbm::table1_params().at(id)
                                                                           : hsbm::PresetParams{})
                  .first->second;
    for (const auto& [k, v] : parse_params({s.substr(colon + 1)})) p[k] = v;
  }
  const auto rows = hsbm::run_table1(grid, opt);
  Output out(g.out);
  if (g.format == "json") {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"example", r.example},
                     {"n", r.n},
                     {"theorem", r.theorem},
                     {"expected", r.expected},
                     {"holds", r.holds},
                     {"margin", hsbm::detail::number_json(r.margin)},
                     {"trend", hsbm::detail::number_json(r.trend)},
                     {"regime", r.regime},
                     {"note", r.note}});
    out.stream() << arr.dump(2) << '\n';
  } else {
    hsbm::write_table1_csv(out.stream(), rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heterogeneous stochastic block model toolkit"};
  app.require_subcommand(1);
  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Base seed");
  app.add_option("--constant-C", g.C, "Constant C of the convex recovery conditions")->check(CLI::PositiveNumber);
  app.add_option("--eta", g.eta, "Exponent eta of the hard-regime condition")->check(CLI::PositiveNumber);
  auto* gamma_opt = app.add_option("--gamma", g.gamma, "Observation probability (overrides the config)")
                        ->check(CLI::Range(0.0, 1.0));
  app.add_option("--out", g.out, "Output file ('-' for stdout)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::PositiveNumber);

  GenerateArgs gen;
  auto* cmd_gen = app.add_subcommand("generate", "Sample a graph from a configuration");
  add_config_options(cmd_gen, gen.src);
  cmd_gen->add_option("--labels-out", gen.labels_out, "Also write the planted labels as CSV");

  ClassifyArgs cls;
  auto* cmd_cls = app.add_subcommand("classify", "Evaluate the recovery and impossibility conditions");
  add_config_options(cmd_cls, cls.src);
  cmd_cls->add_option("--id", cls.id, "Config id written to the output");

  RecoverArgs rec;
  auto* cmd_rec = app.add_subcommand("recover", "Recover the partition from a graph file");
  add_config_options(cmd_rec, rec.src);
  cmd_rec->add_option("--graph", rec.graph, "Graph file")->required();
  cmd_rec->add_option("--algorithm", rec.algorithm, "convex | exhaustive | counting | local-search")
      ->check(CLI::IsMember({"convex", "exhaustive", "counting", "local-search"}));
  cmd_rec->add_option("--max-iter", rec.solver.max_iter, "Solver iteration cap");
  cmd_rec->add_option("--tol", rec.solver.tol_feasibility, "Solver feasibility tolerance");
  cmd_rec->add_option("--restarts", rec.restarts, "Local search restarts");

  BenchArgs bench;
  auto* cmd_bench = app.add_subcommand("bench-spectral", "Compare ||A - E[A]|| with the concentration bound");
  add_config_options(cmd_bench, bench.src);
  cmd_bench->add_option("--trials", bench.trials, "Number of samples")->check(CLI::PositiveNumber);

  MonteCarloArgs mc;
  auto* cmd_mc = app.add_subcommand("montecarlo", "Seeded recovery experiments");
  add_config_options(cmd_mc, mc.src);
  cmd_mc->add_option("--spec", mc.spec_file, "Experiment spec file (JSON)");
  cmd_mc->add_option("--id", mc.id, "Config id written to the output");
  cmd_mc->add_option("--algorithm", mc.algorithms, "Algorithms to run (repeatable)")
      ->check(CLI::IsMember({"convex", "exhaustive", "counting", "local-search"}));
  cmd_mc->add_option("--trials", mc.trials, "Number of trials")->check(CLI::PositiveNumber);
  cmd_mc->add_option("--summary-out", mc.summary_out, "Write the per-algorithm summary CSV here");
  cmd_mc->add_flag("--timing", mc.timing, "Include wall-clock seconds (not reproducible)");
  cmd_mc->add_option("--max-iter", mc.solver.max_iter, "Solver iteration cap");
  cmd_mc->add_option("--restarts", mc.restarts, "Local search restarts");

  Table1Args t1;
  auto* cmd_t1 = app.add_subcommand("table1", "Condition margins of the example families over n");
  cmd_t1->add_option("--n-grid", t1.n_grid, "Values of n")->delimiter(',');
  cmd_t1->add_option("--examples", t1.examples, "Example ids")->delimiter(',')->check(CLI::Range(1, 6));
  cmd_t1->add_option("--param", t1.raw_params, "Constant override ID:key=value (repeatable)");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
    check_format(g);
    if (*cmd_gen) return run_generate(gen, g);
    if (*cmd_cls) return run_classify(cls, g);
    if (*cmd_rec) return run_recover(rec, g);
    if (*cmd_bench) return run_bench(bench, g);
    if (*cmd_mc) return run_montecarlo(mc, g, seed_opt->count() > 0, gamma_opt->count() > 0);
    if (*cmd_t1) return run_table1_cmd(t1, g);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const InfeasibleConfig& e) {
    std::cerr << "infeasible configuration: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
