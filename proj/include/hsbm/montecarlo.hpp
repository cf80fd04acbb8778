#pragma once

// Seeded Monte Carlo runs of the recovery algorithms on planted
// configurations. Trial t uses seed derive_seed(base_seed, t); all
// algorithms of a trial see the same graph.

#include "hsbm/convex.hpp"
#include "hsbm/counting.hpp"
#include "hsbm/exhaustive.hpp"
#include "hsbm/graph.hpp"
#include "hsbm/outcome.hpp"
#include "hsbm/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace hsbm {

enum class Algorithm { convex, exhaustive, counting, local_search };

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::convex: return "convex";
    case Algorithm::exhaustive: return "exhaustive";
    case Algorithm::counting: return "counting";
    case Algorithm::local_search: return "local-search";
  }
  return "convex";
}

inline Algorithm parse_algorithm(const std::string& s) {
  for (auto a : {Algorithm::convex, Algorithm::exhaustive, Algorithm::counting, Algorithm::local_search})
    if (s == to_string(a)) return a;
  throw std::invalid_argument("unknown algorithm '" + s + "'");
}

struct ExperimentSpec {
  explicit ExperimentSpec(ModelConfig c) : config(std::move(c)) {}

  std::string config_id = "config";
  ModelConfig config;
  std::vector<Algorithm> algorithms{Algorithm::convex};
  std::size_t trials = 1;
  std::uint64_t base_seed = 0;
  SolverOptions solver;
  int local_search_restarts = 10;
  unsigned workers = 1;

  void validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (algorithms.empty()) throw std::invalid_argument("at least one algorithm is required");
    for (auto a : algorithms)
      if (a == Algorithm::exhaustive && config.n() > kMaxEnumerationN)
        throw std::invalid_argument("exhaustive search needs n <= " + std::to_string(kMaxEnumerationN));
    solver.validate();
  }
};

struct ResultRow {
  std::string config_id;
  Algorithm algorithm = Algorithm::convex;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  bool success = false;
  FailureKind failure = FailureKind::none;
  /// Combinatorial objective of the returned partition; -1 if none.
  long long objective = -1;
  double wall_seconds = 0.0;
};

struct AlgorithmSummary {
  Algorithm algorithm = Algorithm::convex;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::map<FailureKind, std::size_t> failures;
};

struct MonteCarloResult {
  std::vector<ResultRow> rows;
  std::vector<AlgorithmSummary> summary;
};

/// Wilson score interval for a binomial proportion.
inline std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials,
                                                 double z = 1.959963984540054) {
  if (trials == 0) return {0.0, 1.0};
  const double n = double(trials);
  const double p = double(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

namespace detail {

inline void score(ResultRow& row, const RecoveryOutcome& out, const Partition& planted,
                  const Adjacency& a) {
  if (!out.ok()) {
    row.failure = out.failure;
    return;
  }
  row.objective = objective(a, *out.partition);
  row.success = partitions_equal(*out.partition, planted);
  if (!row.success) row.failure = FailureKind::mismatch;
}

inline ResultRow run_one(const ExperimentSpec& spec, Algorithm algo, const Adjacency& a,
                         const Partition& planted, std::size_t trial, std::uint64_t seed) {
  ResultRow row;
  row.config_id = spec.config_id;
  row.algorithm = algo;
  row.trial = trial;
  row.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  const auto sizes = spec.config.sizes();
  switch (algo) {
    case Algorithm::convex: {
      const auto rec = recover_convex(a.to_dense(), spec.config, spec.solver);
      score(row, rec.outcome, planted, a);
      break;
    }
    case Algorithm::exhaustive: {
      const auto ex = solve_exhaustive(a, sizes);
      row.objective = ex.max_objective;
      bool planted_is_max = false;
      for (const auto& p : ex.argmax) planted_is_max = planted_is_max || partitions_equal(p, planted);
      if (ex.maximizers > ex.argmax.size() && !planted_is_max)
        planted_is_max = objective(a, planted) == ex.max_objective;
      row.success = planted_is_max && ex.unique();
      row.failure = row.success       ? FailureKind::none
                    : planted_is_max ? FailureKind::tie
                                     : FailureKind::mismatch;
      break;
    }
    case Algorithm::counting:
      score(row, recover_counting(a, spec.config.collapsed()), planted, a);
      break;
    case Algorithm::local_search: {
      const auto ls = local_search(a, sizes, seed, spec.local_search_restarts);
      score(row, RecoveryOutcome::success(ls.partition), planted, a);
      break;
    }
  }
  row.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

}  // namespace detail

inline MonteCarloResult run_monte_carlo(const ExperimentSpec& spec) {
  spec.validate();
  const Partition planted = planted_partition(spec.config);
  const std::size_t per_trial = spec.algorithms.size();
  std::vector<ResultRow> rows(spec.trials * per_trial);

  parallel_for(spec.trials, spec.workers, [&](std::size_t t) {
    const std::uint64_t seed = rng::derive_seed(spec.base_seed, t);
    const Adjacency a = spec.config.gamma() < 1.0
                            ? sample_observed(spec.config, planted, seed).to_adjacency()
                            : sample_adjacency(spec.config, planted, seed);
    for (std::size_t k = 0; k < per_trial; ++k)
      rows[t * per_trial + k] = detail::run_one(spec, spec.algorithms[k], a, planted, t, seed);
  });

  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& x, const ResultRow& y) {
    const std::string ax = to_string(x.algorithm), ay = to_string(y.algorithm);
    if (x.config_id != y.config_id) return x.config_id < y.config_id;
    if (ax != ay) return ax < ay;
    return x.trial < y.trial;
  });

  MonteCarloResult out;
  out.rows = std::move(rows);
  std::vector<Algorithm> algos = spec.algorithms;
  std::sort(algos.begin(), algos.end(),
            [](Algorithm x, Algorithm y) { return std::string(to_string(x)) < to_string(y); });
  algos.erase(std::unique(algos.begin(), algos.end()), algos.end());
  for (auto algo : algos) {
    AlgorithmSummary s;
    s.algorithm = algo;
    for (const auto& r : out.rows) {
      if (r.algorithm != algo) continue;
      ++s.trials;
      if (r.success)
        ++s.successes;
      else
        ++s.failures[r.failure];
    }
    s.rate = double(s.successes) / double(s.trials);
    std::tie(s.ci_low, s.ci_high) = wilson_interval(s.successes, s.trials);
    out.summary.push_back(s);
  }
  return out;
}

/// Per-trial CSV. Wall time is nondeterministic and only written on request.
inline void write_rows_csv(std::ostream& os, const std::vector<ResultRow>& rows, bool timing = false) {
  os << "config_id,algorithm,trial,seed,success,failure,objective";
  if (timing) os << ",wall_seconds";
  os << '\n';
  for (const auto& r : rows) {
    os << r.config_id << ',' << to_string(r.algorithm) << ',' << r.trial << ',' << r.seed << ','
       << (r.success ? 1 : 0) << ',' << to_string(r.failure) << ',' << r.objective;
    if (timing) os << ',' << r.wall_seconds;
    os << '\n';
  }
}

inline void write_summary_csv(std::ostream& os, const std::string& config_id,
                              const std::vector<AlgorithmSummary>& summary) {
  os << "config_id,algorithm,trials,successes,rate,ci_low,ci_high,failures\n";
  for (const auto& s : summary) {
    std::string f;
    for (const auto& [kind, count] : s.failures) {
      if (!f.empty()) f += ';';
      f += std::string(to_string(kind)) + "=" + std::to_string(count);
    }
    os << config_id << ',' << to_string(s.algorithm) << ',' << s.trials << ',' << s.successes
       << ',' << s.rate << ',' << s.ci_low << ',' << s.ci_high << ',' << f << '\n';
  }
}

}  // namespace hsbm
