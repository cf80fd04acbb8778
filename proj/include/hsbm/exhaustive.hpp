#pragma once

// The combinatorial estimator: maximize sum_{i != j} A_ij Y_ij over
// clustering matrices with prescribed cluster sizes. Exact by enumeration
// for small n, plus a swap-based local search and the full log-likelihood.

#include "hsbm/graph.hpp"
#include "hsbm/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsbm {

inline constexpr std::size_t kMaxEnumerationN = 14;

/// Number of distinct clustering matrices with the given sizes:
/// n! / (n_0! prod n_k! prod m_s!), m_s the multiplicity of size s.
/// Returned as a double so the refusal message can quote large counts.
inline double count_partitions(std::size_t n, std::vector<std::size_t> sizes) {
  std::size_t total = 0;
  for (auto s : sizes) total += s;
  if (total > n) throw std::invalid_argument("cluster sizes exceed n");
  double log_count = std::lgamma(double(n) + 1.0) - std::lgamma(double(n - total) + 1.0);
  for (auto s : sizes) log_count -= std::lgamma(double(s) + 1.0);
  std::sort(sizes.begin(), sizes.end());
  for (std::size_t i = 0; i < sizes.size();) {
    std::size_t j = i;
    while (j < sizes.size() && sizes[j] == sizes[i]) ++j;
    log_count -= std::lgamma(double(j - i) + 1.0);
    i = j;
  }
  return std::round(std::exp(log_count));
}

namespace detail {

inline void check_enumerable(std::size_t n, const std::vector<std::size_t>& sizes) {
  std::size_t total = 0;
  for (auto s : sizes) {
    if (s == 0) throw std::invalid_argument("cluster sizes must be >= 1");
    total += s;
  }
  if (total > n) throw std::invalid_argument("cluster sizes exceed n");
  if (n > kMaxEnumerationN)
    throw std::length_error("enumeration refused: n=" + std::to_string(n) + " exceeds " +
                            std::to_string(kMaxEnumerationN) + " (about " +
                            std::to_string(count_partitions(n, sizes)) + " partitions)");
}

struct Enumerator {
  std::size_t n;
  const std::vector<std::size_t>& sizes;
  std::vector<int> prev_same;  // index of the previous cluster with equal size, or -1
  std::vector<int> labels;
  std::vector<std::uint32_t> masks;
  const std::function<void(const std::vector<int>&, const std::vector<std::uint32_t>&)>& visit;

  void cluster(std::size_t k, std::uint32_t used) {
    if (k == sizes.size()) {
      visit(labels, masks);
      return;
    }
    // Equal-size clusters appear with increasing smallest member.
    int lowest = 0;
    if (prev_same[k] >= 0) lowest = std::countr_zero(masks[std::size_t(prev_same[k])]) + 1;
    choose(k, used, std::size_t(lowest), sizes[k], 0);
  }

  void choose(std::size_t k, std::uint32_t used, std::size_t from, std::size_t left,
              std::uint32_t mask) {
    if (left == 0) {
      masks[k] = mask;
      cluster(k + 1, used | mask);
      return;
    }
    for (std::size_t v = from; v + left <= n; ++v) {
      if (used & (1u << v)) continue;
      labels[v] = int(k) + 1;
      choose(k, used, v + 1, left - 1, mask | (1u << v));
      labels[v] = 0;
    }
  }
};

}  // namespace detail

/// Visits every distinct clustering matrix with the given sizes once.
/// Label k+1 marks the cluster of size sizes[k]; 0 marks isolated nodes.
/// The callback also receives one node bitmask per cluster.
inline void for_each_partition(
    std::size_t n, const std::vector<std::size_t>& sizes,
    const std::function<void(const std::vector<int>&, const std::vector<std::uint32_t>&)>& visit) {
  detail::check_enumerable(n, sizes);
  detail::Enumerator e{n, sizes, std::vector<int>(sizes.size(), -1), std::vector<int>(n, 0),
                       std::vector<std::uint32_t>(sizes.size(), 0), visit};
  for (std::size_t k = 0; k < sizes.size(); ++k)
    for (std::size_t j = k; j-- > 0;)
      if (sizes[j] == sizes[k]) {
        e.prev_same[k] = int(j);
        break;
      }
  e.cluster(0, 0);
}

inline std::vector<Partition> enumerate_partitions(std::size_t n,
                                                   const std::vector<std::size_t>& sizes) {
  std::vector<Partition> out;
  for_each_partition(n, sizes, [&](const std::vector<int>& labels, const auto&) {
    out.emplace_back(labels);
  });
  return out;
}

/// sum_{i != j} A_ij [same nonzero label]: ordered pairs, so twice the
/// number of within-cluster edges.
inline long long objective(const Adjacency& a, const Partition& partition) {
  if (a.n() != partition.n()) throw std::invalid_argument("objective: size mismatch");
  long long e = 0;
  for (std::size_t i = 0; i < a.n(); ++i) {
    const int li = partition[i];
    if (li == 0) continue;
    for (std::size_t j = i + 1; j < a.n(); ++j)
      if (partition[j] == li && a(i, j)) ++e;
  }
  return 2 * e;
}

inline constexpr std::size_t kMaxReportedTies = 64;

struct ExhaustiveResult {
  long long max_objective = std::numeric_limits<long long>::min();
  /// Maximizers, at most kMaxReportedTies of them.
  std::vector<Partition> argmax;
  /// Total number of maximizers, including those not stored.
  std::size_t maximizers = 0;
  std::size_t enumerated = 0;

  bool unique() const { return maximizers == 1; }
};

inline ExhaustiveResult solve_exhaustive(const Adjacency& a, const std::vector<std::size_t>& sizes) {
  detail::check_enumerable(a.n(), sizes);
  std::vector<std::uint32_t> rows(a.n(), 0);
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j)
      if (a(i, j)) rows[i] |= 1u << j;

  ExhaustiveResult res;
  for_each_partition(a.n(), sizes, [&](const std::vector<int>& labels,
                                       const std::vector<std::uint32_t>& masks) {
    ++res.enumerated;
    long long twice = 0;
    for (std::uint32_t m : masks)
      for (std::uint32_t rest = m; rest; rest &= rest - 1)
        twice += std::popcount(rows[std::size_t(std::countr_zero(rest))] & m);
    if (twice > res.max_objective) {
      res.max_objective = twice;
      res.argmax.clear();
      res.maximizers = 0;
    }
    if (twice == res.max_objective) {
      ++res.maximizers;
      if (res.argmax.size() < kMaxReportedTies) res.argmax.emplace_back(labels);
    }
  });
  return res;
}

/// Full Bernoulli log-likelihood of A given the partition; labels index the
/// configuration's clusters. Pairs in cluster k contribute with p_k, all
/// other pairs with q.
inline double log_likelihood(const Adjacency& a, const Partition& partition,
                             const ModelConfig& config) {
  detail::check_compatible(config, partition);
  if (a.n() != partition.n()) throw std::invalid_argument("log_likelihood: size mismatch");
  auto interior = [](double p) { return p > 0.0 && p < 1.0; };
  if (!interior(config.q())) throw std::domain_error("log_likelihood: q must lie in (0,1)");
  for (const auto& c : config.clusters())
    if (!interior(c.p)) throw std::domain_error("log_likelihood: p_k must lie in (0,1)");

  double ll = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = i + 1; j < a.n(); ++j) {
      const double p = detail::pair_probability(config, partition, i, j);
      ll += a(i, j) ? std::log(p) : std::log1p(-p);
    }
  return ll;
}

struct LocalSearchResult {
  Partition partition;
  long long objective = 0;
};

namespace detail {

/// Best-improvement pair swaps from one starting assignment.
inline long long improve_by_swaps(const Adjacency& a, std::vector<int>& labels, std::size_t r) {
  const std::size_t n = a.n();
  // c[v*(r+1) + k] = neighbours of v carrying label k.
  std::vector<long long> c(n * (r + 1), 0);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t u = 0; u < n; ++u)
      if (a(v, u)) ++c[v * (r + 1) + std::size_t(labels[u])];
  auto cnt = [&](std::size_t v, int k) { return c[v * (r + 1) + std::size_t(k)]; };

  long long edges = 0;
  for (std::size_t v = 0; v < n; ++v)
    if (labels[v] != 0) edges += cnt(v, labels[v]);
  edges /= 2;

  for (;;) {
    long long best = 0;
    std::size_t bu = 0, bv = 0;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v) {
        const int la = labels[u];
        const int lb = labels[v];
        if (la == lb) continue;
        const long long auv = a(u, v) ? 1 : 0;
        long long delta = 0;
        if (la != 0) delta += cnt(v, la) - auv - cnt(u, la);
        if (lb != 0) delta += cnt(u, lb) - auv - cnt(v, lb);
        if (delta > best) {
          best = delta;
          bu = u;
          bv = v;
        }
      }
    if (best <= 0) break;
    const int la = labels[bu];
    const int lb = labels[bv];
    for (std::size_t w = 0; w < n; ++w) {
      if (a(w, bu)) {
        --c[w * (r + 1) + std::size_t(la)];
        ++c[w * (r + 1) + std::size_t(lb)];
      }
      if (a(w, bv)) {
        --c[w * (r + 1) + std::size_t(lb)];
        ++c[w * (r + 1) + std::size_t(la)];
      }
    }
    std::swap(labels[bu], labels[bv]);
    edges += best;
  }
  return 2 * edges;
}

}  // namespace detail

/// Random valid starts followed by best-improvement swaps (between
/// clusters and with the isolated pool); best result over the restarts.
inline LocalSearchResult local_search(const Adjacency& a, const std::vector<std::size_t>& sizes,
                                      std::uint64_t seed, int restarts = 10) {
  std::size_t total = 0;
  for (auto s : sizes) total += s;
  if (total > a.n()) throw std::invalid_argument("local_search: cluster sizes exceed n");
  if (restarts < 1) throw std::invalid_argument("local_search: restarts must be >= 1");

  LocalSearchResult best;
  best.objective = -1;
  for (int rs = 0; rs < restarts; ++rs) {
    std::vector<std::size_t> order(a.n());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng::Stream stream(rng::derive_seed(seed, std::uint64_t(rs)), rng::kShuffleStream);
    stream.shuffle(order);
    std::vector<int> labels(a.n(), 0);
    std::size_t pos = 0;
    for (std::size_t k = 0; k < sizes.size(); ++k)
      for (std::size_t i = 0; i < sizes[k]; ++i) labels[order[pos++]] = int(k) + 1;
    const long long obj = detail::improve_by_swaps(a, labels, sizes.size());
    if (obj > best.objective) {
      best.objective = obj;
      best.partition = Partition(labels);
    }
  }
  return best;
}

}  // namespace hsbm
