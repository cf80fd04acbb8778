#pragma once

// Counting recovery: degree thresholding finds isolated nodes, then
// common-neighbour thresholding links nodes of the same cluster.

#include "hsbm/convex.hpp"
#include "hsbm/graph.hpp"
#include "hsbm/outcome.hpp"
#include "hsbm/regime.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace hsbm {

/// min_k (n_k − 1)(p_k − q)/2 + (n − 1) q
inline double isolated_threshold(const ModelConfig& config) {
  const double q = config.q();
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& c : config.clusters()) lo = std::min(lo, (double(c.size) - 1.0) * (c.p - q) / 2.0);
  return lo + (double(config.n()) - 1.0) * q;
}

/// n q² + ½ (min_k((n_k − 2)p_k² − n_k q²) + q max_{k≠l}(ρ_k − p_k + ρ_l − p_l)).
/// With a single cluster the max over k≠l is empty and the cross term is
/// dropped.
inline double pair_threshold(const ModelConfig& config) {
  const double q = config.q();
  const auto& cl = config.clusters();
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& c : cl) {
    const double nk = double(c.size);
    lo = std::min(lo, (nk - 2.0) * c.p * c.p - nk * q * q);
  }
  double cross = 0.0;
  if (cl.size() >= 2) {
    std::vector<double> t;
    t.reserve(cl.size());
    for (const auto& k : cl) t.push_back(double(k.size) * (k.p - q) - k.p);
    cross = detail::top_two_sum(t);
    cross *= q;
  }
  return double(config.n()) * q * q + 0.5 * (lo + cross);
}

inline RecoveryOutcome recover_counting(const Adjacency& a, const ModelConfig& config) {
  if (a.n() != config.n())
    throw std::invalid_argument("recover_counting: graph size does not match configuration");
  const std::size_t n = a.n();
  const double iso = isolated_threshold(config);
  const double link = pair_threshold(config);

  std::vector<bool> isolated(n);
  for (std::size_t v = 0; v < n; ++v) isolated[v] = double(a.degree(v)) < iso;

  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (isolated[v]) continue;
    for (std::size_t u = v + 1; u < n; ++u) {
      if (isolated[u]) continue;
      if (double(a.common_neighbors(v, u)) > link) {
        adj[v].push_back(u);
        adj[u].push_back(v);
      }
    }
  }

  const auto comp = detail::components(adj);
  std::vector<std::size_t> size(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    if (!isolated[v]) ++size[std::size_t(comp[v])];
  for (std::size_t v = 0; v < n; ++v)
    if (!isolated[v] && adj[v].size() + 1 != size[std::size_t(comp[v])])
      return RecoveryOutcome::fail(FailureKind::counting,
                                   "link component of node " + std::to_string(v) +
                                       " is not a clique");

  std::vector<int> labels(n, 0);
  std::vector<int> label_of(n, -1);
  int next = 1;
  for (std::size_t v = 0; v < n; ++v) {
    if (isolated[v]) continue;
    auto& l = label_of[std::size_t(comp[v])];
    if (l < 0) l = next++;
    labels[v] = l;
  }
  Partition p(std::move(labels));
  if (!p.matches(config))
    return RecoveryOutcome::fail(FailureKind::counting,
                                 "recovered cluster sizes differ from the configuration");
  return RecoveryOutcome::success(std::move(p));
}

}  // namespace hsbm
