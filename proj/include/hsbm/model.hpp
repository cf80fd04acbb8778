#pragma once

// Heterogeneous stochastic block model: configurations, partitions and the
// closed-form quantities every recovery condition is written in.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsbm {

/// Raised when a configuration violates the model assumptions.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Cluster {
  std::size_t size = 0;
  double p = 0.0;

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

/// A validated model: n nodes, r clusters with sizes n_k and intra
/// probabilities p_k, ambient probability q, and observation rate gamma.
/// Nodes not covered by any cluster are isolated.
class ModelConfig {
 public:
  ModelConfig(std::size_t n, std::vector<Cluster> clusters, double q,
              double gamma = 1.0)
      : n_(n), clusters_(std::move(clusters)), q_(q), gamma_(gamma) {
    validate();
  }

  std::size_t n() const { return n_; }
  const std::vector<Cluster>& clusters() const { return clusters_; }
  std::size_t num_clusters() const { return clusters_.size(); }
  double q() const { return q_; }
  double gamma() const { return gamma_; }

  /// Number of clustered nodes, n̄ = Σ n_k.
  std::size_t clustered() const {
    std::size_t total = 0;
    for (const auto& c : clusters_) total += c.size;
    return total;
  }
  /// Number of isolated nodes, n_0 = n − n̄.
  std::size_t isolated() const { return n_ - clustered(); }

  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> out;
    out.reserve(clusters_.size());
    for (const auto& c : clusters_) out.push_back(c.size);
    return out;
  }

  /// Σ n_k², the right-hand side of the convex program's sum constraint.
  double sum_sq_sizes() const {
    double s = 0.0;
    for (const auto& c : clusters_) s += double(c.size) * double(c.size);
    return s;
  }

  /// The model seen by an estimator that reads unobserved entries as zero:
  /// p_k -> gamma p_k, q -> gamma q, gamma -> 1.
  ModelConfig collapsed() const {
    std::vector<Cluster> cl = clusters_;
    for (auto& c : cl) c.p *= gamma_;
    return ModelConfig(n_, std::move(cl), q_ * gamma_, 1.0);
  }

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;

 private:
  void validate() const {
    if (n_ == 0) throw ConfigError("n must be positive");
    if (clusters_.empty()) throw ConfigError("at least one cluster is required");
    if (!(q_ >= 0.0 && q_ <= 1.0)) throw ConfigError("q must lie in [0,1]");
    if (!(gamma_ > 0.0 && gamma_ <= 1.0))
      throw ConfigError("gamma must lie in (0,1]");
    std::size_t total = 0;
    for (const auto& c : clusters_) {
      if (c.size == 0) throw ConfigError("cluster sizes must be >= 1");
      if (!(c.p >= 0.0 && c.p <= 1.0))
        throw ConfigError("cluster probabilities must lie in [0,1]");
      if (!(q_ < c.p))
        throw ConfigError("ambient probability q must be below every p_k");
      total += c.size;
    }
    if (total > n_)
      throw ConfigError("cluster sizes sum to " + std::to_string(total) +
                        " which exceeds n=" + std::to_string(n_));
  }

  std::size_t n_;
  std::vector<Cluster> clusters_;
  double q_;
  double gamma_;
};

/// Node -> cluster assignment. Label 0 marks an isolated node; labels
/// 1..r name clusters. Label values carry no meaning beyond grouping.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> labels) : labels_(std::move(labels)) {
    for (int l : labels_)
      if (l < 0) throw std::invalid_argument("partition labels must be >= 0");
  }

  std::size_t n() const { return labels_.size(); }
  const std::vector<int>& labels() const { return labels_; }
  int operator[](std::size_t i) const { return labels_[i]; }

  int max_label() const {
    return labels_.empty() ? 0 : *std::max_element(labels_.begin(), labels_.end());
  }

  /// Sizes of the non-empty clusters, sorted descending. Isolated nodes are
  /// not included.
  std::vector<std::size_t> cluster_sizes() const {
    std::vector<std::size_t> counts(std::size_t(max_label()) + 1, 0);
    for (int l : labels_) ++counts[std::size_t(l)];
    std::vector<std::size_t> out;
    for (std::size_t k = 1; k < counts.size(); ++k)
      if (counts[k] > 0) out.push_back(counts[k]);
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
  }

  std::size_t isolated_count() const {
    return std::size_t(std::count(labels_.begin(), labels_.end(), 0));
  }

  /// True when the cluster-size multiset and isolated count agree with the
  /// configuration.
  bool matches(const ModelConfig& config) const {
    if (n() != config.n()) return false;
    auto want = config.sizes();
    std::sort(want.begin(), want.end(), std::greater<>());
    return cluster_sizes() == want;
  }

 private:
  std::vector<int> labels_;
};

/// The planted partition used by the samplers: clusters occupy consecutive
/// node ranges in configuration order, isolated nodes come last.
inline Partition planted_partition(const ModelConfig& config) {
  std::vector<int> labels(config.n(), 0);
  std::size_t pos = 0;
  for (std::size_t k = 0; k < config.num_clusters(); ++k)
    for (std::size_t i = 0; i < config.clusters()[k].size; ++i)
      labels[pos++] = int(k) + 1;
  return Partition(std::move(labels));
}

struct DerivedStats {
  std::vector<double> rho;       // n_k (p_k − q)
  std::vector<double> sigma_sq;  // n_k p_k (1 − p_k)
  double sigma0_sq = 0.0;        // n q (1 − q)
  double sigma_max_sq = 0.0;
  double rho_min = 0.0;
  double rho_max = 0.0;
  double p_min = 0.0;
  double p_max = 0.0;
  std::size_t n_min = 0;
  std::size_t n_max = 0;
};

inline DerivedStats derived_stats(const ModelConfig& config) {
  DerivedStats s;
  const double q = config.q();
  s.p_min = std::numeric_limits<double>::infinity();
  s.p_max = -std::numeric_limits<double>::infinity();
  s.n_min = std::numeric_limits<std::size_t>::max();
  for (const auto& c : config.clusters()) {
    const double nk = double(c.size);
    s.rho.push_back(nk * (c.p - q));
    s.sigma_sq.push_back(nk * c.p * (1.0 - c.p));
    s.p_min = std::min(s.p_min, c.p);
    s.p_max = std::max(s.p_max, c.p);
    s.n_min = std::min(s.n_min, c.size);
    s.n_max = std::max(s.n_max, c.size);
  }
  s.sigma0_sq = double(config.n()) * q * (1.0 - q);
  s.sigma_max_sq = *std::max_element(s.sigma_sq.begin(), s.sigma_sq.end());
  s.rho_min = *std::min_element(s.rho.begin(), s.rho.end());
  s.rho_max = *std::max_element(s.rho.begin(), s.rho.end());
  return s;
}

/// Neyman chi-square divergence between Ber(p) and Ber(q).
inline double chi_square_div(double p, double q) {
  if (!(q > 0.0 && q < 1.0))
    throw std::domain_error("chi_square_div: q must lie in (0,1)");
  const double d = p - q;
  return d * d / (q * (1.0 - q));
}

/// Kullback-Leibler divergence between Ber(p) and Ber(q), with 0 log 0 = 0.
inline double kl_div(double p, double q) {
  if (!(q > 0.0 && q < 1.0))
    throw std::domain_error("kl_div: q must lie in (0,1)");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("kl_div: p must lie in [0,1]");
  double out = 0.0;
  if (p > 0.0) out += p * std::log(p / q);
  if (p < 1.0) out += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return std::max(out, 0.0);
}

/// Y_ij = 1 iff i and j carry the same nonzero label (diagonal included for
/// clustered nodes).
inline Eigen::MatrixXd clustering_matrix(const Partition& partition) {
  const auto n = Eigen::Index(partition.n());
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int li = partition[std::size_t(i)];
    if (li == 0) continue;
    for (Eigen::Index j = 0; j < n; ++j)
      if (partition[std::size_t(j)] == li) y(i, j) = 1.0;
  }
  return y;
}

/// Relabels clusters in order of first appearance, keeping 0 for isolated.
inline std::vector<int> canonical_labels(const Partition& partition) {
  std::vector<int> remap(std::size_t(partition.max_label()) + 1, -1);
  remap[0] = 0;
  int next = 1;
  std::vector<int> out(partition.n());
  for (std::size_t i = 0; i < partition.n(); ++i) {
    int& m = remap[std::size_t(partition[i])];
    if (m < 0) m = next++;
    out[i] = m;
  }
  return out;
}

/// Equality of the induced clustering matrices.
inline bool partitions_equal(const Partition& a, const Partition& b) {
  if (a.n() != b.n())
    throw std::invalid_argument("partitions_equal: size mismatch");
  return canonical_labels(a) == canonical_labels(b);
}

}  // namespace hsbm
