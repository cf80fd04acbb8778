#pragma once

// Adjacency storage and HSBM sampling (full and partial observation).

#include "hsbm/model.hpp"
#include "hsbm/rng.hpp"

#include <Eigen/Dense>

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hsbm {

namespace detail {

/// n x n symmetric bit matrix, one packed row per node.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(std::size_t n)
      : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

  std::size_t n() const { return n_; }
  std::size_t words() const { return words_; }

  bool get(std::size_t i, std::size_t j) const {
    return (bits_[i * words_ + j / 64] >> (j % 64)) & 1u;
  }
  void set(std::size_t i, std::size_t j, bool v) {
    auto& w = bits_[i * words_ + j / 64];
    const std::uint64_t mask = std::uint64_t{1} << (j % 64);
    w = v ? (w | mask) : (w & ~mask);
  }
  void set_sym(std::size_t i, std::size_t j, bool v) {
    set(i, j, v);
    set(j, i, v);
  }
  const std::uint64_t* row(std::size_t i) const { return bits_.data() + i * words_; }

  std::size_t row_count(std::size_t i) const {
    std::size_t c = 0;
    for (std::size_t w = 0; w < words_; ++w) c += std::size_t(std::popcount(row(i)[w]));
    return c;
  }
  std::size_t and_count(std::size_t i, std::size_t j) const {
    std::size_t c = 0;
    const auto* a = row(i);
    const auto* b = row(j);
    for (std::size_t w = 0; w < words_; ++w) c += std::size_t(std::popcount(a[w] & b[w]));
    return c;
  }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

}  // namespace detail

/// Symmetric 0/1 adjacency matrix with zero diagonal.
class Adjacency {
 public:
  Adjacency() = default;
  explicit Adjacency(std::size_t n) : bits_(n) {}

  std::size_t n() const { return bits_.n(); }

  bool operator()(std::size_t i, std::size_t j) const { return bits_.get(i, j); }

  /// Sets the unordered pair {i,j}; self loops are rejected.
  void set_edge(std::size_t i, std::size_t j, bool present = true) {
    if (i == j) throw std::invalid_argument("adjacency: self loops are not allowed");
    if (i >= n() || j >= n()) throw std::out_of_range("adjacency: node index out of range");
    bits_.set_sym(i, j, present);
  }

  std::size_t degree(std::size_t i) const { return bits_.row_count(i); }

  /// |N(i) ∩ N(j)|; for i != j this equals Σ_{w≠i,j} A_iw A_jw.
  std::size_t common_neighbors(std::size_t i, std::size_t j) const {
    return bits_.and_count(i, j);
  }

  std::size_t edge_count() const {
    std::size_t total = 0;
    for (std::size_t i = 0; i < n(); ++i) total += degree(i);
    return total / 2;
  }

  const std::uint64_t* row_bits(std::size_t i) const { return bits_.row(i); }
  std::size_t row_words() const { return bits_.words(); }

  Eigen::MatrixXd to_dense() const {
    const auto m = Eigen::Index(n());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t i = 0; i < n(); ++i)
      for (std::size_t j = 0; j < n(); ++j)
        if (bits_.get(i, j)) out(Eigen::Index(i), Eigen::Index(j)) = 1.0;
    return out;
  }

  friend bool operator==(const Adjacency&, const Adjacency&) = default;

 private:
  detail::BitMatrix bits_;
};

enum class Entry : std::uint8_t { unobserved, zero, one };

/// Symmetric ternary matrix: each off-diagonal pair is observed as one,
/// observed as zero, or unobserved.
class ObservedMatrix {
 public:
  ObservedMatrix() = default;
  explicit ObservedMatrix(std::size_t n) : observed_(n), ones_(n) {}

  std::size_t n() const { return observed_.n(); }

  Entry operator()(std::size_t i, std::size_t j) const {
    if (!observed_.get(i, j)) return Entry::unobserved;
    return ones_.get(i, j) ? Entry::one : Entry::zero;
  }

  void set(std::size_t i, std::size_t j, Entry e) {
    if (i == j) throw std::invalid_argument("observed matrix: diagonal is not observable");
    if (i >= n() || j >= n()) throw std::out_of_range("observed matrix: node index out of range");
    observed_.set_sym(i, j, e != Entry::unobserved);
    ones_.set_sym(i, j, e == Entry::one);
  }

  std::size_t observed_pairs() const {
    std::size_t total = 0;
    for (std::size_t i = 0; i < n(); ++i) total += observed_.row_count(i);
    return total / 2;
  }

  /// Estimator input: unobserved entries read as zero.
  Adjacency to_adjacency() const {
    Adjacency a(n());
    for (std::size_t i = 0; i < n(); ++i)
      for (std::size_t j = i + 1; j < n(); ++j)
        if (ones_.get(i, j)) a.set_edge(i, j);
    return a;
  }

  friend bool operator==(const ObservedMatrix&, const ObservedMatrix&) = default;

 private:
  detail::BitMatrix observed_;
  detail::BitMatrix ones_;
};

namespace detail {

inline void check_compatible(const ModelConfig& config, const Partition& partition) {
  if (partition.n() != config.n())
    throw std::invalid_argument("partition size does not match configuration n");
  if (partition.max_label() > int(config.num_clusters()))
    throw std::invalid_argument("partition uses labels beyond the configuration's clusters");
  std::vector<std::size_t> counts(config.num_clusters() + 1, 0);
  for (int l : partition.labels()) ++counts[std::size_t(l)];
  for (std::size_t k = 0; k < config.num_clusters(); ++k)
    if (counts[k + 1] != config.clusters()[k].size)
      throw std::invalid_argument("partition cluster sizes do not match configuration");
}

/// Edge probability of the pair (i,j) under labels that index the
/// configuration's clusters (label k -> cluster k-1).
inline double pair_probability(const ModelConfig& config, const Partition& partition,
                               std::size_t i, std::size_t j) {
  const int li = partition[i];
  if (li != 0 && li == partition[j]) return config.clusters()[std::size_t(li - 1)].p;
  return config.q();
}

}  // namespace detail

/// One independent Bernoulli draw per upper-triangle entry, keyed by the
/// entry index i*n + j on the edge stream. Labels of `partition` index the
/// configuration's clusters.
inline Adjacency sample_adjacency(const ModelConfig& config, const Partition& partition,
                                  std::uint64_t seed) {
  detail::check_compatible(config, partition);
  const std::size_t n = config.n();
  Adjacency a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = detail::pair_probability(config, partition, i, j);
      if (rng::uniform(seed, rng::kEdgeStream, i * n + j) < p) a.set_edge(i, j);
    }
  return a;
}

/// Samples A exactly as sample_adjacency does with the same seed, then
/// reveals each entry independently with probability gamma.
inline ObservedMatrix sample_observed(const ModelConfig& config, const Partition& partition,
                                      std::uint64_t seed) {
  const Adjacency a = sample_adjacency(config, partition, seed);
  const std::size_t n = config.n();
  const double gamma = config.gamma();
  ObservedMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng::uniform(seed, rng::kObservationStream, i * n + j) < gamma)
        out.set(i, j, a(i, j) ? Entry::one : Entry::zero);
    }
  return out;
}

/// E[A] under the collapsed observation model: gamma p_k inside cluster k,
/// gamma q elsewhere, zero diagonal.
inline Eigen::MatrixXd expected_adjacency(const ModelConfig& config, const Partition& partition) {
  detail::check_compatible(config, partition);
  const std::size_t n = config.n();
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(Eigen::Index(n), Eigen::Index(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j)
        e(Eigen::Index(i), Eigen::Index(j)) =
            config.gamma() * detail::pair_probability(config, partition, i, j);
  return e;
}

}  // namespace hsbm
