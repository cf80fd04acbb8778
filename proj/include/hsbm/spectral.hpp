#pragma once

// Spectral-norm concentration: an iterative norm estimator, the
// closed-form deviation bounds, the Bernstein tail, and an empirical bench
// comparing ||A − E[A]|| with the bound.

#include "hsbm/graph.hpp"
#include "hsbm/parallel.hpp"
#include "hsbm/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hsbm {

class SpectralNonConvergence : public std::runtime_error {
 public:
  SpectralNonConvergence(double estimate, int steps)
      : std::runtime_error("spectral_norm: no convergence after " + std::to_string(steps) +
                           " Lanczos steps"),
        estimate(estimate) {}
  double estimate;
};

/// Largest |eigenvalue| of a symmetric matrix by Lanczos with full
/// reorthogonalization from a seeded random start. Stops when the Ritz
/// residual of the extreme Ritz value is within rel_tol of the estimate.
inline double spectral_norm(const Eigen::MatrixXd& m, double rel_tol = 1e-10,
                            std::uint64_t seed = 0, int max_steps = 0) {
  if (m.rows() != m.cols()) throw std::invalid_argument("spectral_norm: matrix must be square");
  if (!m.allFinite()) throw std::invalid_argument("spectral_norm: non-finite entries");
  const Eigen::Index n = m.rows();
  if (n == 0) return 0.0;
  const int cap = max_steps > 0 ? max_steps : int(n);

  rng::Stream stream(seed, 0x5eed);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = stream.next_uniform() - 0.5;
  v.normalize();

  Eigen::MatrixXd basis(n, std::min<Eigen::Index>(n, cap));
  std::vector<double> alpha;
  std::vector<double> beta;
  double estimate = 0.0;
  for (int k = 0; k < cap; ++k) {
    basis.col(k) = v;
    Eigen::VectorXd w = m * v;
    const double a = v.dot(w);
    alpha.push_back(a);
    // Two passes of Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass)
      w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).transpose() * w);
    const double b = w.norm();

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (int i = 0; i <= k; ++i) {
      t(i, i) = alpha[std::size_t(i)];
      if (i > 0) t(i, i - 1) = t(i - 1, i) = beta[std::size_t(i - 1)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const auto& ev = es.eigenvalues();
    const Eigen::Index top = std::abs(ev[0]) >= std::abs(ev[k]) ? 0 : k;
    estimate = std::abs(ev[top]);
    const double residual = std::abs(b * es.eigenvectors()(k, top));

    if (residual <= rel_tol * std::max(estimate, std::numeric_limits<double>::min()) ||
        b <= 1e-14 * std::max(1.0, estimate) || k + 1 == n)
      return estimate;
    beta.push_back(b);
    v = w / b;
  }
  throw SpectralNonConvergence(estimate, cap);
}

/// max_i sqrt(p_i (1 − p_i) n_i) + sqrt(max{q(1 − q) n, log n})
inline double lemma3_bound(const ModelConfig& config) {
  double first = 0.0;
  for (const auto& c : config.clusters())
    first = std::max(first, std::sqrt(c.p * (1.0 - c.p) * double(c.size)));
  const double n = double(config.n());
  return first + std::sqrt(std::max(config.q() * (1.0 - config.q()) * n, std::log(n)));
}

/// The deviation t = sqrt(2 c_eps log n) attached to the refined bound.
inline double lemma5_deviation(std::size_t n, double c_eps = 1.0) {
  return std::sqrt(2.0 * c_eps * std::log(double(n)));
}

/// 4 (1 + eps) max{sigma_max, sigma_0} + t
inline double lemma5_bound(const ModelConfig& config, double eps, double t) {
  if (!(eps > 0.0 && eps <= 0.5)) throw std::invalid_argument("lemma5_bound: eps must lie in (0, 0.5]");
  if (!(t >= 0.0)) throw std::invalid_argument("lemma5_bound: t must be >= 0");
  const auto s = derived_stats(config);
  return 4.0 * (1.0 + eps) * std::sqrt(std::max(s.sigma_max_sq, s.sigma0_sq)) + t;
}

/// min(1, 2 exp(−(t²/2) / (variance + L t / 3)))
inline double bernstein_tail(double t, double variance, double L) {
  if (!(t >= 0.0) || !(variance >= 0.0) || !(L > 0.0))
    throw std::invalid_argument("bernstein_tail: need t >= 0, variance >= 0, L > 0");
  const double denom = variance + L * t / 3.0;
  if (denom == 0.0) return 1.0;  // t = 0 and variance = 0
  return std::min(1.0, 2.0 * std::exp(-(t * t / 2.0) / denom));
}

struct ConcentrationTrial {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double norm = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

struct ConcentrationStats {
  std::vector<ConcentrationTrial> trials;
  double min_ratio = 0.0;
  double mean_ratio = 0.0;
  double max_ratio = 0.0;
};

/// Samples A from the planted configuration and compares ||A − E[A]|| with
/// lemma3_bound. With gamma < 1 the observed matrix (unobserved read as
/// zero) is compared against the collapsed model.
inline ConcentrationStats concentration_experiment(const ModelConfig& config, std::size_t trials,
                                                   std::uint64_t seed, unsigned workers = 1) {
  if (trials == 0) throw std::invalid_argument("concentration_experiment: trials must be >= 1");
  const Partition planted = planted_partition(config);
  const Eigen::MatrixXd expected = expected_adjacency(config, planted);
  const double bound = lemma3_bound(config.collapsed());

  ConcentrationStats out;
  out.trials.resize(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    const std::uint64_t s = rng::derive_seed(seed, t);
    const Adjacency a = config.gamma() < 1.0 ? sample_observed(config, planted, s).to_adjacency()
                                              : sample_adjacency(config, planted, s);
    const double norm = spectral_norm(a.to_dense() - expected, 1e-10, s);
    out.trials[t] = {t, s, norm, bound, norm / bound};
  });
  out.min_ratio = std::numeric_limits<double>::infinity();
  out.max_ratio = 0.0;
  double sum = 0.0;
  for (const auto& r : out.trials) {
    out.min_ratio = std::min(out.min_ratio, r.ratio);
    out.max_ratio = std::max(out.max_ratio, r.ratio);
    sum += r.ratio;
  }
  out.mean_ratio = sum / double(trials);
  return out;
}

}  // namespace hsbm
