#pragma once

// Euclidean projections onto the two constraint sets of the convex program.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace hsbm {

/// Projection of v onto {x : ||x||_1 <= radius}, by sorting magnitudes and
/// soft-thresholding at the resulting level.
inline Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("project_l1_ball: radius must be >= 0");
  if (v.cwiseAbs().sum() <= radius) return v;
  std::vector<double> u(std::size_t(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) u[std::size_t(i)] = std::abs(v[i]);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumulative += u[i];
    const double t = (cumulative - radius) / double(i + 1);
    if (u[i] > t) theta = t;
  }
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::max(std::abs(v[i]) - theta, 0.0);
    out[i] = v[i] < 0.0 ? -a : a;
  }
  return out;
}

inline double nuclear_norm_symmetric(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  return es.eigenvalues().cwiseAbs().sum();
}

/// Frobenius projection of a symmetric matrix onto the nuclear-norm ball.
/// Only the lower triangle of `m` is read.
inline Eigen::MatrixXd project_nuclear_ball(const Eigen::MatrixXd& m, double radius) {
  if (m.rows() != m.cols()) throw std::invalid_argument("project_nuclear_ball: matrix must be square");
  if (!m.allFinite()) throw std::runtime_error("project_nuclear_ball: non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const Eigen::VectorXd& lambda = es.eigenvalues();
  if (lambda.cwiseAbs().sum() <= radius) return m;
  const Eigen::VectorXd proj = project_l1_ball(lambda, radius);
  const Eigen::MatrixXd& u = es.eigenvectors();
  return u * proj.asDiagonal() * u.transpose();
}

/// Frobenius projection onto {0 <= Y_ij <= 1, sum Y_ij = s}. The output is
/// clamp(M − λ, 0, 1) with λ found by bisection on the monotone sum, then
/// refined by one exact step on the linear piece containing it.
inline Eigen::MatrixXd project_box_sum(const Eigen::MatrixXd& m, double s) {
  const double entries = double(m.size());
  if (!(s >= 0.0 && s <= entries))
    throw std::invalid_argument("project_box_sum: s must lie in [0, number of entries]");
  if (!m.allFinite()) throw std::runtime_error("project_box_sum: non-finite entries");
  if (m.size() == 0) return m;

  auto total = [&](double lambda) { return (m.array() - lambda).max(0.0).min(1.0).sum(); };
  double lo = m.minCoeff() - 1.0;  // total(lo) = entries
  double hi = m.maxCoeff();        // total(hi) = 0
  double lambda = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    lambda = 0.5 * (lo + hi);
    const double f = total(lambda);
    if (std::abs(f - s) <= 1e-12 * std::max(1.0, s)) break;
    if (f > s)
      lo = lambda;
    else
      hi = lambda;
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(lambda))) break;
  }

  // Slope of the sum at lambda is minus the number of strictly interior entries.
  const auto shifted = (m.array() - lambda).eval();
  const double free = ((shifted > 0.0) && (shifted < 1.0)).cast<double>().sum();
  if (free > 0.0) {
    const double refined = lambda + (total(lambda) - s) / free;
    if (std::abs(total(refined) - s) < std::abs(total(lambda) - s)) lambda = refined;
  }
  return (m.array() - lambda).max(0.0).min(1.0).matrix();
}

}  // namespace hsbm
