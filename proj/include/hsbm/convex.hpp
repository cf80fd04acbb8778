#pragma once

// Convex relaxation: maximize <A,Y> subject to ||Y||_* <= n,
// sum Y = sum n_k^2, 0 <= Y <= 1, solved by Douglas-Rachford splitting
// between the nuclear ball and the box-with-sum set.

#include "hsbm/graph.hpp"
#include "hsbm/outcome.hpp"
#include "hsbm/projections.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace hsbm {

struct SolverOptions {
  int max_iter = 2000;
  double tol_feasibility = 1e-6;
  double tol_change = 1e-7;
  /// Douglas-Rachford step on the linear term.
  double step = 1.0;
  /// Over/under-relaxation of the Z update, in (0,2).
  double relaxation = 1.0;
  double rounding_threshold = 0.5;
  /// Nuclear-ball radius; nonpositive means n.
  double radius = 0.0;
  /// Value placed on the diagonal of A. Over clustering matrices with fixed
  /// sizes the trace is constant, so this leaves the integral maximizers
  /// unchanged; a positive value keeps the relaxation from moving mass off
  /// the diagonal on small graphs.
  double diagonal = 1.0;

  void validate() const {
    if (max_iter <= 0) throw std::invalid_argument("max_iter must be positive");
    if (!(tol_feasibility > 0.0) || !(tol_change > 0.0))
      throw std::invalid_argument("tolerances must be positive");
    if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
    if (!(relaxation > 0.0 && relaxation < 2.0))
      throw std::invalid_argument("relaxation must lie in (0,2)");
    if (!(rounding_threshold > 0.0 && rounding_threshold < 1.0))
      throw std::invalid_argument("rounding_threshold must lie in (0,1)");
    if (!(diagonal >= 0.0 && diagonal <= 1.0)) throw std::invalid_argument("diagonal must lie in [0,1]");
  }
};

struct Residuals {
  /// max(0, ||Y||_* − radius) / radius
  double nuclear = 0.0;
  /// |sum Y − s| / n^2
  double sum = 0.0;
  /// largest distance of an entry outside [0,1]
  double box = 0.0;

  double max() const { return std::max({nuclear, sum, box}); }
};

struct SolverResult {
  Eigen::MatrixXd y_hat;
  double objective = 0.0;
  Residuals residuals;
  int iterations = 0;
  bool converged = false;
};

inline Residuals constraint_residuals(const Eigen::MatrixXd& y, double s, double radius) {
  Residuals r;
  const double n = double(y.rows());
  r.nuclear = std::max(0.0, nuclear_norm_symmetric(y) - radius) / radius;
  r.sum = std::abs(y.sum() - s) / std::max(1.0, n * n);
  r.box = std::max({0.0, -y.minCoeff(), y.maxCoeff() - 1.0});
  return r;
}

/// A must be symmetric; its diagonal is replaced by `opt.diagonal` and the
/// reported objective uses A as given. The returned iterate is the
/// box-with-sum point of the last step, so the box and sum constraints hold
/// to rounding error; convergence additionally requires the nuclear residual.
inline SolverResult solve_convex(const Eigen::MatrixXd& input, double s, const SolverOptions& opt = {}) {
  opt.validate();
  if (input.rows() != input.cols()) throw std::invalid_argument("solve_convex: A must be square");
  const Eigen::Index n = input.rows();
  Eigen::MatrixXd a = input;
  a.diagonal().setConstant(opt.diagonal);
  const double radius = opt.radius > 0.0 ? opt.radius : double(n);

  SolverResult res;
  Eigen::MatrixXd z = project_box_sum(a, s);
  Eigen::MatrixXd w = z;
  for (int it = 1; it <= opt.max_iter; ++it) {
    const Eigen::MatrixXd y = project_nuclear_ball(z, radius);
    Eigen::MatrixXd reflect = 2.0 * y - z + opt.step * a;
    reflect = 0.5 * (reflect + reflect.transpose()).eval();
    w = project_box_sum(reflect, s);
    const double change = (w - y).norm();
    z += opt.relaxation * (w - y);
    z = 0.5 * (z + z.transpose()).eval();
    res.iterations = it;
    if (change <= opt.tol_change * std::max(1.0, z.norm())) {
      res.residuals = constraint_residuals(w, s, radius);
      if (res.residuals.max() <= opt.tol_feasibility) {
        res.converged = true;
        break;
      }
    }
  }
  if (!res.converged) res.residuals = constraint_residuals(w, s, radius);
  res.y_hat = std::move(w);
  res.objective = (input.array() * res.y_hat.array()).sum();
  return res;
}

inline SolverResult solve_convex(const Adjacency& a, double s, const SolverOptions& opt = {}) {
  return solve_convex(a.to_dense(), s, opt);
}

inline SolverResult solve_convex(const ObservedMatrix& a, double s, const SolverOptions& opt = {}) {
  return solve_convex(a.to_adjacency().to_dense(), s, opt);
}

namespace detail {

/// Connected components of a symmetric 0/1 relation given as adjacency
/// lists; component ids follow first appearance.
inline std::vector<int> components(const std::vector<std::vector<std::size_t>>& adj) {
  std::vector<int> comp(adj.size(), -1);
  int next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t root = 0; root < adj.size(); ++root) {
    if (comp[root] >= 0) continue;
    comp[root] = next;
    stack.push_back(root);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t u : adj[v])
        if (comp[u] < 0) {
          comp[u] = next;
          stack.push_back(u);
        }
    }
    ++next;
  }
  return comp;
}

}  // namespace detail

/// Thresholds Y_hat and reads clusters off the connected components of the
/// off-diagonal relation. A node without thresholded neighbours is a
/// size-1 cluster when its diagonal entry passes the threshold and isolated
/// otherwise. Components that are not cliques are reported as failures.
inline RecoveryOutcome round_solution(const Eigen::MatrixXd& y_hat, double threshold) {
  const auto n = std::size_t(y_hat.rows());
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (y_hat(Eigen::Index(i), Eigen::Index(j)) > threshold) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
  const auto comp = detail::components(adj);
  const int count = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<std::size_t> size(std::size_t(count), 0);
  for (int c : comp) ++size[std::size_t(c)];
  for (std::size_t i = 0; i < n; ++i)
    if (adj[i].size() + 1 != size[std::size_t(comp[i])])
      return RecoveryOutcome::fail(FailureKind::rounding,
                                   "thresholded component of node " + std::to_string(i) +
                                       " is not a clique");

  std::vector<int> labels(n, 0);
  std::vector<int> label_of(std::size_t(count), -1);
  int next = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = std::size_t(comp[i]);
    if (size[c] == 1 && !(y_hat(Eigen::Index(i), Eigen::Index(i)) > threshold)) continue;
    if (label_of[c] < 0) label_of[c] = next++;
    labels[i] = label_of[c];
  }
  return RecoveryOutcome::success(Partition(std::move(labels)));
}

inline RecoveryOutcome round_solution(const SolverResult& result, double threshold) {
  return round_solution(result.y_hat, threshold);
}

struct ConvexRecovery {
  RecoveryOutcome outcome;
  SolverResult solver;
};

template <class Matrix>
ConvexRecovery recover_convex(const Matrix& a, double s, const SolverOptions& opt = {}) {
  ConvexRecovery out;
  out.solver = solve_convex(a, s, opt);
  if (!out.solver.converged)
    out.outcome = RecoveryOutcome::fail(
        FailureKind::nonconvergence,
        "no convergence after " + std::to_string(out.solver.iterations) + " iterations");
  else
    out.outcome = round_solution(out.solver, opt.rounding_threshold);
  return out;
}

/// Recovery with the program's inputs taken from a configuration. Unless
/// set, the radius is ||Y*||_* = number of clustered nodes, which is n only
/// when there are no isolated nodes.
template <class Matrix>
ConvexRecovery recover_convex(const Matrix& a, const ModelConfig& config, SolverOptions opt = {}) {
  if (opt.radius <= 0.0) opt.radius = double(config.clustered());
  return recover_convex(a, config.sum_sq_sizes(), opt);
}

}  // namespace hsbm
