#include "hsbm/convex.hpp"
#include "hsbm/exhaustive.hpp"
#include "hsbm/graph.hpp"
#include "hsbm/rng.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace hsbm;

TEST(Solver, NoiselessBlocks) {
  const Partition p({1, 1, 1, 1, 1, 2, 2, 2, 2, 2});
  Eigen::MatrixXd a = clustering_matrix(p);
  a.diagonal().setZero();
  const auto res = solve_convex(a, 50.0);
  ASSERT_TRUE(res.converged);
  EXPECT_LE((res.y_hat - clustering_matrix(p)).cwiseAbs().maxCoeff(), 1e-4);
  const auto out = round_solution(res, 0.5);
  ASSERT_TRUE(out.ok());
  EXPECT_TRUE(partitions_equal(*out.partition, p));
}

TEST(Solver, ZeroInput) {
  const auto res = solve_convex(Eigen::MatrixXd::Zero(6, 6), 0.0);
  EXPECT_TRUE(res.converged);
  EXPECT_LE(res.y_hat.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Solver, OptionValidation) {
  SolverOptions o;
  o.relaxation = 2.0;
  EXPECT_THROW(solve_convex(Eigen::MatrixXd::Zero(2, 2), 0.0, o), std::invalid_argument);
  o = {};
  o.max_iter = 0;
  EXPECT_THROW(solve_convex(Eigen::MatrixXd::Zero(2, 2), 0.0, o), std::invalid_argument);
  EXPECT_THROW(solve_convex(Eigen::MatrixXd::Zero(2, 3), 0.0), std::invalid_argument);
}

TEST(Solver, FeasibilityAndDominance) {
  // Ten isolated nodes, so the radius is the clustered count.
  const ModelConfig c(60, {{30, 0.6}, {20, 0.7}}, 0.1);
  const auto p = planted_partition(c);
  const auto y_star = clustering_matrix(p);
  SolverOptions o;
  o.radius = 50.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto a = sample_adjacency(c, p, seed).to_dense();
    const auto res = solve_convex(a, c.sum_sq_sizes(), o);
    ASSERT_TRUE(res.converged);
    EXPECT_LE(oracle::nuclear_norm(res.y_hat), 50.0 * (1.0 + 1e-6));
    EXPECT_LE(std::abs(res.y_hat.sum() - c.sum_sq_sizes()), 1e-6 * 3600.0);
    EXPECT_GE(res.y_hat.minCoeff(), -1e-8);
    EXPECT_LE(res.y_hat.maxCoeff(), 1.0 + 1e-8);
    // The solver maximizes <A,Y> + tr(Y); Y* is feasible for it.
    const double planted = (a.array() * y_star.array()).sum() + y_star.trace();
    const double reached = res.objective + res.y_hat.trace();
    EXPECT_GE(reached, planted - 1e-3 * planted);
  }
}

TEST(Solver, DiagonalOption) {
  SolverOptions o;
  o.diagonal = 1.5;
  EXPECT_THROW(solve_convex(Eigen::MatrixXd::Zero(2, 2), 0.0, o), std::invalid_argument);
  // The reported objective ignores the diagonal placed on A.
  const ModelConfig c(10, {{5, 1.0}, {5, 1.0}}, 0.0);
  const auto y = clustering_matrix(planted_partition(c));
  Eigen::MatrixXd a = y;
  a.diagonal().setZero();
  const auto res = solve_convex(a, 50.0);
  EXPECT_NEAR(res.objective, 40.0, 1e-3);
}

TEST(Convex, IsolatedNodesUseClusteredRadius) {
  const ModelConfig c(120, {{40, 0.7}, {40, 0.7}}, 0.1);
  const auto p = planted_partition(c);
  int exact = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto rec = recover_convex(sample_adjacency(c, p, seed).to_dense(), c);
    exact += rec.outcome.ok() && partitions_equal(*rec.outcome.partition, p);
  }
  EXPECT_EQ(exact, 5);
}

TEST(Solver, NonConvergenceReported) {
  const ModelConfig c(40, {{20, 0.6}, {20, 0.6}}, 0.2);
  const auto a = sample_adjacency(c, planted_partition(c), 1).to_dense();
  SolverOptions o;
  o.max_iter = 1;
  o.tol_change = 1e-15;
  const auto rec = recover_convex(a, c.sum_sq_sizes(), o);
  EXPECT_FALSE(rec.solver.converged);
  EXPECT_EQ(rec.outcome.failure, FailureKind::nonconvergence);
}

TEST(Rounding, ExactClusteringMatrix) {
  const Partition p({2, 0, 2, 1, 1, 3});
  const auto out = round_solution(clustering_matrix(p), 0.5);
  ASSERT_TRUE(out.ok());
  EXPECT_TRUE(partitions_equal(*out.partition, p));
}

TEST(Rounding, SoftClique) {
  Eigen::MatrixXd y = Eigen::MatrixXd::Constant(6, 6, 0.1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) y(i, j) = 0.6;
  const auto out = round_solution(y, 0.5);
  ASSERT_TRUE(out.ok());
  EXPECT_TRUE(partitions_equal(*out.partition, Partition({1, 1, 1, 0, 0, 0})));
}

TEST(Rounding, DanglingEntryFails) {
  Eigen::MatrixXd y = clustering_matrix(Partition({1, 1, 1, 2, 2, 2}));
  y(2, 3) = y(3, 2) = 0.55;
  const auto out = round_solution(y, 0.5);
  EXPECT_FALSE(out.ok());
  EXPECT_EQ(out.failure, FailureKind::rounding);
}

TEST(Convex, AgreesWithExhaustive) {
  const ModelConfig c(10, {{5, 0.9}, {5, 0.9}}, 0.05);
  const auto p = planted_partition(c);
  int agree = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto a = sample_adjacency(c, p, rng::derive_seed(77, seed));
    const auto rec = recover_convex(a.to_dense(), c.sum_sq_sizes());
    const auto ex = solve_exhaustive(a, c.sizes());
    if (!rec.outcome.ok()) continue;
    bool hit = false;
    for (const auto& q : ex.argmax) hit = hit || partitions_equal(q, *rec.outcome.partition);
    agree += hit;
  }
  EXPECT_GE(agree, 95);
}

TEST(Convex, EasyRegimeRecovery) {
  const ModelConfig c(200, {{100, 0.5}, {100, 0.5}}, 0.05);
  const auto p = planted_partition(c);
  int exact = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rec = recover_convex(sample_adjacency(c, p, seed).to_dense(), c.sum_sq_sizes());
    exact += rec.outcome.ok() && partitions_equal(*rec.outcome.partition, p);
  }
  EXPECT_EQ(exact, 20);
}

TEST(Convex, ObservedInput) {
  const ModelConfig c(100, {{50, 0.8}, {50, 0.8}}, 0.05, 0.6);
  const auto p = planted_partition(c);
  const auto o = sample_observed(c, p, 2);
  const auto rec = recover_convex(o, c.sum_sq_sizes());
  ASSERT_TRUE(rec.outcome.ok());
  EXPECT_TRUE(partitions_equal(*rec.outcome.partition, p));
}
