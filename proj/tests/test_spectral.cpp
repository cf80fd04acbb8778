#include "hsbm/rng.hpp"
#include "hsbm/spectral.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace hsbm;

TEST(SpectralNorm, SmallKnown) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  d.diagonal() << 3.0, -5.0, 1.0;
  EXPECT_TRUE(RelNear(spectral_norm(d), 5.0, 1e-10));
  EXPECT_TRUE(RelNear(spectral_norm(Eigen::MatrixXd::Ones(4, 4)), 4.0, 1e-10));
  EXPECT_EQ(spectral_norm(Eigen::MatrixXd::Zero(5, 5)), 0.0);
  EXPECT_THROW(spectral_norm(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
}

TEST(SpectralNorm, MatchesJacobi) {
  rng::Stream g(41, 0);
  for (int t = 0; t < 5; ++t) {
    Eigen::MatrixXd m(50, 50);
    for (int i = 0; i < 50; ++i)
      for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = 2.0 * g.next_uniform() - 1.0;
    EXPECT_TRUE(RelNear(spectral_norm(m, 1e-10, std::uint64_t(t)), oracle::spectral_norm(m), 1e-9));
  }
}

TEST(SpectralNorm, Homogeneous) {
  rng::Stream g(42, 0);
  Eigen::MatrixXd m(30, 30);
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = g.next_uniform() - 0.3;
  const double base = spectral_norm(m);
  EXPECT_TRUE(RelNear(spectral_norm(-2.5 * m), 2.5 * base, 1e-9));
}

TEST(Lemma3, KnownValues) {
  const ModelConfig c(200, {{100, 0.5}, {100, 0.5}}, 0.05);
  EXPECT_TRUE(RelNear(lemma3_bound(c), 5.0 + std::sqrt(9.5), 1e-12));
  EXPECT_NEAR(lemma3_bound(c), 8.082, 1e-3);
  // With q = 0 the second term is sqrt(log n).
  const ModelConfig z(8886111, {{100, 0.5}}, 0.0);
  EXPECT_TRUE(RelNear(lemma3_bound(z), 5.0 + std::sqrt(std::log(8886111.0)), 1e-12));
  EXPECT_NEAR(std::sqrt(std::log(8886111.0)), 4.0, 1e-6);
}

TEST(Lemma3, MonotoneOnLowerHalf) {
  rng::Stream g(43, 0);
  for (int t = 0; t < 200; ++t) {
    const double q = 0.2 * g.next_uniform();
    const double p = q + (0.5 - q) * g.next_uniform() + 1e-9;
    const double dp = (0.5 - p) * g.next_uniform();
    const ModelConfig a(500, {{100, p}, {60, std::min(0.5, p + 0.1)}}, q);
    const ModelConfig b(500, {{100, p + dp}, {60, std::min(0.5, p + 0.1)}}, q);
    EXPECT_LE(lemma3_bound(a), lemma3_bound(b) + 1e-12);
    EXPECT_LE(lemma5_bound(a, 0.3, 1.0), lemma5_bound(b, 0.3, 1.0) + 1e-12);
  }
}

TEST(Lemma5, KnownValues) {
  // sigma_max = 5 (100 * 0.5 * 0.5 = 25), sigma_0^2 = 9.5.
  const ModelConfig c(200, {{100, 0.5}, {100, 0.5}}, 0.05);
  EXPECT_TRUE(RelNear(lemma5_bound(c, 0.5, 0.0), 30.0, 1e-12));
  EXPECT_TRUE(RelNear(lemma5_bound(c, 1e-9, 0.0), 20.0, 1e-8));
  EXPECT_TRUE(RelNear(lemma5_deviation(200), std::sqrt(2.0 * std::log(200.0)), 1e-12));
  EXPECT_THROW(lemma5_bound(c, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(lemma5_bound(c, 0.6, 0.0), std::invalid_argument);
}

TEST(Lemma5, SameOrderAsLemma3) {
  rng::Stream g(44, 0);
  for (int t = 0; t < 20; ++t) {
    const double q = 0.01 + 0.2 * g.next_uniform();
    const ModelConfig c(1000, {{200 + g.below(200), q + 0.05 + 0.6 * g.next_uniform()},
                               {100 + g.below(200), q + 0.05 + 0.6 * g.next_uniform()}},
                        q);
    const double ratio = lemma5_bound(c, 0.5, lemma5_deviation(c.n())) / lemma3_bound(c);
    EXPECT_GE(ratio, 1.0);
    EXPECT_LE(ratio, 10.0);
  }
}

TEST(Bernstein, Values) {
  EXPECT_EQ(bernstein_tail(0.0, 1.0, 1.0), 1.0);
  EXPECT_TRUE(RelNear(bernstein_tail(3.0, 1.0, 1.0), 2.0 * std::exp(-2.25), 1e-12));
  EXPECT_NEAR(bernstein_tail(3.0, 1.0, 1.0), 0.2107, 1e-4);
  double prev = 1.0;
  for (double t = 0.5; t < 20.0; t += 0.5) {
    const double v = bernstein_tail(t, 2.0, 0.5);
    EXPECT_LE(v, prev);
    prev = v;
    EXPECT_LE(v, bernstein_tail(t, 3.0, 0.5));
    EXPECT_LE(v, bernstein_tail(t, 2.0, 1.0));
  }
  EXPECT_THROW(bernstein_tail(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST(Concentration, DegenerateIsExact) {
  const ModelConfig c(20, {{10, 1.0}, {10, 1.0}}, 0.0);
  const auto s = concentration_experiment(c, 3, 1);
  EXPECT_EQ(s.max_ratio, 0.0);
}

TEST(Concentration, BoundedRatioAndWorkerInvariance) {
  const ModelConfig c(200, {{100, 0.5}, {100, 0.5}}, 0.05);
  const auto a = concentration_experiment(c, 10, 5, 1);
  const auto b = concentration_experiment(c, 10, 5, 3);
  EXPECT_LE(a.max_ratio, 4.0);
  EXPECT_GT(a.min_ratio, 0.5);
  ASSERT_EQ(a.trials.size(), b.trials.size());
  for (std::size_t i = 0; i < a.trials.size(); ++i) EXPECT_EQ(a.trials[i].norm, b.trials[i].norm);
}
