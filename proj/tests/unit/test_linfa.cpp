#include <gtest/gtest.h>

#include <cmath>

#include "spie/linfa/linear_q.hpp"
#include "spie/linfa/rff.hpp"
#include "spie/linfa/successor_features.hpp"
#include "spie/repr/occupancy.hpp"

using namespace spie;
using namespace spie::linfa;
using intrinsic::IntrinsicKind;

namespace {

Eigen::VectorXd one_hot(int n, int i) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v(i) = 1.0;
  return v;
}

}  // namespace

TEST(Rff, InnerProductApproximatesGaussianKernel) {
  const double sigma = 0.5;
  const auto spec = make_rff(4096, sigma, 7);
  Rng rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector2d x(u(rng), u(rng)), y(u(rng), u(rng));
    const double kernel = std::exp(-(x - y).squaredNorm() / (2 * sigma * sigma));
    worst = std::max(worst, std::abs(rff_features(spec, x).dot(rff_features(spec, y)) - kernel));
  }
  EXPECT_LE(worst, 0.05);
}

TEST(Rff, DeterministicPerSeedAndFloatPathAgrees) {
  const auto a = make_rff(128, 0.5, 3), b = make_rff(128, 0.5, 3), c = make_rff(128, 0.5, 4);
  EXPECT_EQ(a.frequencies, b.frequencies);
  EXPECT_NE(a.frequencies, c.frequencies);
  const Eigen::Vector2d x(0.3, 0.8);
  Eigen::VectorXf f;
  rff_features(a, x, f);
  EXPECT_LE((f.cast<double>() - rff_features(a, x)).cwiseAbs().maxCoeff(), 1e-5);
}

TEST(Rff, NormalizeMapsBoundsToUnitSquare) {
  const auto lo = normalize({-1.2, -0.07}), hi = normalize({0.6, 0.07});
  EXPECT_NEAR(lo(0), 0.0, 1e-15);
  EXPECT_NEAR(lo(1), 0.0, 1e-15);
  EXPECT_NEAR(hi(0), 1.0, 1e-15);
  EXPECT_NEAR(hi(1), 1.0, 1e-15);
}

TEST(SuccessorFeatures, OneHotMatchesTabularSrStepForStep) {
  const int n = 5;
  const double g = 0.9, eta = 0.3;
  LinearSf sf(n, 1, g);
  repr::OccupancyMatrix m(repr::OccupancyKind::kSR, n, g);
  Rng rng(4);
  std::uniform_int_distribution<int> st(0, n - 1);
  int s = 0;
  for (int t = 0; t < 500; ++t) {
    const int next = st(rng);
    const bool done = t % 37 == 36;
    sf_td_step(sf, one_hot(n, s), 0, one_hot(n, next), 0, eta, done);
    repr::sr_td_update(m, {static_cast<StateId>(s), 0, 0.0, static_cast<StateId>(next), 0, done}, eta);
    // psi(s) = W e_s is the SR row of s.
    ASSERT_LE((sf.weights(0).transpose() - m.values()).cwiseAbs().maxCoeff(), 1e-12) << t;
    s = next;
  }
}

TEST(PredecessorFeatures, OneHotMatchesTabularPrStepForStep) {
  const int n = 5;
  const double g = 0.8, eta = 0.25;
  LinearPf pf(n, g);
  repr::OccupancyMatrix pr(repr::OccupancyKind::kPR, n, g);
  Rng rng(5);
  std::uniform_int_distribution<int> st(0, n - 1);
  int s = 0;
  for (int t = 0; t < 500; ++t) {
    const int next = st(rng);
    const bool done = t % 41 == 40;
    pf_td_step(pf, one_hot(n, s), one_hot(n, next), eta, done);
    repr::pr_td_update(pr, {static_cast<StateId>(s), 0, 0.0, static_cast<StateId>(next), 0, done}, eta);
    // xi(s') = V e_s' is the PR column of s'.
    ASSERT_LE((pf.weights() - pr.values()).cwiseAbs().maxCoeff(), 1e-12) << t;
    s = next;
  }
}

TEST(SuccessorFeatures, StepMovesPredictionByEtaDelta) {
  const auto spec = make_rff(32, 0.5, 1);
  LinearSf sf(32, 2, 0.95);
  sf.weights(1).setConstant(0.01);
  const auto phi = rff_features(spec, Eigen::Vector2d(0.2, 0.4));
  const auto phi2 = rff_features(spec, Eigen::Vector2d(0.25, 0.45));
  const Eigen::VectorXd before = sf.psi(phi, 1);
  const Eigen::VectorXd delta = sf_td_step(sf, phi, 1, phi2, 0, 0.2);
  EXPECT_LE((sf.psi(phi, 1) - before - 0.2 * delta).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE(sf.weights(0).isZero());
}

TEST(SfPfBonus, FormulaAndFloor) {
  EXPECT_DOUBLE_EQ(r_sf_pf_from_norms(2.0, 4.0), 0.5 - 0.25);
  EXPECT_DOUBLE_EQ(r_sf_pf_from_norms(0.0, 4.0), 1.0 / kNormEpsilon - 0.25);
  EXPECT_DOUBLE_EQ(r_sf_from_norm(0.5), 2.0);
}

TEST(DeferredMatrix, MatchesDenseAccumulation) {
  const int d = 16;
  DeferredMatrix w(d);
  Eigen::MatrixXf dense = Eigen::MatrixXf::Zero(d, d);
  Rng rng(6);
  std::normal_distribution<float> nd(0.0f, 1.0f);
  auto rand_vec = [&] {
    Eigen::VectorXf v(d);
    for (int i = 0; i < d; ++i) v(i) = nd(rng);
    return v;
  };
  Eigen::VectorXf out;
  for (int step = 0; step < 100; ++step) {
    const auto u = rand_vec(), v = rand_vec(), x = rand_vec();
    w.add_outer(u, v);
    dense += u * v.transpose();
    out.resize(d);
    w.apply(x, out);
    ASSERT_LE((out - dense * x).cwiseAbs().maxCoeff(), 1e-3f * (1.0f + (dense * x).cwiseAbs().maxCoeff()));
  }
  EXPECT_LE((w.dense() - dense).cwiseAbs().maxCoeff(), 1e-3f);
}

TEST(SfPfLearner, TracksDoubleReference) {
  const std::size_t d = 64, n_actions = 3;
  const auto spec = make_rff(d, 0.5, 2);
  SfPfLearner fast(d, n_actions, 0.95, 0.2, true, 0.95, 0.2);
  LinearSf sf(d, n_actions, 0.95);
  LinearPf pf(d, 0.95);
  Rng rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> act(0, n_actions - 1);
  Eigen::Vector2d x(u(rng), u(rng));
  std::size_t a = act(rng);
  Eigen::VectorXd phi = rff_features(spec, x);
  Eigen::VectorXf phi_f;
  rff_features(spec, x, phi_f);
  fast.begin(phi_f, a);
  for (int t = 0; t < 2000; ++t) {
    const bool done = t % 150 == 149;
    // Small random drift, like a trajectory.
    Eigen::Vector2d x2 = (x + 0.05 * Eigen::Vector2d(u(rng) - 0.5, u(rng) - 0.5)).cwiseMax(0.0).cwiseMin(1.0);
    const std::size_t a2 = act(rng);
    const Eigen::VectorXd phi2 = rff_features(spec, x2);
    Eigen::VectorXf phi2_f;
    rff_features(spec, x2, phi2_f);
    const auto norms = fast.step(phi_f, a, phi2_f, a2, done);
    sf_td_step(sf, phi, a, phi2, a2, 0.2, done);
    pf_td_step(pf, phi, phi2, 0.2, done);
    const double psi_ref = sf.psi(phi, a).lpNorm<1>();
    const double xi_ref = pf.xi(phi2).lpNorm<1>();
    ASSERT_NEAR(norms.psi, psi_ref, 1e-3 * std::max(1.0, psi_ref)) << t;
    ASSERT_NEAR(norms.xi, xi_ref, 1e-3 * std::max(1.0, xi_ref)) << t;
    if (done) {
      x = Eigen::Vector2d(u(rng), u(rng));
      a = act(rng);
      phi = rff_features(spec, x);
      rff_features(spec, x, phi_f);
      fast.begin(phi_f, a);
    } else {
      x = x2;
      a = a2;
      phi = phi2;
      phi_f = phi2_f;
    }
  }
  for (std::size_t k = 0; k < n_actions; ++k) {
    EXPECT_LE((fast.sf_weights(k) - sf.weights(k)).cwiseAbs().maxCoeff(), 1e-3);
  }
  EXPECT_LE((fast.pf_weights() - pf.weights()).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(LinearQ, ConfigValidation) {
  LinearAgentConfig c;
  EXPECT_NO_THROW(c.validate());
  c.kind = IntrinsicKind::kSRR;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  LinearAgentConfig d;
  d.gamma = 1.0;
  EXPECT_THROW(d.validate(), std::invalid_argument);
  EXPECT_THROW(run_linear_q(LinearAgentConfig{}, 0), std::invalid_argument);
}

TEST(LinearQ, EpisodeCapTruncatesWithoutTermination) {
  LinearAgentConfig c;
  c.kind = IntrinsicKind::kNone;
  c.epsilon = 0.0;
  const auto run = run_linear_q(c, 3, 50);
  ASSERT_EQ(run.episodes.size(), 3u);
  for (const auto& e : run.episodes) {
    EXPECT_EQ(e.length, 50);
    EXPECT_FALSE(e.terminated);
    EXPECT_EQ(e.ret, 0.0);
  }
  EXPECT_EQ(first_success_episode(run), -1);
}

TEST(LinearQ, ReproducibleAndSeedSensitive) {
  LinearAgentConfig c;
  c.seed = 2;
  const auto a = run_linear_q(c, 2, 3000), b = run_linear_q(c, 2, 3000);
  EXPECT_TRUE(harness::same_trajectory(a, b));
  c.seed = 3;
  EXPECT_FALSE(harness::same_trajectory(a, run_linear_q(c, 2, 3000)));
}

TEST(LinearQ, ZeroBetaMatchesPlainQLearning) {
  LinearAgentConfig plain;
  plain.kind = IntrinsicKind::kNone;
  for (auto k : {IntrinsicKind::kSF, IntrinsicKind::kSF_PF}) {
    LinearAgentConfig c = plain;
    c.kind = k;
    c.beta = 0.0;
    EXPECT_TRUE(harness::same_trajectory(run_linear_q(plain, 3, 2000), run_linear_q(c, 3, 2000)));
  }
}

TEST(LinearQ, SuccessIsRecorded) {
  // The default SF-PF agent reaches the flag in its first uncapped episodes.
  const auto run = run_linear_q(LinearAgentConfig{}, 2, kMountainCarEpisodeCap);
  const long first = first_success_episode(run);
  ASSERT_GE(first, 0);
  const auto& e = run.episodes[static_cast<std::size_t>(first)];
  EXPECT_TRUE(e.terminated);
  EXPECT_EQ(e.ret, 1.0);
  EXPECT_LT(e.length, kMountainCarEpisodeCap);
}
