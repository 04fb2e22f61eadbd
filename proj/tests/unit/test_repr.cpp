#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "spie/envs/transition.hpp"
#include "spie/repr/analytic.hpp"
#include "spie/repr/occupancy.hpp"

using namespace spie;
using namespace spie::repr;

namespace {

Eigen::MatrixXd random_stochastic(int n, Rng& rng, bool dense = true) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd p(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) p(i, j) = dense || u(rng) < 0.4 ? u(rng) + 0.01 : 0.0;
    p(i, (i + 1) % n) += 0.5;  // ring edge keeps the chain irreducible
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

envs::Transition tr(StateId s, StateId s_next, bool done = false) { return {s, 0, 0.0, s_next, 0, done}; }

}  // namespace

TEST(AnalyticSr, TwoStateClosedForm) {
  const double a = 0.3, b = 0.6, g = 0.9;
  Eigen::MatrixXd p(2, 2);
  p << 1 - a, a, b, 1 - b;
  const double det = (1 - g * (1 - a)) * (1 - g * (1 - b)) - g * g * a * b;
  Eigen::MatrixXd expected(2, 2);
  expected << 1 - g * (1 - b), g * a, g * b, 1 - g * (1 - a);
  expected /= det;
  EXPECT_LE((analytic_sr(p, g).values() - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(AnalyticSr, RowsSumToHorizon) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_stochastic(2 + trial % 9, rng);
    const double g = 0.5 + 0.02 * trial;
    const auto m = analytic_sr(p, g);
    for (Eigen::Index s = 0; s < p.rows(); ++s) EXPECT_NEAR(m.row_l1(static_cast<StateId>(s)), 1 / (1 - g), 1e-9);
    EXPECT_GE(m.values().minCoeff(), 0.0);
  }
}

TEST(AnalyticSr, RejectsNonStochastic) {
  Eigen::MatrixXd p(2, 2);
  p << 0.5, 0.4, 0.5, 0.5;
  EXPECT_THROW(analytic_sr(p, 0.9), std::invalid_argument);
}

// F[:, j] solves f_j = 1 and f_s = g sum_s' P[s, s'] f_s' for s != j.
TEST(AnalyticFr, MatchesPerColumnSolve) {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + trial;
    const auto p = random_stochastic(n, rng, false);
    const double g = 0.9;
    const auto f = analytic_fr(p, g);
    for (int j = 0; j < n; ++j) {
      Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - g * p;
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
      a.row(j).setZero();
      a(j, j) = 1.0;
      rhs(j) = 1.0;
      const Eigen::VectorXd col = a.partialPivLu().solve(rhs);
      EXPECT_LE((f.values().col(j) - col).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(AnalyticFr, UnitDiagonalAndBelowSr) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_stochastic(2 + trial % 15, rng, trial % 2 == 0);
    const auto f = analytic_fr(p, 0.95);
    const auto m = analytic_sr(p, 0.95);
    for (Eigen::Index i = 0; i < p.rows(); ++i) EXPECT_NEAR(f.values()(i, i), 1.0, 1e-12);
    EXPECT_LE((f.values() - m.values()).maxCoeff(), 1e-12);
    EXPECT_LE(f.values().maxCoeff(), 1.0 + 1e-12);
  }
}

TEST(Stationary, MatchesLeftEigenvector) {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_stochastic(3 + trial, rng, false);
    const auto z = stationary_distribution(p).z;
    Eigen::EigenSolver<Eigen::MatrixXd> es(p.transpose());
    Eigen::Index best = 0;
    (es.eigenvalues().array() - std::complex<double>(1.0, 0.0)).abs().minCoeff(&best);
    Eigen::VectorXd v = es.eigenvectors().col(best).real();
    v /= v.sum();
    EXPECT_LE((z - v).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_NEAR(z.sum(), 1.0, 1e-12);
  }
}

TEST(Stationary, PeriodicChainStillConverges) {
  Eigen::MatrixXd p(2, 2);
  p << 0, 1, 1, 0;
  const auto z = stationary_distribution(p).z;
  EXPECT_NEAR(z(0), 0.5, 1e-12);
  EXPECT_NEAR(z(1), 0.5, 1e-12);
}

TEST(Stationary, ReducibleChainIsRejected) {
  Eigen::MatrixXd p(3, 3);
  p << 1, 0, 0, 0.5, 0.5, 0, 0, 0.5, 0.5;
  EXPECT_FALSE(is_irreducible(p));
  EXPECT_THROW(stationary_distribution(p), std::runtime_error);
  EXPECT_THROW(analytic_pr(p, 0.9), std::runtime_error);
}

TEST(AnalyticPr, ReversedThreeCycle) {
  // 0 -> 1 -> 2 -> 0: the predecessor of 1 is always 0.
  Eigen::MatrixXd p(3, 3);
  p << 0, 1, 0, 0, 0, 1, 1, 0, 0;
  const auto z = stationary_distribution(p).z;
  const Eigen::MatrixXd pr = retrospective_transition(p, z);
  EXPECT_NEAR(pr(0, 1), 1.0, 1e-12);
  EXPECT_NEAR(pr(1, 2), 1.0, 1e-12);
  EXPECT_NEAR(pr(2, 0), 1.0, 1e-12);
  // Columns of the retrospective kernel are distributions over predecessors.
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(pr.col(j).sum(), 1.0, 1e-12);
  const double g = 0.9;
  const auto n = analytic_pr(p, g);
  // N[:, 1]: 1 at s' = 1 itself, g at its predecessor 0, g^2 at 2, ...
  const double c = 1 / (1 - g * g * g);
  EXPECT_NEAR(n(1, 1), c, 1e-12);
  EXPECT_NEAR(n(0, 1), g * c, 1e-12);
  EXPECT_NEAR(n(2, 1), g * g * c, 1e-12);
}

TEST(AnalyticPr, ReciprocityOnRandomChains) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = random_stochastic(2 + trial % 19, rng, trial % 3 != 0);
    const double g = trial % 2 ? 0.9 : 0.5;
    const auto z = stationary_distribution(p).z;
    const Eigen::MatrixXd lhs = analytic_pr(p, z, g).values() * z.asDiagonal();
    const Eigen::MatrixXd rhs = z.asDiagonal() * analytic_sr(p, g).values();
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(AnalyticPr, ColumnsSumToHorizon) {
  Rng rng(6);
  const auto p = random_stochastic(8, rng);
  const auto n = analytic_pr(p, 0.8);
  for (StateId j = 0; j < 8; ++j) EXPECT_NEAR(n.col_l1(j), 5.0, 1e-9);
}

TEST(TdUpdate, SrSingleStepByHand) {
  OccupancyMatrix m(OccupancyKind::kSR, 3, 0.5);
  m.values() << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  sr_td_update(m, tr(0, 2), 0.1);
  // Row 0 += 0.1 (e_0 + 0.5 * [7 8 9] - [1 2 3]).
  EXPECT_NEAR(m(0, 0), 1 + 0.1 * (1 + 3.5 - 1), 1e-15);
  EXPECT_NEAR(m(0, 1), 2 + 0.1 * (4.0 - 2), 1e-15);
  EXPECT_NEAR(m(0, 2), 3 + 0.1 * (4.5 - 3), 1e-15);
  EXPECT_EQ(m(1, 0), 4);
}

TEST(TdUpdate, SrSelfLoopUsesPreUpdateRow) {
  OccupancyMatrix m(OccupancyKind::kSR, 2, 0.5);
  m.values() << 2, 1, 0, 0;
  sr_td_update(m, tr(0, 0), 1.0);
  EXPECT_NEAR(m(0, 0), 1 + 0.5 * 2, 1e-15);
  EXPECT_NEAR(m(0, 1), 0.5 * 1, 1e-15);
}

TEST(TdUpdate, DoneDropsBootstrap) {
  OccupancyMatrix m(OccupancyKind::kSR, 2, 0.9);
  m.values() << 0, 0, 5, 5;
  sr_td_update(m, tr(0, 1, true), 0.5);
  EXPECT_NEAR(m(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(m(0, 1), 0.0, 1e-15);
}

TEST(TdUpdate, FrMasksOwnColumn) {
  OccupancyMatrix f(OccupancyKind::kFR, 2, 0.5);
  f.values() << 0, 0, 4, 6;
  fr_td_update(f, tr(0, 1), 1.0);
  EXPECT_NEAR(f(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(f(0, 1), 0.5 * 6, 1e-15);
}

TEST(TdUpdate, PrUpdatesTargetColumn) {
  OccupancyMatrix n(OccupancyKind::kPR, 3, 0.5);
  n.values() << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  pr_td_update(n, tr(1, 2), 0.1);
  // Column 2 += 0.1 (e_2 + 0.5 * N[:, 1] - N[:, 2]).
  EXPECT_NEAR(n(0, 2), 3 + 0.1 * (0.5 * 2 - 3), 1e-15);
  EXPECT_NEAR(n(1, 2), 6 + 0.1 * (0.5 * 5 - 6), 1e-15);
  EXPECT_NEAR(n(2, 2), 9 + 0.1 * (1 + 0.5 * 8 - 9), 1e-15);
  EXPECT_EQ(n(0, 1), 2);
}

TEST(TdUpdate, DeterministicCycleConvergesToAnalytic) {
  Eigen::MatrixXd p(4, 4);
  p << 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0;
  const double g = 0.7;
  OccupancyMatrix m(OccupancyKind::kSR, 4, g), f(OccupancyKind::kFR, 4, g), n(OccupancyKind::kPR, 4, g);
  StateId s = 0;
  for (int t = 0; t < 20000; ++t) {
    const StateId next = (s + 1) % 4;
    sr_td_update(m, tr(s, next), 0.2);
    fr_td_update(f, tr(s, next), 0.2);
    pr_td_update(n, tr(s, next), 0.2);
    s = next;
  }
  EXPECT_LE((m.values() - analytic_sr(p, g).values()).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LE((f.values() - analytic_fr(p, g).values()).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LE((n.values() - analytic_pr(p, g).values()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(OccupancyCsv, RoundTrips) {
  OccupancyMatrix m(OccupancyKind::kPR, 3, 0.95);
  m.values() << 1.0 / 3, 2, 3, 4, 5e-17, 6, 7, 8, 9.125;
  std::stringstream buf;
  write_csv(buf, m);
  const auto back = read_csv(buf);
  EXPECT_EQ(back.kind(), OccupancyKind::kPR);
  EXPECT_EQ(back.gamma(), 0.95);
  EXPECT_EQ(back.values(), m.values());
}

TEST(OccupancyKind, ParsesNames) {
  for (auto k : {OccupancyKind::kSR, OccupancyKind::kFR, OccupancyKind::kPR}) {
    EXPECT_EQ(parse_occupancy_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_occupancy_kind("XR"), std::invalid_argument);
}
