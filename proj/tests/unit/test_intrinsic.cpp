#include <gtest/gtest.h>

#include <cmath>

#include "spie/intrinsic/reward.hpp"
#include "spie/repr/analytic.hpp"

using namespace spie;
using namespace spie::intrinsic;
using repr::OccupancyKind;
using repr::OccupancyMatrix;

namespace {

OccupancyMatrix sr3() {
  OccupancyMatrix m(OccupancyKind::kSR, 3, 0.9);
  m.values() << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  return m;
}

envs::Transition tr(StateId s, StateId s_next) { return {s, 0, 0.0, s_next, 0, false}; }

}  // namespace

TEST(Srr, HandComputed) {
  const auto m = sr3();
  // M[0, 2] - (3 + 6 + 9).
  EXPECT_DOUBLE_EQ(r_srr(m, tr(0, 2)), 3.0 - 18.0);
  EXPECT_DOUBLE_EQ(r_srr_a(m, tr(0, 2)), 3.0);
  EXPECT_DOUBLE_EQ(r_srr_b(m, tr(0, 2)), -18.0);
}

TEST(Srr, NonPositiveAndDecomposesOnFuzzedMatrices) {
  Rng rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20000; ++trial) {
    const int n = 1 + trial % 12;
    OccupancyMatrix m(OccupancyKind::kSR, static_cast<std::size_t>(n), 0.9);
    const double scale = std::pow(10.0, 8 * u(rng) - 4);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m.values()(i, j) = u(rng) < 0.3 ? 0.0 : scale * u(rng);
    }
    std::uniform_int_distribution<StateId> st(0, static_cast<StateId>(n - 1));
    const auto t = tr(st(rng), st(rng));
    const double r = r_srr(m, t);
    ASSERT_LE(r, 0.0);
    ASSERT_LE(std::abs(r - (r_srr_a(m, t) + r_srr_b(m, t))), 1e-12 * std::max(1.0, scale));
  }
}

TEST(Srr, RejectsWrongMatrixKind) {
  OccupancyMatrix f(OccupancyKind::kFR, 2, 0.9);
  EXPECT_THROW(r_srr(f, tr(0, 1)), std::invalid_argument);
}

TEST(SrBonus, InverseRowNormWithFloor) {
  const auto m = sr3();
  EXPECT_DOUBLE_EQ(r_sr(m, tr(1, 0)), 1.0 / 15.0);
  OccupancyMatrix zero(OccupancyKind::kSR, 2, 0.9);
  EXPECT_DOUBLE_EQ(r_sr(zero, tr(0, 1)), 1.0 / kNormEpsilon);
}

TEST(FrBonus, RowNorm) {
  OccupancyMatrix f(OccupancyKind::kFR, 2, 0.9);
  f.values() << 1, 0.25, 0.5, 1;
  EXPECT_DOUBLE_EQ(r_fr(f, tr(0, 1)), 1.25);
}

TEST(SrPrBonus, UsesPredecessorColumn) {
  const auto m = sr3();
  OccupancyMatrix n(OccupancyKind::kPR, 3, 0.9);
  n.values() << 1, 1, 1, 2, 2, 2, 3, 3, 10;
  EXPECT_DOUBLE_EQ(r_sr_pr(m, n, tr(0, 2)), 3.0 - 13.0);
}

TEST(SrrAnalytic, NonPositiveOnAnalyticSr) {
  Rng rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 10;
    Eigen::MatrixXd p(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) p(i, j) = u(rng);
      p.row(i) /= p.row(i).sum();
    }
    const auto m = repr::analytic_sr(p, 0.95);
    for (StateId s = 0; s < static_cast<StateId>(n); ++s) {
      for (StateId s2 = 0; s2 < static_cast<StateId>(n); ++s2) EXPECT_LE(r_srr(m, tr(s, s2)), 0.0);
    }
  }
}

TEST(Combine, ZeroBetaIsExtrinsicOnly) {
  EXPECT_EQ(combine(-1.0, 1e300, 0.0), -1.0);
  EXPECT_EQ(combine(2.0, -3.0, 10.0), -28.0);
}

TEST(IntrinsicKind, NamesRoundTripAndNeeds) {
  for (auto k : {IntrinsicKind::kNone, IntrinsicKind::kSR, IntrinsicKind::kFR, IntrinsicKind::kSRR,
                 IntrinsicKind::kSRR_A, IntrinsicKind::kSRR_B, IntrinsicKind::kSR_PR, IntrinsicKind::kSF,
                 IntrinsicKind::kSF_PF}) {
    EXPECT_EQ(parse_intrinsic_kind(to_string(k)), k);
  }
  EXPECT_EQ(parse_intrinsic_kind("SR-PR"), IntrinsicKind::kSR_PR);
  EXPECT_THROW(parse_intrinsic_kind("bonus"), std::invalid_argument);
  EXPECT_TRUE(needs_pr(IntrinsicKind::kSR_PR));
  EXPECT_TRUE(needs_sr(IntrinsicKind::kSR_PR));
  EXPECT_FALSE(needs_sr(IntrinsicKind::kFR));
  EXPECT_TRUE(needs_fr(IntrinsicKind::kFR));
  EXPECT_FALSE(is_tabular(IntrinsicKind::kSF_PF));
}

TEST(IntrinsicSpec, NegativeBetaRejected) {
  IntrinsicRewardSpec spec;
  spec.beta = -1.0;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}
