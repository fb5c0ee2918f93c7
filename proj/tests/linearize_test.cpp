#include "gridcodec/linearize.hpp"
#include "gridcodec/waterfill.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>

namespace gridcodec {
namespace {

using testing::Rng;
using testing::task_of;
using testing::vec;

TEST(IdentifyRegion, HandExamples) {
  EXPECT_EQ(identify_region(vec({-3, -1, 2}), task_of(2.0)), IndexSet({0}));
  EXPECT_EQ(identify_region(vec({0, 0}), task_of(2.0)), IndexSet({0, 1}));
  EXPECT_EQ(identify_region(vec({-3, -1, 2}), task_of(3.0)), IndexSet({0, 1}));
}

TEST(LinearizeAt, SingleLoadedSlotHasZeroJacobian) {
  const auto lin = linearize_at(vec({-3, -1, 2}), task_of(2.0));
  EXPECT_EQ(lin.nstar, 1);
  EXPECT_TRUE(lin.H.isZero());
  EXPECT_EQ(lin.b, vec({2, 0, 0}));
}

TEST(LinearizeAt, TwoLoadedSlots) {
  const auto lin = linearize_at(vec({-3, -1, 2}), task_of(3.0));
  Matrix expected(3, 3);
  expected << -0.5, 0.5, 0, 0.5, -0.5, 0, 0, 0, 0;
  EXPECT_EQ(lin.H, expected);
  EXPECT_EQ(lin.b, vec({1.5, 1.5, 0}));

  // Exact inside the region.
  const Vector moved = vec({-3.1, -0.9, 2});
  const Vector affine = lin.H * moved + lin.b;
  EXPECT_LE((affine - solve_waterfill(moved, task_of(3.0)).x).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LinearizeAt, ActiveSetNeedNotBeAPrefix) {
  const auto lin = linearize_at(vec({4, -2, 7, -1}), task_of(2.0));
  EXPECT_EQ(lin.active, IndexSet({1, 3}));
  EXPECT_DOUBLE_EQ(lin.H(1, 3), 0.5);
  EXPECT_DOUBLE_EQ(lin.H(3, 3), -0.5);
  EXPECT_DOUBLE_EQ(lin.H(0, 1), 0.0);
}

TEST(LinearizeAt, StructuralProperties) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = rng.integer(1, 10);
    const Vector ell = rng.vector(dim, -5, 5);
    const TaskSpec task = task_of(rng.uniform(0.1, 20));
    const auto lin = linearize_at(ell, task);

    EXPECT_LE(lin.H.colwise().sum().cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE(lin.H.rowwise().sum().cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(lin.H, lin.H.transpose());
    EXPECT_NEAR(lin.b.sum(), task.energy, 1e-12 * std::max(1.0, task.energy));

    // Rows and columns outside the active set vanish.
    for (int j = 0; j < dim; ++j) {
      if (std::find(lin.active.begin(), lin.active.end(), j) != lin.active.end()) continue;
      EXPECT_TRUE(lin.H.row(j).isZero());
      EXPECT_TRUE(lin.H.col(j).isZero());
    }

    // H restricted to the active block plus identity is a projector.
    Matrix block(lin.nstar, lin.nstar);
    for (int a = 0; a < lin.nstar; ++a)
      for (int b = 0; b < lin.nstar; ++b) block(a, b) = lin.H(lin.active[a], lin.active[b]);
    const Matrix proj = block + Matrix::Identity(lin.nstar, lin.nstar);
    EXPECT_LE((proj * proj - proj).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(LinearizeAt, MatchesFiniteDifferencesAwayFromBoundaries) {
  Rng rng(12);
  int checked = 0;
  while (checked < 100) {
    const int dim = rng.integer(2, 8);
    const Vector ell = rng.vector(dim, -5, 5);
    const TaskSpec task = task_of(rng.uniform(0.1, 20));
    const auto sol = solve_waterfill(ell, task);
    if ((ell.array() - sol.mu).abs().minCoeff() < 1e-3) continue;
    ++checked;

    const auto lin = linearize_at(ell, task);
    for (int k = 0; k < dim; ++k) {
      Vector up = ell, down = ell;
      up[k] += 1e-5;
      down[k] -= 1e-5;
      const Vector column = (solve_waterfill(up, task).x - solve_waterfill(down, task).x) / 2e-5;
      EXPECT_LE((column - lin.H.col(k)).cwiseAbs().maxCoeff(), 1e-4);
    }
  }
}

}  // namespace
}  // namespace gridcodec
