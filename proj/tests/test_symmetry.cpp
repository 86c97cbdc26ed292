#include "cylbill/symmetry.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace cylbill;

TEST(LatticeSymmetry, FortyEightDistinctOrthogonalMaps) {
  const auto& group = LatticeSymmetry::all();
  std::set<std::pair<std::array<int, 3>, std::array<int, 3>>> seen;
  for (const auto& g : group) {
    seen.insert({g.perm, g.sign});
    Eigen::Matrix3d M;
    for (int i = 1; i <= 3; ++i) M.col(ax(i)) = g.apply(unit_vector(i));
    EXPECT_NEAR((M.transpose() * M - Eigen::Matrix3d::Identity()).norm(), 0.0, 1e-15);
  }
  EXPECT_EQ(seen.size(), 48u);
}

TEST(LatticeSymmetry, GroupLaws) {
  const auto& group = LatticeSymmetry::all();
  Rng rng(31);
  for (const auto& g : group) {
    EXPECT_EQ(g.compose(g.inverse()), LatticeSymmetry{});
    EXPECT_EQ(g.inverse().compose(g), LatticeSymmetry{});
    const auto& h = group[rng() % 48];
    const Vec3 x = cylbill::testing::random_box(rng, -3, 3);
    EXPECT_NEAR((g.compose(h).apply(x) - g.apply(h.apply(x))).norm(), 0.0, 1e-14);
  }
}

TEST(LatticeSymmetry, ActionsAgreeWithLinearMap) {
  Rng rng(32);
  for (const auto& g : LatticeSymmetry::all()) {
    const Cell c(static_cast<int>(rng() % 7) - 3, static_cast<int>(rng() % 7) - 3, static_cast<int>(rng() % 7) - 3);
    EXPECT_EQ(g.apply(c).cast<double>(), g.apply(Vec3(c.cast<double>())));
    for (int i = 0; i < 6; ++i) {
      const Letter l = Letter::from_index(i);
      const Letter m = g.apply(l);
      const Vec3 img = g.apply(Vec3(l.sign * unit_vector(l.axis)));
      EXPECT_EQ(img, m.sign * unit_vector(m.axis));
      const auto [axis, sign] = g.apply_direction(l.axis, l.sign);
      EXPECT_EQ(axis, m.axis);
      EXPECT_EQ(sign, m.sign);
    }
    for (int axis = 1; axis <= 3; ++axis) {
      const ScattererAxis line{axis, {static_cast<int>(rng() % 5) - 2, static_cast<int>(rng() % 5) - 2}};
      const ScattererAxis image = g.apply(line);
      for (int rep = 0; rep < 5; ++rep) {
        const Vec3 p = cylbill::testing::random_box(rng, -3, 3);
        EXPECT_NEAR(image.distance(g.apply(p)), line.distance(p), 1e-13);
      }
    }
  }
}

TEST(CellSymmetry, OntoMapsReferenceCubeToCell) {
  Rng rng(33);
  for (const auto& g : LatticeSymmetry::all()) {
    const Cell cell(static_cast<int>(rng() % 9) - 4, static_cast<int>(rng() % 9) - 4, static_cast<int>(rng() % 9) - 4);
    const CellSymmetry s = CellSymmetry::onto(g, cell);
    for (int rep = 0; rep < 10; ++rep) {
      const Vec3 x = cylbill::testing::random_box(rng, 0.0, 1.0);
      EXPECT_EQ(cell_of(s.apply(x)), cell);
      EXPECT_NEAR((s.inverse().apply(s.apply(x)) - x).norm(), 0.0, 1e-13);
    }
  }
}

TEST(CellSymmetry, EdgesAndForcesTransformConsistently) {
  Rng rng(34);
  for (const auto& g : LatticeSymmetry::all()) {
    const Cell cell(static_cast<int>(rng() % 5) - 2, static_cast<int>(rng() % 5) - 2, static_cast<int>(rng() % 5) - 2);
    const CellSymmetry s = CellSymmetry::onto(g, cell);
    for (const auto& line : cell_lines(Cell::Zero())) {
      const Edge e{line.axis, [&] {
                     Cell b = Cell::Zero();
                     const auto [j, k] = other_axes(line.axis);
                     b[ax(j)] = line.base[0];
                     b[ax(k)] = line.base[1];
                     return b;
                   }()};
      ASSERT_TRUE(e.on_cell(Cell::Zero()));
      const Edge img = s.apply(e);
      EXPECT_TRUE(img.on_cell(cell));
      const double t = uniform01(rng);
      const Vec3 p = s.apply(e.point(t));
      EXPECT_NEAR(img.line().distance(p), 0.0, 1e-13);
      for (int force : {-1, 1}) {
        const int f = s.apply_force(e, force);
        const Vec3 dir = g.apply(Vec3(force * unit_vector(e.axis)));
        EXPECT_EQ(dir, f * unit_vector(img.axis));
      }
    }
  }
}
