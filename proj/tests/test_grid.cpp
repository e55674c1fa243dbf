#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "landau/grid.hpp"

namespace landau {
namespace {

TEST(Grid, RejectsOddOrSmallCellCounts) {
  EXPECT_THROW(build_grid(7, 5.0), std::invalid_argument);
  EXPECT_THROW(build_grid(6, 5.0), std::invalid_argument);
  EXPECT_THROW(build_grid(16, 0.0), std::invalid_argument);
  EXPECT_NO_THROW(build_grid(8, 1.0));
}

TEST(Grid, OddCountMessageNamesConstraint) {
  try {
    build_grid(7, 5.0);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("N must be even"), std::string::npos);
  }
}

TEST(Grid, CellCentersAreSymmetric) {
  const auto g = build_grid(32, 5.0);
  EXPECT_DOUBLE_EQ(g.spacing(), 0.3125);
  EXPECT_DOUBLE_EQ(g.center(0), -5.0 + 0.15625);
  for (int i = 0; i < g.cells(); ++i) EXPECT_DOUBLE_EQ(g.center(i), -g.center(g.cells() - 1 - i));
}

TEST(Grid, IndexIsXFastest) {
  const auto g = build_grid(8, 1.0);
  EXPECT_EQ(g.index(1, 0, 0), 1u);
  EXPECT_EQ(g.index(0, 1, 0), 8u);
  EXPECT_EQ(g.index(0, 0, 1), 64u);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto c = g.coords(i);
    EXPECT_EQ(g.index(c[0], c[1], c[2]), i);
  }
}

TEST(Grid, MirrorNegatesPosition) {
  const auto g = build_grid(10, 2.0);
  for (std::size_t i = 0; i < g.size(); i += 7) {
    const auto v = g.position(i), w = g.position(g.mirror(i));
    for (int a = 0; a < 3; ++a) EXPECT_DOUBLE_EQ(v[a], -w[a]);
  }
}

TEST(ScalarField, DistributionRejectsNegativeAndNonFinite) {
  const auto g = build_grid(8, 1.0);
  std::vector<double> v(g.size(), 1.0);
  v[3] = -1e-3;
  EXPECT_THROW(ScalarField::distribution(g, v), std::invalid_argument);
  v[3] = std::nan("");
  EXPECT_THROW(ScalarField(g, v), std::invalid_argument);
  EXPECT_THROW(ScalarField(g, std::vector<double>(5, 1.0)), std::invalid_argument);
}

TEST(ScalarField, ArithmeticRequiresSameGrid) {
  const ScalarField a(build_grid(8, 1.0)), b(build_grid(8, 2.0));
  ScalarField c = a;
  EXPECT_THROW(c += b, std::invalid_argument);
}

TEST(WeightedNorms, GaussianMassAndMoments) {
  const auto g = build_grid(48, 6.0);
  const auto f = ScalarField::sample(g, [](const Vec3& v) { return std::exp(-dot(v, v)); });
  const double pi32 = std::pow(std::numbers::pi, 1.5);
  EXPECT_NEAR(weighted_integral(f, 0.0), pi32, 1e-10 * pi32);
  EXPECT_NEAR(weighted_integral(f, 2.0), 13.9208199920792696, 1e-9);
  EXPECT_NEAR(weighted_integral(f, 3.0), 23.8433655153086602, 1e-9);
  EXPECT_NEAR(weighted_lp_norm(f, 2.0, 2.0), 2.60142471033712645, 1e-9);
}

TEST(WeightedNorms, NegativeWeightNeedsFineSpacing) {
  const auto g = build_grid(64, 4.0);
  const auto f = ScalarField::sample(g, [](const Vec3& v) { return std::exp(-dot(v, v)); });
  EXPECT_NEAR(weighted_lp_norm(f, 3.0, -3.0), 0.677747748856507721, 1e-9);
}

TEST(WeightedNorms, RejectsExponentBelowOne) {
  const ScalarField f(build_grid(8, 1.0));
  EXPECT_THROW(weighted_lp_norm(f, 0.5, 0.0), std::invalid_argument);
}

TEST(WeightedNorms, HomogeneousOfDegreeOne) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto g = build_grid(8, 2.0);
  std::vector<double> v(g.size());
  for (auto& x : v) x = u(rng);
  const ScalarField f(g, v);
  for (double p : {1.0, 4.0 / 3.0, 2.0, 3.0, 6.0}) {
    const double base = weighted_lp_norm(f, p, 1.5);
    EXPECT_NEAR(weighted_lp_norm(3.0 * f, p, 1.5), 3.0 * base, 1e-12 * base);
  }
}

TEST(Differences, GradientOfLinearInteriorIsExact) {
  const auto g = build_grid(12, 3.0);
  const auto f = ScalarField::sample(g, [](const Vec3& v) { return 2.0 * v[0] - v[1] + 0.5 * v[2] + 10.0; });
  const auto grad = gradient(f);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto c = g.coords(i);
    if (c[0] == 0 || c[0] == 11 || c[1] == 0 || c[1] == 11 || c[2] == 0 || c[2] == 11) continue;
    EXPECT_NEAR(grad[0][i], 2.0, 1e-12);
    EXPECT_NEAR(grad[1][i], -1.0, 1e-12);
    EXPECT_NEAR(grad[2][i], 0.5, 1e-12);
  }
}

TEST(Differences, BoundaryUsesZeroGhostCells) {
  const auto g = build_grid(8, 1.0);
  const ScalarField f = ScalarField::sample(g, [](const Vec3&) { return 1.0; });
  const auto grad = gradient(f);
  EXPECT_DOUBLE_EQ(grad[0][g.index(0, 3, 3)], 1.0 / (2.0 * g.spacing()));
  EXPECT_DOUBLE_EQ(grad[0][g.index(7, 3, 3)], -1.0 / (2.0 * g.spacing()));
  EXPECT_DOUBLE_EQ(grad[0][g.index(3, 3, 3)], 0.0);
}

TEST(Differences, LaplacianOfQuadraticIsConstant) {
  const auto g = build_grid(12, 3.0);
  const auto f = ScalarField::sample(g, [](const Vec3& v) { return dot(v, v); });
  const auto lap = laplacian(f);
  EXPECT_NEAR(lap[g.index(5, 6, 4)], 6.0, 1e-10);
}

}  // namespace
}  // namespace landau
