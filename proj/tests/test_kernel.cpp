#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "landau/kernel.hpp"

namespace landau {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Kn, ExamplesAndCore) {
  EXPECT_DOUBLE_EQ(kn_eval(4, 0.0), 6.0);
  EXPECT_DOUBLE_EQ(kn_eval(4, 0.25), 4.0);
  EXPECT_DOUBLE_EQ(kn_eval(2, 2.0), 0.5);
  for (int n : {1, 2, 4, 8}) {
    EXPECT_GE(kn_eval(n, 0.0), n);
    EXPECT_LE(kn_eval(n, 0.0), 2.0 * n);
  }
}

TEST(Kn, BoundedByCoulombMonotoneInRAndN) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> r(1e-4, 5.0);
  std::uniform_int_distribution<int> nn(1, 32);
  for (int trial = 0; trial < 2000; ++trial) {
    const double x = r(rng);
    const int n = nn(rng);
    EXPECT_LE(kn_eval(n, x), 1.0 / x * (1.0 + 1e-15));
    EXPECT_GE(kn_eval(n, x), kn_eval(n, x * 1.01) - 1e-15);
    EXPECT_LE(kn_eval(n, x), kn_eval(n + 1, x) + 1e-15);
  }
}

TEST(Kn, ContinuousDerivativeAtCoreRadius) {
  const int n = 3;
  const double r = 1.0 / n, eps = 1e-7;
  const double inner = (kn_eval(n, r) - kn_eval(n, r - eps)) / eps;
  const double outer = (kn_eval(n, r + eps) - kn_eval(n, r)) / eps;
  EXPECT_NEAR(inner, outer, 1e-4);
}

TEST(Projection, AnnihilatesDirectionAndIsIdempotent) {
  const Vec3 z{1.0, 2.0, -0.5};
  const Sym3 p = projection(z);
  const Vec3 pz = p.apply(z);
  for (double c : pz) EXPECT_NEAR(c, 0.0, 1e-14);
  EXPECT_NEAR(p.trace(), 2.0, 1e-14);
  const Vec3 w{0.3, -0.7, 1.1};
  const Vec3 pw = p.apply(w), ppw = p.apply(pw);
  for (int a = 0; a < 3; ++a) EXPECT_NEAR(pw[a], ppw[a], 1e-14);
  EXPECT_THROW(projection({0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST(AKernel, OriginAndAxisSamples) {
  const auto g = build_grid(8, 2.0);
  const auto a = a_kernel_field(g, 2);
  const Sym3 origin = a.at(0, 0, 0);
  EXPECT_DOUBLE_EQ(origin.xx, 2.0);
  EXPECT_DOUBLE_EQ(origin.trace(), 6.0);
  const Sym3 axis = a.at(1, 0, 0);  // |z| = h = 0.5 >= 1/n
  EXPECT_DOUBLE_EQ(axis.xx, 0.0);
  EXPECT_DOUBLE_EQ(axis.yy, 2.0);
  EXPECT_DOUBLE_EQ(axis.zz, 2.0);
}

TEST(AKernel, PsdEvenAndAnnihilatesOffset) {
  const auto g = build_grid(8, 2.0);
  const int n = 3;
  const auto a = a_kernel_field(g, n);
  const double h = g.spacing();
  for (int x = -7; x <= 7; ++x)
    for (int y = -7; y <= 7; y += 2)
      for (int z = -3; z <= 3; ++z) {
        const Sym3 m = a.at(x, y, z), mm = a.at(-x, -y, -z);
        EXPECT_DOUBLE_EQ(m.xy, mm.xy);
        const auto ev = eigenvalues(m);
        const double r = h * std::sqrt(double(x * x + y * y + z * z));
        EXPECT_GE(ev[0], -1e-13);
        EXPECT_LE(ev[2], kn_eval(n, r) * (1.0 + 1e-7));
        if (x || y || z) {
          const Vec3 off{x * h, y * h, z * h};
          for (double c : m.apply(off)) EXPECT_NEAR(c, 0.0, 1e-13);
        }
      }
}

TEST(BKernel, AxisValueOddnessAndBound) {
  const auto g = build_grid(8, 4.0);  // h = 1
  const auto b = b_kernel_field(g, 2);
  const Vec3 v = b.at(1, 0, 0);
  EXPECT_DOUBLE_EQ(v[0], -2.0);
  EXPECT_DOUBLE_EQ(v[1], 0.0);
  const Vec3 zero = b.at(0, 0, 0);
  for (double c : zero) EXPECT_EQ(c, 0.0);
  for (int x = -4; x <= 4; ++x)
    for (int y = -4; y <= 4; ++y) {
      const Vec3 p = b.at(x, y, 1), q = b.at(-x, -y, -1);
      for (int a = 0; a < 3; ++a) EXPECT_DOUBLE_EQ(p[a], -q[a]);
      const double r2 = double(x * x + y * y + 1);
      EXPECT_LE(norm(p), 2.0 / r2 * (1.0 + 1e-14));
    }
}

TEST(BKernel, MatchesFiniteDifferenceDivergenceOfA) {
  // Same physical point (1.5, 1, 0.5) outside the core on two lattices.
  auto error_at = [](double L, int scale) {
    const auto g = build_grid(16, L);
    const double h = g.spacing();
    const auto a = a_kernel_field(g, 1);
    const auto b = b_kernel_field(g, 1);
    const int x = 3 * scale, y = 2 * scale, z = scale;
    Vec3 div{};
    for (int i = 0; i < 3; ++i) {
      auto entry = [&](int dx, int dy, int dz, int j) { return a.at(x + dx, y + dy, z + dz)(i, j); };
      div[i] = (entry(1, 0, 0, 0) - entry(-1, 0, 0, 0) + entry(0, 1, 0, 1) - entry(0, -1, 0, 1) +
                entry(0, 0, 1, 2) - entry(0, 0, -1, 2)) / (2.0 * h);
    }
    const Vec3 exact = b.at(x, y, z);
    const Vec3 d{div[0] - exact[0], div[1] - exact[1], div[2] - exact[2]};
    return norm(d) / norm(exact);
  };
  const double coarse = error_at(4.0, 1), fine = error_at(2.0, 2);
  EXPECT_LT(coarse, 0.2);
  EXPECT_LT(fine, coarse / 3.0);
}

TEST(CKernel, RadialIntegralIsMinusEightPi) {
  for (int n : {1, 2, 5}) {
    const int steps = 200000;
    const double rmax = 1.0 / n, dr = rmax / steps;
    double acc = 0.0;
    for (int i = 0; i < steps; ++i) {
      const double r = (i + 0.5) * dr;
      acc += 4.0 * kPi * r * r * c_kernel_profile(n, r) * dr;
    }
    EXPECT_NEAR(acc, -8.0 * kPi, 1e-8);
  }
  EXPECT_EQ(c_kernel_profile(2, 0.5), 0.0);
  EXPECT_EQ(c_kernel_profile(2, 3.0), 0.0);
}

TEST(CKernel, RenormalizedMassExact) {
  for (auto [N, L, n] : {std::tuple{8, 4.0, 2}, {32, 5.0, 4}, {64, 4.0, 2}}) {
    const auto g = build_grid(N, L);
    const auto c = c_kernel_field(g, n);
    EXPECT_NEAR(c.total_mass, -8.0 * kPi, 1e-14 * 8.0 * kPi);
  }
}

TEST(CKernel, NonPositiveAndEven) {
  const auto g = build_grid(16, 1.0);
  const auto c = c_kernel_field(g, 2);
  for (std::size_t k = 0; k < c.values.size(); ++k) {
    EXPECT_LE(c.values[k], 0.0);
    const auto j = c.values.offset(k);
    if (std::abs(j[0]) < 16 && std::abs(j[1]) < 16 && std::abs(j[2]) < 16) {
      EXPECT_DOUBLE_EQ(c.values[k], c.values.at(-j[0], -j[1], -j[2]));
    }
  }
}

TEST(CKernel, ResolutionGuard) {
  const auto g = build_grid(32, 5.0);
  try {
    c_kernel_field(g, 8);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("kernel unresolved"), std::string::npos);
  }
  EXPECT_NO_THROW(c_kernel_field(g, 4));
}

TEST(CKernel, RawLatticeSumDeficitShrinksWithResolution) {
  double previous = 0.0;
  for (int N : {24, 32, 64}) {
    const auto c = c_kernel_field(build_grid(N, 4.0), 2);
    const double fraction = c.raw_mass / (-8.0 * kPi);
    EXPECT_GT(fraction, previous);
    EXPECT_LT(fraction, 1.0);
    previous = fraction;
  }
}

TEST(ReactionLattice, MassApproachesMinusEightPi) {
  const auto g = build_grid(16, 3.0);
  const auto q = reaction_lattice_field(g, 2);
  double mass = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const auto j = q.offset(k);
    if (std::abs(j[0]) < 16 && std::abs(j[1]) < 16 && std::abs(j[2]) < 16) mass += q[k];
  }
  mass *= g.cell_volume();
  EXPECT_NEAR(mass / (-8.0 * kPi), 1.0, 0.02);
}

TEST(KernelLattice, WrappedOffsets) {
  KernelLattice lat(8);
  EXPECT_EQ(lat.extent(), 16);
  EXPECT_EQ(lat.index(0, 0, 0), 0u);
  const auto j = lat.offset(lat.index(-3, 2, -8));
  EXPECT_EQ(j[0], -3);
  EXPECT_EQ(j[1], 2);
  EXPECT_EQ(j[2], -8);
}

}  // namespace
}  // namespace landau
