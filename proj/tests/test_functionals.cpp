#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "landau/coefficients.hpp"
#include "landau/corpus.hpp"
#include "landau/functionals.hpp"
#include "landau/initial_data.hpp"

namespace landau {
namespace {

const double kPi32 = std::pow(std::numbers::pi, 1.5);

ScalarField maxwellian_on(int N, double L) { return ScalarField::sample(build_grid(N, L), maxwellian); }

TEST(Conserved, Maxwellian) {
  const auto q = conserved_quantities(maxwellian_on(48, 6.0));
  EXPECT_NEAR(q.mass, kPi32, 1e-10);
  for (double p : q.momentum) EXPECT_NEAR(p, 0.0, 1e-14);
  EXPECT_NEAR(q.energy, 0.75 * kPi32, 1e-10);
}

TEST(Conserved, ZeroField) {
  const auto q = conserved_quantities(ScalarField(build_grid(8, 1.0)));
  EXPECT_EQ(q.mass, 0.0);
  EXPECT_EQ(q.energy, 0.0);
}

TEST(Conserved, TranslationShiftsMomentumByMassTimesDrift) {
  const auto g = build_grid(48, 6.0);
  const Vec3 u{0.4, -0.25, 0.7};
  const auto f = sample_datum(Gaussian{2.0, u, 0.8}, g);
  const auto q = conserved_quantities(f);
  for (int a = 0; a < 3; ++a) EXPECT_NEAR(q.momentum[a], q.mass * u[a], 1e-7);
}

TEST(Entropy, MaxwellianAndZero) {
  EXPECT_NEAR(entropy(maxwellian_on(48, 6.0)), -1.5 * kPi32, 1e-9);
  EXPECT_EQ(entropy(ScalarField(build_grid(8, 1.0))), 0.0);
}

TEST(Entropy, ScalingIdentity) {
  const auto g = build_grid(16, 3.0);
  for (const auto& mix : mixture_corpus(7, 5)) {
    const auto f = sample_datum(mix, g);
    const double lambda = 2.0;
    const double expected = lambda * entropy(f) + lambda * std::log(lambda) * weighted_integral(f, 0.0);
    EXPECT_NEAR(entropy(lambda * f), expected, 1e-10 * std::abs(expected));
  }
}

TEST(Dissipation, ZeroFieldGivesZero) {
  const auto g = build_grid(8, 2.0);
  const CoefficientEngine engine(build_kernels(g, 2));
  const ScalarField zero(g);
  EXPECT_EQ(dissipation_single(zero, engine.compute(zero)), 0.0);
  EXPECT_EQ(dissipation_double(zero, 2), 0.0);
}

TEST(Dissipation, DoubleFormIsNonNegativeAndZeroForDelta) {
  const auto g = build_grid(8, 2.0);
  for (const auto& mix : mixture_corpus(13, 10)) EXPECT_GE(dissipation_double(sample_datum(mix, g), 2), 0.0);
  ScalarField delta(g);
  delta[g.index(4, 3, 2)] = 5.0;
  EXPECT_EQ(dissipation_double(delta, 2), 0.0);
  EXPECT_THROW(dissipation_double(ScalarField(build_grid(14, 2.0)), 2), std::invalid_argument);
}

TEST(Dissipation, SingleFormMatchesDoubleFormOnCorpus) {
  for (int N : {8, 10, 12}) {
    const auto g = build_grid(N, 4.0);
    const CoefficientEngine engine(build_kernels(g, 2));
    for (const auto& mix : mixture_corpus(100 + N, 4, non_equilibrium_ranges())) {
      const auto f = sample_datum(mix, g);
      const double single = dissipation_single(f, engine.compute(f));
      const double twice = dissipation_double(f, 2);
      EXPECT_NEAR(single, twice, 0.05 * twice) << "N = " << N;
    }
  }
}

TEST(Dissipation, MaxwellianResidualShrinksUnderRefinement) {
  double previous = std::numeric_limits<double>::infinity();
  for (int N : {16, 24, 32}) {
    const auto g = build_grid(N, 5.0);
    const CoefficientEngine engine(build_kernels(g, 2));
    const auto m = ScalarField::sample(g, maxwellian);
    const double d = std::abs(dissipation_single(m, engine.compute(m)));
    EXPECT_LT(d, previous) << "N = " << N;
    previous = d;
  }
}

TEST(Fisher, MaxwellianValue) {
  const double exact = 6.0 * kPi32;
  EXPECT_NEAR(fisher(maxwellian_on(48, 6.0)).fisher, exact, 0.01 * exact);
  EXPECT_NEAR(4.0 * fisher(maxwellian_on(96, 6.0)).fisher_sqrt, exact, 0.01 * exact);
}

TEST(Fisher, ConstantInteriorContributesNothing) {
  const auto g = build_grid(10, 1.0);
  const auto f = ScalarField::sample(g, [](const Vec3&) { return 3.0; });
  const auto grad = gradient(f);
  double interior = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto c = g.coords(i);
    bool edge = false;
    for (int a : c) edge = edge || a == 0 || a == 9;
    if (!edge) interior += grad[0][i] * grad[0][i] + grad[1][i] * grad[1][i] + grad[2][i] * grad[2][i];
  }
  EXPECT_EQ(interior, 0.0);
}

TEST(Fisher, TwoDiscretizationsAgreeAndConverge) {
  double previous = 1.0;
  for (int N : {16, 32, 64}) {
    const auto g = build_grid(N, 4.0);
    double worst = 0.0;
    for (const auto& mix : mixture_corpus(19, 10)) {
      const auto fi = fisher(sample_datum(mix, g));
      worst = std::max(worst, std::abs(fi.fisher - 4.0 * fi.fisher_sqrt) / fi.fisher);
    }
    if (N == 64) {
      EXPECT_LE(worst, 0.02);
    }
    EXPECT_LT(worst, previous / 2.0);
    previous = worst;
  }
}

TEST(Fisher, GatingThresholdIsInsensitive) {
  const auto g = build_grid(32, 4.0);
  for (const auto& mix : mixture_corpus(21, 5)) {
    const auto f = sample_datum(mix, g);
    const double base = fisher(f, 1e-14).fisher;
    EXPECT_NEAR(fisher(f, 5e-15).fisher, base, 1e-3 * base);
  }
}

TEST(WeightedFisher, Maxwellian) {
  const double exact = 7.19402344211528342;
  const double coarse = std::abs(weighted_fisher(maxwellian_on(48, 6.0)) - exact);
  const double fine = std::abs(weighted_fisher(maxwellian_on(96, 6.0)) - exact);
  EXPECT_LT(fine, 0.015 * exact);
  EXPECT_LT(fine, coarse / 3.0);
}

TEST(H3, MaxwellianVanishesPointwise) {
  const auto g = build_grid(32, 5.0);
  const auto m = ScalarField::sample(g, maxwellian);
  EXPECT_NEAR(h3_relative(m), 0.0, 1e-10);
  for (double x : h3_relative_integrand(m)) EXPECT_NEAR(x, 0.0, 1e-14);
}

TEST(H3, ZeroFieldGivesWeightedMaxwellianMass) {
  EXPECT_NEAR(h3_relative(ScalarField(build_grid(48, 6.0))), 23.8433655153086602, 1e-8);
}

TEST(H3, DoubleMaxwellian) {
  EXPECT_NEAR(h3_relative(2.0 * maxwellian_on(48, 6.0)), 9.21055764868419044, 1e-6);
}

TEST(H3, RelativeIntegrandNonNegativeOnRandomFields) {
  const auto g = build_grid(16, 4.0);
  std::mt19937_64 rng(9);
  std::lognormal_distribution<double> d(0.0, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> v(g.size());
    for (auto& x : v) x = d(rng) * 1e-3;
    for (double x : h3_relative_integrand(ScalarField(g, v))) EXPECT_GE(x, 0.0);
  }
}

TEST(ElementaryInequalities, HoldCellByCell) {
  const auto g = build_grid(16, 5.0);
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> e(-40.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = std::exp(e(rng));
      const Vec3 v = g.position(i);
      const double w = 1.0 + dot(v, v);
      const double lp = std::max(std::log(x), 0.0);
      EXPECT_LE(x * std::abs(std::log(x)), (x * lp + x * w + std::exp(-1.0) * maxwellian(v) * w) * (1.0 + 1e-14));
      EXPECT_LE(lp, x);
    }
  }
}

TEST(Record, ComposesIndividualFunctionals) {
  const auto g = build_grid(16, 4.0);
  const CoefficientEngine engine(build_kernels(g, 2));
  const auto f = sample_datum(mixture_corpus(3, 1)[0], g);
  const auto coeffs = engine.compute(f);
  const auto r = record(f, 0.5, 0.01, coeffs, default_k_list());
  EXPECT_EQ(r.t, 0.5);
  EXPECT_EQ(r.dt, 0.01);
  EXPECT_EQ(r.mass, conserved_quantities(f).mass);
  EXPECT_EQ(r.entropy, entropy(f));
  EXPECT_EQ(r.dissipation, dissipation_single(f, coeffs));
  EXPECT_EQ(r.fisher, fisher(f).fisher);
  ASSERT_EQ(r.l2.size(), 3u);
  EXPECT_EQ(r.l2[1], weighted_lp_norm(f, 2.0, 2.0));
  EXPECT_EQ(r.l3_m3, weighted_lp_norm(f, 3.0, -3.0));
  EXPECT_EQ(r.h3, h3_relative(f));
  EXPECT_GE(r.h3, -1e-10 * r.mass);
}

}  // namespace
}  // namespace landau
