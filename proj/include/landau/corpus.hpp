#pragma once

// Seeded random Gaussian-mixture data for oracle batteries and property tests.

#include <cstdint>
#include <random>
#include <vector>

#include "landau/initial_data.hpp"

namespace landau {

struct MixtureRanges {
  int min_components = 1;
  int max_components = 3;
  double rho_min = 0.2, rho_max = 1.0;
  double drift = 1.0;  // each velocity component in [-drift, drift]
  double T_min = 0.3, T_max = 1.0;
};

/// At least two components, so no member is an exact equilibrium with zero
/// dissipation.
inline MixtureRanges non_equilibrium_ranges() {
  MixtureRanges r;
  r.min_components = 2;
  return r;
}

inline GaussianMixture random_mixture(std::mt19937_64& rng, const MixtureRanges& ranges = {}) {
  std::uniform_int_distribution<int> count(ranges.min_components, ranges.max_components);
  std::uniform_real_distribution<double> rho(ranges.rho_min, ranges.rho_max);
  std::uniform_real_distribution<double> u(-ranges.drift, ranges.drift);
  std::uniform_real_distribution<double> T(ranges.T_min, ranges.T_max);
  GaussianMixture m;
  const int k = count(rng);
  for (int i = 0; i < k; ++i) {
    Gaussian g;
    g.rho = rho(rng);
    g.u = {u(rng), u(rng), u(rng)};
    g.T = T(rng);
    m.components.push_back(g);
  }
  return m;
}

inline std::vector<GaussianMixture> mixture_corpus(std::uint64_t seed, int count, const MixtureRanges& ranges = {}) {
  std::mt19937_64 rng(seed);
  std::vector<GaussianMixture> out;
  for (int i = 0; i < count; ++i) out.push_back(random_mixture(rng, ranges));
  return out;
}

}  // namespace landau
