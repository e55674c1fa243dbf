#pragma once

// Initial data families and the regularized datum
// f_{in,n} = (f_in 1_{|v| <= n}) * chi_n + M / n.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "landau/fft_convolution.hpp"
#include "landau/grid.hpp"
#include "landau/kernel.hpp"

namespace landau {

struct Maxwellian {};

/// rho (2 pi T)^{-3/2} exp(-|v - u|^2 / (2T)).
struct Gaussian {
  double rho = 1.0;
  Vec3 u{0.0, 0.0, 0.0};
  double T = 1.0;
};

struct GaussianMixture {
  std::vector<Gaussian> components;
};

/// Z |v|^{-a} 1_{|v| <= 1} + eps M, the first term scaled to unit grid mass.
struct SingularPower {
  double a = 2.0;
  double eps = 0.01;
};

using InitialDatumSpec = std::variant<Maxwellian, Gaussian, GaussianMixture, SingularPower>;

/// M(v) = exp(-|v|^2).
inline double maxwellian(const Vec3& v) { return std::exp(-dot(v, v)); }

inline double gaussian_density(const Gaussian& g, const Vec3& v) {
  const Vec3 d{v[0] - g.u[0], v[1] - g.u[1], v[2] - g.u[2]};
  return g.rho * std::pow(2.0 * std::numbers::pi * g.T, -1.5) * std::exp(-dot(d, d) / (2.0 * g.T));
}

inline void validate(const Gaussian& g) {
  if (!(g.T > 0.0)) throw std::invalid_argument("gaussian temperature T must be positive");
  if (!(g.rho >= 0.0)) throw std::invalid_argument("gaussian density rho must be non-negative");
}

inline void validate(const InitialDatumSpec& spec) {
  std::visit(
      [](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Gaussian>) {
          validate(s);
        } else if constexpr (std::is_same_v<S, GaussianMixture>) {
          if (s.components.empty()) throw std::invalid_argument("gaussian_mixture needs at least one component");
          for (const auto& g : s.components) validate(g);
        } else if constexpr (std::is_same_v<S, SingularPower>) {
          if (!(s.a > 1.0 && s.a < 3.0)) throw std::invalid_argument("singular_power exponent a must lie in (1, 3)");
          if (!(s.eps >= 0.0)) throw std::invalid_argument("singular_power floor eps must be non-negative");
        }
      },
      spec);
}

inline ScalarField sample_datum(const InitialDatumSpec& spec, const VelocityGrid& grid) {
  validate(spec);
  return std::visit(
      [&](const auto& s) -> ScalarField {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Maxwellian>) {
          return ScalarField::sample(grid, maxwellian);
        } else if constexpr (std::is_same_v<S, Gaussian>) {
          return ScalarField::sample(grid, [&](const Vec3& v) { return gaussian_density(s, v); });
        } else if constexpr (std::is_same_v<S, GaussianMixture>) {
          return ScalarField::sample(grid, [&](const Vec3& v) {
            double acc = 0.0;
            for (const auto& g : s.components) acc += gaussian_density(g, v);
            return acc;
          });
        } else {
          ScalarField core = ScalarField::sample(grid, [&](const Vec3& v) {
            const double r = norm(v);
            return r <= 1.0 ? std::pow(r, -s.a) : 0.0;
          });
          const double mass = weighted_integral(core, 0.0);
          if (!(mass > 0.0)) throw std::invalid_argument("singular_power core has no grid cell inside |v| <= 1");
          core *= 1.0 / mass;
          if (s.eps > 0.0) core += s.eps * ScalarField::sample(grid, maxwellian);
          return core;
        }
      },
      spec);
}

/// Normalization c of the bump c exp(-1 / (1 - |x|^2)) on the unit ball,
/// by composite Simpson quadrature of the radial integral.
inline double mollifier_normalization() {
  constexpr int intervals = 20000;
  const double step = 1.0 / intervals;
  auto integrand = [](double r) { return r >= 1.0 ? 0.0 : std::exp(-1.0 / (1.0 - r * r)) * r * r; };
  double acc = integrand(0.0) + integrand(1.0);
  for (int i = 1; i < intervals; ++i) acc += (i % 2 ? 4.0 : 2.0) * integrand(i * step);
  const double radial = acc * step / 3.0;
  return 1.0 / (4.0 * std::numbers::pi * radial);
}

/// Minimum number of cells the mollifier radius 1/n must span.
inline constexpr double kMollifierMinCells = 4.0;

inline ScalarField mollify_and_floor(const ScalarField& f, int n) {
  if (n <= 0) throw std::invalid_argument("regularization index n must be positive");
  const auto& g = f.grid();
  const double h = g.spacing();
  if (1.0 / (n * h) < kMollifierMinCells)
    throw std::invalid_argument("mollifier unresolved: radius 1/n spans " + std::to_string(1.0 / (n * h)) +
                                " cells, need >= 4");
  if (f.min() < 0.0) throw std::invalid_argument("mollify_and_floor requires a non-negative field");

  // Truncate to |v| <= n.
  std::vector<double> truncated(f.values().begin(), f.values().end());
  for (std::size_t i = 0; i < truncated.size(); ++i)
    if (norm(g.position(i)) > n) truncated[i] = 0.0;

  // chi_n(z) = n^3 chi(n z) on the lattice, rescaled to unit discrete mass.
  const double c = mollifier_normalization();
  KernelLattice chi(g.cells());
  for (std::size_t k = 0; k < chi.size(); ++k) {
    const auto j = chi.offset(k);
    const double s2 = (j[0] * j[0] + j[1] * j[1] + j[2] * j[2]) * h * h * n * n;
    if (s2 < 1.0) chi[k] = c * n * n * n * std::exp(-1.0 / (1.0 - s2));
  }
  const double discrete_mass = pairwise_sum(chi.values()) * g.cell_volume();

  FreeSpaceConvolver convolver(g.cells());
  std::vector<double> smoothed(g.size());
  convolver.convolve(convolver.transform_field(truncated), convolver.transform_lattice(chi), smoothed,
                     g.cell_volume() / discrete_mass);
  for (std::size_t i = 0; i < smoothed.size(); ++i)
    smoothed[i] = std::max(smoothed[i], 0.0) + maxwellian(g.position(i)) / n;
  return ScalarField::distribution(g, std::move(smoothed));
}

}  // namespace landau
