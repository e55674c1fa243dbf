#pragma once

// Convolution coefficients A_n[f], b_n[f], c_n[f]: zero-padded FFT fast path,
// brute-force direct summation, empirical bound constants and the
// coercivity estimate.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "landau/fft_convolution.hpp"
#include "landau/grid.hpp"
#include "landau/kernel.hpp"
#include "landau/linalg.hpp"
#include "landau/parallel.hpp"

namespace landau {

/// Per-cell A (symmetric), b and c.
struct CoefficientField {
  VelocityGrid grid;
  int n = 0;
  std::array<std::vector<double>, 6> a;  // xx, yy, zz, xy, xz, yz
  std::array<std::vector<double>, 3> b;
  std::vector<double> c;

  static CoefficientField zeros(const VelocityGrid& grid, int n) {
    CoefficientField out;
    out.grid = grid;
    out.n = n;
    for (auto& e : out.a) e.assign(grid.size(), 0.0);
    for (auto& e : out.b) e.assign(grid.size(), 0.0);
    out.c.assign(grid.size(), 0.0);
    return out;
  }

  Sym3 A(std::size_t i) const { return {a[0][i], a[1][i], a[2][i], a[3][i], a[4][i], a[5][i]}; }
  Vec3 B(std::size_t i) const { return {b[0][i], b[1][i], b[2][i]}; }
};

namespace detail {
inline void require_match(const ScalarField& f, const VelocityGrid& grid) {
  if (!(f.grid() == grid)) throw std::invalid_argument("grid mismatch between field and kernels");
}
}  // namespace detail

/// Kernel spectra for one (grid, n) pair plus the FFT machinery that applies
/// them. Build once, reuse for every coefficient evaluation.
class CoefficientEngine {
 public:
  explicit CoefficientEngine(KernelFieldSet kernels)
      : kernels_(std::move(kernels)), convolver_(kernels_.grid.cells()) {
    std::array<const KernelLattice*, 10> lattices{};
    for (int c = 0; c < 6; ++c) lattices[c] = &kernels_.a.entries[c];
    for (int c = 0; c < 3; ++c) lattices[6 + c] = &kernels_.b.components[c];
    lattices[9] = &kernels_.reaction;
    parallel_for(10, [&](std::size_t c) { spectra_[c] = convolver_.transform_lattice(*lattices[c]); }, 1);
  }

  const KernelFieldSet& kernels() const { return kernels_; }
  const VelocityGrid& grid() const { return kernels_.grid; }
  int n() const { return kernels_.n; }
  const FreeSpaceConvolver& convolver() const { return convolver_; }

  CoefficientField compute(const ScalarField& f) const {
    detail::require_match(f, grid());
    CoefficientField out = CoefficientField::zeros(grid(), n());
    const auto field_hat = convolver_.transform_field(f.values());
    const double h3 = grid().cell_volume();
    std::array<std::vector<double>*, 10> targets{};
    for (int c = 0; c < 6; ++c) targets[c] = &out.a[c];
    for (int c = 0; c < 3; ++c) targets[6 + c] = &out.b[c];
    targets[9] = &out.c;
    parallel_for(10, [&](std::size_t c) { convolver_.convolve(field_hat, spectra_[c], *targets[c], h3); }, 1);
    return out;
  }

  /// (kernel * f) h^3 for an arbitrary lattice kernel on the same grid.
  std::vector<double> convolve(const ScalarField& f, const KernelLattice& kernel) const {
    detail::require_match(f, grid());
    std::vector<double> out(f.size());
    const auto k_hat = convolver_.transform_lattice(kernel);
    convolver_.convolve(convolver_.transform_field(f.values()), k_hat, out, grid().cell_volume());
    return out;
  }

 private:
  KernelFieldSet kernels_;
  FreeSpaceConvolver convolver_;
  std::array<FreeSpaceConvolver::Spectrum, 10> spectra_;
};

inline CoefficientField compute_coefficients(const ScalarField& f, const CoefficientEngine& engine) {
  return engine.compute(f);
}

inline CoefficientField compute_coefficients(const ScalarField& f, const KernelFieldSet& kernels) {
  return CoefficientEngine(kernels).compute(f);
}

/// Largest grid accepted by the O(N^6) direct summation.
inline constexpr int kDirectMaxCells = 16;

/// Nested-loop summation over all cell pairs, same quadrature as the FFT path.
inline CoefficientField direct_coefficients(const ScalarField& f, const KernelFieldSet& kernels) {
  detail::require_match(f, kernels.grid);
  const auto& g = kernels.grid;
  if (g.cells() > kDirectMaxCells) throw std::invalid_argument("direct_coefficients limited to N <= 16");
  CoefficientField out = CoefficientField::zeros(g, kernels.n);
  const double h3 = g.cell_volume();
  parallel_for(g.size(), [&](std::size_t i) {
    const auto ci = g.coords(i);
    std::array<double, 10> acc{};
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double fj = f[j];
      if (fj == 0.0) continue;
      const auto cj = g.coords(j);
      const int dx = ci[0] - cj[0], dy = ci[1] - cj[1], dz = ci[2] - cj[2];
      const auto k = kernels.a.entries[0].index(dx, dy, dz);
      for (int c = 0; c < 6; ++c) acc[c] += kernels.a.entries[c][k] * fj;
      for (int c = 0; c < 3; ++c) acc[6 + c] += kernels.b.components[c][k] * fj;
      acc[9] += kernels.reaction[k] * fj;
    }
    for (int c = 0; c < 6; ++c) out.a[c][i] = acc[c] * h3;
    for (int c = 0; c < 3; ++c) out.b[c][i] = acc[6 + c] * h3;
    out.c[i] = acc[9] * h3;
  }, 1);
  return out;
}

/// Largest |x - y| / max|y| over the ten coefficient components, each
/// normalized by its own maximum magnitude.
inline double max_relative_discrepancy(const CoefficientField& x, const CoefficientField& y) {
  auto component = [](const std::vector<double>& p, const std::vector<double>& q) {
    double scale = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      scale = std::max(scale, std::abs(q[i]));
      diff = std::max(diff, std::abs(p[i] - q[i]));
    }
    return scale == 0.0 ? diff : diff / scale;
  };
  double worst = 0.0;
  for (int c = 0; c < 6; ++c) worst = std::max(worst, component(x.a[c], y.a[c]));
  for (int c = 0; c < 3; ++c) worst = std::max(worst, component(x.b[c], y.b[c]));
  return std::max(worst, component(x.c, y.c));
}

/// Empirical constants of the pointwise coefficient bounds.
struct CoefficientBoundsReport {
  double a_ratio = 0.0;  // max |A_ij| / (||f||_1 + ||f||_2)
  double b_ratio = 0.0;  // max |b(v)| / (f * K_n(|z|)/|z|)(v); at most 2
  double c_ratio = 0.0;  // max |q * f|(v) / sup_{|w-v| <= 1/n} f(w), q the compact profile kernel; near 8 pi
};

inline CoefficientBoundsReport coefficient_bounds_report(const CoefficientField& coeffs, const ScalarField& f,
                                                         const CoefficientEngine& engine) {
  detail::require_match(f, coeffs.grid);
  detail::require_match(f, engine.grid());
  CoefficientBoundsReport report;
  const auto& g = f.grid();
  const double norms = weighted_lp_norm(f, 1.0, 0.0) + weighted_lp_norm(f, 2.0, 0.0);
  if (norms == 0.0) return report;

  double a_max = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) a_max = std::max(a_max, coeffs.A(i).max_abs_entry());
  report.a_ratio = a_max / norms;

  // Exact pointwise majorant of |b|: |div(K_n Pi)(z)| = 2 K_n(|z|) / |z|.
  KernelLattice majorant(g.cells());
  const double h = g.spacing();
  for (std::size_t k = 0; k < majorant.size(); ++k) {
    const auto j = majorant.offset(k);
    const double r = h * std::sqrt(static_cast<double>(j[0] * j[0] + j[1] * j[1] + j[2] * j[2]));
    if (r > 0.0) majorant[k] = kn_eval(coeffs.n, r) / r;
  }
  const auto denom_b = engine.convolve(f, majorant);
  const double fmax = std::max(f.max(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double bi = norm(coeffs.B(i));
    if (bi <= 1e-13 * fmax) continue;
    if (denom_b[i] > 0.0) report.b_ratio = std::max(report.b_ratio, bi / denom_b[i]);
  }

  // The pointwise c bound is checked with the compactly supported profile
  // kernel. Cells at FFT round-off level are skipped.
  const auto c_local = engine.convolve(f, engine.kernels().c.values);
  double c_scale = 0.0;
  for (double c : c_local) c_scale = std::max(c_scale, std::abs(c));

  // Local sup of f over the ball of radius 1/n (at least the cell itself).
  const int reach = static_cast<int>(std::floor(1.0 / (coeffs.n * h)));
  std::vector<std::array<int, 3>> offsets;
  for (int x = -reach; x <= reach; ++x)
    for (int y = -reach; y <= reach; ++y)
      for (int z = -reach; z <= reach; ++z)
        if ((x * x + y * y + z * z) * h * h * coeffs.n * coeffs.n <= 1.0 + 1e-12) offsets.push_back({x, y, z});
  const int n = g.cells();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto c = g.coords(i);
    double local = 0.0;
    for (const auto& o : offsets) {
      const int x = c[0] + o[0], y = c[1] + o[1], z = c[2] + o[2];
      if (x < 0 || y < 0 || z < 0 || x >= n || y >= n || z >= n) continue;
      local = std::max(local, f[g.index(x, y, z)]);
    }
    if (std::abs(c_local[i]) <= 1e-13 * c_scale) continue;
    if (local > 0.0) report.c_ratio = std::max(report.c_ratio, std::abs(c_local[i]) / local);
  }
  return report;
}

/// Lower bound lambda_min(A(v)) <v>^3 >= c0 over the grid.
struct CoercivityEstimate {
  double c0 = 0.0;
  std::size_t argmin = 0;
  Vec3 location{};
};

inline CoercivityEstimate coercivity_estimate(const CoefficientField& coeffs) {
  CoercivityEstimate est;
  est.c0 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < coeffs.grid.size(); ++i) {
    const Vec3 v = coeffs.grid.position(i);
    const double w = std::pow(bracket(v), 3);
    const double value = eigenvalues(coeffs.A(i))[0] * w;
    if (value < est.c0) {
      est.c0 = value;
      est.argmin = i;
      est.location = v;
    }
  }
  return est;
}

}  // namespace landau
