#pragma once

// Truncated Coulomb kernel K_n, the projection Pi(z) and the three kernel
// fields (matrix, vector, scalar) sampled on the padded difference lattice
// z = j h, j in [-N, N)^3.

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "landau/grid.hpp"
#include "landau/linalg.hpp"
#include "landau/parallel.hpp"

namespace landau {

/// K_n(r): 1/r for r >= 1/n, n (3 - (nr)^2) / 2 inside. C^1 at r = 1/n,
/// bounded by 1/r everywhere since (s-1)^2 (s+2) >= 0.
inline double kn_eval(int n, double r) {
  if (n <= 0) throw std::invalid_argument("regularization index n must be positive");
  if (r < 0.0) throw std::invalid_argument("kn_eval requires r >= 0");
  const double s = n * r;
  if (s >= 1.0) return 1.0 / r;
  return 0.5 * n * (3.0 - s * s);
}

/// Pi(z) = I - z z^T / |z|^2.
inline Sym3 projection(const Vec3& z) {
  const double r2 = dot(z, z);
  if (r2 == 0.0) throw std::invalid_argument("projection undefined at z = 0");
  return {1.0 - z[0] * z[0] / r2, 1.0 - z[1] * z[1] / r2, 1.0 - z[2] * z[2] / r2,
          -z[0] * z[1] / r2,      -z[0] * z[2] / r2,      -z[1] * z[2] / r2};
}

/// Largest n h for which the scalar kernel is accepted: the core radius 1/n
/// must reach at least half a cell.
inline constexpr double kMaxCoreRatio = 2.0;

inline bool kernel_resolved(const VelocityGrid& grid, int n) { return n * grid.spacing() <= kMaxCoreRatio; }

/// Scalar samples on the (2N)^3 difference lattice, stored in wrapped
/// (FFT) order: offset j < 0 lives at j + 2N.
class KernelLattice {
 public:
  KernelLattice() = default;
  explicit KernelLattice(int cells)
      : cells_(cells), values_(static_cast<std::size_t>(8) * cells * cells * cells, 0.0) {}

  int cells() const { return cells_; }
  int extent() const { return 2 * cells_; }
  std::size_t size() const { return values_.size(); }

  std::size_t index(int jx, int jy, int jz) const {
    const auto m = static_cast<std::size_t>(extent());
    return wrap(jx) + m * (wrap(jy) + m * wrap(jz));
  }
  /// Lattice offset j in [-N, N)^3 of a storage index.
  std::array<int, 3> offset(std::size_t idx) const {
    const auto m = static_cast<std::size_t>(extent());
    return {unwrap(static_cast<int>(idx % m)), unwrap(static_cast<int>((idx / m) % m)),
            unwrap(static_cast<int>(idx / (m * m)))};
  }
  double at(int jx, int jy, int jz) const { return values_[index(jx, jy, jz)]; }
  double& at(int jx, int jy, int jz) { return values_[index(jx, jy, jz)]; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t wrap(int j) const { return static_cast<std::size_t>(j < 0 ? j + extent() : j); }
  int unwrap(int w) const { return w >= cells_ ? w - extent() : w; }

  int cells_ = 0;
  std::vector<double> values_;
};

/// Index pairs of the six stored entries of a symmetric matrix.
inline constexpr std::array<std::array<int, 2>, 6> kSymPairs{{{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}};

inline double sym_entry(const Sym3& m, int component) {
  return m(kSymPairs[component][0], kSymPairs[component][1]);
}

struct MatrixKernel {
  std::array<KernelLattice, 6> entries;  // xx, yy, zz, xy, xz, yz
  Sym3 at(int jx, int jy, int jz) const {
    const auto i = entries[0].index(jx, jy, jz);
    return {entries[0][i], entries[1][i], entries[2][i], entries[3][i], entries[4][i], entries[5][i]};
  }
};

struct VectorKernel {
  std::array<KernelLattice, 3> components;
  Vec3 at(int jx, int jy, int jz) const {
    const auto i = components[0].index(jx, jy, jz);
    return {components[0][i], components[1][i], components[2][i]};
  }
};

struct ScalarKernel {
  KernelLattice values;
  double total_mass = 0.0;  // sum q h^3 after origin renormalization
  double raw_mass = 0.0;    // sum over z != 0 before renormalization
};

namespace detail {
inline Vec3 lattice_point(const KernelLattice& lat, std::size_t idx, double h) {
  const auto j = lat.offset(idx);
  return {j[0] * h, j[1] * h, j[2] * h};
}
}  // namespace detail

/// K_n(|z|) Pi(z) at z = j h; the origin takes the spherical mean (2/3) K_n(0) I.
inline Sym3 a_kernel_sample(int n, double h, std::array<int, 3> j) {
  const Vec3 z{j[0] * h, j[1] * h, j[2] * h};
  if (dot(z, z) == 0.0) {
    const double d = 2.0 / 3.0 * kn_eval(n, 0.0);
    return {d, d, d, 0.0, 0.0, 0.0};
  }
  const double k = kn_eval(n, norm(z));
  const Sym3 p = projection(z);
  return {k * p.xx, k * p.yy, k * p.zz, k * p.xy, k * p.xz, k * p.yz};
}

inline MatrixKernel a_kernel_field(const VelocityGrid& grid, int n) {
  MatrixKernel out;
  for (auto& e : out.entries) e = KernelLattice(grid.cells());
  const double h = grid.spacing();
  const auto& lat = out.entries[0];
  parallel_for(lat.size(), [&](std::size_t idx) {
    const Sym3 g = a_kernel_sample(n, h, lat.offset(idx));
    for (int c = 0; c < 6; ++c) out.entries[c][idx] = sym_entry(g, c);
  });
  return out;
}

/// Samples div(K_n Pi)(z) = -2 K_n(|z|) z / |z|^2; zero at the origin.
inline VectorKernel b_kernel_field(const VelocityGrid& grid, int n) {
  VectorKernel out;
  for (auto& e : out.components) e = KernelLattice(grid.cells());
  const double h = grid.spacing();
  const auto& lat = out.components[0];
  parallel_for(lat.size(), [&](std::size_t idx) {
    const Vec3 z = detail::lattice_point(lat, idx, h);
    const double r2 = dot(z, z);
    if (r2 == 0.0) return;
    const double s = -2.0 * kn_eval(n, std::sqrt(r2)) / r2;
    for (int a = 0; a < 3; ++a) out.components[a][idx] = s * z[a];
  });
  return out;
}

/// Profile of the scalar kernel q(r) = -(2/r^2) d/dr (r K_n) for r > 0.
inline double c_kernel_profile(int n, double r) {
  const double s = n * r;
  if (s >= 1.0) return 0.0;
  return -3.0 * n * (1.0 - s * s) / (r * r);
}

/// Samples q on the lattice. The origin sample is chosen so that the
/// discrete mass sum q h^3 equals -8 pi.
inline ScalarKernel c_kernel_field(const VelocityGrid& grid, int n) {
  if (n <= 0) throw std::invalid_argument("regularization index n must be positive");
  if (!kernel_resolved(grid, n))
    throw std::invalid_argument("kernel unresolved: decrease n or refine grid (n*h = " +
                                std::to_string(n * grid.spacing()) + " > " + std::to_string(kMaxCoreRatio) + ")");
  ScalarKernel out;
  out.values = KernelLattice(grid.cells());
  const double h = grid.spacing();
  const double h3 = grid.cell_volume();
  auto& lat = out.values;
  parallel_for(lat.size(), [&](std::size_t idx) {
    const Vec3 z = detail::lattice_point(lat, idx, h);
    const double r = norm(z);
    if (r > 0.0) lat[idx] = c_kernel_profile(n, r);
  });
  out.raw_mass = pairwise_sum(lat.values()) * h3;
  const double target = -8.0 * std::numbers::pi;
  lat.at(0, 0, 0) = (target - out.raw_mass) / h3;
  out.total_mass = pairwise_sum(lat.values()) * h3;
  return out;
}

/// Discrete double divergence sum_ij D_i D_j (K_n Pi)_ij of the sampled
/// A-kernel with centered differences D_i. Convolving it with f equals
/// -sum_w grad_h f(v) . (K_n Pi)(v - w) grad_h f(w) after summation by parts,
/// so the single-integral dissipation built from it reproduces the double
/// integral on the same grid. Its mass tends to -8 pi as L / h grows.
inline KernelLattice reaction_lattice_field(const VelocityGrid& grid, int n) {
  if (n <= 0) throw std::invalid_argument("regularization index n must be positive");
  KernelLattice lat(grid.cells());
  const double h = grid.spacing();
  parallel_for(lat.size(), [&](std::size_t idx) {
    const auto j = lat.offset(idx);
    double acc = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int sa : {-1, 1})
          for (int sb : {-1, 1}) {
            auto o = j;
            o[a] += sa;
            o[b] += sb;
            acc += sa * sb * a_kernel_sample(n, h, o)(a, b);
          }
    lat[idx] = acc / (4.0 * h * h);
  });
  return lat;
}

/// Which lattice kernel produces c_n[f].
enum class ReactionKernel {
  lattice_divergence,  // reaction_lattice_field
  sampled_profile,     // c_kernel_field (renormalized q samples)
};

/// All kernel fields for one (grid, n) pair. Immutable once built.
struct KernelFieldSet {
  VelocityGrid grid;
  int n = 0;
  MatrixKernel a;
  VectorKernel b;
  ScalarKernel c;
  ReactionKernel reaction_kind = ReactionKernel::lattice_divergence;
  KernelLattice reaction;  // the kernel actually convolved into c_n[f]
};

inline KernelFieldSet build_kernels(const VelocityGrid& grid, int n,
                                    ReactionKernel reaction = ReactionKernel::lattice_divergence) {
  KernelFieldSet set;
  set.grid = grid;
  set.n = n;
  set.c = c_kernel_field(grid, n);
  set.a = a_kernel_field(grid, n);
  set.b = b_kernel_field(grid, n);
  set.reaction_kind = reaction;
  set.reaction = reaction == ReactionKernel::lattice_divergence ? reaction_lattice_field(grid, n) : set.c.values;
  return set;
}

}  // namespace landau
