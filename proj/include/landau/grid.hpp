#pragma once

// Velocity-space lattice, sampled fields, midpoint quadrature and
// finite-difference derivatives with zero ghost cells.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "landau/linalg.hpp"
#include "landau/parallel.hpp"

namespace landau {

/// Cell-centered cubic lattice on [-L, L]^3 with N cells per axis.
class VelocityGrid {
 public:
  VelocityGrid() = default;

  int cells() const { return n_; }
  double half_width() const { return half_width_; }
  double spacing() const { return 2.0 * half_width_ / n_; }
  double cell_volume() const {
    const double h = spacing();
    return h * h * h;
  }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }

  double center(int i) const { return (i + 0.5 - 0.5 * n_) * spacing(); }

  /// Row-major with x fastest.
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(n_) * (j + static_cast<std::size_t>(n_) * k);
  }
  std::array<int, 3> coords(std::size_t idx) const {
    const auto n = static_cast<std::size_t>(n_);
    return {static_cast<int>(idx % n), static_cast<int>((idx / n) % n), static_cast<int>(idx / (n * n))};
  }
  Vec3 position(std::size_t idx) const {
    const auto c = coords(idx);
    return {center(c[0]), center(c[1]), center(c[2])};
  }
  /// Index of the cell mirrored through the origin (v -> -v).
  std::size_t mirror(std::size_t idx) const {
    const auto c = coords(idx);
    return index(n_ - 1 - c[0], n_ - 1 - c[1], n_ - 1 - c[2]);
  }

  friend bool operator==(const VelocityGrid& a, const VelocityGrid& b) {
    return a.n_ == b.n_ && a.half_width_ == b.half_width_;
  }

 private:
  VelocityGrid(int n, double half_width) : n_(n), half_width_(half_width) {}
  friend VelocityGrid build_grid(int, double);

  int n_ = 0;
  double half_width_ = 0.0;
};

/// Rejects odd N, N < 8 and non-positive L.
inline VelocityGrid build_grid(int cells, double half_width) {
  if (cells < 8 || cells % 2 != 0) throw std::invalid_argument("N must be even >= 8 (got " + std::to_string(cells) + ")");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw std::invalid_argument("L must be positive and finite");
  return VelocityGrid(cells, half_width);
}

/// Japanese bracket <v> = (1 + |v|^2)^{1/2}.
inline double bracket(const Vec3& v) { return std::sqrt(1.0 + dot(v, v)); }

/// One real value per cell of a grid. Values are always finite.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const VelocityGrid& grid) : grid_(grid), values_(grid.size(), 0.0) {}
  ScalarField(const VelocityGrid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw std::invalid_argument("field size does not match grid");
    for (double v : values_)
      if (!std::isfinite(v)) throw std::invalid_argument("field values must be finite");
  }

  /// A distribution field: finite and non-negative.
  static ScalarField distribution(const VelocityGrid& grid, std::vector<double> values) {
    ScalarField f(grid, std::move(values));
    for (double v : f.values_)
      if (v < 0.0) throw std::invalid_argument("distribution values must be non-negative");
    return f;
  }

  template <class Fn>
  static ScalarField sample(const VelocityGrid& grid, Fn&& fn) {
    std::vector<double> values(grid.size());
    parallel_for(values.size(), [&](std::size_t i) { values[i] = fn(grid.position(i)); });
    return ScalarField(grid, std::move(values));
  }

  const VelocityGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  double min() const {
    double m = values_.empty() ? 0.0 : values_[0];
    for (double v : values_) m = std::min(m, v);
    return m;
  }
  double max() const {
    double m = values_.empty() ? 0.0 : values_[0];
    for (double v : values_) m = std::max(m, v);
    return m;
  }

  ScalarField& operator+=(const ScalarField& other) {
    require_same_grid(other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
  }
  ScalarField& operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
  }
  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator*(double s, ScalarField a) { return a *= s; }

  void require_same_grid(const ScalarField& other) const {
    if (!(grid_ == other.grid_)) throw std::invalid_argument("fields live on different grids");
  }

 private:
  VelocityGrid grid_;
  std::vector<double> values_;
};

/// Midpoint quadrature of f(v) <v>^k.
inline double weighted_integral(const ScalarField& f, double k) {
  const auto& g = f.grid();
  const double sum = pairwise_reduce(0, f.size(), [&](std::size_t i) {
    return k == 0.0 ? f[i] : f[i] * std::pow(bracket(g.position(i)), k);
  });
  return sum * g.cell_volume();
}

/// ||f||_{L^p_k} = (sum |f|^p <v>^{pk} h^3)^{1/p}.
inline double weighted_lp_norm(const ScalarField& f, double p, double k) {
  if (!(p >= 1.0)) throw std::invalid_argument("weighted_lp_norm requires p >= 1");
  const auto& g = f.grid();
  const double sum = pairwise_reduce(0, f.size(), [&](std::size_t i) {
    const double a = std::abs(f[i]);
    if (a == 0.0) return 0.0;
    return std::pow(a, p) * (k == 0.0 ? 1.0 : std::pow(bracket(g.position(i)), p * k));
  });
  return std::pow(sum * g.cell_volume(), 1.0 / p);
}

namespace detail {
/// Value at (i,j,k) shifted by `step` along `axis`; zero outside the grid.
inline double neighbour(const ScalarField& f, std::array<int, 3> c, int axis, int step) {
  c[axis] += step;
  const int n = f.grid().cells();
  if (c[axis] < 0 || c[axis] >= n) return 0.0;
  return f[f.grid().index(c[0], c[1], c[2])];
}
}  // namespace detail

/// Second-order central differences with zero ghost cells.
inline std::array<ScalarField, 3> gradient(const ScalarField& f) {
  const auto& g = f.grid();
  const double inv2h = 0.5 / g.spacing();
  std::array<ScalarField, 3> out{ScalarField(g), ScalarField(g), ScalarField(g)};
  parallel_for(f.size(), [&](std::size_t idx) {
    const auto c = g.coords(idx);
    for (int a = 0; a < 3; ++a)
      out[a][idx] = (detail::neighbour(f, c, a, 1) - detail::neighbour(f, c, a, -1)) * inv2h;
  });
  return out;
}

/// 7-point Laplacian with zero ghost cells.
inline ScalarField laplacian(const ScalarField& f) {
  const auto& g = f.grid();
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  ScalarField out(g);
  parallel_for(f.size(), [&](std::size_t idx) {
    const auto c = g.coords(idx);
    double acc = -6.0 * f[idx];
    for (int a = 0; a < 3; ++a) acc += detail::neighbour(f, c, a, 1) + detail::neighbour(f, c, a, -1);
    out[idx] = acc * inv_h2;
  });
  return out;
}

}  // namespace landau
