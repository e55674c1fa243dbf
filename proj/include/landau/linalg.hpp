#pragma once

// Small fixed-size vector and symmetric-matrix helpers.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace landau {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Symmetric 3x3 matrix stored by its six independent entries.
struct Sym3 {
  double xx = 0, yy = 0, zz = 0, xy = 0, xz = 0, yz = 0;

  double operator()(int i, int j) const {
    if (i == j) return i == 0 ? xx : (i == 1 ? yy : zz);
    const int s = i + j;  // 1: xy, 2: xz, 3: yz
    return s == 1 ? xy : (s == 2 ? xz : yz);
  }
  double trace() const { return xx + yy + zz; }
  Vec3 apply(const Vec3& v) const {
    return {xx * v[0] + xy * v[1] + xz * v[2], xy * v[0] + yy * v[1] + yz * v[2],
            xz * v[0] + yz * v[1] + zz * v[2]};
  }
  double quadratic(const Vec3& v) const { return dot(v, apply(v)); }
  double max_abs_entry() const {
    return std::max({std::abs(xx), std::abs(yy), std::abs(zz), std::abs(xy), std::abs(xz), std::abs(yz)});
  }
};

/// Eigenvalues of a symmetric 3x3 matrix in ascending order, by the
/// trigonometric closed form (no iteration).
inline std::array<double, 3> eigenvalues(const Sym3& a) {
  const double off = a.xy * a.xy + a.xz * a.xz + a.yz * a.yz;
  const double q = a.trace() / 3.0;
  if (off == 0.0) {
    std::array<double, 3> d{a.xx, a.yy, a.zz};
    std::sort(d.begin(), d.end());
    return d;
  }
  const double dxx = a.xx - q, dyy = a.yy - q, dzz = a.zz - q;
  const double p2 = dxx * dxx + dyy * dyy + dzz * dzz + 2.0 * off;
  const double p = std::sqrt(p2 / 6.0);
  // det((A - qI) / p) / 2
  const double bxx = dxx / p, byy = dyy / p, bzz = dzz / p;
  const double bxy = a.xy / p, bxz = a.xz / p, byz = a.yz / p;
  const double det = bxx * (byy * bzz - byz * byz) - bxy * (bxy * bzz - byz * bxz) + bxz * (bxy * byz - byy * bxz);
  const double r = std::clamp(det / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double hi = q + 2.0 * p * std::cos(phi);
  const double lo = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double mid = 3.0 * q - hi - lo;
  return {lo, mid, hi};
}

}  // namespace landau
