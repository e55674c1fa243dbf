#pragma once

// Scalar functionals of a distribution: conserved quantities, entropy,
// entropy dissipation (single- and double-integral forms), Fisher
// information (two discretizations), weighted relative entropy H_3.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "landau/coefficients.hpp"
#include "landau/grid.hpp"
#include "landau/initial_data.hpp"
#include "landau/kernel.hpp"
#include "landau/parallel.hpp"

namespace landau {

inline constexpr double kDefaultFTolRel = 1e-14;
inline constexpr double kEntropyFloor = 1e-300;

struct ConservedQuantities {
  double mass = 0.0;
  Vec3 momentum{};
  double energy = 0.0;  // integral of f |v|^2 / 2
};

inline ConservedQuantities conserved_quantities(const ScalarField& f) {
  const auto& g = f.grid();
  const double h3 = g.cell_volume();
  ConservedQuantities q;
  q.mass = pairwise_reduce(0, f.size(), [&](std::size_t i) { return f[i]; }) * h3;
  for (int a = 0; a < 3; ++a)
    q.momentum[a] = pairwise_reduce(0, f.size(), [&](std::size_t i) { return f[i] * g.position(i)[a]; }) * h3;
  q.energy = pairwise_reduce(0, f.size(), [&](std::size_t i) {
               const Vec3 v = g.position(i);
               return 0.5 * f[i] * dot(v, v);
             }) * h3;
  return q;
}

/// H(f) = integral f ln f, with x ln x extended by 0 below `floor`.
inline double entropy(const ScalarField& f, double floor = kEntropyFloor) {
  return pairwise_reduce(0, f.size(), [&](std::size_t i) { return f[i] > floor ? f[i] * std::log(f[i]) : 0.0; }) *
         f.grid().cell_volume();
}

/// D_n(f) = integral A grad f . grad f / f + integral c f.
inline double dissipation_single(const ScalarField& f, const CoefficientField& coeffs,
                                 double f_tol_rel = kDefaultFTolRel) {
  if (!(f.grid() == coeffs.grid)) throw std::invalid_argument("grid mismatch between field and coefficients");
  const double tol = f_tol_rel * f.max();
  const auto grad = gradient(f);
  const double quad = pairwise_reduce(0, f.size(), [&](std::size_t i) {
    if (!(f[i] > tol)) return 0.0;
    const Vec3 d{grad[0][i], grad[1][i], grad[2][i]};
    return coeffs.A(i).quadratic(d) / f[i];
  });
  const double reaction = pairwise_reduce(0, f.size(), [&](std::size_t i) { return coeffs.c[i] * f[i]; });
  return (quad + reaction) * f.grid().cell_volume();
}

inline constexpr int kDoubleDissipationMaxCells = 12;

/// The symmetric double-integral entropy dissipation
/// 1/2 sum K_n f(v) f(w) (u(v) - u(w))^T Pi(v - w) (u(v) - u(w)), u = grad f / f.
inline double dissipation_double(const ScalarField& f, int n, double f_tol_rel = kDefaultFTolRel) {
  const auto& g = f.grid();
  if (g.cells() > kDoubleDissipationMaxCells) throw std::invalid_argument("dissipation_double limited to N <= 12");
  const double tol = f_tol_rel * f.max();
  const auto grad = gradient(f);
  std::vector<Vec3> u(f.size(), Vec3{});
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] > tol) u[i] = {grad[0][i] / f[i], grad[1][i] / f[i], grad[2][i] / f[i]};

  std::vector<double> row(f.size(), 0.0);
  parallel_for(f.size(), [&](std::size_t i) {
    if (f[i] == 0.0) return;
    const Vec3 vi = g.position(i);
    double acc = 0.0;
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      if (f[j] == 0.0) continue;
      const Vec3 vj = g.position(j);
      const Vec3 z{vi[0] - vj[0], vi[1] - vj[1], vi[2] - vj[2]};
      const Vec3 du{u[i][0] - u[j][0], u[i][1] - u[j][1], u[i][2] - u[j][2]};
      acc += kn_eval(n, norm(z)) * f[i] * f[j] * projection(z).quadratic(du);
    }
    row[i] = acc;
  }, 1);
  // Each unordered pair appears once, which absorbs the factor 1/2.
  const double h3 = g.cell_volume();
  return pairwise_sum(row) * h3 * h3;
}

struct FisherInformation {
  double fisher = 0.0;       // integral |grad f|^2 / f
  double fisher_sqrt = 0.0;  // integral |grad sqrt f|^2
};

/// Both Fisher forms, each from its own central differences.
inline FisherInformation fisher(const ScalarField& f, double f_tol_rel = kDefaultFTolRel) {
  const auto& g = f.grid();
  const double tol = f_tol_rel * f.max();
  const auto grad = gradient(f);
  std::vector<double> roots(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) roots[i] = std::sqrt(std::max(f[i], 0.0));
  const auto grad_root = gradient(ScalarField(g, std::move(roots)));
  FisherInformation out;
  out.fisher = pairwise_reduce(0, f.size(), [&](std::size_t i) {
                 if (!(f[i] > tol)) return 0.0;
                 const Vec3 d{grad[0][i], grad[1][i], grad[2][i]};
                 return dot(d, d) / f[i];
               }) * g.cell_volume();
  out.fisher_sqrt = pairwise_reduce(0, f.size(), [&](std::size_t i) {
                      if (!(f[i] > tol)) return 0.0;
                      const Vec3 d{grad_root[0][i], grad_root[1][i], grad_root[2][i]};
                      return dot(d, d);
                    }) * g.cell_volume();
  return out;
}

/// Weighted Fisher information integral |grad f|^2 / f <v>^{-3}.
inline double weighted_fisher(const ScalarField& f, double f_tol_rel = kDefaultFTolRel) {
  const auto& g = f.grid();
  const double tol = f_tol_rel * f.max();
  const auto grad = gradient(f);
  return pairwise_reduce(0, f.size(), [&](std::size_t i) {
           if (!(f[i] > tol)) return 0.0;
           const Vec3 d{grad[0][i], grad[1][i], grad[2][i]};
           return dot(d, d) / f[i] * std::pow(bracket(g.position(i)), -3.0);
         }) * g.cell_volume();
}

/// H_3(f | M) = integral (f ln f - f + f |v|^2 + M) <v>^3.
inline double h3_relative(const ScalarField& f, double floor = kEntropyFloor) {
  const auto& g = f.grid();
  return pairwise_reduce(0, f.size(), [&](std::size_t i) {
           const Vec3 v = g.position(i);
           const double m = maxwellian(v);
           const double flnf = f[i] > floor ? f[i] * std::log(f[i]) : 0.0;
           return (flnf - f[i] + f[i] * dot(v, v) + m) * std::pow(bracket(v), 3);
         }) * g.cell_volume();
}

/// Per-cell integrand of H_3 in relative form m (x ln x - x + 1), x = f / M,
/// m = M <v>^3. Non-negative cell by cell.
inline std::vector<double> h3_relative_integrand(const ScalarField& f) {
  const auto& g = f.grid();
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vec3 v = g.position(i);
    const double m = maxwellian(v);
    const double x = f[i] / m;
    const double xlogx = x > 0.0 ? x * std::log(x) : 0.0;
    out[i] = m * std::pow(bracket(v), 3) * (xlogx - x + 1.0);
  }
  return out;
}

/// Default weights k of the ||f||_{L^2_k} diagnostics.
inline const std::vector<double>& default_k_list() {
  static const std::vector<double> ks{1.5, 2.0, 2.25};
  return ks;
}

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  Vec3 momentum{};
  double energy = 0.0;
  double entropy = 0.0;
  double dissipation = 0.0;
  double fisher = 0.0;
  double fisher_sqrt = 0.0;
  std::vector<double> l2;  // ||f||_{L^2_k} for each configured k
  double l3_m3 = 0.0;      // ||f||_{L^3_{-3}}
  double h3 = 0.0;
  double min_f = 0.0;
  double max_f = 0.0;
  double dt = 0.0;
};

inline DiagnosticsRecord record(const ScalarField& f, double t, double dt, const CoefficientField& coeffs,
                                const std::vector<double>& k_list, double f_tol_rel = kDefaultFTolRel) {
  DiagnosticsRecord r;
  r.t = t;
  r.dt = dt;
  const auto q = conserved_quantities(f);
  r.mass = q.mass;
  r.momentum = q.momentum;
  r.energy = q.energy;
  r.entropy = entropy(f);
  r.dissipation = dissipation_single(f, coeffs, f_tol_rel);
  const auto fi = fisher(f, f_tol_rel);
  r.fisher = fi.fisher;
  r.fisher_sqrt = fi.fisher_sqrt;
  for (double k : k_list) r.l2.push_back(weighted_lp_norm(f, 2.0, k));
  r.l3_m3 = weighted_lp_norm(f, 3.0, -3.0);
  r.h3 = h3_relative(f);
  r.min_f = f.min();
  r.max_f = f.max();
  return r;
}

}  // namespace landau
