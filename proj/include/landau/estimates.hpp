#pragma once

// Checks of the a priori estimates on a time series of diagnostics and on
// individual fields: entropy identity, Fisher monotonicity and t^{-9/2}
// envelope, the comparison-ODE window for weighted L^2 norms, the H_3
// inequality, coercivity of the dissipation, interpolation inequalities,
// a weak-form residual and moment propagation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "landau/coefficients.hpp"
#include "landau/functionals.hpp"
#include "landau/grid.hpp"
#include "landau/series.hpp"

namespace landau {

namespace detail {

inline void require_records(const TimeSeries& series, std::size_t count, const char* what) {
  if (series.records.size() < count)
    throw std::invalid_argument(std::string("insufficient records for ") + what + ": need " + std::to_string(count) +
                                ", have " + std::to_string(series.records.size()));
}

inline std::size_t k_index(const TimeSeries& series, double k) {
  for (std::size_t i = 0; i < series.k_list.size(); ++i)
    if (std::abs(series.k_list[i] - k) <= 1e-12) return i;
  throw std::invalid_argument("weight k = " + std::to_string(k) + " is not among the series l2 columns");
}

/// Linear interpolation of a column at time t, which must lie in the record span.
template <class Column>
double interpolate(const TimeSeries& series, Column column, double t) {
  const auto& r = series.records;
  const double slack = 1e-12 * std::max(1.0, std::abs(t));
  if (t < r.front().t - slack || t > r.back().t + slack)
    throw std::invalid_argument("insufficient records: time " + std::to_string(t) + " outside the series span");
  if (t <= r.front().t) return column(r.front());
  for (std::size_t j = 1; j < r.size(); ++j) {
    if (t <= r[j].t) {
      const double w = (t - r[j - 1].t) / (r[j].t - r[j - 1].t);
      return (1.0 - w) * column(r[j - 1]) + w * column(r[j]);
    }
  }
  return column(r.back());
}

/// Trapezoidal integral of a column over [s, t], splitting at records and
/// interpolating linearly at the end points.
template <class Column>
double integrate(const TimeSeries& series, Column column, double s, double t) {
  if (t < s) throw std::invalid_argument("integration window must satisfy s <= t");
  if (t == s) return 0.0;
  std::vector<double> knots{s};
  for (const auto& rec : series.records)
    if (rec.t > s && rec.t < t) knots.push_back(rec.t);
  knots.push_back(t);
  double acc = 0.0;
  double prev = interpolate(series, column, knots.front());
  for (std::size_t j = 1; j < knots.size(); ++j) {
    const double cur = interpolate(series, column, knots[j]);
    acc += 0.5 * (prev + cur) * (knots[j] - knots[j - 1]);
    prev = cur;
  }
  return acc;
}

}  // namespace detail

/// One line of the check report.
struct CheckResult {
  std::string name;
  bool pass = true;
  bool hard = true;  // a failing hard check fails the whole report
  double margin = 0.0;
  std::map<std::string, double> values{};
  std::string note{};
};

// ---------------------------------------------------------------------------
// Entropy identity

struct EntropyIdentityReport {
  double s = 0.0, t = 0.0;
  double entropy_s = 0.0, entropy_t = 0.0;
  double dissipation_integral = 0.0;  // integral of D_n over [s, t]
  double viscous_integral = 0.0;      // viscosity times the integral of I
  double residual = 0.0;              // H(t) - H(s) + int D_n + nu int I
  double normalized = 0.0;            // |residual| / |H(s)|
  double landau_only_normalized = 0.0;  // same without the viscous term
};

/// Residual of H(t) + int_s^t (D_n + nu I) = H(s) with trapezoidal time
/// quadrature. The viscous term accounts for the (1/n) Laplacian; pass
/// viscosity 0 for the bare identity.
inline EntropyIdentityReport check_entropy_identity(const TimeSeries& series, double s, double t, double viscosity) {
  detail::require_records(series, 1, "entropy identity");
  EntropyIdentityReport rep;
  rep.s = s;
  rep.t = t;
  auto entropy_col = [](const DiagnosticsRecord& r) { return r.entropy; };
  rep.entropy_s = detail::interpolate(series, entropy_col, s);
  rep.entropy_t = detail::interpolate(series, entropy_col, t);
  rep.dissipation_integral = detail::integrate(series, [](const DiagnosticsRecord& r) { return r.dissipation; }, s, t);
  rep.viscous_integral =
      viscosity * detail::integrate(series, [](const DiagnosticsRecord& r) { return r.fisher; }, s, t);
  rep.residual = rep.entropy_t - rep.entropy_s + rep.dissipation_integral + rep.viscous_integral;
  const double scale = rep.entropy_s != 0.0 ? std::abs(rep.entropy_s) : 1.0;
  rep.normalized = std::abs(rep.residual) / scale;
  rep.landau_only_normalized = std::abs(rep.residual - rep.viscous_integral) / scale;
  return rep;
}

inline EntropyIdentityReport check_entropy_identity(const TimeSeries& series, double s, double t) {
  return check_entropy_identity(series, s, t, series.viscosity());
}

// ---------------------------------------------------------------------------
// Fisher information

struct FisherViolation {
  std::size_t index = 0;  // the pair (index, index + 1)
  double t_before = 0.0, t_after = 0.0;
  double before = 0.0, after = 0.0;
};

/// Consecutive pairs with I(t_{j+1}) > I(t_j) (1 + tol), ignoring the first
/// `skip` records.
inline std::vector<FisherViolation> check_fisher_monotone(const TimeSeries& series, double tol,
                                                          std::size_t skip = 0) {
  std::vector<FisherViolation> out;
  const auto& r = series.records;
  for (std::size_t j = skip; j + 1 < r.size(); ++j)
    if (r[j + 1].fisher > r[j].fisher * (1.0 + tol)) out.push_back({j, r[j].t, r[j + 1].t, r[j].fisher, r[j + 1].fisher});
  return out;
}

struct EnvelopeStat {
  double stat = 0.0;  // sup of I(t) t^{9/2} over t >= t_min
  double argmax = 0.0;
  std::size_t samples = 0;
  std::vector<FisherViolation> violations;
};

inline EnvelopeStat fisher_envelope_stat(const TimeSeries& series, double t_min, double monotone_tol = 1e-6) {
  EnvelopeStat out;
  out.stat = -std::numeric_limits<double>::infinity();
  const auto& r = series.records;
  std::size_t first = r.size();
  for (std::size_t j = 0; j < r.size(); ++j) {
    if (r[j].t < t_min || r[j].t <= 0.0) continue;
    first = std::min(first, j);
    ++out.samples;
    const double value = r[j].fisher * std::pow(r[j].t, 4.5);
    if (value > out.stat) {
      out.stat = value;
      out.argmax = r[j].t;
    }
  }
  if (out.samples == 0) throw std::invalid_argument("no records with t >= t_min");
  for (auto v : check_fisher_monotone(series, monotone_tol, first)) out.violations.push_back(v);
  return out;
}

// ---------------------------------------------------------------------------
// Comparison ODE for Y = ||f||^2_{L^2_k}

struct OdeBoundParams {
  double Ck = 1.0;
  double t0 = 0.0;
  double Y0 = 0.0;
};

inline void validate(const OdeBoundParams& p) {
  if (!(p.Ck > 0.0)) throw std::invalid_argument("C_k must be positive");
  if (!(p.Y0 >= 0.0)) throw std::invalid_argument("Y0 must be non-negative");
}

/// t1 = t0 + (2 C_k)^{-1} ln(1 + 1 / (1 + 2 Y0^2)).
inline double compute_t1(const OdeBoundParams& p) {
  validate(p);
  return p.t0 + std::log1p(1.0 / (1.0 + 2.0 * p.Y0 * p.Y0)) / (2.0 * p.Ck);
}

/// Bound on Y(sigma)^2 from Y' <= C_k (Y + Y^3):
/// Y^2 <= 1 / (exp(-2 C_k (sigma - t0)) (1 / Y0^2 + 1) - 1).
inline double ode_envelope(const OdeBoundParams& p, double sigma) {
  validate(p);
  if (sigma < p.t0) throw std::invalid_argument("ode_envelope requires sigma >= t0");
  if (p.Y0 == 0.0) return 0.0;
  const double y0sq = p.Y0 * p.Y0;
  const double denom = std::exp(-2.0 * p.Ck * (sigma - p.t0)) * (1.0 / y0sq + 1.0) - 1.0;
  if (!(denom > 0.0)) throw std::domain_error("window exceeded: comparison bound blows up before sigma");
  return sigma == p.t0 ? y0sq : 1.0 / denom;
}

struct T0Selection {
  double t0 = 0.0;
  double value = 0.0;           // ||f(t0)||_{L^3_{-3}}
  double window_average = 0.0;  // time average over [0, t/2]
  std::size_t index = 0;
};

/// argmin of ||f||_{L^3_{-3}} over records in [0, t/2].
inline T0Selection select_t0(const TimeSeries& series, double t) {
  const double half = 0.5 * t;
  T0Selection sel;
  sel.value = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> window;
  for (std::size_t j = 0; j < series.records.size(); ++j) {
    const auto& r = series.records[j];
    if (r.t < 0.0 || r.t > half * (1.0 + 1e-12)) continue;
    window.push_back(j);
    if (r.l3_m3 < sel.value) {
      sel.value = r.l3_m3;
      sel.t0 = r.t;
      sel.index = j;
    }
  }
  if (window.empty()) throw std::invalid_argument("empty window: no record in [0, t/2]");
  const auto& r = series.records;
  const double span = r[window.back()].t - r[window.front()].t;
  if (window.size() == 1 || span == 0.0) {
    sel.window_average = r[window.front()].l3_m3;
  } else {
    double acc = 0.0;
    for (std::size_t w = 1; w < window.size(); ++w)
      acc += 0.5 * (r[window[w]].l3_m3 + r[window[w - 1]].l3_m3) * (r[window[w]].t - r[window[w - 1]].t);
    sel.window_average = acc / span;
  }
  return sel;
}

struct CkCalibration {
  double Ck = 1.0;   // max(raw, 1)
  double raw = 0.0;  // max over consecutive records of Y' / (Y + Y^3)
  double argmax = 0.0;
};

/// Empirical comparison constant from finite differences of Y = ||f||^2_{L^2_k},
/// using midpoint values of Y in the denominator.
inline CkCalibration calibrate_Ck(const TimeSeries& series, double k, double t_max = std::numeric_limits<double>::infinity()) {
  detail::require_records(series, 3, "C_k calibration");
  const std::size_t col = detail::k_index(series, k);
  CkCalibration cal;
  cal.raw = -std::numeric_limits<double>::infinity();
  const auto& r = series.records;
  for (std::size_t j = 0; j + 1 < r.size() && r[j + 1].t <= t_max * (1.0 + 1e-12); ++j) {
    const double y0 = r[j].l2[col] * r[j].l2[col];
    const double y1 = r[j + 1].l2[col] * r[j + 1].l2[col];
    const double dt = r[j + 1].t - r[j].t;
    if (!(dt > 0.0)) continue;
    const double mid = 0.5 * (y0 + y1);
    const double ratio = (y1 - y0) / dt / (mid + mid * mid * mid);
    if (ratio > cal.raw) {
      cal.raw = ratio;
      cal.argmax = r[j].t;
    }
  }
  cal.Ck = std::max(cal.raw, 1.0);
  return cal;
}

struct L2WindowReport {
  double k = 0.0;
  T0Selection t0;
  CkCalibration calibration;
  double Y0 = 0.0;
  double t1 = 0.0;
  double window_end = 0.0;
  double sup_Y = 0.0;
  double bound = 0.0;  // sqrt(2) Y0
  double worst_envelope_ratio = 0.0;  // max Y^2 / ode_envelope over the window
  bool pass = false;
};

/// sup over [t0, min(t1, t)] of Y <= sqrt(2) Y(t0) (1 + 1e-6).
inline L2WindowReport check_l2_window(const TimeSeries& series, double k, double t) {
  detail::require_records(series, 3, "l2 window");
  if (series.records.front().t > 0.0 || series.records.back().t < t * (1.0 - 1e-12))
    throw std::invalid_argument("series does not cover [0, t]");
  L2WindowReport rep;
  rep.k = k;
  const std::size_t col = detail::k_index(series, k);
  rep.t0 = select_t0(series, t);
  rep.calibration = calibrate_Ck(series, k, t);
  const auto& r0 = series.records[rep.t0.index];
  rep.Y0 = r0.l2[col] * r0.l2[col];
  const OdeBoundParams params{rep.calibration.Ck, rep.t0.t0, rep.Y0};
  rep.t1 = compute_t1(params);
  rep.window_end = std::min(rep.t1, t);
  rep.bound = std::numbers::sqrt2 * rep.Y0;
  for (const auto& r : series.records) {
    if (r.t < rep.t0.t0 || r.t > rep.window_end) continue;
    const double y = r.l2[col] * r.l2[col];
    rep.sup_Y = std::max(rep.sup_Y, y);
    const double env = ode_envelope(params, r.t);
    if (env > 0.0) rep.worst_envelope_ratio = std::max(rep.worst_envelope_ratio, y * y / env);
  }
  rep.pass = rep.sup_Y <= rep.bound * (1.0 + 1e-6);
  return rep;
}

// ---------------------------------------------------------------------------
// Weighted relative entropy inequality

struct H3Report {
  double s1 = 0.0, s2 = 0.0;
  double c0 = 0.0;
  double h3_s1 = 0.0, h3_s2 = 0.0;
  double fisher_integral = 0.0;  // int_{s1}^{s2} I
  double growth_integral = 0.0;  // int_{s1}^{s2} (1 + ||f||_{L^2_2})^3
  double K = 0.0;                // smallest K making the inequality hold
  double margin = 0.0;           // rhs - lhs at that K
};

/// H_3(s2) + c0 int I <= H_3(s1) + K int (1 + ||f||_{L^2_2})^3, solved for K.
inline H3Report check_h3_inequality(const TimeSeries& series, double s1, double s2, double c0) {
  if (!(s1 >= 0.0 && s2 <= 1.0)) throw std::invalid_argument("h3 window must lie in [0, 1]");
  if (!(s1 < s2)) throw std::invalid_argument("h3 window is degenerate: need s1 < s2");
  const std::size_t col = detail::k_index(series, 2.0);
  H3Report rep;
  rep.s1 = s1;
  rep.s2 = s2;
  rep.c0 = c0;
  auto h3_col = [](const DiagnosticsRecord& r) { return r.h3; };
  rep.h3_s1 = detail::interpolate(series, h3_col, s1);
  rep.h3_s2 = detail::interpolate(series, h3_col, s2);
  rep.fisher_integral = detail::integrate(series, [](const DiagnosticsRecord& r) { return r.fisher; }, s1, s2);
  rep.growth_integral = detail::integrate(
      series, [col](const DiagnosticsRecord& r) { return std::pow(1.0 + r.l2[col], 3); }, s1, s2);
  const double excess = rep.h3_s2 + c0 * rep.fisher_integral - rep.h3_s1;
  rep.K = std::max(0.0, excess / rep.growth_integral);
  rep.margin = rep.h3_s1 + rep.K * rep.growth_integral - (rep.h3_s2 + c0 * rep.fisher_integral);
  return rep;
}

// ---------------------------------------------------------------------------
// Field-level checks

struct DissipationLowerReport {
  double dissipation = 0.0;
  double weighted_fisher = 0.0;
  double c1 = 0.0;  // +infinity when the weighted Fisher information vanishes
};

/// c1 = (D + 1) / integral |grad f|^2 / f <v>^{-3}.
inline DissipationLowerReport check_dissipation_lower(const ScalarField& f, double dissipation,
                                                      double f_tol_rel = kDefaultFTolRel) {
  DissipationLowerReport rep;
  rep.dissipation = dissipation;
  rep.weighted_fisher = weighted_fisher(f, f_tol_rel);
  rep.c1 = rep.weighted_fisher > 0.0 ? (dissipation + 1.0) / rep.weighted_fisher
                                     : std::numeric_limits<double>::infinity();
  return rep;
}

inline DissipationLowerReport check_dissipation_lower(const ScalarField& f, const CoefficientField& coeffs,
                                                      double f_tol_rel = kDefaultFTolRel) {
  return check_dissipation_lower(f, dissipation_single(f, coeffs, f_tol_rel), f_tol_rel);
}

struct InterpolationMargin {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  bool ok(double rel_slack = 1e-12) const { return margin >= -rel_slack * rhs; }
};

struct InterpolationReport {
  std::vector<InterpolationMargin> margins;
  double sobolev_ratio = 0.0;  // ||f||_6 / ||grad f||_2, 0 when the gradient vanishes
  bool ok(double rel_slack = 1e-12) const {
    return std::all_of(margins.begin(), margins.end(), [&](const auto& m) { return m.ok(rel_slack); });
  }
};

/// The four Holder-type interpolation inequalities for weight k and the
/// Sobolev quotient.
inline InterpolationReport check_interpolations(const ScalarField& f, double k) {
  auto norm_pk = [&](double p, double w) { return weighted_lp_norm(f, p, w); };
  auto entry = [](std::string name, double lhs, double rhs) {
    return InterpolationMargin{std::move(name), lhs, rhs, rhs - lhs};
  };
  InterpolationReport rep;
  rep.margins.push_back(entry("l2k_by_l3m3_l1", norm_pk(2.0, k),
                              std::pow(norm_pk(3.0, -3.0), 0.75) * std::pow(norm_pk(1.0, 9.0 + 4.0 * k), 0.25)));
  rep.margins.push_back(entry("l3_by_l6_l2", norm_pk(3.0, k - 0.75),
                              std::sqrt(norm_pk(6.0, k - 1.5)) * std::sqrt(norm_pk(2.0, k))));
  rep.margins.push_back(entry("l52_by_l6_l2", norm_pk(2.5, k - 0.5),
                              std::pow(norm_pk(6.0, k - 5.0 / 3.0), 0.3) * std::pow(norm_pk(2.0, k), 0.7)));
  rep.margins.push_back(entry("l43_by_l2_l1", norm_pk(4.0 / 3.0, 4.0),
                              std::sqrt(norm_pk(2.0, 2.0)) * std::sqrt(norm_pk(1.0, 6.0))));
  const auto grad = gradient(f);
  const double grad_sq = pairwise_reduce(0, f.size(), [&](std::size_t i) {
                           return grad[0][i] * grad[0][i] + grad[1][i] * grad[1][i] + grad[2][i] * grad[2][i];
                         }) * f.grid().cell_volume();
  rep.sobolev_ratio = grad_sq > 0.0 ? norm_pk(6.0, 0.0) / std::sqrt(grad_sq) : 0.0;
  return rep;
}

// ---------------------------------------------------------------------------
// Weak-form residual

/// phi(t, v) = psi(v) theta(t).
struct SeparableTestFunction {
  ScalarField psi;
  std::function<double(double)> theta;
  std::function<double(double)> theta_dot;
};

struct WeakResidualReport {
  double end_term = 0.0;       // int f(T) phi(T) - int f(0) phi(0)
  double time_term = 0.0;      // int int f d_t phi
  double flux_term = 0.0;      // int int (A grad f - b f + nu grad f) . grad phi
  double residual = 0.0;       // end - time + flux
  double normalized = 0.0;     // |residual| / largest term
};

/// Minimum distance in cells between the support of psi and the boundary.
inline constexpr int kTestFunctionMargin = 2;

/// Divergence-form weak residual of the regularized equation on the snapshot
/// times, with central differences in v and the trapezoidal rule in t.
inline WeakResidualReport weak_residual(const std::vector<TimedField>& snapshots, const SeparableTestFunction& phi,
                                        const CoefficientEngine& engine, double viscosity) {
  if (snapshots.size() < 2) throw std::invalid_argument("weak residual needs at least two snapshots");
  const auto& g = phi.psi.grid();
  if (!(g == engine.grid())) throw std::invalid_argument("test function and kernels live on different grids");
  const int n = g.cells();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (phi.psi[i] == 0.0) continue;
    const auto c = g.coords(i);
    for (int a = 0; a < 3; ++a)
      if (c[a] < kTestFunctionMargin || c[a] >= n - kTestFunctionMargin)
        throw std::invalid_argument("test function touches the boundary layer");
  }
  const double h3 = g.cell_volume();
  const auto grad_psi = gradient(phi.psi);
  auto pairing = [&](const ScalarField& f) {
    return pairwise_reduce(0, f.size(), [&](std::size_t i) { return f[i] * phi.psi[i]; }) * h3;
  };
  auto flux_pairing = [&](const ScalarField& f) {
    const auto coeffs = engine.compute(f);
    const auto grad_f = gradient(f);
    return pairwise_reduce(0, f.size(), [&](std::size_t i) {
             const Vec3 df{grad_f[0][i], grad_f[1][i], grad_f[2][i]};
             const Vec3 ad = coeffs.A(i).apply(df);
             double acc = 0.0;
             for (int a = 0; a < 3; ++a) acc += (ad[a] - coeffs.b[a][i] * f[i] + viscosity * df[a]) * grad_psi[a][i];
             return acc;
           }) * h3;
  };

  std::vector<double> times, mass_pair, flux_pair;
  for (const auto& snap : snapshots) {
    snap.f.require_same_grid(phi.psi);
    times.push_back(snap.t);
    mass_pair.push_back(pairing(snap.f));
    flux_pair.push_back(flux_pairing(snap.f));
  }
  for (std::size_t j = 1; j < times.size(); ++j)
    if (!(times[j] > times[j - 1])) throw std::invalid_argument("snapshot times must increase strictly");

  WeakResidualReport rep;
  rep.end_term = mass_pair.back() * phi.theta(times.back()) - mass_pair.front() * phi.theta(times.front());
  for (std::size_t j = 1; j < times.size(); ++j) {
    const double dt = times[j] - times[j - 1];
    rep.time_term += 0.5 * dt * (mass_pair[j] * phi.theta_dot(times[j]) + mass_pair[j - 1] * phi.theta_dot(times[j - 1]));
    rep.flux_term += 0.5 * dt * (flux_pair[j] * phi.theta(times[j]) + flux_pair[j - 1] * phi.theta(times[j - 1]));
  }
  rep.residual = rep.end_term - rep.time_term + rep.flux_term;
  const double scale = std::max({std::abs(rep.end_term), std::abs(rep.time_term), std::abs(rep.flux_term)});
  rep.normalized = scale > 0.0 ? std::abs(rep.residual) / scale : 0.0;
  return rep;
}

// ---------------------------------------------------------------------------
// Moments

struct MomentReport {
  double k = 0.0;
  double T = 0.0;
  double initial = 0.0;
  double sup = 0.0;
  double ratio = 0.0;
  bool pass = false;  // sup <= 2 * initial
};

/// sup over t <= T of the weighted moments given as (time, value) pairs.
inline MomentReport moment_propagation_check(const std::vector<double>& times, const std::vector<double>& values,
                                             double k, double T) {
  if (times.size() != values.size() || times.empty())
    throw std::invalid_argument("moment check needs matching, non-empty times and values");
  MomentReport rep;
  rep.k = k;
  rep.T = T;
  rep.initial = values.front();
  for (std::size_t j = 0; j < times.size(); ++j)
    if (times[j] <= T * (1.0 + 1e-12)) rep.sup = std::max(rep.sup, values[j]);
  rep.ratio = rep.initial > 0.0 ? rep.sup / rep.initial : std::numeric_limits<double>::infinity();
  rep.pass = rep.sup <= 2.0 * rep.initial;
  return rep;
}

/// k = 2 from the series: integral f <v>^2 = mass + 2 energy.
inline MomentReport moment_propagation_check(const TimeSeries& series, double T) {
  detail::require_records(series, 1, "moment propagation");
  std::vector<double> times, values;
  for (const auto& r : series.records) {
    times.push_back(r.t);
    values.push_back(r.mass + 2.0 * r.energy);
  }
  return moment_propagation_check(times, values, 2.0, T);
}

/// Any k from snapshots.
inline MomentReport moment_propagation_check(const std::vector<TimedField>& snapshots, double k, double T) {
  std::vector<double> times, values;
  for (const auto& s : snapshots) {
    times.push_back(s.t);
    values.push_back(weighted_integral(s.f, k));
  }
  return moment_propagation_check(times, values, k, T);
}

// ---------------------------------------------------------------------------
// Harness

struct CheckOptions {
  double entropy_tol = 1e-2;
  double fisher_tol = 1e-6;
  std::size_t fisher_skip = 5;
  double envelope_t_min = 0.05;
  double mass_tol = 1e-12;
};

/// Runs every series-level check, plus the field-level checks when
/// snapshots and kernels are supplied. Each result is self-describing.
inline std::vector<CheckResult> run_checks(const TimeSeries& series, const std::vector<TimedField>& snapshots = {},
                                           const CoefficientEngine* engine = nullptr,
                                           const CheckOptions& options = {}) {
  std::vector<CheckResult> out;
  detail::require_records(series, 1, "checks");
  const auto& r = series.records;
  const double t_end = r.back().t;

  auto guarded = [&](const std::string& name, auto&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      CheckResult res;
      res.name = name;
      res.pass = false;
      res.note = e.what();
      out.push_back(res);
    }
  };

  guarded("mass_conservation", [&] {
    double drift = 0.0;
    for (const auto& rec : r) drift = std::max(drift, std::abs(rec.mass - r.front().mass));
    CheckResult res{"mass_conservation"};
    res.values["relative_drift"] = r.front().mass != 0.0 ? drift / std::abs(r.front().mass) : drift;
    res.margin = options.mass_tol - res.values["relative_drift"];
    res.pass = res.margin >= 0.0;
    out.push_back(res);
  });

  guarded("entropy_identity", [&] {
    const auto rep = check_entropy_identity(series, r.front().t, t_end);
    CheckResult res{"entropy_identity"};
    res.values = {{"residual", rep.residual},
                  {"normalized", rep.normalized},
                  {"viscous_integral", rep.viscous_integral},
                  {"dissipation_integral", rep.dissipation_integral},
                  {"landau_only_normalized", rep.landau_only_normalized}};
    res.margin = options.entropy_tol - rep.normalized;
    res.pass = res.margin >= 0.0;
    out.push_back(res);
  });

  guarded("fisher_monotone", [&] {
    const auto v = check_fisher_monotone(series, options.fisher_tol, options.fisher_skip);
    CheckResult res{"fisher_monotone"};
    res.values["violations"] = static_cast<double>(v.size());
    if (!v.empty()) res.values["first_violation_t"] = v.front().t_after;
    res.margin = -static_cast<double>(v.size());
    res.pass = v.empty();
    out.push_back(res);
  });

  guarded("fisher_envelope", [&] {
    const auto st = fisher_envelope_stat(series, options.envelope_t_min, options.fisher_tol);
    CheckResult res{"fisher_envelope"};
    res.values = {{"C_prime", st.stat}, {"argmax_t", st.argmax}, {"violations", double(st.violations.size())}};
    res.pass = std::isfinite(st.stat);
    res.margin = res.pass ? 0.0 : -1.0;
    out.push_back(res);
  });

  if (r.size() >= 3 && r.front().t <= 0.0) {
    for (double k : series.k_list) {
      const std::string name = "l2_window_k" + std::to_string(k).substr(0, 4);
      guarded(name, [&] {
        const auto rep = check_l2_window(series, k, t_end);
        CheckResult res{name};
        res.values = {{"t0", rep.t0.t0},     {"Y0", rep.Y0},         {"C_k", rep.calibration.Ck},
                      {"t1", rep.t1},        {"sup_Y", rep.sup_Y},   {"bound", rep.bound},
                      {"envelope_ratio", rep.worst_envelope_ratio}};
        res.margin = rep.bound * (1.0 + 1e-6) - rep.sup_Y;
        res.pass = rep.pass;
        out.push_back(res);
      });
    }
  }

  guarded("moment_propagation_k2", [&] {
    const auto rep = moment_propagation_check(series, std::min(t_end, 1.0));
    CheckResult res{"moment_propagation_k2"};
    res.values = {{"ratio", rep.ratio}, {"initial", rep.initial}, {"sup", rep.sup}};
    res.margin = 2.0 * rep.initial - rep.sup;
    res.pass = rep.pass;
    out.push_back(res);
  });

  if (engine == nullptr || snapshots.empty()) return out;

  for (const auto& snap : snapshots) {
    const std::string suffix = "@t=" + std::to_string(snap.t);
    guarded("field_checks" + suffix, [&] {
      const auto coeffs = engine->compute(snap.f);
      const auto coer = coercivity_estimate(coeffs);
      CheckResult c0{"coercivity" + suffix};
      c0.values = {{"c0", coer.c0}};
      c0.margin = coer.c0;
      c0.pass = coer.c0 > 0.0;
      out.push_back(c0);

      const auto low = check_dissipation_lower(snap.f, coeffs);
      CheckResult c1{"dissipation_lower" + suffix};
      c1.values = {{"c1", low.c1}, {"dissipation", low.dissipation}, {"weighted_fisher", low.weighted_fisher}};
      c1.margin = low.c1;
      c1.pass = low.c1 > 0.0;
      out.push_back(c1);

      for (double k : series.k_list) {
        const auto rep = check_interpolations(snap.f, k);
        CheckResult ip{"interpolation_k" + std::to_string(k).substr(0, 4) + suffix};
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& m : rep.margins) {
          ip.values[m.name] = m.margin;
          worst = std::min(worst, m.rhs > 0.0 ? m.margin / m.rhs : m.margin);
        }
        ip.values["sobolev_ratio"] = rep.sobolev_ratio;
        ip.margin = worst;
        ip.pass = rep.ok();
        out.push_back(ip);
      }
    });
  }

  const double s1 = snapshots.front().t;
  const double s2 = std::min(1.0, t_end);
  if (s1 < s2 && s1 >= 0.0) {
    guarded("h3_inequality", [&] {
      const auto c0 = coercivity_estimate(engine->compute(snapshots.front().f)).c0;
      const auto rep = check_h3_inequality(series, s1, s2, c0);
      CheckResult res{"h3_inequality"};
      res.values = {{"K", rep.K}, {"c0", c0}, {"h3_s1", rep.h3_s1}, {"h3_s2", rep.h3_s2}};
      res.margin = rep.margin;
      res.pass = std::isfinite(rep.K);
      out.push_back(res);
    });
  }

  if (snapshots.size() >= 2) {
    guarded("weak_residual", [&] {
      const auto& g = engine->grid();
      const double half = g.half_width() - (kTestFunctionMargin + 1) * g.spacing();
      const double radius = std::min(1.5, half);
      ScalarField psi = ScalarField::sample(g, [&](const Vec3& v) {
        const double s = dot(v, v) / (radius * radius);
        return s < 1.0 ? std::pow(1.0 - s, 3) : 0.0;
      });
      const double t0 = snapshots.front().t, t1 = snapshots.back().t;
      SeparableTestFunction phi{psi, [&](double t) { return 1.0 + 0.5 * (t - t0) / std::max(t1 - t0, 1e-300); },
                                [&](double) { return 0.5 / std::max(t1 - t0, 1e-300); }};
      const auto rep = weak_residual(snapshots, phi, *engine, series.viscosity());
      CheckResult res{"weak_residual"};
      res.hard = false;
      res.values = {{"residual", rep.residual}, {"normalized", rep.normalized}};
      res.margin = -rep.normalized;
      res.pass = true;
      out.push_back(res);
    });
  }
  return out;
}

}  // namespace landau
