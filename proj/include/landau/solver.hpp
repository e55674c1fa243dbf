#pragma once

// Explicit time integration of
//   d_t f = div(A_n[f] grad f - b_n[f] f) + (1/n) lap f
// in conservative face-flux form with no-flux domain boundaries.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "landau/coefficients.hpp"
#include "landau/config.hpp"
#include "landau/functionals.hpp"
#include "landau/grid.hpp"
#include "landau/initial_data.hpp"
#include "landau/kernel.hpp"
#include "landau/series.hpp"

namespace landau {

class PositivityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// FNV-1a over the bit patterns of the values.
inline std::uint64_t fingerprint(const ScalarField& f) {
  std::uint64_t hash = 1469598103934665603ull;
  for (double v : f.values()) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      hash ^= (bits >> (8 * b)) & 0xffu;
      hash *= 1099511628211ull;
    }
  }
  return hash;
}

namespace detail {
inline double minmod3(double a, double b, double c) {
  if (a > 0.0 && b > 0.0 && c > 0.0) return std::min({a, b, c});
  if (a < 0.0 && b < 0.0 && c < 0.0) return std::max({a, b, c});
  return 0.0;
}

/// Monotonized-central limiter of two one-sided slopes.
inline double mc_limit(double a, double b) { return minmod3(2.0 * a, 2.0 * b, 0.5 * (a + b)); }
}  // namespace detail

/// How the tangential derivatives at a face are formed.
enum class TransverseGradient {
  limited,  // MC-limited combination of the four adjacent one-sided differences
  central,  // plain mean of the four one-sided differences
};

/// Face-flux divergence with explicit viscosity nu. Face values of A, b, f
/// are arithmetic means of the two adjacent cells and the normal derivative
/// is a two-point difference. Tangential derivatives combine the four
/// one-sided differences touching the face; the limited form keeps the
/// cross-diffusion from creating new extrema. Boundary faces carry no flux,
/// so the sum of the result times h^3 vanishes up to rounding.
inline ScalarField rhs_with_viscosity(const ScalarField& f, const CoefficientField& coeffs, double viscosity,
                                      TransverseGradient transverse = TransverseGradient::limited) {
  if (!(f.grid() == coeffs.grid)) throw std::invalid_argument("grid/coefficient mismatch in rhs");
  const auto& g = f.grid();
  const int n = g.cells();
  const double h = g.spacing();

  // flux[a][c]: flux through the face between c and c + e_a.
  std::array<std::vector<double>, 3> flux;
  for (auto& fl : flux) fl.assign(g.size(), 0.0);
  parallel_for(g.size(), [&](std::size_t c) {
    const auto ijk = g.coords(c);
    for (int a = 0; a < 3; ++a) {
      if (ijk[a] + 1 >= n) continue;
      auto up = ijk;
      up[a] += 1;
      const std::size_t d = g.index(up[0], up[1], up[2]);
      Vec3 df{};
      for (int b = 0; b < 3; ++b) {
        if (b == a) {
          df[b] = (f[d] - f[c]) / h;
          continue;
        }
        const double c_up = (detail::neighbour(f, ijk, b, 1) - f[c]) / h;
        const double c_down = (f[c] - detail::neighbour(f, ijk, b, -1)) / h;
        const double d_up = (detail::neighbour(f, up, b, 1) - f[d]) / h;
        const double d_down = (f[d] - detail::neighbour(f, up, b, -1)) / h;
        df[b] = transverse == TransverseGradient::limited
                    ? detail::mc_limit(detail::mc_limit(c_up, c_down), detail::mc_limit(d_up, d_down))
                    : 0.25 * (c_up + c_down + d_up + d_down);
      }
      const Sym3 ac = coeffs.A(c), ad = coeffs.A(d);
      double diffusive = 0.0;
      for (int b = 0; b < 3; ++b) diffusive += 0.5 * (ac(a, b) + ad(a, b)) * df[b];
      const double drift = 0.5 * (coeffs.b[a][c] + coeffs.b[a][d]) * 0.5 * (f[c] + f[d]);
      flux[a][c] = diffusive - drift + viscosity * df[a];
    }
  });

  ScalarField out(g);
  parallel_for(g.size(), [&](std::size_t c) {
    const auto ijk = g.coords(c);
    double acc = 0.0;
    for (int a = 0; a < 3; ++a) {
      acc += flux[a][c];
      if (ijk[a] > 0) {
        auto down = ijk;
        down[a] -= 1;
        acc -= flux[a][g.index(down[0], down[1], down[2])];
      }
    }
    out[c] = acc / h;
  });
  return out;
}

/// Right-hand side of the regularized equation (viscosity 1/n).
inline ScalarField rhs(const ScalarField& f, const CoefficientField& coeffs, int n) {
  return rhs_with_viscosity(f, coeffs, 1.0 / n);
}

/// dt = safety h^2 / (6 max lambda_max(A) + 6/n + h max |b|).
inline double cfl_dt(const CoefficientField& coeffs, int n, double h, double cfl_safety) {
  double lambda = 0.0, drift = 0.0;
  for (std::size_t i = 0; i < coeffs.grid.size(); ++i) {
    lambda = std::max(lambda, eigenvalues(coeffs.A(i))[2]);
    drift = std::max(drift, norm(coeffs.B(i)));
  }
  return cfl_safety * h * h / (6.0 * lambda + 6.0 / n + h * drift);
}

struct SolverState {
  double t = 0.0;
  ScalarField f;
  double dt = 0.0;
  long step_count = 0;
  std::optional<CoefficientField> coeffs;  // cache, valid for coeff_source
  std::uint64_t coeff_source = 0;
  int steps_since_refresh = 0;
};

/// Coefficients of state.f, reusing the cache when its fingerprint matches.
inline const CoefficientField& current_coefficients(SolverState& state, const CoefficientEngine& engine) {
  const auto fp = fingerprint(state.f);
  if (!state.coeffs || state.coeff_source != fp) {
    state.coeffs = engine.compute(state.f);
    state.coeff_source = fp;
    state.steps_since_refresh = 0;
  }
  return *state.coeffs;
}

namespace detail {
inline ScalarField axpy(const ScalarField& x, double a, const ScalarField& y) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * y[i];
  return ScalarField(x.grid(), std::move(out));
}
}  // namespace detail

/// One explicit Euler or Heun step with dt = min(cfl_dt, max_dt, dt_cap).
inline SolverState advance(SolverState state, const StepperConfig& stepper, const CoefficientEngine& engine,
                           double dt_cap = std::numeric_limits<double>::infinity()) {
  if (!(stepper.cfl_safety > 0.0 && stepper.cfl_safety <= 1.0))
    throw std::invalid_argument("cfl_safety must lie in (0, 1]");
  const int n = engine.n();
  const bool stale_ok = stepper.refresh > 1 && state.coeffs && state.steps_since_refresh < stepper.refresh;
  const CoefficientField coeffs = stale_ok ? *state.coeffs : current_coefficients(state, engine);

  const double dt = std::min({cfl_dt(coeffs, n, engine.grid().spacing(), stepper.cfl_safety), stepper.max_dt, dt_cap});
  if (!(dt > 0.0)) throw std::invalid_argument("non-positive time step");

  const ScalarField k1 = rhs(state.f, coeffs, n);
  ScalarField next = detail::axpy(state.f, dt, k1);
  if (stepper.scheme == Scheme::rk2) {
    const CoefficientField stage = stepper.refresh > 1 ? coeffs : engine.compute(next);
    const ScalarField k2 = rhs(next, stage, n);
    std::vector<double> out(next.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = state.f[i] + 0.5 * dt * (k1[i] + k2[i]);
    next = ScalarField(next.grid(), std::move(out));
  }

  const double fmax = next.max();
  const double fmin = next.min();
  if (fmin < -1e-12 * fmax)
    throw PositivityError("positivity lost: reduce dt or refine grid (min f = " + std::to_string(fmin) +
                          " at t = " + std::to_string(state.t + dt) + ")");

  SolverState out;
  out.t = state.t + dt;
  out.f = std::move(next);
  out.dt = dt;
  out.step_count = state.step_count + 1;
  if (stepper.refresh > 1) {
    out.coeffs = coeffs;
    out.coeff_source = state.coeff_source;
    out.steps_since_refresh = state.steps_since_refresh + 1;
  }
  return out;
}

struct RunResult {
  TimeSeries series;
  std::vector<TimedField> snapshots;
  std::string error;  // empty on success; partial output is kept otherwise
  bool ok() const { return error.empty(); }
};

/// Initial field of a configuration: sampled datum, optionally regularized.
inline ScalarField initial_field(const RunConfig& config, const VelocityGrid& grid) {
  ScalarField f = sample_datum(config.init, grid);
  return config.mollify ? mollify_and_floor(f, config.n) : f;
}

/// Integrates to t_final, recording diagnostics every `every` steps (and at
/// both ends) and keeping snapshots at the configured times.
inline RunResult run(const RunConfig& config, const std::string& fingerprint_text = {}) {
  RunResult result;
  const VelocityGrid grid = build_grid(config.N, config.L);
  const CoefficientEngine engine(build_kernels(grid, config.n, config.reaction));
  result.series.provenance = {fingerprint_text, config.n, config.N, config.L};
  result.series.k_list = config.k_list;

  SolverState state;
  state.f = initial_field(config, grid);

  std::vector<double> pending;
  for (double ts : config.snapshot_times)
    if (ts > 0.0 && ts <= config.t_final) pending.push_back(ts);
  std::sort(pending.begin(), pending.end());
  pending.erase(std::unique(pending.begin(), pending.end()), pending.end());
  if (std::find(config.snapshot_times.begin(), config.snapshot_times.end(), 0.0) != config.snapshot_times.end())
    result.snapshots.push_back({0.0, state.f});

  auto emit = [&] {
    const auto& coeffs = current_coefficients(state, engine);
    result.series.records.push_back(record(state.f, state.t, state.dt, coeffs, config.k_list, config.f_tol));
  };
  emit();

  std::size_t next_snapshot = 0;
  while (state.t < config.t_final) {
    const double target = next_snapshot < pending.size() ? std::min(pending[next_snapshot], config.t_final)
                                                         : config.t_final;
    try {
      state = advance(std::move(state), config.stepper, engine, target - state.t);
    } catch (const std::exception& e) {
      result.error = e.what();
      break;
    }
    if (std::abs(state.t - target) <= 1e-12 * std::max(1.0, target)) state.t = target;
    while (next_snapshot < pending.size() && state.t >= pending[next_snapshot]) {
      result.snapshots.push_back({state.t, state.f});
      ++next_snapshot;
    }
    if (state.step_count % config.every == 0 || state.t >= config.t_final) emit();
  }
  return result;
}

}  // namespace landau
