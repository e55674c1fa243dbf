#pragma once

// Time series of diagnostics records and in-memory snapshots.

#include <string>
#include <vector>

#include "landau/functionals.hpp"
#include "landau/grid.hpp"

namespace landau {

/// Where a series came from. Fields are optional when read from a file that
/// lacks them (n = 0, N = 0 means unknown).
struct Provenance {
  std::string fingerprint;
  int n = 0;
  int N = 0;
  double L = 0.0;
};

struct TimeSeries {
  Provenance provenance;
  std::vector<double> k_list;
  std::vector<DiagnosticsRecord> records;

  /// Viscosity 1/n of the regularized equation, 0 if unknown.
  double viscosity() const { return provenance.n > 0 ? 1.0 / provenance.n : 0.0; }
};

struct TimedField {
  double t = 0.0;
  ScalarField f;
};

}  // namespace landau
