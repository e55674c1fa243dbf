#pragma once

// Run configuration shared by the solver and the command-line front end.

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "landau/functionals.hpp"
#include "landau/initial_data.hpp"
#include "landau/kernel.hpp"

namespace landau {

enum class Scheme { explicit_euler, rk2 };

struct StepperConfig {
  Scheme scheme = Scheme::rk2;
  double cfl_safety = 0.5;
  double max_dt = std::numeric_limits<double>::infinity();
  int refresh = 1;  // steps between coefficient recomputations
};

/// Raised for invalid configuration values; the message names the key.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  int N = 32;
  double L = 5.0;
  int n = 4;
  ReactionKernel reaction = ReactionKernel::lattice_divergence;
  InitialDatumSpec init = Maxwellian{};
  bool mollify = false;
  double t_final = 1.0;
  StepperConfig stepper{};
  int every = 10;
  std::vector<double> snapshot_times;
  std::string output_dir = ".";
  std::vector<double> k_list = default_k_list();
  double f_tol = kDefaultFTolRel;
};

}  // namespace landau
