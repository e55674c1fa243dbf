#pragma once

// Command-line front end: run, check, oracle, init, info.
// Exit codes: 0 success, 1 run or check failure, 2 usage or configuration error.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "landau/coefficients.hpp"
#include "landau/corpus.hpp"
#include "landau/estimates.hpp"
#include "landau/functionals.hpp"
#include "landau/io.hpp"
#include "landau/solver.hpp"

namespace landau {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

inline std::string snapshot_name(std::size_t index, double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_%03zu_t%.6g.lcf", index, t);
  return buf;
}

inline nlohmann::json to_json(const CheckResult& r) {
  nlohmann::json j;
  j["check"] = r.name;
  j["pass"] = r.pass;
  j["hard"] = r.hard;
  j["margin"] = std::isfinite(r.margin) ? nlohmann::json(r.margin) : nlohmann::json(detail::format_double(r.margin));
  nlohmann::json values = nlohmann::json::object();
  for (const auto& [k, v] : r.values)
    values[k] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(detail::format_double(v));
  j["values"] = values;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline int cmd_run(const std::string& config_path, const std::string& out_dir_override) {
  RunConfig config = read_config(config_path);
  if (!out_dir_override.empty()) config.output_dir = out_dir_override;
  std::filesystem::create_directories(config.output_dir);
  const auto dir = std::filesystem::path(config.output_dir);
  const std::string fp = config_fingerprint(config);

  const auto result = run(config, fp);
  write_timeseries((dir / "timeseries.csv").string(), result.series, utc_timestamp());
  {
    std::ofstream used(dir / "config.used.cfg");
    used << "# fingerprint " << fp << "\n" << to_text(config);
  }
  for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
    const auto& s = result.snapshots[i];
    write_snapshot((dir / snapshot_name(i, s.t)).string(), make_snapshot(s.f, config.n, s.t));
  }
  std::cout << "records: " << result.series.records.size() << ", snapshots: " << result.snapshots.size()
            << ", output: " << dir.string() << "\n";
  if (!result.ok()) {
    std::cerr << "run stopped: " << result.error << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

inline int cmd_check(const std::string& csv_path, const std::vector<std::string>& snapshot_paths,
                     const std::string& report_path, const CheckOptions& options, const std::string& reaction) {
  const TimeSeries series = read_timeseries(csv_path);
  std::vector<TimedField> snapshots;
  int n = series.provenance.n;
  for (const auto& p : snapshot_paths) {
    const Snapshot s = read_snapshot(p);
    if (n == 0) n = static_cast<int>(s.n);
    if (static_cast<int>(s.n) != n) throw std::invalid_argument("snapshot " + p + " has a different n");
    snapshots.push_back({s.t, s.field()});
  }
  std::sort(snapshots.begin(), snapshots.end(), [](const auto& a, const auto& b) { return a.t < b.t; });

  std::unique_ptr<CoefficientEngine> engine;
  if (!snapshots.empty())
    engine = std::make_unique<CoefficientEngine>(build_kernels(
        snapshots.front().f.grid(), n,
        reaction == "sampled" ? ReactionKernel::sampled_profile : ReactionKernel::lattice_divergence));

  const auto results = run_checks(series, snapshots, engine.get(), options);
  std::ofstream report_file;
  if (!report_path.empty()) {
    report_file.open(report_path);
    if (!report_file) throw std::runtime_error("cannot write " + report_path);
  }
  bool failed = false;
  for (const auto& r : results) {
    if (report_file) report_file << to_json(r).dump() << "\n";
    if (!r.pass && r.hard) failed = true;
    std::cout << (r.pass ? "PASS " : (r.hard ? "FAIL " : "WARN ")) << r.name << "  margin=" << r.margin;
    if (!r.note.empty()) std::cout << "  (" << r.note << ")";
    std::cout << "\n";
  }
  std::cout << (failed ? "checks failed" : "all hard checks passed") << "\n";
  return failed ? kExitFailure : kExitOk;
}

inline int cmd_oracle(int n, int N, double L, int mixtures, std::uint64_t seed) {
  const auto grid = build_grid(N, L);
  const auto kernels = build_kernels(grid, n);
  const CoefficientEngine engine(kernels);
  std::vector<ScalarField> corpus{ScalarField::sample(grid, maxwellian)};
  for (const auto& m : mixture_corpus(seed, mixtures, non_equilibrium_ranges())) corpus.push_back(sample_datum(m, grid));

  const auto t0 = std::chrono::steady_clock::now();
  double worst_coeff = 0.0, worst_diss = 0.0;
  bool double_available = N <= kDoubleDissipationMaxCells;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& f = corpus[i];
    const auto fft = engine.compute(f);
    const double disc = max_relative_discrepancy(fft, direct_coefficients(f, kernels));
    worst_coeff = std::max(worst_coeff, disc);
    std::cout << "field " << i << ": coefficient discrepancy " << disc;
    if (double_available) {
      const double single = dissipation_single(f, fft);
      const double dbl = dissipation_double(f, n);
      const double gap = dbl != 0.0 ? std::abs(single - dbl) / std::abs(dbl) : std::abs(single);
      if (i > 0) worst_diss = std::max(worst_diss, gap);
      std::cout << ", dissipation single " << single << " double " << dbl << " gap " << gap;
    }
    std::cout << "\n";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "max relative coefficient discrepancy: " << worst_coeff << "\n";
  if (double_available) std::cout << "max dissipation gap (mixtures): " << worst_diss << "\n";
  std::cout << "elapsed: " << secs << " s\n";
  const bool ok = worst_coeff <= 1e-12 && (!double_available || worst_diss <= 0.05);
  return ok ? kExitOk : kExitFailure;
}

inline int cmd_init(const std::string& config_path, const std::string& out_path) {
  const RunConfig config = read_config(config_path);
  const auto grid = build_grid(config.N, config.L);
  const ScalarField f = initial_field(config, grid);
  write_snapshot(out_path, make_snapshot(f, config.n, 0.0));
  const auto q = conserved_quantities(f);
  std::cout << "wrote " << out_path << ": N=" << config.N << " L=" << config.L << " mass=" << q.mass
            << " energy=" << q.energy << "\n";
  return kExitOk;
}

inline int cmd_info(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw std::runtime_error("cannot open " + path);
  char magic[4] = {};
  probe.read(magic, 4);
  probe.close();
  if (std::equal(magic, magic + 4, kSnapshotMagic.begin())) {
    const Snapshot s = read_snapshot(path);
    const ScalarField f = s.field();
    const auto q = conserved_quantities(f);
    std::cout << "snapshot LCF1 v1\nN = " << s.N << "\nL = " << s.L << "\nn = " << s.n << "\nt = " << s.t
              << "\nmass = " << q.mass << "\nenergy = " << q.energy << "\nmin_f = " << f.min()
              << "\nmax_f = " << f.max() << "\n";
    return kExitOk;
  }
  const TimeSeries series = read_timeseries(path);
  const auto& p = series.provenance;
  std::cout << "time series\nfingerprint = " << (p.fingerprint.empty() ? "-" : p.fingerprint) << "\nn = " << p.n
            << "\nN = " << p.N << "\nL = " << p.L << "\nk_list = " << detail::join(series.k_list)
            << "\nrecords = " << series.records.size() << "\n";
  if (!series.records.empty())
    std::cout << "t range = [" << series.records.front().t << ", " << series.records.back().t << "]\n";
  return kExitOk;
}

}  // namespace detail

inline int cli_main(int argc, char** argv) {
  CLI::App app{"Regularized Landau-Coulomb solver and estimate checker"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  auto* run_cmd = app.add_subcommand("run", "integrate a configuration and write outputs");
  run_cmd->add_option("--config", config_path, "run configuration file")->required();
  run_cmd->add_option("--out", out_dir, "output directory (overrides output.dir)");

  std::string csv_path, report_path, reaction = "lattice";
  std::vector<std::string> snapshot_paths;
  CheckOptions options;
  auto* check_cmd = app.add_subcommand("check", "run the estimate checks on a time series");
  check_cmd->add_option("series", csv_path, "time-series CSV")->required();
  check_cmd->add_option("--snapshots", snapshot_paths, "LCF1 snapshots for field-level checks");
  check_cmd->add_option("--report", report_path, "write the JSON-lines check report here");
  check_cmd->add_option("--entropy-tol", options.entropy_tol, "normalized entropy-identity tolerance");
  check_cmd->add_option("--fisher-tol", options.fisher_tol, "relative Fisher uptick tolerance");
  check_cmd->add_option("--fisher-skip", options.fisher_skip, "initial records ignored by the Fisher check");
  check_cmd->add_option("--t-min", options.envelope_t_min, "start of the Fisher envelope window");
  check_cmd->add_option("--reaction", reaction, "reaction kernel for field checks")
      ->check(CLI::IsMember({"lattice", "sampled"}));

  int oracle_n = 2, oracle_N = 8, mixtures = 5;
  double oracle_L = 4.0;
  std::uint64_t seed = 1;
  auto* oracle_cmd = app.add_subcommand("oracle", "FFT vs direct coefficients and single vs double dissipation");
  oracle_cmd->add_option("--n", oracle_n, "regularization index");
  oracle_cmd->add_option("--N", oracle_N, "cells per axis (direct summation needs N <= 16)");
  oracle_cmd->add_option("--L", oracle_L, "domain half-width");
  oracle_cmd->add_option("--mixtures", mixtures, "number of random mixtures");
  oracle_cmd->add_option("--seed", seed, "corpus seed");

  std::string init_config, init_out;
  auto* init_cmd = app.add_subcommand("init", "sample the configured initial datum into a snapshot");
  init_cmd->add_option("--config", init_config, "run configuration file")->required();
  init_cmd->add_option("--out", init_out, "snapshot path")->required();

  std::string info_path;
  auto* info_cmd = app.add_subcommand("info", "print snapshot or time-series metadata");
  info_cmd->add_option("file", info_path, "LCF1 snapshot or CSV time series")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return detail::cmd_run(config_path, out_dir);
    if (check_cmd->parsed()) return detail::cmd_check(csv_path, snapshot_paths, report_path, options, reaction);
    if (oracle_cmd->parsed()) return detail::cmd_oracle(oracle_n, oracle_N, oracle_L, mixtures, seed);
    if (init_cmd->parsed()) return detail::cmd_init(init_config, init_out);
    if (info_cmd->parsed()) return detail::cmd_info(info_path);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace landau
