#pragma once

// Persistence: the run-configuration grammar, the CSV time-series schema and
// the LCF1 binary snapshot format.
//
// Configuration grammar (one setting per line):
//   # comment            blank lines and '#' comments are ignored
//   [section]            prefixes following keys with "section."
//   key = value          keys are "grid.N", "reg.n", ... (see config_keys())
// Lists are comma separated; mixture components are separated by ';' and
// each reads "rho ux uy uz T".

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "landau/config.hpp"
#include "landau/grid.hpp"
#include "landau/initial_data.hpp"
#include "landau/kernel.hpp"
#include "landau/series.hpp"

namespace landau {

// ---------------------------------------------------------------------------
// Text helpers

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_double(const std::string& text, const std::string& what) {
  if (text.empty()) throw std::invalid_argument(what + ": empty value");
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') throw std::invalid_argument(what + ": not a number: '" + text + "'");
  return v;
}

inline long parse_integer(const std::string& text, const std::string& what) {
  if (text.empty()) throw std::invalid_argument(what + ": empty value");
  const char* begin = text.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0') throw std::invalid_argument(what + ": not an integer: '" + text + "'");
  return v;
}

inline bool parse_bool(const std::string& text, const std::string& what) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw std::invalid_argument(what + ": expected true or false, got '" + text + "'");
}

inline std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const auto& item : split(text, ',')) out.push_back(parse_double(item, what));
  return out;
}

/// Shortest decimal that round-trips a double.
inline std::string format_double(double v) {
  char buf[64];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string join(const std::vector<double>& values, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += format_double(values[i]);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Run configuration

/// Every accepted configuration key.
inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "grid.N",           "grid.L",         "reg.n",          "reg.reaction",          "init.kind",
      "init.rho",         "init.u",         "init.T",         "init.mixture",          "init.a",
      "init.eps",         "init.mollify",   "time.t_final",   "time.cfl_safety",       "time.max_dt",
      "stepper.scheme",   "stepper.refresh", "output.every",  "output.snapshot_times", "output.dir",
      "diagnostics.k_list", "diagnostics.f_tol"};
  return keys;
}

namespace detail {

inline Gaussian parse_component(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::vector<double> v;
  std::string tok;
  while (in >> tok) v.push_back(parse_double(tok, key));
  if (v.size() != 5) throw ConfigError(key + ": mixture component needs 'rho ux uy uz T', got '" + text + "'");
  return Gaussian{v[0], {v[1], v[2], v[3]}, v[4]};
}

/// Re-validates all numeric constraints; messages start with the key.
inline void validate_config(const RunConfig& c) {
  auto wrap = [](const std::string& key, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(key + ": " + e.what());
    }
  };
  VelocityGrid grid;
  wrap(c.N < 8 || c.N % 2 ? "grid.N" : "grid.L", [&] { grid = build_grid(c.N, c.L); });
  if (c.n <= 0) throw ConfigError("reg.n: regularization index must be a positive integer");
  if (!kernel_resolved(grid, c.n))
    throw ConfigError("reg.n: kernel unresolved: decrease n or refine grid (n*h = " +
                      format_double(c.n * grid.spacing()) + " > " + format_double(kMaxCoreRatio) + ")");
  wrap("init", [&] { validate(c.init); });
  if (c.mollify && 1.0 / (c.n * grid.spacing()) < kMollifierMinCells)
    throw ConfigError("init.mollify: mollifier unresolved: radius 1/n spans " +
                      format_double(1.0 / (c.n * grid.spacing())) + " cells, need >= 4");
  if (!(c.t_final >= 0.0) || !std::isfinite(c.t_final)) throw ConfigError("time.t_final: must be finite and >= 0");
  if (!(c.stepper.cfl_safety > 0.0 && c.stepper.cfl_safety <= 1.0))
    throw ConfigError("time.cfl_safety: must lie in (0, 1]");
  if (!(c.stepper.max_dt > 0.0)) throw ConfigError("time.max_dt: must be positive");
  if (c.stepper.refresh < 1) throw ConfigError("stepper.refresh: must be >= 1");
  if (c.every < 1) throw ConfigError("output.every: must be >= 1");
  for (double t : c.snapshot_times)
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("output.snapshot_times: times must be finite and >= 0");
  if (c.k_list.empty()) throw ConfigError("diagnostics.k_list: must not be empty");
  for (double k : c.k_list)
    if (!std::isfinite(k)) throw ConfigError("diagnostics.k_list: weights must be finite");
  if (!(c.f_tol > 0.0 && c.f_tol < 1.0)) throw ConfigError("diagnostics.f_tol: must lie in (0, 1)");
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::string kind = "maxwellian";
  Gaussian gaussian;
  std::vector<Gaussian> mixture;
  SingularPower singular;
  std::string section;
  std::vector<std::string> seen;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (!section.empty()) key = section + "." + key;
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError(key + ": unknown key");
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) throw ConfigError(key + ": duplicate key");
    seen.push_back(key);

    try {
      if (key == "grid.N") c.N = static_cast<int>(detail::parse_integer(value, key));
      else if (key == "grid.L") c.L = detail::parse_double(value, key);
      else if (key == "reg.n") c.n = static_cast<int>(detail::parse_integer(value, key));
      else if (key == "reg.reaction") {
        if (value == "lattice") c.reaction = ReactionKernel::lattice_divergence;
        else if (value == "sampled") c.reaction = ReactionKernel::sampled_profile;
        else throw ConfigError(key + ": expected lattice or sampled, got '" + value + "'");
      } else if (key == "init.kind") kind = value;
      else if (key == "init.rho") gaussian.rho = detail::parse_double(value, key);
      else if (key == "init.u") {
        const auto u = detail::parse_list(value, key);
        if (u.size() != 3) throw ConfigError(key + ": expected three components");
        gaussian.u = {u[0], u[1], u[2]};
      } else if (key == "init.T") gaussian.T = detail::parse_double(value, key);
      else if (key == "init.mixture") {
        for (const auto& comp : detail::split(value, ';'))
          if (!comp.empty()) mixture.push_back(detail::parse_component(comp, key));
      } else if (key == "init.a") singular.a = detail::parse_double(value, key);
      else if (key == "init.eps") singular.eps = detail::parse_double(value, key);
      else if (key == "init.mollify") c.mollify = detail::parse_bool(value, key);
      else if (key == "time.t_final") c.t_final = detail::parse_double(value, key);
      else if (key == "time.cfl_safety") c.stepper.cfl_safety = detail::parse_double(value, key);
      else if (key == "time.max_dt") c.stepper.max_dt = detail::parse_double(value, key);
      else if (key == "stepper.scheme") {
        if (value == "rk2") c.stepper.scheme = Scheme::rk2;
        else if (value == "explicit_euler") c.stepper.scheme = Scheme::explicit_euler;
        else throw ConfigError(key + ": expected rk2 or explicit_euler, got '" + value + "'");
      } else if (key == "stepper.refresh") c.stepper.refresh = static_cast<int>(detail::parse_integer(value, key));
      else if (key == "output.every") c.every = static_cast<int>(detail::parse_integer(value, key));
      else if (key == "output.snapshot_times") c.snapshot_times = detail::parse_list(value, key);
      else if (key == "output.dir") c.output_dir = value;
      else if (key == "diagnostics.k_list") c.k_list = detail::parse_list(value, key);
      else if (key == "diagnostics.f_tol") c.f_tol = detail::parse_double(value, key);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }

  if (kind == "maxwellian") c.init = Maxwellian{};
  else if (kind == "gaussian") c.init = gaussian;
  else if (kind == "gaussian_mixture") {
    if (mixture.empty()) throw ConfigError("init.mixture: gaussian_mixture needs at least one component");
    c.init = GaussianMixture{mixture};
  } else if (kind == "singular_power") c.init = singular;
  else throw ConfigError("init.kind: unknown datum '" + kind + "'");

  detail::validate_config(c);
  return c;
}

inline RunConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

/// Canonical text of a configuration; parse_config(to_text(c)) reproduces c.
inline std::string to_text(const RunConfig& c) {
  using detail::format_double;
  std::ostringstream out;
  out << "grid.N = " << c.N << "\n"
      << "grid.L = " << format_double(c.L) << "\n"
      << "reg.n = " << c.n << "\n"
      << "reg.reaction = " << (c.reaction == ReactionKernel::lattice_divergence ? "lattice" : "sampled") << "\n";
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        auto gauss = [&](const Gaussian& g) {
          return format_double(g.rho) + " " + format_double(g.u[0]) + " " + format_double(g.u[1]) + " " +
                 format_double(g.u[2]) + " " + format_double(g.T);
        };
        if constexpr (std::is_same_v<S, Maxwellian>) {
          out << "init.kind = maxwellian\n";
        } else if constexpr (std::is_same_v<S, Gaussian>) {
          out << "init.kind = gaussian\ninit.rho = " << format_double(s.rho) << "\ninit.u = "
              << detail::join({s.u[0], s.u[1], s.u[2]}) << "\ninit.T = " << format_double(s.T) << "\n";
        } else if constexpr (std::is_same_v<S, GaussianMixture>) {
          out << "init.kind = gaussian_mixture\ninit.mixture = ";
          for (std::size_t i = 0; i < s.components.size(); ++i) out << (i ? "; " : "") << gauss(s.components[i]);
          out << "\n";
        } else {
          out << "init.kind = singular_power\ninit.a = " << format_double(s.a) << "\ninit.eps = " << format_double(s.eps)
              << "\n";
        }
      },
      c.init);
  out << "init.mollify = " << (c.mollify ? "true" : "false") << "\n"
      << "time.t_final = " << format_double(c.t_final) << "\n"
      << "time.cfl_safety = " << format_double(c.stepper.cfl_safety) << "\n";
  if (std::isfinite(c.stepper.max_dt)) out << "time.max_dt = " << format_double(c.stepper.max_dt) << "\n";
  out << "stepper.scheme = " << (c.stepper.scheme == Scheme::rk2 ? "rk2" : "explicit_euler") << "\n"
      << "stepper.refresh = " << c.stepper.refresh << "\n"
      << "output.every = " << c.every << "\n"
      << "output.snapshot_times = " << detail::join(c.snapshot_times) << "\n"
      << "output.dir = " << c.output_dir << "\n"
      << "diagnostics.k_list = " << detail::join(c.k_list) << "\n"
      << "diagnostics.f_tol = " << format_double(c.f_tol) << "\n";
  return out.str();
}

/// 16 hex digits of FNV-1a over the canonical text, output.dir excluded.
inline std::string config_fingerprint(const RunConfig& c) {
  RunConfig copy = c;
  copy.output_dir = ".";
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char ch : to_text(copy)) {
    hash ^= ch;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

// ---------------------------------------------------------------------------
// CSV time series

/// Column names for a k list, e.g. l2_1.5, l2_2, l2_2.25.
inline std::vector<std::string> csv_columns(const std::vector<double>& k_list) {
  std::vector<std::string> cols{"t", "mass", "px", "py", "pz", "energy", "entropy", "dissipation", "fisher", "fisher_sqrt"};
  for (double k : k_list) cols.push_back("l2_" + detail::format_double(k));
  for (const char* c : {"l3_m3", "h3", "min_f", "max_f", "dt"}) cols.push_back(c);
  return cols;
}

inline std::string csv_header(const std::vector<double>& k_list) {
  std::string out;
  for (const auto& c : csv_columns(k_list)) out += (out.empty() ? "" : ",") + c;
  return out;
}

namespace detail {
inline std::string format_csv_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace detail

/// Comment lines, then the header, then one row per record. The timestamp,
/// when given, sits on its own comment line.
inline void write_timeseries(std::ostream& out, const TimeSeries& series, const std::string& timestamp = {}) {
  const auto& p = series.provenance;
  out << "# landau timeseries v1\n";
  out << "# provenance fingerprint=" << (p.fingerprint.empty() ? "-" : p.fingerprint) << " n=" << p.n << " N=" << p.N
      << " L=" << detail::format_csv_value(p.L) << "\n";
  if (!timestamp.empty()) out << "# created " << timestamp << "\n";
  out << csv_header(series.k_list) << "\n";
  for (const auto& r : series.records) {
    if (r.l2.size() != series.k_list.size()) throw std::invalid_argument("record l2 size does not match k_list");
    std::vector<double> row{r.t, r.mass, r.momentum[0], r.momentum[1], r.momentum[2], r.energy, r.entropy,
                            r.dissipation, r.fisher, r.fisher_sqrt};
    row.insert(row.end(), r.l2.begin(), r.l2.end());
    for (double v : {r.l3_m3, r.h3, r.min_f, r.max_f, r.dt}) row.push_back(v);
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << detail::format_csv_value(row[i]);
    out << "\n";
  }
}

inline void write_timeseries(const std::string& path, const TimeSeries& series, const std::string& timestamp = {}) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_timeseries(out, series, timestamp);
}

class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline TimeSeries read_timeseries(std::istream& in) {
  TimeSeries series;
  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream fields(line.substr(1));
      std::string tok;
      fields >> tok;
      if (tok != "provenance") continue;
      while (fields >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq), value = tok.substr(eq + 1);
        if (key == "fingerprint") series.provenance.fingerprint = value == "-" ? "" : value;
        else if (key == "n") series.provenance.n = static_cast<int>(detail::parse_integer(value, "provenance n"));
        else if (key == "N") series.provenance.N = static_cast<int>(detail::parse_integer(value, "provenance N"));
        else if (key == "L") series.provenance.L = detail::parse_double(value, "provenance L");
      }
      continue;
    }
    if (header.empty()) {
      header = detail::split(line, ',');
      for (const auto& col : header)
        if (col.rfind("l2_", 0) == 0) series.k_list.push_back(detail::parse_double(col.substr(3), "column " + col));
      const auto expected = csv_columns(series.k_list);
      const std::string expected_text = csv_header(series.k_list);
      for (const auto& col : expected)
        if (std::find(header.begin(), header.end(), col) == header.end())
          throw SchemaError("schema error: missing column '" + col + "'; expected header: " + expected_text);
      for (const auto& col : header)
        if (std::find(expected.begin(), expected.end(), col) == expected.end())
          throw SchemaError("schema error: unexpected column '" + col + "'; expected header: " + expected_text);
      if (header != expected)
        throw SchemaError("schema error: columns out of order; expected header: " + expected_text);
      continue;
    }
    const auto cells = detail::split(line, ',');
    if (cells.size() != header.size())
      throw SchemaError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                        " values, found " + std::to_string(cells.size()));
    std::vector<double> v(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      try {
        v[i] = detail::parse_double(cells[i], header[i]);
      } catch (const std::exception& e) {
        throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    DiagnosticsRecord r;
    std::size_t i = 0;
    r.t = v[i++];
    r.mass = v[i++];
    for (auto& m : r.momentum) m = v[i++];
    r.energy = v[i++];
    r.entropy = v[i++];
    r.dissipation = v[i++];
    r.fisher = v[i++];
    r.fisher_sqrt = v[i++];
    for (std::size_t k = 0; k < series.k_list.size(); ++k) r.l2.push_back(v[i++]);
    r.l3_m3 = v[i++];
    r.h3 = v[i++];
    r.min_f = v[i++];
    r.max_f = v[i++];
    r.dt = v[i++];
    if (!series.records.empty() && !(r.t > series.records.back().t))
      throw SchemaError("line " + std::to_string(line_no) + ": time must increase strictly");
    series.records.push_back(std::move(r));
  }
  if (header.empty()) throw SchemaError("schema error: no header line; expected header: " + csv_header(default_k_list()));
  return series;
}

inline TimeSeries read_timeseries(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_timeseries(in);
}

// ---------------------------------------------------------------------------
// LCF1 snapshots

struct Snapshot {
  std::uint32_t N = 0;
  double L = 0.0;
  std::uint32_t n = 0;
  double t = 0.0;
  std::vector<double> values;  // N^3, x fastest

  ScalarField field() const { return ScalarField(build_grid(static_cast<int>(N), L), values); }
};

inline constexpr std::array<char, 4> kSnapshotMagic{'L', 'C', 'F', '1'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

namespace detail {
template <class T>
void put_le(std::ostream& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const U bits = std::bit_cast<U>(value);
  char bytes[sizeof(U)];
  for (std::size_t b = 0; b < sizeof(U); ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xffu);
  out.write(bytes, sizeof(U));
}

template <class T>
bool get_le(std::istream& in, T& value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  unsigned char bytes[sizeof(U)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(U))) return false;
  U bits = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) bits |= static_cast<U>(bytes[b]) << (8 * b);
  value = std::bit_cast<T>(bits);
  return true;
}
}  // namespace detail

inline Snapshot make_snapshot(const ScalarField& f, int n, double t) {
  Snapshot s;
  s.N = static_cast<std::uint32_t>(f.grid().cells());
  s.L = f.grid().half_width();
  s.n = static_cast<std::uint32_t>(n);
  s.t = t;
  s.values.assign(f.values().begin(), f.values().end());
  return s;
}

inline void write_snapshot(std::ostream& out, const Snapshot& s) {
  const std::size_t count = static_cast<std::size_t>(s.N) * s.N * s.N;
  if (s.values.size() != count) throw std::invalid_argument("snapshot payload does not hold N^3 values");
  out.write(kSnapshotMagic.data(), 4);
  detail::put_le(out, kSnapshotVersion);
  detail::put_le(out, s.N);
  detail::put_le(out, s.L);
  detail::put_le(out, s.n);
  detail::put_le(out, s.t);
  for (double v : s.values) detail::put_le(out, v);
}

inline void write_snapshot(const std::string& path, const Snapshot& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_snapshot(out, s);
}

inline Snapshot read_snapshot(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4) || magic != kSnapshotMagic) throw std::runtime_error("not an LCF1 snapshot: bad magic");
  Snapshot s;
  std::uint32_t version = 0;
  if (!detail::get_le(in, version)) throw std::runtime_error("snapshot header truncated");
  if (version != kSnapshotVersion)
    throw std::runtime_error("unsupported snapshot version " + std::to_string(version) + " (expected 1)");
  if (!detail::get_le(in, s.N) || !detail::get_le(in, s.L) || !detail::get_le(in, s.n) || !detail::get_le(in, s.t))
    throw std::runtime_error("snapshot header truncated");
  if (s.N == 0 || s.N > 4096) throw std::runtime_error("snapshot header has implausible N = " + std::to_string(s.N));
  const std::size_t count = static_cast<std::size_t>(s.N) * s.N * s.N;
  s.values.resize(count);
  for (std::size_t i = 0; i < count; ++i)
    if (!detail::get_le(in, s.values[i]))
      throw std::runtime_error("payload short: expected N^3 = " + std::to_string(count) + " values, found " +
                               std::to_string(i));
  return s;
}

inline Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_snapshot(in);
}

}  // namespace landau
