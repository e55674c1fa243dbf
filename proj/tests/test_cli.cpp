#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sys/wait.h>

#include "landau/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome invoke(const std::string& args) {
  const std::string cmd = std::string(LANDAU_CLI_PATH) + " " + args + " 2>&1";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return o;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) o.out.append(buf, got);
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("landau_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static constexpr const char* kSmall =
      "[grid]\nN = 16\nL = 4\n[reg]\nn = 2\n"
      "[init]\nkind = gaussian_mixture\nmixture = 0.5 1 0 0 0.5; 0.5 -1 0 0 0.5\n"
      "[time]\nt_final = 0.05\n[output]\nevery = 1\nsnapshot_times = 0, 0.05\n";

  fs::path dir_;
};

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(invoke("").code, 2);
  EXPECT_EQ(invoke("frobnicate").code, 2);
  EXPECT_EQ(invoke("run").code, 2);
  EXPECT_EQ(invoke("oracle --N eight").code, 2);
  EXPECT_EQ(invoke("--help").code, 0);
}

TEST_F(Cli, ConfigurationErrorsExitTwoWithKey) {
  const auto bad = write("bad.cfg", "reg.n = 8\ngrid.N = 32\ngrid.L = 5\n");
  const auto o = invoke("run --config " + bad + " --out " + path("out"));
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.out.find("reg.n: kernel unresolved"), std::string::npos) << o.out;
  const auto unknown = write("unknown.cfg", "grid.size = 8\n");
  EXPECT_NE(invoke("run --config " + unknown).out.find("grid.size: unknown key"), std::string::npos);
  EXPECT_EQ(invoke("run --config " + path("missing.cfg")).code, 2);
}

TEST_F(Cli, RunThenCheckThenInfo) {
  const auto cfg = write("small.cfg", kSmall);
  const auto run = invoke("run --config " + cfg + " --out " + path("out"));
  ASSERT_EQ(run.code, 0) << run.out;
  ASSERT_TRUE(fs::exists(path("out/timeseries.csv")));
  ASSERT_TRUE(fs::exists(path("out/config.used.cfg")));
  std::vector<std::string> snaps;
  for (const auto& e : fs::directory_iterator(path("out")))
    if (e.path().extension() == ".lcf") snaps.push_back(e.path().string());
  ASSERT_EQ(snaps.size(), 2u);

  const auto series = landau::read_timeseries(path("out/timeseries.csv"));
  EXPECT_EQ(series.provenance.N, 16);
  EXPECT_EQ(series.provenance.n, 2);
  EXPECT_EQ(series.provenance.fingerprint, landau::config_fingerprint(landau::read_config(cfg)));
  EXPECT_EQ(series.records.back().t, 0.05);

  const auto check = invoke("check " + path("out/timeseries.csv") + " --snapshots " + snaps[0] + " " + snaps[1] +
                            " --report " + path("report.jsonl"));
  EXPECT_EQ(check.code, 0) << check.out;
  std::ifstream report(path("report.jsonl"));
  std::string line;
  int lines = 0;
  bool saw_h3 = false;
  while (std::getline(report, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.contains("check") && j.contains("pass") && j.contains("margin") && j.contains("values"));
    saw_h3 = saw_h3 || j["check"] == "h3_inequality";
    ++lines;
  }
  EXPECT_GE(lines, 8);
  EXPECT_TRUE(saw_h3);

  const auto info_csv = invoke("info " + path("out/timeseries.csv"));
  EXPECT_EQ(info_csv.code, 0);
  EXPECT_NE(info_csv.out.find("N = 16"), std::string::npos);
  const auto info_snap = invoke("info " + snaps[0]);
  EXPECT_EQ(info_snap.code, 0);
  EXPECT_NE(info_snap.out.find("snapshot LCF1"), std::string::npos);
}

TEST_F(Cli, RerunIsByteIdenticalApartFromTimestamp) {
  const auto cfg = write("small.cfg", kSmall);
  ASSERT_EQ(invoke("run --config " + cfg + " --out " + path("a")).code, 0);
  ASSERT_EQ(invoke("run --config " + cfg + " --out " + path("b")).code, 0);
  auto strip = [](const std::string& p) {
    std::ifstream in(p);
    std::string line, out;
    while (std::getline(in, line))
      if (line.rfind("# created", 0) != 0) out += line + "\n";
    return out;
  };
  EXPECT_EQ(strip(path("a/timeseries.csv")), strip(path("b/timeseries.csv")));
  for (const auto& e : fs::directory_iterator(path("a"))) {
    if (e.path().extension() != ".lcf") continue;
    std::ifstream x(e.path(), std::ios::binary), y(path("b") + "/" + e.path().filename().string(), std::ios::binary);
    const std::string sx((std::istreambuf_iterator<char>(x)), {}), sy((std::istreambuf_iterator<char>(y)), {});
    EXPECT_EQ(sx, sy);
  }
}

TEST_F(Cli, FailingCheckExitsOne) {
  landau::TimeSeries s;
  s.provenance.n = 2;
  s.k_list = landau::default_k_list();
  for (int j = 0; j < 20; ++j) {
    landau::DiagnosticsRecord r;
    r.t = 0.01 * j;
    r.mass = 1.0 + 0.01 * j;
    r.entropy = -1.0;
    r.fisher = 1.0;
    r.l2.assign(s.k_list.size(), 1.0);
    r.l3_m3 = 1.0;
    s.records.push_back(r);
  }
  landau::write_timeseries(path("drift.csv"), s);
  const auto o = invoke("check " + path("drift.csv"));
  EXPECT_EQ(o.code, 1) << o.out;
  EXPECT_NE(o.out.find("FAIL mass_conservation"), std::string::npos);
}

TEST_F(Cli, SchemaErrorExitsTwo) {
  const auto bad = write("bad.csv", "t,mass\n0,1\n");
  const auto o = invoke("check " + bad);
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.out.find("expected header"), std::string::npos);
  const auto junk = write("junk.lcf", "LCF1");
  EXPECT_EQ(invoke("info " + junk).code, 2);
}

TEST_F(Cli, InitWritesSnapshot) {
  const auto cfg = write("m.cfg", "grid.N = 16\ngrid.L = 4\nreg.n = 2\n");
  const auto o = invoke("init --config " + cfg + " --out " + path("m.lcf"));
  ASSERT_EQ(o.code, 0) << o.out;
  const auto snap = landau::read_snapshot(path("m.lcf"));
  EXPECT_EQ(snap.N, 16u);
  EXPECT_EQ(snap.t, 0.0);
}

TEST_F(Cli, OracleMeetsBothTolerances) {
  const auto o = invoke("oracle --mixtures 2");
  EXPECT_EQ(o.code, 0) << o.out;
  EXPECT_NE(o.out.find("max relative coefficient discrepancy"), std::string::npos);
  EXPECT_NE(o.out.find("max dissipation gap"), std::string::npos);
}

}  // namespace
