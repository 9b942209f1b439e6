#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "support.hpp"
#ifdef LLE_HAVE_CLI
#include "cli.hpp"
#endif

using namespace lle;
namespace fs = std::filesystem;

namespace {

constexpr double kT = 2 * std::numbers::pi;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("lle_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

Trajectory small_run(bool linearized = false) {
  SimConfig c;
  c.m_cells = 2;
  c.n_per_cell = 16;
  c.dt = 0.05;
  c.t_end = 1.0;
  c.snapshot_stride = 5;
  c.linearized = linearized;
  std::mt19937_64 rng(1);
  ExtendedField v0 = lle::testing::smooth_random(2, 16, kT, rng);
  return run_lle(lle::testing::wave(0.01), (1e-3 / l2_norm(v0)) * v0, c);
}

}  // namespace

TEST(ProfileJson, RoundtripIsBitExact) {
  TempDir d;
  const WaveProfile& p = lle::testing::wave(0.01);
  save_profile(p, d.file("p.json"));
  WaveProfile q = load_profile(d.file("p.json"));
  EXPECT_EQ(q.n_modes, p.n_modes);
  EXPECT_EQ(q.period, p.period);
  EXPECT_EQ(q.params.alpha, p.params.alpha);
  EXPECT_EQ(q.params.F, p.params.F);
  for (size_t k = 0; k < p.coeffs.size(); ++k) EXPECT_EQ(q.coeffs[k], p.coeffs[k]);
  EXPECT_TRUE(q.even);
  EXPECT_LE(std::abs(profile_residual(q) - profile_residual(p)), 1e-14);
}

TEST(ProfileJson, Errors) {
  EXPECT_THROW(profile_from_json(""), ParseError);
  EXPECT_THROW(profile_from_json("{not json"), ParseError);
  auto doc = nlohmann::json::parse(profile_to_json(lle::testing::wave(0.01)));
  auto bad = doc;
  bad["coeff_im"].erase(0);
  try {
    profile_from_json(bad.dump());
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("coeff_im"), std::string::npos);
  }
  bad = doc;
  bad["schema_version"] = 7;
  try {
    profile_from_json(bad.dump());
    FAIL();
  } catch (const FormatVersionError& e) {
    EXPECT_EQ(e.found, 7);
  }
  EXPECT_THROW(load_profile("/nonexistent/dir/p.json"), ValidationError);
}

TEST(SpectrumCsv, RoundtripAndOrdering) {
  const WaveProfile& p = lle::testing::wave(0.01);
  std::vector<SpectrumSlice> s;
  for (double xi : {-0.3, 0.0, 0.2}) s.push_back(spectrum_slice(assemble_bloch(p, xi, 4)));
  std::string csv = spectrum_csv(s);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "xi,re,im");
  auto back = parse_spectrum_csv(csv);
  ASSERT_EQ(back.size(), 3u);
  for (size_t a = 0; a < 3; ++a) {
    EXPECT_EQ(back[a].xi, s[a].xi);
    ASSERT_EQ(back[a].eigenvalues.size(), s[a].eigenvalues.size());
    for (size_t k = 0; k < s[a].eigenvalues.size(); ++k) {
      EXPECT_EQ(back[a].eigenvalues[k], s[a].eigenvalues[k]);
      if (k) EXPECT_GE(back[a].eigenvalues[k - 1].real(), back[a].eigenvalues[k].real());
    }
  }
  EXPECT_THROW(parse_spectrum_csv("xi,re,im\n0.1,abc,0\n"), ParseError);
}

TEST(Reports, ValidJson) {
  StabilityReport r = verify_stability(lle::testing::wave(0.01), 64, 8);
  auto j = nlohmann::json::parse(stability_json(r));
  EXPECT_EQ(j["verdict"].get<bool>(), r.verdict);
  DampingReport d;
  d.K = std::numeric_limits<double>::infinity();
  EXPECT_NO_THROW(nlohmann::json::parse(damping_json(d)));
  std::string ns = norm_series_csv(small_run());
  EXPECT_EQ(ns.substr(0, ns.find('\n')), "t,l2,d1,d2,d3,d4");
}

TEST(Snapshots, Roundtrip) {
  TempDir d;
  for (bool lin : {false, true}) {
    Trajectory tr = small_run(lin);
    save_snapshots(tr, d.file("s.bin"));
    Trajectory back = load_snapshots(d.file("s.bin"));
    EXPECT_EQ(back.linearized, lin);
    EXPECT_EQ(back.m_cells, tr.m_cells);
    EXPECT_EQ(back.n, tr.n);
    EXPECT_EQ(back.period, tr.period);
    ASSERT_EQ(back.snapshots.size(), tr.snapshots.size());
    for (size_t s = 0; s < tr.snapshots.size(); ++s) {
      EXPECT_EQ(back.snapshot_times[s], tr.snapshot_times[s]);
      for (int k = 0; k < tr.snapshots[s].size(); ++k) {
        EXPECT_EQ(back.snapshots[s].r[k], tr.snapshots[s].r[k]);
        EXPECT_EQ(back.snapshots[s].i[k], tr.snapshots[s].i[k]);
      }
    }
    auto size = fs::file_size(d.file("s.bin"));
    EXPECT_EQ(size, 8u + 4 + 4 + 8 + 4 + 4 + 4 + tr.snapshots.size() * (8 + 16 * 32));
  }
}

TEST(Snapshots, CorruptFiles) {
  TempDir d;
  save_snapshots(small_run(), d.file("s.bin"));
  std::string bytes = read_file(d.file("s.bin"));
  write_file(d.file("trunc.bin"), bytes.substr(0, bytes.size() - 9));
  EXPECT_THROW(load_snapshots(d.file("trunc.bin")), ParseError);
  std::string magic = bytes;
  magic[0] = 'X';
  write_file(d.file("magic.bin"), magic);
  EXPECT_THROW(load_snapshots(d.file("magic.bin")), ParseError);
  write_file(d.file("empty.bin"), "");
  EXPECT_THROW(load_snapshots(d.file("empty.bin")), ParseError);
}

#ifdef LLE_HAVE_CLI

namespace {

struct CliResult {
  int code;
  std::string out, err;
};

CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream o, e;
  int code = lle::cli::run_command(args, o, e);
  return {code, o.str(), e.str()};
}

}  // namespace

TEST(Cli, ExitCodes) {
  TempDir d;
  std::string prof = d.file("w.json");
  EXPECT_EQ(run_cli({"solve", "--alpha", "1", "--mu", "0.01", "--out", prof}).code, 0);
  EXPECT_EQ(run_cli({"solve", "--alpha", "1.5", "--mu", "0.01", "--out", prof}).code, 2);
  EXPECT_EQ(run_cli({"solve", "--alpha", "1", "--mu", "0.01", "--bogus", "1"}).code, 2);
  EXPECT_EQ(run_cli({"solve", "--alpha", "1", "--mu", "0.01", "--out", d.file("missing/w.json")}).code, 2);
  EXPECT_EQ(run_cli({"verify", "--profile", d.file("nope.json")}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"critical", "--profile", prof, "--samples", "8"}).code, 2);

  // homogeneous state: no spectral gap around the translation mode
  auto doc = nlohmann::json::parse(read_file(prof));
  int K = doc["K"];
  doc["coeff_re"] = std::vector<double>(2 * K + 1, 0.0);
  doc["coeff_im"] = std::vector<double>(2 * K + 1, 0.0);
  doc["coeff_re"][K] = 1.0;
  doc["F"] = 1.0;
  write_file(d.file("c.json"), doc.dump());
  CliResult r = run_cli({"critical", "--profile", d.file("c.json")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("numerical"), std::string::npos);
}

TEST(Cli, ConfigIsJson) {
  CliResult r = run_cli({"config"});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.is_object());
}

TEST(Cli, SpectrumDeterministicAcrossThreadCounts) {
  TempDir d;
  std::string prof = d.file("w.json");
  ASSERT_EQ(run_cli({"solve", "--alpha", "1", "--mu", "0.01", "--out", prof}).code, 0);
  std::vector<std::string> outs;
  for (const char* th : {"1", "3"}) {
    setenv("LLE_THREADS", th, 1);
    CliResult r = run_cli({"spectrum", "--profile", prof, "--n-xi", "16", "--K", "8"});
    ASSERT_EQ(r.code, 0);
    outs.push_back(r.out);
  }
  unsetenv("LLE_THREADS");
  EXPECT_EQ(outs[0], outs[1]);
}

TEST(Cli, Pipeline) {
  TempDir d;
  std::string prof = d.file("w.json"), snaps = d.file("s.bin");
  ASSERT_EQ(run_cli({"solve", "--alpha", "1", "--mu", "0.04", "--out", prof}).code, 0);
  CliResult v = run_cli({"verify", "--profile", prof, "--n-xi", "64", "--K", "16"});
  ASSERT_EQ(v.code, 0);
  EXPECT_TRUE(nlohmann::json::parse(v.out)["verdict"].get<bool>());
  CliResult c = run_cli({"critical", "--profile", prof, "--samples", "16"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_GT(nlohmann::json::parse(c.out)["d_fit"].get<double>(), 0.0);
  CliResult p = run_cli({"propagate", "--profile", prof, "--cells", "8", "--part", "Se", "--t-end", "4"});
  ASSERT_EQ(p.code, 0) << p.err;
  CliResult e = run_cli({"evolve", "--profile", prof, "--cells", "16", "--n-per-cell", "32", "--dt", "0.05",
               "--t-end", "30", "--stride", "20", "--init", "translational", "--snapshots", snaps});
  ASSERT_EQ(e.code, 0) << e.err;
  CliResult ph = run_cli({"phase-decay", "--profile", prof, "--snapshots", snaps});
  ASSERT_EQ(ph.code, 0) << ph.err;
  auto rep = nlohmann::json::parse(ph.out);
  EXPECT_TRUE(rep.contains("fits"));
  CliResult dm = run_cli({"damping", "--profile", prof, "--snapshots", snaps, "--j", "1"});
  EXPECT_EQ(dm.code, 2);  // 31 snapshots is below the damping minimum
}

#endif
