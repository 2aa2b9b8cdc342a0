#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "furry/dirac.hpp"
#include "furry/grid.hpp"
#include "furry/report.hpp"
#include "furry_cli/commands.hpp"
#include "furry_cli/config.hpp"

using namespace furry;
using namespace furry::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("furry_cli_test_" + tag + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

RunConfig small_config(const fs::path& out) {
  RunConfig c;
  c.grid.n = 64;
  c.gamma_list = {0.1, 0.2};
  c.series_order = 6;
  c.nbody.n_particles = 2;
  c.nbody.n_plus = 4;
  c.output_dir = out.string();
  return c;
}

int run_quiet(const std::string& cmd, const RunConfig& cfg, int threads = 1, std::string* log = nullptr) {
  std::ostringstream os;
  CommandOptions opt;
  opt.threads = threads;
  opt.log = &os;
  const int code = run_command(cmd, cfg, opt);
  if (log) *log = os.str();
  return code;
}

// Numeric fields of a CSV body, skipping '#' lines and the header.
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    rows.push_back(f);
  }
  return rows;
}

}  // namespace

TEST(Config, ParsesKeysCommentsAndLists) {
  const RunConfig c = parse_config(
      "# comment\n"
      "grid.n = 120\n"
      "grid.map_scale = 2.5   # trailing\n"
      "gamma_list = 0.05, 0.15,0.25\n"
      "series_order = 8\n"
      "nbody.n_particles = 3\n"
      "nbody.antisymmetrize = true\n"
      "tolerances.tol_gap = 1e-4\n"
      "output_dir = results\n"
      "\n"
      "seed = 7\n");
  EXPECT_EQ(c.grid.n, 120);
  EXPECT_DOUBLE_EQ(c.grid.map_scale, 2.5);
  ASSERT_EQ(c.gamma_list.size(), 3u);
  EXPECT_DOUBLE_EQ(c.gamma_list[1], 0.15);
  EXPECT_EQ(c.series_order, 8);
  EXPECT_EQ(c.nbody.n_particles, 3);
  EXPECT_TRUE(c.nbody.antisymmetrize);
  EXPECT_DOUBLE_EQ(c.tolerances.tol_gap, 1e-4);
  EXPECT_EQ(c.output_dir, "results");
  EXPECT_EQ(c.seed, 7);
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(parse_config("grid.size = 10\n"), ConfigError);
  EXPECT_THROW(parse_config("grid.n = ten\n"), ConfigError);
  EXPECT_THROW(parse_config("grid.n 10\n"), ConfigError);
  EXPECT_THROW(parse_config("gamma_list = 0.1,,0.2\n"), ConfigError);
  EXPECT_THROW(parse_config("nbody.antisymmetrize = maybe\n"), ConfigError);
  EXPECT_TRUE(parse_config("gamma_list =\n").gamma_list.empty());
  EXPECT_THROW(load_config("/nonexistent/furry.cfg"), ConfigError);
}

TEST(Config, RangeChecks) {
  RunConfig c;
  EXPECT_NO_THROW(validate_config(c));
  c.gamma_list = {0.7};
  EXPECT_THROW(validate_config(c), ConfigError);
  c = RunConfig{};
  c.grid.n = 4;
  EXPECT_THROW(validate_config(c), ConfigError);
  c = RunConfig{};
  c.grid.kappa = 0;
  EXPECT_THROW(validate_config(c), ConfigError);
  c = RunConfig{};
  c.contour.m_nodes = 15;
  EXPECT_THROW(validate_config(c), ConfigError);
  c = RunConfig{};
  c.tolerances.tol_diag = 0.0;
  EXPECT_THROW(validate_config(c), ConfigError);
}

TEST(Config, CanonicalFormRoundTrips) {
  RunConfig c;
  c.grid.n = 96;
  c.gamma_list = {0.125, 0.3};
  c.nbody.z_charge = 3.0;
  const RunConfig back = parse_config(canonical_config(c));
  EXPECT_EQ(canonical_config(back), canonical_config(c));
  EXPECT_EQ(config_hash(back), config_hash(c));
}

TEST(Config, HashIgnoresOutputDirButTracksNumbers) {
  RunConfig a, b;
  b.output_dir = "elsewhere";
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  b.grid.n = 201;
  EXPECT_NE(config_hash(a), config_hash(b));
  b = a;
  b.gamma_list.push_back(0.35);
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Report, CsvAndJsonRoundTrip) {
  ConvergenceReport r;
  r.rows = {{0.2, 3, 1.25e-7, 3.5e-6, 2.0e-8, 0.31}, {0.1, 0, 0.5, 0.25, 1e-3, 0.0}, {0.1, 1, 1.0 / 3.0, 0.1, 1e-17, 0.12}};
  r.sort_rows();
  r.validate();
  r.meta.config_hash = "0123456789abcdef";
  r.meta.grid_size = 200;
  r.meta.n_plus = 20;
  r.meta.n_particles = 2;
  r.meta.created = "2026-01-01T00:00:00Z";
  ASSERT_DOUBLE_EQ(r.rows.front().gamma, 0.1);
  for (const ConvergenceReport& back : {report_from_csv(report_to_csv(r)), report_from_json(report_to_json(r))}) {
    ASSERT_EQ(back.rows.size(), r.rows.size());
    for (size_t i = 0; i < r.rows.size(); ++i) {
      EXPECT_EQ(back.rows[i].gamma, r.rows[i].gamma);
      EXPECT_EQ(back.rows[i].k, r.rows[i].k);
      EXPECT_EQ(back.rows[i].resolvent_distance, r.rows[i].resolvent_distance);
      EXPECT_EQ(back.rows[i].weighted_remainder_norm, r.rows[i].weighted_remainder_norm);
      EXPECT_EQ(back.rows[i].max_eigval_error, r.rows[i].max_eigval_error);
      EXPECT_EQ(back.rows[i].fitted_ratio, r.rows[i].fitted_ratio);
    }
    EXPECT_EQ(back.meta.config_hash, r.meta.config_hash);
    EXPECT_EQ(back.meta.grid_size, 200);
    EXPECT_EQ(back.meta.n_plus, 20);
    EXPECT_EQ(back.meta.n_particles, 2);
  }
  EXPECT_EQ(report_to_csv(r).find("2026-01-01"), std::string::npos);
  EXPECT_NE(report_to_json(r).find("2026-01-01"), std::string::npos);
}

TEST(Report, ValidationRejectsBadRows) {
  ConvergenceReport r;
  r.rows = {{0.2, 1, 1e-3, 0, 0, 0}, {0.1, 0, 1e-3, 0, 0, 0}};
  EXPECT_THROW(r.validate(), InvalidArgument);
  r.sort_rows();
  EXPECT_NO_THROW(r.validate());
  r.rows[0].resolvent_distance = -1.0;
  EXPECT_THROW(r.validate(), InvalidArgument);
  r.rows[0].resolvent_distance = NAN;
  EXPECT_THROW(r.validate(), InvalidArgument);
}

TEST(Commands, EmptyGammaListIsAConfigError) {
  TempDir tmp("empty");
  RunConfig c = small_config(tmp.path);
  c.gamma_list.clear();
  std::string log;
  for (const char* cmd : {"one-particle", "converge", "nbody"}) {
    EXPECT_EQ(run_quiet(cmd, c, 1, &log), kConfigFailure) << cmd;
    EXPECT_NE(log.find("nothing to do"), std::string::npos) << log;
  }
  EXPECT_EQ(run_quiet("bogus", c), kConfigFailure);
}

TEST(Commands, CoarseGridFailsValidation) {
  TempDir tmp("coarse");
  RunConfig c = small_config(tmp.path);
  c.grid.n = 8;
  std::string log;
  EXPECT_EQ(run_quiet("validate", c, 1, &log), kValidationFailure);
  EXPECT_NE(log.find("validation failed"), std::string::npos) << log;
  EXPECT_TRUE(fs::exists(tmp.path / "validation_report.csv"));
}

TEST(Commands, OneParticleTables) {
  TempDir tmp("one");
  const RunConfig c = small_config(tmp.path);
  ASSERT_EQ(run_quiet("one-particle", c), kOk);
  const std::string summary = slurp(tmp.path / "one_particle_summary.csv");
  EXPECT_EQ(summary.rfind("# config_hash=" + config_hash(c), 0), 0u);
  const auto rows = csv_rows(summary);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    ASSERT_EQ(r.size(), 13u);
    EXPECT_LT(std::stod(r[3]), 1e-2);   // ground state vs closed form on a coarse grid
    EXPECT_LT(std::stod(r[4]), 1e-10);  // unitarity
    EXPECT_LT(std::stod(r[5]), 1e-10);  // intertwining
  }
  EXPECT_TRUE(fs::exists(tmp.path / "one_particle_gamma_0.100000.csv"));
  const auto spectrum = csv_rows(slurp(tmp.path / "one_particle_gamma_0.200000.csv"));
  EXPECT_EQ(spectrum.size(), 2u * 64u);
}

TEST(Commands, OneParticleIsDeterministicAcrossThreads) {
  TempDir a("det_a"), b("det_b"), c("det_c");
  RunConfig ca = small_config(a.path), cb = small_config(b.path), cc = small_config(c.path);
  ca.gamma_list = cb.gamma_list = cc.gamma_list = {0.1, 0.2, 0.3};
  ASSERT_EQ(run_quiet("one-particle", ca), kOk);
  ASSERT_EQ(run_quiet("one-particle", cb), kOk);
  ASSERT_EQ(run_quiet("one-particle", cc, 3), kOk);
  for (const char* f : {"one_particle_summary.csv", "one_particle_gamma_0.300000.csv"}) {
    EXPECT_EQ(slurp(a.path / f), slurp(b.path / f)) << f;
    const auto ra = csv_rows(slurp(a.path / f)), rc = csv_rows(slurp(c.path / f));
    ASSERT_EQ(ra.size(), rc.size());
    for (size_t i = 0; i < ra.size(); ++i)
      for (size_t j = 0; j < ra[i].size(); ++j) {
        const double x = std::stod(ra[i][j]), y = std::stod(rc[i][j]);
        EXPECT_LE(std::abs(x - y), 1e-13 * std::max(1.0, std::abs(x))) << f << " " << i << " " << j;
      }
  }
}

TEST(Commands, ConvergeWritesBothParticleCounts) {
  TempDir tmp("conv");
  const RunConfig c = small_config(tmp.path);
  ASSERT_EQ(run_quiet("converge", c), kOk);
  for (int n : {1, 2}) {
    const std::string stem = "converge_N" + std::to_string(n);
    const ConvergenceReport csv = report_from_csv(slurp(tmp.path / (stem + ".csv")));
    const ConvergenceReport json = report_from_json(slurp(tmp.path / (stem + ".json")));
    EXPECT_EQ(csv.rows.size(), 2u * (c.series_order + 1));
    EXPECT_EQ(csv.rows.size(), json.rows.size());
    EXPECT_EQ(csv.meta.n_particles, n);
    EXPECT_EQ(csv.meta.config_hash, config_hash(c));
    EXPECT_FALSE(json.meta.created.empty());
    EXPECT_NO_THROW(csv.validate());
    // Highest order beats the zeroth at every coupling.
    for (double g : c.gamma_list) {
      double first = -1, last = -1;
      for (const auto& r : csv.rows)
        if (r.gamma == g) {
          if (r.k == 0) first = r.resolvent_distance;
          if (r.k == c.series_order) last = r.resolvent_distance;
        }
      EXPECT_LT(last, first) << g;
    }
  }
}

TEST(Commands, SingleParticleNBodyMatchesOneParticle) {
  TempDir tmp("n1");
  RunConfig c = small_config(tmp.path);
  c.nbody.n_particles = 1;
  c.nbody.n_plus = 6;
  ASSERT_EQ(run_quiet("nbody", c), kOk);
  const auto rows = csv_rows(slurp(tmp.path / "nbody_spectrum.csv"));
  const ChannelGrid grid = build_channel_grid(c.grid.kappa, c.grid.n, c.grid.map_scale);
  for (double g : c.gamma_list) {
    const OneParticleSystem s = assemble_system(grid, g);
    int seen = 0;
    for (const auto& r : rows) {
      if (std::stod(r[0]) != g || r[1] != "exact") continue;
      const Index a = std::stol(r[2]);
      EXPECT_NEAR(std::stod(r[3]), s.eigenvalues(s.first_positive + a), 1e-10) << g << " " << a;
      ++seen;
    }
    EXPECT_EQ(seen, c.nbody.n_plus) << g;
  }
  EXPECT_EQ(csv_rows(slurp(tmp.path / "nbody_diagnostics.csv")).size(), c.gamma_list.size());
}

TEST(Commands, TwoParticleDiagnostics) {
  TempDir tmp("n2");
  const RunConfig c = small_config(tmp.path);
  ASSERT_EQ(run_quiet("nbody", c), kOk);
  const auto diag = csv_rows(slurp(tmp.path / "nbody_diagnostics.csv"));
  ASSERT_EQ(diag.size(), 2u);
  for (const auto& r : diag) {
    EXPECT_LE(std::stod(r[1]), std::stod(r[2]));  // form bound
    EXPECT_LE(std::stod(r[3]), std::stod(r[4]));  // kinetic weight
    EXPECT_GE(std::stod(r[6]), 0.0);              // spectrum above N sqrt(1 - g^2)
  }
  const std::string spectrum = slurp(tmp.path / "nbody_spectrum.csv");
  EXPECT_NE(spectrum.find("n_particles=2"), std::string::npos);
}

TEST(Commands, OversizedNBodyRejected) {
  TempDir tmp("big");
  RunConfig c = small_config(tmp.path);
  c.nbody.n_particles = 3;
  c.nbody.n_plus = 40;
  EXPECT_EQ(run_quiet("nbody", c), kConfigFailure);
}
