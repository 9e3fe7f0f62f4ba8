#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "gtest/gtest.h"

namespace {

struct CliResult {
  int status;
  std::string out;
};

// Runs the CLI with stderr discarded and returns its exit status and stdout.
CliResult run(const std::string& args) {
  const std::string cmd = std::string(QCKA_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  while (const std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int st = pclose(pipe);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string scenario_file(const char* name) { return std::string(QCKA_SCENARIO_DIR) + "/" + name; }

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

std::filesystem::path temp_path(const char* name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST(cli, analyze_catalog_scenario) {
  const CliResult r = run("analyze --scenario example1 --D 0.1 --restarts 2");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("intrinsic_upper_bound"), std::string::npos);
  EXPECT_NE(r.out.find("ppt_min_eigenvalue"), std::string::npos);
}

TEST(cli, analyze_formats) {
  const CliResult csv = run("analyze --scenario werner --lambda 0.5 --restarts 1 --format csv");
  EXPECT_EQ(csv.status, 0);
  EXPECT_EQ(count_lines(csv.out), 2u);
  EXPECT_EQ(csv.out.rfind("scenario,params,", 0), 0u);
  const CliResult js = run("analyze --scenario example6 --eve-frame rotated --restarts 1 --format json-record");
  EXPECT_EQ(js.status, 0);
  EXPECT_NE(js.out.find("\"eve_frame\":\"rotated\""), std::string::npos);
}

TEST(cli, usage_errors) {
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("analyze").status, 2);
  EXPECT_EQ(run("analyze --scenario werner --lambda 0.5 --bogus").status, 2);
  EXPECT_EQ(run("analyze --scenario werner --lambda 0.5 --format xml").status, 2);
  EXPECT_EQ(run("analyze --scenario werner --lambda 0.5 --eve-frame diagonal").status, 2);
  EXPECT_EQ(run("analyze --scenario werner --lambda x").status, 2);
  EXPECT_EQ(run("analyze --file " + scenario_file("werner_half.json") + " --scenario werner").status, 2);
  EXPECT_EQ(run("simulate --D 0.1").status, 2);
  EXPECT_EQ(run("--help").status, 0);
}

TEST(cli, validation_errors) {
  EXPECT_EQ(run("analyze --scenario example1 --D 0.7").status, 3);
  EXPECT_EQ(run("analyze --scenario example1").status, 3);
  EXPECT_EQ(run("analyze --scenario example9").status, 3);
  EXPECT_EQ(run("analyze --scenario example1 --D 0.1 --lambda 0.2").status, 3);
  EXPECT_EQ(run("analyze --scenario example7 --eve-frame rotated").status, 3);
  EXPECT_EQ(run("analyze --file /nonexistent.json").status, 3);
  EXPECT_EQ(run("simulate --D 0.1 --N 3").status, 3);
  EXPECT_EQ(run("simulate --D 0.1 --N 4 --trials 0").status, 3);
  EXPECT_EQ(run("scan --scenario werner --param lambda --from 0.5 --to 0.1 --step 0.1").status, 3);
}

TEST(cli, scenario_files) {
  for (const char* f : {"werner_half.json", "example1_low_noise.json", "example3_bound.json", "example7_inline.json", "bell_pair.json"}) {
    const CliResult r = run("analyze --restarts 1 --format csv --file " + scenario_file(f));
    EXPECT_EQ(r.status, 0) << f;
    EXPECT_EQ(count_lines(r.out), 2u) << f;
  }
  const CliResult bell = run("analyze --mu --format json-record --file " + scenario_file("bell_pair.json"));
  EXPECT_NE(bell.out.find("\"mu_quality\":\"exact\""), std::string::npos);
}

TEST(cli, scan_rows) {
  const CliResult r = run("scan --scenario example1 --param D --from 0 --to 0.5 --step 0.1 --restarts 0");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(count_lines(r.out), 7u);
  const CliResult e5 = run("scan --scenario example5 --deltaX 0.5 --deltaY 0.5 --param alpha --from 0.05 --to 0.45 --step 0.05 --restarts 0");
  EXPECT_EQ(e5.status, 0);
  EXPECT_EQ(count_lines(e5.out), 10u);
}

TEST(cli, simulate_reports_z_scores) {
  const CliResult r = run("simulate --D 0.25 --delta 0.8 --N 4 --trials 20000 --seed 3");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("bob_z"), std::string::npos);
  EXPECT_NE(r.out.find("beta_N                0.0121951219512"), std::string::npos);
  EXPECT_EQ(run("simulate --D 0.25 --delta 0.8 --N 4 --trials 20000 --seed 3").out, r.out);
}

TEST(cli, export_then_analyze) {
  const auto path = temp_path("qcka_cli_export.json");
  std::filesystem::remove(path);
  ASSERT_EQ(run("export --scenario example6 --out " + path.string()).status, 0);
  ASSERT_TRUE(std::filesystem::exists(path));
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  const CliResult direct = run("analyze --scenario example6 --restarts 1 --format csv");
  const CliResult loaded = run("analyze --file " + path.string() + " --restarts 1 --format csv");
  EXPECT_EQ(loaded.status, 0);
  // Same numbers; only the elapsed time column may differ.
  auto strip = [](std::string s) { return s.substr(0, s.rfind(',')); };
  EXPECT_EQ(strip(direct.out), strip(loaded.out));
  std::filesystem::remove(path);
}

TEST(cli, output_file_is_written_whole) {
  const auto path = temp_path("qcka_cli_out.csv");
  ASSERT_EQ(run("analyze --scenario werner --lambda 0.2 --restarts 0 --format csv --out " + path.string()).status, 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(count_lines(ss.str()), 2u);
  EXPECT_NE(run("analyze --scenario werner --lambda 0.2 --out /nonexistent/dir/x.csv").status, 0);
  std::filesystem::remove(path);
}
