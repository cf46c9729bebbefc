#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = GFM_CLI_PATH;
const fs::path kScenarios = GFM_SCENARIO_DIR;
const fs::path kFixtures = GFM_FIXTURE_DIR;

struct CliRun {
  int code;
  std::string out;
};

CliRun run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + kCli + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe) != nullptr) out += buf.data();
  const int status = ::pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string scenario(const std::string& name) { return (kScenarios / name).string(); }
std::string fixture(const std::string& name) { return (kFixtures / name).string(); }

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("gfm_cli_" + std::to_string(::getpid()) + "_" + name);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string drop_first_line(const std::string& s) { return s.substr(s.find('\n') + 1); }

}  // namespace

TEST(Cli, ReportParsevalExitsZero) {
  const CliRun r = run("report --scenario " + scenario("parseval.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("# gfm report generated ", 0), 0u);
  EXPECT_NE(r.out.find("all asserted inequalities hold"), std::string::npos);
}

TEST(Cli, ReportJson) {
  const CliRun r = run("report --json --scenario " + scenario("axis_dual.json"));
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.contains("certificates"));
  EXPECT_TRUE(j.contains("assertions"));
  EXPECT_FALSE(j.at("violation").get<bool>());
}

TEST(Cli, ReportOptions) {
  EXPECT_EQ(run("report --scenario " + scenario("axis_perturbed.json") + " --nmax 3 --target-err 1e-3").code, 0);
  EXPECT_EQ(run("report --scenario " + scenario("axis_perturbed.json") + " --nmax -1").code, 1);
}

TEST(Cli, CorruptedBoundExitsTwo) {
  EXPECT_EQ(run("report --scenario " + fixture("corrupted_bound.json")).code, 2);
  EXPECT_EQ(run("invert --cert thm_main --scenario " + fixture("corrupted_bound.json")).code, 2);
}

TEST(Cli, UsageAndFormatErrorsExitOne) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("report").code, 1);
  EXPECT_EQ(run("report --scenario " + fixture("bad_columns.json")).code, 1);
  EXPECT_EQ(run("report --scenario " + fixture("truncated.json")).code, 1);
  EXPECT_EQ(run("report --scenario /nonexistent.json").code, 1);
  EXPECT_EQ(run("invert --cert bogus --scenario " + scenario("parseval.json")).code, 1);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run("--help").code, 0); }

TEST(Cli, GenerateIsDeterministic) {
  const fs::path a = temp_path("a.json"), b = temp_path("b.json");
  const std::string args =
      "generate --seed 42 --dim 8 --points 24 --ratio 0.5 --nu 0.01 --symbol near-one:0.1 --with-dual --out ";
  ASSERT_EQ(run(args + a.string()).code, 0);
  ASSERT_EQ(run(args + b.string()).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  const CliRun r1 = run("report --scenario " + a.string());
  const CliRun r2 = run("report --scenario " + b.string());
  EXPECT_EQ(r1.code, 0);
  EXPECT_EQ(drop_first_line(r1.out), drop_first_line(r2.out));
  fs::remove(a);
  fs::remove(b);
}

TEST(Cli, GenerateRejectsBadInput) {
  const fs::path p = temp_path("bad.json");
  EXPECT_EQ(run("generate --seed 1 --dim 2 --points 2 --ratio 0.5 --nu 0 --symbol wobbly:1 --out " + p.string()).code, 1);
  EXPECT_EQ(run("generate --seed 1 --dim 5 --points 2 --ratio 0.5 --nu 0 --symbol constant:1 --out " + p.string()).code, 1);
  EXPECT_EQ(run("generate --seed 1 --dim 2 --points 2 --ratio 0.5 --nu 0 --symbol constant:1").code, 1);
  EXPECT_FALSE(fs::exists(p));
}

TEST(Cli, Invert) {
  const CliRun r = run("invert --cert dualframes --terms 6 --scenario " + scenario("axis_dual.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("n,oracle_gap,certified_bound,holds"), std::string::npos);
  EXPECT_NE(r.out.find("terms_used=6"), std::string::npos);
  EXPECT_EQ(run("invert --cert cooor --target-err 1e-12 --scenario " + scenario("axis_dual.json")).code, 0);
  // every sufficient condition fails here
  EXPECT_EQ(run("invert --cert thm_main --scenario " + scenario("no_certificate.json")).code, 1);
  // no dual family in the file
  EXPECT_EQ(run("invert --cert dualframes --scenario " + scenario("parseval.json")).code, 1);
  EXPECT_EQ(run("invert --cert cooor --terms 3 --target-err 1e-3 --scenario " + scenario("parseval.json")).code, 1);
}

TEST(Cli, SweepRespectsThreadCap) {
  const fs::path gen = temp_path("sweep_base.json");
  ASSERT_EQ(run("generate --seed 7 --dim 4 --points 9 --ratio 0.5 --nu 0.02 --symbol near-one:0.1 --with-dual --out " +
                gen.string()).code, 0);
  const fs::path one = temp_path("one.csv"), four = temp_path("four.csv");
  const std::string args = "sweep --scenario " + gen.string() + " --param lambda_shift --from 0 --to 0.6 --steps 13 --out ";
  ASSERT_EQ(run(args + one.string(), "GFM_THREADS=1").code, 0);
  ASSERT_EQ(run(args + four.string(), "GFM_THREADS=4").code, 0);
  const std::string csv = slurp(one);
  EXPECT_EQ(csv, slurp(four));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 14);
  EXPECT_EQ(run(args + one.string(), "GFM_THREADS=lots").code, 1);
  EXPECT_EQ(run("sweep --scenario " + gen.string() + " --param lambda_shift --from 1 --to 1 --steps 4 --out " + one.string()).code, 1);
  EXPECT_EQ(run("sweep --scenario " + gen.string() + " --param wobble --from 0 --to 1 --steps 4 --out " + one.string()).code, 1);
  fs::remove(gen);
  fs::remove(one);
  fs::remove(four);
}
