#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef NCG_CLI_PATH
#error "NCG_CLI_PATH must point at the ncg executable"
#endif

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ncg-cli-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Result run(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd = std::string(NCG_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

fs::path only_file(const fs::path& dir, const std::string& prefix) {
  fs::path found;
  int count = 0;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().filename().string().rfind(prefix, 0) == 0) {
      found = e.path();
      ++count;
    }
  EXPECT_EQ(count, 1) << prefix;
  return found;
}

}  // namespace

TEST(CliTest, UnknownCommandIsUsageError) {
  const auto dir = scratch("unknown");
  EXPECT_EQ(run("frobnicate", dir).code, 2);
  EXPECT_EQ(run("", dir).code, 2);
  EXPECT_EQ(run("bulk-chern --format xml", dir).code, 2);
}

TEST(CliTest, SelftestPasses) {
  const auto dir = scratch("selftest");
  const auto r = run("selftest --out " + (dir / "out").string(), dir);
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  const auto report = slurp(only_file(dir / "out", "selftest-"));
  EXPECT_NE(report.find("\"passed\":true"), std::string::npos);
  only_file(dir / "out", "manifest-");
}

TEST(CliTest, BulkEdgeOnFluxThirdPasses) {
  const auto dir = scratch("bulk-edge");
  std::ofstream(dir / "flux.cfg") << "L1 = 24\nL2 = 24\np = 1\nq = 3\nmu = -1.366\ngap_lo = -1.93\ngap_hi = -0.78\n"
                                     "margin = 0.02\n";
  const auto r = run("bulk-edge --config " + (dir / "flux.cfg").string() + " --out " + (dir / "a").string(), dir);
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  const auto text = slurp(only_file(dir / "a", "bulk-edge-"));
  EXPECT_NE(text.find("\"verdict\":\"pass\""), std::string::npos);

  const auto again = run("bulk-edge --config " + (dir / "flux.cfg").string() + " --out " + (dir / "b").string(), dir);
  EXPECT_EQ(again.code, 0);
  EXPECT_EQ(slurp(only_file(dir / "b", "bulk-edge-")), text);
}

TEST(CliTest, ConfigErrorsAreMachineReadable) {
  const auto dir = scratch("config-errors");
  std::ofstream(dir / "bad.cfg") << "L1 = 10\nL2 = 12\np = 1\nq = 3\nmu = 0\ngap_lo = -1\ngap_hi = 1\n";
  const auto r = run("bulk-chern --config " + (dir / "bad.cfg").string() + " --out " + (dir / "o").string(), dir);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("\"error\":\"BadValue\""), std::string::npos);
  EXPECT_NE(r.err.find("L1"), std::string::npos);
  EXPECT_EQ(run("bulk-chern --config " + (dir / "missing.cfg").string(), dir).code, 2);
}

TEST(CliTest, PreconditionFailureExitsNonzero) {
  const auto dir = scratch("precondition");
  std::ofstream(dir / "band.cfg") << "L1 = 12\nL2 = 12\np = 0\nq = 1\nmu = -1\ngap_lo = -1\ngap_hi = 1\n";
  const auto r = run("bulk-chern --config " + (dir / "band.cfg").string() + " --out " + (dir / "o").string(), dir);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("\"error\":\"NoGapAtMu\""), std::string::npos);
}

TEST(CliTest, EnsembleCsv) {
  const auto dir = scratch("ensemble");
  std::ofstream(dir / "small.cfg") << "L1 = 12\nL2 = 12\np = 1\nq = 3\nmu = -1.366\ngap_lo = -1.93\ngap_hi = -0.78\n"
                                      "margin = 0.02\n";
  const auto r = run("ensemble --config " + (dir / "small.cfg").string() + " --seeds 5,2,9 --format csv --out " +
                         (dir / "o").string(),
                     dir);
  const auto csv = slurp(only_file(dir / "o", "ensemble-"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_EQ(csv.substr(csv.find('\n') + 1, 2), "2,");
  EXPECT_TRUE(r.code == 0 || r.code == 1);
}
