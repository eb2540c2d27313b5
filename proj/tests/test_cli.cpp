#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <random>

#include "sflow/io.hpp"
#include "sflow/reduction.hpp"
#include "sflow/scarf.hpp"
#include "support.hpp"

using namespace testing_support;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("sflow_cli_" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string tmp(const std::string& name) const { return (dir_ / name).string(); }

  // Exit status of the CLI; stdout and stderr land in out() and err().
  int run(const std::string& args) {
    std::string cmd = std::string(SFLOW_CLI) + " " + args + " >" + tmp("stdout") + " 2>" + tmp("stderr");
    int status = std::system(cmd.c_str());
    out_ = read_file(tmp("stdout"));
    err_ = read_file(tmp("stderr"));
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  const std::string& out() const { return out_; }
  const std::string& err() const { return err_; }

  std::string data(const std::string& name) const { return data_path(name); }

 private:
  fs::path dir_;
  std::string out_, err_;
};

bool has_line(const std::string& text, const std::string& line) {
  return ("\n" + text).find("\n" + line + "\n") != std::string::npos;
}

TEST_F(Cli, SolveAppendix) {
  ASSERT_EQ(run("solve " + data("appendix_a.net")), 0) << err();
  for (const char* line : {"s v1 2", "v1 v2 6", "v2 v1 10", "v1 t 10"}) EXPECT_TRUE(has_line(out(), line)) << out();
  EXPECT_TRUE(has_line(out(), "# method augment"));
  Network n = load("appendix_a.net");
  EXPECT_EQ(parse_flow(out(), n), flow_of(n, {{"s", "v1", 2}, {"v1", "v2", 6}, {"v2", "v1", 10}, {"v1", "t", 10}}));
}

TEST_F(Cli, SolveWritesFilesAndIgnoresSeed) {
  ASSERT_EQ(run("solve " + data("appendix_a.net") + " -o " + tmp("a.flow") + " --trace " + tmp("a.trace") +
                " --report " + tmp("a.report")),
            0)
      << err();
  EXPECT_TRUE(out().empty());
  std::string flow = read_file(tmp("a.flow"));
  EXPECT_FALSE(read_file(tmp("a.trace")).empty());
  std::string report = read_file(tmp("a.report"));
  EXPECT_TRUE(has_line(report, "verdict stable")) << report;
  EXPECT_TRUE(has_line(report, "segments 4"));

  ASSERT_EQ(run("--seed 12345 solve " + data("appendix_a.net")), 0);
  EXPECT_EQ(out(), flow);
}

TEST_F(Cli, SolveStallReportsPivot) {
  ASSERT_EQ(run("solve " + data("stall.net") + " -o " + tmp("f") + " --report " + tmp("r")), 0) << err();
  EXPECT_TRUE(has_line(read_file(tmp("r")), "method pivot"));
  EXPECT_TRUE(has_line(read_file(tmp("f")), "# method pivot on input (augmentation saturated no H-edge)"));
  EXPECT_EQ(run("verify " + data("stall.net") + " " + tmp("f")), 0) << out();
}

TEST_F(Cli, SolvedFlowVerifies) {
  ASSERT_EQ(run("solve " + data("example2.net") + " -o " + tmp("f")), 0);
  EXPECT_EQ(run("verify " + data("example2.net") + " " + tmp("f")), 0) << out();
  EXPECT_TRUE(has_line(out(), "stable"));
}

TEST_F(Cli, VerifyStable) {
  EXPECT_EQ(run("verify " + data("example2.net") + " " + data("example2_right.flow")), 0) << out() << err();
  EXPECT_TRUE(has_line(out(), "stable"));
}

TEST_F(Cli, VerifyUnstablePrintsPath) {
  EXPECT_EQ(run("verify " + data("example2.net") + " " + data("zero.flow")), 2);
  EXPECT_TRUE(has_line(out(), "unstable"));
  EXPECT_TRUE(has_line(out(), "blocking path: s v1 t")) << out();
}

TEST_F(Cli, VerifyInfeasible) {
  write_file(tmp("bad.flow"), "s v1 1\nv1 t 1\n");
  EXPECT_EQ(run("verify " + data("example2.net") + " " + tmp("bad.flow")), 3);
  EXPECT_TRUE(has_line(out(), "infeasible"));
  EXPECT_NE(out().find("balance v1"), std::string::npos) << out();
}

TEST_F(Cli, VerifyInconclusive) {
  EXPECT_EQ(run("verify " + data("example2.net") + " " + data("zero.flow") + " --max-len 2"), 4);
}

TEST_F(Cli, VerifyNonnegFlagIsAccepted) {
  EXPECT_EQ(run("verify --nonneg " + data("example2.net") + " " + data("example2_right.flow")), 0) << err();
}

TEST_F(Cli, ModelErrorsExitOne) {
  write_file(tmp("bad.net"), "source s\nsink t\nvertex v slopes 0\n");
  EXPECT_EQ(run("solve " + tmp("bad.net")), 1);
  EXPECT_NE(err().find("line 3: slope must be positive"), std::string::npos) << err();
  EXPECT_EQ(run("verify " + data("example2.net") + " " + tmp("missing.flow")), 1);
  EXPECT_NE(err().find("cannot open"), std::string::npos);
  write_file(tmp("open.net"), "source s\nsink t\nvertex v\nedge s v inf\nedge v t inf\n");
  EXPECT_EQ(run("solve " + tmp("open.net")), 1);
  EXPECT_NE(err().find("no stable flow"), std::string::npos) << err();
}

TEST_F(Cli, UsageErrorsAreNonzero) {
  EXPECT_NE(run(""), 0);
  EXPECT_NE(run("reduce " + data("appendix_a.net") + " --to nowhere"), 0);
}

TEST_F(Cli, ReduceMatchesLibrary) {
  Network n = load("appendix_a.net");
  ASSERT_EQ(run("reduce " + data("appendix_a.net") + " --to lm"), 0);
  Network lm = mplm_to_lm(n).net;
  EXPECT_EQ(parse_network(out()), lm);
  EXPECT_NE(out().find("provenance vertex v1.in v1"), std::string::npos) << out();
  ASSERT_EQ(run("reduce " + data("appendix_a.net") + " --to acyclic -o " + tmp("ac.net")), 0);
  EXPECT_EQ(parse_network(read_file(tmp("ac.net"))), cyclic_to_acyclic(lm).net);
}

TEST_F(Cli, ScarfBuildAndCheck) {
  Network n = load("example2.net");
  ASSERT_EQ(run("scarf build " + data("example2.net") + " -o " + tmp("e2.inst")), 0) << err();
  ScarfInstance inst = parse_instance(read_file(tmp("e2.inst")));
  EXPECT_TRUE(inst == build_scarf(n));

  Flow f = parse_flow(read_file(data("example2_right.flow")), n);
  write_file(tmp("good.pt"), write_point(inst, flow_to_scarf(n, f)));
  EXPECT_EQ(run("scarf check " + tmp("e2.inst") + " " + tmp("good.pt")), 0) << out();
  EXPECT_EQ(std::count(out().begin(), out().end(), '\n'), 8);
  EXPECT_EQ(out().find("not-dominated"), std::string::npos);

  write_file(tmp("zero.pt"), "");
  EXPECT_EQ(run("scarf check " + tmp("e2.inst") + " " + tmp("zero.pt")), 2);
  EXPECT_NE(out().find("not-dominated"), std::string::npos);

  ScarfPoint big(inst.cols.size(), Rational(100));
  write_file(tmp("big.pt"), write_point(inst, big));
  EXPECT_EQ(run("scarf check " + tmp("e2.inst") + " " + tmp("big.pt")), 3);
}

TEST_F(Cli, ScarfBuildRejectsMplm) {
  EXPECT_EQ(run("scarf build " + data("appendix_a.net")), 1);
  EXPECT_FALSE(err().empty());
}

}  // namespace
