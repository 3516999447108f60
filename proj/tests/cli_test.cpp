#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli/cli.hpp"
#include "efg/io.hpp"
#include "fixtures.hpp"

namespace efg {
namespace {

namespace fs = std::filesystem;
using cli::ExitCode;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string game(const std::string& name) {
  return testing::data_path("games/" + name + ".json").string();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("efg_cli_" + std::string(::testing::UnitTest::GetInstance()
                                         ->current_test_info()
                                         ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text = {}) {
    const fs::path p = dir_ / name;
    if (!text.empty()) std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
};

TEST_F(CliTest, ValidateExitCodes) {
  EXPECT_EQ(run({"validate", game("two_visits")}).code, ExitCode::kOk);
  const auto mismatch = run({"validate", game("in_out_action_mismatch")});
  EXPECT_EQ(mismatch.code, ExitCode::kInvalidGame);
  EXPECT_NE(mismatch.out.find("p1_match"), std::string::npos);
  const auto recall = run({"validate", game("chance_root_no_recall")});
  EXPECT_EQ(recall.code, ExitCode::kInvalidGame);
  EXPECT_NE(recall.out.find("p2_late"), std::string::npos);
  EXPECT_EQ(run({"validate", file("missing.json")}).code, ExitCode::kError);
  EXPECT_EQ(run({"validate", file("broken.json", "{\"nodes\": [")}).code,
            ExitCode::kError);
}

TEST_F(CliTest, SolvePrintsProfileAndVerifies) {
  const auto r = run({"solve", game("two_visits")});
  EXPECT_EQ(r.code, ExitCode::kOk) << r.out << r.err;
  EXPECT_NE(r.out.find("p3_shared"), std::string::npos);
  EXPECT_NE(r.out.find("iterations:"), std::string::npos);
  EXPECT_NE(r.out.find("verification: pass"), std::string::npos);
  const auto s = run({"solve", game("in_out"), "--refinement", "sgpe", "--method",
                      "cqpm"});
  EXPECT_EQ(s.code, ExitCode::kOk) << s.out << s.err;
}

TEST_F(CliTest, SolveIterationCapFails) {
  EXPECT_EQ(run({"solve", game("two_visits"), "--max-iters", "1"}).code,
            ExitCode::kTraceFailed);
}

TEST_F(CliTest, SolveWritesTraceAndAssessment) {
  const std::string trace = file("trace.csv");
  const std::string out = file("assessment.json");
  ASSERT_EQ(run({"solve", game("chance_root"), "--trace", trace, "-o", out,
                 "--alpha-norm", "1e-3", "--seed", "3"})
                .code,
            ExitCode::kOk);
  const std::string first = read_file(trace);
  EXPECT_EQ(first.rfind("iter,t,step,corrector_iters,residual_norm", 0), 0u);
  ASSERT_EQ(run({"solve", game("chance_root"), "--trace", trace, "--alpha-norm",
                 "1e-3", "--seed", "3"})
                .code,
            ExitCode::kOk);
  EXPECT_EQ(read_file(trace), first);
  // The written assessment verifies on its own.
  EXPECT_EQ(run({"verify", game("chance_root"), "--profile", out}).code, ExitCode::kOk);
}

TEST_F(CliTest, VerifyProfiles) {
  const std::string mixed = file("mixed.json", R"({
    "p1_start": ["24/49", "25/49"], "p2_after_A": [0.375, 0.625],
    "p1_after_AR": [0, 1], "p3_shared": [0.25, 0.75]})");
  EXPECT_EQ(run({"verify", game("two_visits"), "--profile", mixed}).code,
            ExitCode::kOk);
  const std::string report = file("report.json");
  EXPECT_EQ(run({"verify", game("two_visits"), "--profile", mixed, "--tol", "1e-9",
                 "--report", report})
                .code,
            ExitCode::kOk);
  EXPECT_NE(read_file(report).find("\"pass\""), std::string::npos);

  const std::string stay_out = file("stay_out.json", R"({
    "p1_enter": [1, 0], "p1_match": [1, 0], "p2_in_out": [1, 0],
    "p3_pick": [0.5, 0.5]})");
  EXPECT_EQ(run({"verify", game("in_out"), "--profile", stay_out}).code, ExitCode::kOk);
  EXPECT_EQ(run({"verify", game("in_out"), "--profile", stay_out, "--refinement",
                 "sgpe"})
                .code,
            ExitCode::kNotVerified);
  EXPECT_EQ(run({"verify", game("in_out"), "--profile", stay_out, "--refinement",
                 "sgpe-semiseq"})
                .code,
            ExitCode::kNotVerified);

  EXPECT_EQ(run({"verify", game("in_out"), "--profile", file("bad.json", "{\"p1_enter\": [1")})
                .code,
            ExitCode::kError);
  EXPECT_EQ(run({"verify", game("in_out"), "--profile",
                 file("arity.json", "{\"p1_enter\": [1, 0, 0]}")})
                .code,
            ExitCode::kError);
}

TEST_F(CliTest, GenerateWritesValidGames) {
  const std::string a = file("a.json");
  const std::string b = file("b.json");
  for (const auto& path : {a, b}) {
    ASSERT_EQ(run({"generate", "--family", "B", "--n", "4", "--branching", "2,2,5,3",
                   "--m", "1,2,2,5", "--seed", "9", "-o", path})
                  .code,
              ExitCode::kOk);
  }
  EXPECT_EQ(read_file(a), read_file(b));
  EXPECT_EQ(run({"validate", a}).code, ExitCode::kOk);
  const auto wrong = run({"generate", "--family", "B", "--n", "4", "--branching",
                          "2,2,2,2", "--m", "1,2,2,5"});
  EXPECT_EQ(wrong.code, ExitCode::kError);
  EXPECT_NE(wrong.err.find("(1,2,2,2)"), std::string::npos);
  const auto stdout_doc = run({"generate", "--n", "2", "--branching", "2,2"});
  EXPECT_EQ(stdout_doc.code, ExitCode::kOk);
  EXPECT_NO_THROW(parse_game(stdout_doc.out));
}

TEST_F(CliTest, BenchShapes) {
  const std::string out = file("out.csv");
  const std::string empty = file("empty.json", "{\"rows\": []}");
  ASSERT_EQ(run({"bench", "--spec", empty, "--out", out}).code, ExitCode::kOk);
  EXPECT_EQ(read_file(out), "family,n,m,branching,L,method,refinement,stat,time_s,iters\n");

  const std::string capped = file("capped.json", R"({"rows": [
    {"family": "A", "n": 3, "branching": [2, 2, 2], "instances": 2,
     "max_iters": 1, "seed": 5}]})");
  ASSERT_EQ(run({"bench", "--spec", capped, "--out", out}).code, ExitCode::kOk);
  const std::string text = read_file(out);
  EXPECT_NE(text.find("A,3,\"(1,1,2)\",\"(2,2,2)\",1,logm,nash,avg,-,-"),
            std::string::npos)
      << text;

  const std::string small = file("small.json", R"({"rows": [
    {"family": "A", "n": 3, "branching": [2, 3, 3], "m": [1, 1, 2],
     "instances": 3, "methods": ["logm", "cqpm"], "seed": 100}]})");
  const std::string inst = file("inst.csv");
  const auto r = run({"bench", "--spec", small, "--out", out, "--instances-out", inst,
                      "--workers", "2"});
  ASSERT_EQ(r.code, ExitCode::kOk);
  EXPECT_NE(r.out.find("logm,nash: 3/3 verified"), std::string::npos) << r.out;
  std::istringstream lines(read_file(out));
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 1 + 2 * 3);
  EXPECT_NE(read_file(inst).find(",100,ok,"), std::string::npos);

  const std::string bad = file("bad.json", R"({"rows": [{"family": "A", "n": 3,
    "branching": [2, 2, 2], "colour": 1}]})");
  EXPECT_EQ(run({"bench", "--spec", bad, "--out", out}).code, ExitCode::kError);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, ExitCode::kError);
  EXPECT_EQ(run({"solve"}).code, ExitCode::kError);
  EXPECT_EQ(run({"solve", game("in_out"), "--method", "simplex"}).code, ExitCode::kError);
  EXPECT_EQ(run({"--help"}).code, ExitCode::kOk);
}

}  // namespace
}  // namespace efg
