#include "ctxgen/cli.hpp"

#include "support/helpers.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ctxgen;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status;
  std::string out, err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int st = cli::run(args, out, err);
  return {st, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("ctxgen_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) {
    auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
};

const std::string kAes = CTXGEN_TEST_DATA "/aes_crypt_cbc.h";

}  // namespace

TEST_F(Cli, AesSucceeds) {
  auto o = run({kAes});
  EXPECT_EQ(o.status, cli::OK) << o.err;
  EXPECT_NE(o.out.find("int cfp_aes_crypt_cbc(void)"), std::string::npos);
  EXPECT_TRUE(o.err.empty()) << o.err;
}

TEST_F(Cli, InconsistentIsStatusOne) {
  std::string f = file("bad.h", "/*@ requires !\\valid(x);\n    requires *x == 1; */\nvoid f(int *x);\n");
  auto o = run({f});
  EXPECT_EQ(o.status, cli::INFERENCE_FAILED);
  EXPECT_NE(o.err.find("INCONSISTENT"), std::string::npos) << o.err;
  EXPECT_NE(o.err.find(f + ":"), std::string::npos) << o.err;
  EXPECT_TRUE(o.out.empty());

  auto o2 = run({file("eq.h", "/*@ requires x == 0 && x == 1; */ void f(int x);")});
  EXPECT_EQ(o2.status, cli::INFERENCE_FAILED);
  EXPECT_NE(o2.err.find("INCONSISTENT"), std::string::npos);
}

TEST_F(Cli, CycleIsStatusOne) {
  auto o = run({file("c.h", "/*@ requires a == b + 1 && b == a + 1; */ void f(int a, int b);")});
  EXPECT_EQ(o.status, cli::INFERENCE_FAILED);
  EXPECT_NE(o.err.find("CYCLE"), std::string::npos) << o.err;
}

TEST_F(Cli, FrontendErrorsAreStatusTwo) {
  EXPECT_EQ(run({file("s.h", "/*@ requires x == ; */ void f(int x);")}).status, cli::FRONTEND_ERROR);
  EXPECT_EQ(run({file("t.h", "/*@ requires p == 1; */ void f(int *p);")}).status, cli::FRONTEND_ERROR);
  EXPECT_EQ(run({file("u.h", "/*@ requires \\forall integer i; i == i; */ void f(int x);")}).status, cli::FRONTEND_ERROR);
  EXPECT_EQ(run({kAes, "--style", "pretty"}).status, cli::FRONTEND_ERROR);
  EXPECT_EQ(run({}).status, cli::FRONTEND_ERROR);
}

TEST_F(Cli, IoErrorsAreStatusThree) {
  EXPECT_EQ(run({(dir_ / "missing.h").string()}).status, cli::IO_ERROR);
  EXPECT_EQ(run({kAes, "-o", (dir_ / "no" / "such" / "dir.c").string()}).status, cli::IO_ERROR);
}

TEST_F(Cli, HelpIsStatusZero) {
  auto o = run({"--help"});
  EXPECT_EQ(o.status, cli::OK);
  EXPECT_NE(o.out.find("--check"), std::string::npos);
}

TEST_F(Cli, CheckReportsNoViolations) {
  auto o = run({kAes, "--check", "1000"});
  EXPECT_EQ(o.status, cli::OK) << o.err;
  EXPECT_NE(o.out.find("\"violations\": []"), std::string::npos) << o.out.substr(o.out.size() - 400);
  EXPECT_NE(o.err.find("0 violations"), std::string::npos);
}

TEST_F(Cli, GenericWritesHeader) {
  auto out = (dir_ / "driver.c").string();
  auto o = run({kAes, "--style", "generic", "-o", out});
  ASSERT_EQ(o.status, cli::OK) << o.err;
  EXPECT_TRUE(fs::exists(dir_ / "ctxgen.h"));
  EXPECT_NE(testkit::slurp(out).find("ctxgen_range_unsigned_int(16, 16672)"), std::string::npos);
}

TEST_F(Cli, PartialSuccessWarns) {
  auto o = run({file("p.h", "/*@ requires x == 0 || (x == 1 && x == 2); */ void f(int x);")});
  EXPECT_EQ(o.status, cli::OK);
  EXPECT_NE(o.err.find("disjunct 2: INCONSISTENT"), std::string::npos) << o.err;
  EXPECT_NE(o.err.find("1 of 2 disjuncts"), std::string::npos) << o.err;
  EXPECT_NE(o.out.find("cfp_x = 0;"), std::string::npos);
}

TEST_F(Cli, Dumps) {
  auto o = run({kAes, "--dump-sigma", "--dump-depgraph", "--dump-derivation", "--emit-ir"});
  ASSERT_EQ(o.status, cli::OK);
  EXPECT_NE(o.out.find("length : size_t = [16; 16672] ⊕ {RTC(length % 16 == 0)}"), std::string::npos);
  EXPECT_NE(o.out.find("digraph"), std::string::npos);
  EXPECT_NE(o.out.find("Cmp-2"), std::string::npos);
  EXPECT_NE(o.out.find("driver cfp_aes_crypt_cbc"), std::string::npos) << o.out.substr(0, 300);
  EXPECT_EQ(o.out, run({kAes, "--dump-sigma", "--dump-depgraph", "--dump-derivation", "--emit-ir"}).out);
}

TEST_F(Cli, WidthsChangeIntervals) {
  auto f = file("w.h", "void f(int a);");
  EXPECT_NE(run({f, "--int-width", "16"}).out.find("Frama_C_int_interval(-32768, 32767)"), std::string::npos);
  EXPECT_EQ(run({f, "--int-width", "12"}).status, cli::FRONTEND_ERROR);
}
