#include "support/fuzz.hpp"
#include "support/helpers.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>

using namespace ctxgen;

namespace {

/// Position of each needle, searched in order; npos when one is missing.
std::size_t in_order(const std::string& text, const std::vector<std::string>& needles) {
  std::size_t at = 0;
  for (const auto& n : needles) {
    std::size_t p = text.find(n, at);
    if (p == std::string::npos) {
      ADD_FAILURE() << "missing or out of order: " << n;
      return std::string::npos;
    }
    at = p + n.size();
  }
  return at;
}

std::string emit(const testkit::Built& b, EmitStyle s = EmitStyle::FRAMAC) { return emit_c(*b.prog, b.a.typed, s); }

std::vector<std::string> keys(const std::vector<LValue>& ls) {
  std::vector<std::string> out;
  for (const auto& l : ls) out.push_back(l.key());
  return out;
}

std::ptrdiff_t pos_of(const std::vector<std::string>& v, const std::string& k) {
  return std::find(v.begin(), v.end(), k) - v.begin();
}

int count(const std::string& text, const std::string& needle) {
  int n = 0;
  for (std::size_t p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

const std::string kAes = CTXGEN_TEST_DATA "/aes_crypt_cbc.h";

}  // namespace

TEST(Codegen, AesDriverShape) {
  auto b = testkit::build(testkit::slurp(kAes));
  ASSERT_TRUE(b.prog);
  std::string c = emit(b);
  in_order(c, {
                  "#include \"__fc_builtin.h\"",
                  "int cfp_aes_crypt_cbc(void)",
                  "cfp_length = Frama_C_unsigned_int_interval(16, 16672);",
                  "if (cfp_length % 16 == 0) {",
                  "Frama_C_make_unknown((char *)cfp_ctx.buf, 256);",
                  "cfp_ctx.rk = cfp_ctx.buf;",
                  "cfp_ctx.nr = 14;",
                  "Frama_C_make_unknown((char *)cfp_iv, 16);",
                  "cfp_input = (unsigned char *)malloc(cfp_length);",
                  "if (cfp_input != 0) {",
                  "Frama_C_make_unknown((char *)cfp_input, cfp_length);",
                  "cfp_output = (unsigned char *)malloc(cfp_length);",
                  "if (cfp_output != 0) {",
                  "cfp_disjunction = Frama_C_int_interval(0, 1);",
                  "if (cfp_disjunction) {",
                  "cfp_mode = 1;",
                  "aes_crypt_cbc(&cfp_ctx, cfp_mode, cfp_length, cfp_iv, cfp_input, cfp_output);",
                  "} else {",
                  "cfp_mode = 0;",
                  "aes_crypt_cbc(&cfp_ctx, cfp_mode, cfp_length, cfp_iv, cfp_input, cfp_output);",
                  "return 0;",
              });
  EXPECT_EQ(count(c, "malloc("), 2);
  EXPECT_EQ(count(c, "cfp_mode ="), 2);
  EXPECT_TRUE(ir::check_well_formed(*b.prog).empty());
}

TEST(Codegen, GenericStyleSwapsPrimitivesOnly) {
  auto b = testkit::build(testkit::slurp(kAes));
  std::string f = emit(b, EmitStyle::FRAMAC), g = emit(b, EmitStyle::GENERIC);
  EXPECT_EQ(g.find("Frama_C"), std::string::npos);
  EXPECT_NE(g.find("#include \"ctxgen.h\""), std::string::npos);
  EXPECT_NE(g.find("cfp_length = ctxgen_range_unsigned_int(16, 16672);"), std::string::npos);
  EXPECT_NE(g.find("ctxgen_make_unknown((void *)cfp_ctx.buf, 256);"), std::string::npos);
  std::string mapped = std::regex_replace(f, std::regex(R"(Frama_C_make_unknown\(\(char \*\))"), "ctxgen_make_unknown((void *)");
  mapped = std::regex_replace(mapped, std::regex(R"(Frama_C_(\w+)_interval)"), "ctxgen_range_$1");
  mapped = std::regex_replace(mapped, std::regex("__fc_builtin\\.h"), "ctxgen.h");
  EXPECT_EQ(mapped, g);
}

TEST(Codegen, AesOrdering) {
  auto b = testkit::build(testkit::slurp(kAes));
  const auto& r = b.result(1);
  auto order = keys(order_lvalues(r.sigma, r.graph, r.mentions));
  EXPECT_LT(pos_of(order, "length"), pos_of(order, "input"));
  EXPECT_LT(pos_of(order, "length"), pos_of(order, "output"));
  EXPECT_LT(pos_of(order, "ctx->buf"), pos_of(order, "ctx->rk"));
}

TEST(Codegen, IndependentInSourceOrder) {
  auto b = testkit::build(testkit::spec("b == 2 && a == 1"));
  const auto& r = b.result();
  auto order = keys(order_lvalues(r.sigma, r.graph, r.mentions));
  EXPECT_LT(pos_of(order, "b"), pos_of(order, "a"));
}

TEST(Codegen, SingleClauseHasNoDisjunction) {
  auto b = testkit::build(testkit::spec("a == 3"));
  std::string c = emit(b);
  EXPECT_EQ(c.find("cfp_disjunction"), std::string::npos);
  EXPECT_NE(c.find("cfp_a = 3;"), std::string::npos);
}

TEST(Codegen, ThreeDisjunctsSwitch) {
  auto b = testkit::build(testkit::spec("a == 1 || a == 2 || a == 3", "void f(int a);"));
  ASSERT_EQ(b.ok.size(), 3u);
  std::string c = emit(b);
  in_order(c, {"cfp_disjunction = Frama_C_int_interval(1, 3);", "switch (cfp_disjunction) {", "case 1:", "cfp_a = 1;",
               "case 2:", "cfp_a = 2;", "case 3:", "cfp_a = 3;"});
  oracle::Resolver ex;
  ex.strategy = oracle::Strategy::EXHAUSTIVE;
  auto run = oracle::interpret(*b.prog, b.a.typed, ex);
  ASSERT_EQ(run.states.size(), 3u);
  std::set<Int> seen;
  for (const auto& s : run.states) {
    EXPECT_EQ(oracle::eval_pred(b.a.typed.precondition, s, b.a.typed), oracle::Truth::TRUE);
    seen.insert(s.args[0].i);
  }
  EXPECT_EQ(seen, (std::set<Int>{1, 2, 3}));
}

TEST(Codegen, SharedFragmentsAreHoisted) {
  auto b = testkit::build(testkit::spec("b == 5 && (a == 0 || a == 1)"));
  std::string c = emit(b);
  EXPECT_EQ(count(c, "cfp_b = 5;"), 1);
  EXPECT_LT(c.find("cfp_b = 5;"), c.find("cfp_disjunction ="));
}

TEST(Codegen, EmptyPreconditionUsesNeutralValues) {
  auto b = testkit::build("int f(int a, unsigned char c, int *p);");
  ASSERT_TRUE(b.prog);
  EXPECT_TRUE(ir::check_well_formed(*b.prog).empty());
  std::string c = emit(b);
  EXPECT_NE(c.find("cfp_a = Frama_C_int_interval(-2147483648, 2147483647);"), std::string::npos) << c;
  EXPECT_NE(c.find("cfp_c = Frama_C_unsigned_char_interval(0, 255);"), std::string::npos) << c;
  EXPECT_NE(c.find("f(cfp_a, cfp_c, "), std::string::npos) << c;
  EXPECT_EQ(c.find("malloc"), std::string::npos);
}

TEST(Codegen, PrefixOption) {
  TargetConfig cfg = TargetConfig::defaults();
  cfg.prefix = "ctx_";
  auto b = testkit::build(testkit::spec("a == 3"), cfg);
  std::string c = emit(b);
  EXPECT_NE(c.find("int ctx_f(void)"), std::string::npos);
  EXPECT_NE(c.find("ctx_a = 3;"), std::string::npos);
}

TEST(Codegen, ArraySizeFromAccess) {
  auto b = testkit::build(testkit::spec("\\valid(x + (0 .. 3)) && *(x + 4) == 1", "void f(int *x);"));
  std::string c = emit(b);
  EXPECT_NE(c.find("int cfp_x[5];"), std::string::npos) << c;
  EXPECT_NE(c.find("cfp_x[4] = 1;"), std::string::npos) << c;
}

TEST(Codegen, ByteIdenticalOutput) {
  std::string text = testkit::slurp(kAes);
  auto a = testkit::build(text), b = testkit::build(text);
  EXPECT_EQ(emit(a), emit(b));
  EXPECT_EQ(ir::dump(*a.prog), ir::dump(*b.prog));
}

TEST(Codegen, FuzzWellFormed) {
  testkit::SpecFuzzer fz(3);
  int built = 0;
  for (int i = 0; i < 1500; ++i) {
    std::string text = fz.next();
    auto b = testkit::build(text);
    if (!b.prog) continue;
    ++built;
    auto errs = ir::check_well_formed(*b.prog);
    EXPECT_TRUE(errs.empty()) << text << errs.front();
  }
  EXPECT_GT(built, 1000);
}

// The GENERIC driver is plain C: compile it against stub primitives.
TEST(Codegen, GenericDriverCompiles) {
  if (std::system("cc --version > /dev/null 2>&1") != 0) GTEST_SKIP() << "no C compiler";
  auto dir = std::filesystem::temp_directory_path() / "ctxgen_smoke";
  std::filesystem::create_directories(dir);
  auto b = testkit::build(testkit::slurp(kAes));
  std::ofstream(dir / "driver.c") << emit(b, EmitStyle::GENERIC);
  std::ofstream(dir / "ctxgen.h") << generic_header(b.a.typed.env.config());
  std::string cmd = "cc -std=c99 -Wall -Werror -fsyntax-only -I" + dir.string() + " " + (dir / "driver.c").string();
  EXPECT_EQ(std::system(cmd.c_str()), 0) << cmd;
}
