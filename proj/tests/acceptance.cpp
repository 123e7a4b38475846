// Acceptance checks: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include "ctxgen/cli.hpp"

#include "support/corpus.hpp"
#include "support/fuzz.hpp"
#include "support/symgen.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

using namespace ctxgen;
namespace fs = std::filesystem;

namespace {

// Pinned limits.
constexpr double kDriverSeconds = 1.0;
constexpr double kSoundnessSeconds = 300.0;
constexpr std::size_t kHandwritten = 50;
constexpr std::size_t kFuzzClauses = 10000;
constexpr std::size_t kSoundnessRuns = 200;
constexpr int kFiveCellSeeds = 100;
constexpr int kLatticeCases = 10000;
constexpr int kCompareTriples = 10000;

const std::string kData = CTXGEN_TEST_DATA;
const std::string kAes = kData + "/aes_crypt_cbc.h";

int failures = 0;

void report(int n, const std::string& what, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << what;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool in_order(const std::string& text, const std::vector<std::string>& needles, std::string* missing) {
  std::size_t at = 0;
  for (const auto& n : needles) {
    std::size_t p = text.find(n, at);
    if (p == std::string::npos) {
      *missing = n;
      return false;
    }
    at = p + n.size();
  }
  return true;
}

bool has_edge(const InferenceResult& r, const std::string& from, const std::string& to) {
  for (const auto& [a, b] : r.graph.edges())
    if (a.key() == from && b.key() == to) return true;
  return false;
}

std::string sigma_line(const InferenceResult& r, const std::string& key) {
  for (const auto& [l, c] : r.sigma.entries())
    if (l.key() == key) return dump_line(l, c);
  return "<missing>";
}

// A failure is typed when it carries a known cause and an explanation.
bool typed(const InferenceFailure& f) {
  bool known = f.cause == FailureCause::INCONSISTENT || f.cause == FailureCause::CYCLE ||
               f.cause == FailureCause::UNSUPPORTED;
  return known && !f.explanation.empty() && (f.cause != FailureCause::CYCLE || !f.cycle.empty());
}

void golden_driver() {
  auto t0 = std::chrono::steady_clock::now();
  auto b = testkit::build(testkit::slurp(kAes));
  std::string c = b.prog ? emit_c(*b.prog, b.a.typed, EmitStyle::FRAMAC) : "";
  double dt = seconds_since(t0);
  std::string missing;
  bool shape = in_order(c,
                        {
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
                        },
                        &missing);
  report(1, "aes_crypt_cbc driver structure in under 1 s", shape && dt < kDriverSeconds,
         (shape ? "" : "missing: " + missing + ", ") + std::to_string(dt) + " s");
}

void aes_sigma() {
  auto a = analyze(testkit::slurp(kAes), TargetConfig::defaults());
  bool ok = a.results.size() == 2;
  std::string detail;
  for (const auto& r : a.results) {
    if (!r.ok()) {
      ok = false;
      detail = r.failure->explanation;
      continue;
    }
    std::string len = sigma_line(r, "length");
    const StateConstraint* in = testkit::sigma_of(r, "input");
    bool here = len == "length : size_t = [16; 16672] ⊕ {RTC(length % 16 == 0)} kinds={}" && in &&
                in->range.render() == "[0; length - 1]" && has_edge(r, "input", "length") &&
                has_edge(r, "output", "length");
    if (!here) detail = len;
    ok = ok && here;
  }
  report(2, "Sigma(length), input range and length edges", ok, detail);
}

void five_cells() {
  auto b = testkit::build(testkit::spec("\\valid(x + (0 .. 3)) && *(x + 4) == 1", "void f(int *x);"));
  bool ok = b.prog.has_value();
  const StateConstraint* c = ok ? testkit::sigma_of(b.result(), "x") : nullptr;
  ok = ok && c && c->range.render() == "[0; 4]";
  int faults = 0;
  for (int seed = 1; ok && seed <= kFiveCellSeeds; ++seed) {
    oracle::Resolver r;
    r.seed = static_cast<std::uint64_t>(seed);
    auto run = oracle::interpret(*b.prog, b.a.typed, r);
    faults += static_cast<int>(run.faults.size());
    for (const auto& s : run.states)
      if (oracle::eval_pred(b.a.typed.precondition, s, b.a.typed) != oracle::Truth::TRUE) ++faults;
  }
  report(3, "x = [0; 4] and no fault over 100 seeds", ok && faults == 0,
         "range " + (c ? c->range.render() : std::string("<missing>")) + ", faults " + std::to_string(faults));
}

struct Tally {
  std::size_t clauses = 0, untyped = 0, budget = 0, violations = 0, mismatches = 0;

  void note(const Analysis& a) {
    for (const auto& r : a.results) {
      ++clauses;
      if (r.ok()) continue;
      if (!typed(*r.failure)) ++untyped;
      if (r.failure->budget_exceeded) ++budget;
    }
  }
  void check(const testkit::Built& b) {
    if (!b.prog) return;
    if (!oracle::check_soundness(b.a.typed, *b.prog, kSoundnessRuns, 1).ok()) ++violations;
  }
};

Tally soundness() {
  auto t0 = std::chrono::steady_clock::now();
  Tally hand, fuzz;
  auto entries = testkit::read_corpus(kData + "/../corpus/handwritten.h");
  for (const auto& e : entries) {
    auto b = testkit::build(e.text);
    hand.note(b.a);
    std::vector<std::string> got;
    for (const auto& r : b.a.results) got.push_back(testkit::outcome(r));
    if (got != e.expect) ++hand.mismatches;
    hand.check(b);
  }
  testkit::SpecFuzzer fz(42);
  while (fuzz.clauses < kFuzzClauses) {
    testkit::Built b;
    try {
      b = testkit::build(fz.next());
    } catch (const FrontendError&) {
      ++fuzz.untyped;  // the fuzzer only writes well-typed input
      continue;
    }
    fuzz.note(b.a);
    fuzz.check(b);
  }
  double dt = seconds_since(t0);
  bool ok = entries.size() >= kHandwritten && hand.clauses >= kHandwritten && hand.mismatches == 0 &&
            hand.violations + fuzz.violations == 0 && hand.untyped + fuzz.untyped == 0 && dt < kSoundnessSeconds;
  report(4, "soundness on handwritten and fuzzed clauses", ok,
         std::to_string(entries.size()) + " handwritten specs, " + std::to_string(hand.clauses + fuzz.clauses) +
             " clauses, " + std::to_string(hand.violations + fuzz.violations) + " violations, " +
             std::to_string(hand.untyped + fuzz.untyped) + " untyped, " + std::to_string(hand.mismatches) +
             " outcome mismatches, " + std::to_string(dt) + " s");
  hand.budget += fuzz.budget;
  return hand;
}

void coverage() {
  auto entries = testkit::read_corpus(kData + "/../corpus/coverage.h");
  oracle::CoverageOptions o;
  for (long v = -2; v <= 6; ++v) o.default_domain.push_back(v);
  o.region_cap = 4;
  std::size_t unequal = 0;
  std::string first;
  for (const auto& e : entries) {
    auto b = testkit::build(e.text);
    auto rep = oracle::check_coverage(b.a.typed, b.prog ? &*b.prog : nullptr, o);
    if (!rep.equal() || rep.scalars.size() > 3 || b.a.typed.vars.size() > 4) {
      ++unequal;
      if (first.empty()) first = e.title;
    }
  }
  report(5, "reachable equals satisfying on the small-domain corpus", !entries.empty() && unequal == 0,
         std::to_string(entries.size()) + " specs" + (first.empty() ? "" : ", first mismatch: " + first));
}

std::string cycle_spec(int n) {
  std::string pre, proto = "void f(";
  for (int i = 1; i <= n; ++i) {
    if (i > 1) proto += ", ";
    proto += "int p" + std::to_string(i);
    pre += "p" + std::to_string(i) + " == p" + std::to_string(i % n + 1) + " + 1 && ";
  }
  pre.resize(pre.size() - 4);
  return testkit::spec(pre, proto + ");");
}

void budgets_and_cycles(std::size_t budget_hits) {
  int bad = 0;
  for (int n = 2; n <= 10; ++n) {
    auto a = analyze(cycle_spec(n), TargetConfig::defaults());
    const auto& r = a.results.at(0);
    if (r.ok() || r.failure->cause != FailureCause::CYCLE || r.failure->budget_exceeded) ++bad;
  }
  report(6, "no step budget exceeded and cycle family gives CYCLE", bad == 0 && budget_hits == 0,
         std::to_string(budget_hits) + " budget hits, " + std::to_string(bad) + " of 9 cycles missed");
}

void inconsistencies() {
  auto dir = fs::temp_directory_path() / "ctxgen_acceptance";
  fs::create_directories(dir);
  auto status = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    std::ostringstream out, err;
    int st = cli::run({(dir / name).string()}, out, err);
    return st == cli::INFERENCE_FAILED && err.str().find("INCONSISTENT") != std::string::npos &&
           out.str().empty();
  };
  bool a = status("invalid.h", "/*@ requires !\\valid(x);\n    requires *x == 0; */\nvoid f(int *x);\n");
  bool b = status("eq.h", "/*@ requires x == 0 && x == 1; */\nvoid f(int x);\n");
  fs::remove_all(dir);
  report(7, "inconsistent specs exit 1 with INCONSISTENT", a && b);
}

using Conc = std::optional<ConcreteInterval>;

std::optional<Conc> conc(const SymRange& r, const sym::Valuation& v) {
  try {
    return concretize(r, v);
  } catch (const sym::EvalError&) {
    return std::nullopt;
  }
}

bool same(const Conc& a, const Conc& b) {
  if (!a || !b) return !a && !b;
  return a->lo == b->lo && a->hi == b->hi;
}

bool within(const Conc& a, const Conc& b) { return !a || (b && b->lo <= a->lo && a->hi <= b->hi); }

Conc intersect(const Conc& a, const Conc& b) {
  if (!a || !b) return std::nullopt;
  ConcreteInterval r{a->lo <= b->lo ? b->lo : a->lo, a->hi <= b->hi ? a->hi : b->hi};
  if (!(r.lo <= r.hi)) return std::nullopt;
  return r;
}

void lattice_and_compare() {
  testkit::SymGen g(32);
  int law = 0, hom = 0, checked = 0;
  for (int i = 0; i < kLatticeCases; ++i) {
    SymRange a = g.range(), b = g.range(), c = g.range();
    sym::Valuation v = g.valuation();
    auto ca = conc(a, v), cb = conc(b, v), cc = conc(c, v);
    if (!ca || !cb || !cc) continue;
    ++checked;
    auto eq = [&](const SymRange& l, const SymRange& r) {
      auto x = conc(l, v), y = conc(r, v);
      return x && y && same(*x, *y);
    };
    bool ok = eq(join(a, b), join(b, a)) && eq(meet(a, b), meet(b, a)) &&
              eq(join(join(a, b), c), join(a, join(b, c))) && eq(meet(meet(a, b), c), meet(a, meet(b, c))) &&
              eq(join(a, a), a) && eq(meet(a, a), a) && eq(join(a, SymRange::empty()), a);
    if (*ca) ok = ok && eq(join(a, meet(a, b)), a) && eq(meet(a, join(a, b)), a);
    if (!ok) ++law;
    auto cj = conc(join(a, b), v), cm = conc(meet(a, b), v);
    if (!cj || !cm || !within(*ca, *cj) || !within(*cb, *cj) || !same(*cm, intersect(*ca, *cb))) ++hom;
  }

  testkit::SymGen h(2024);
  int wrong = 0, decided = 0;
  for (int i = 0; i < kCompareTriples; ++i) {
    sym::Expr e1 = h.expr(), e2;
    switch (h.pick(3)) {
      case 0: e2 = h.expr(); break;
      case 1: e2 = sym::add(e1, sym::constant(h.small(-2, 2))); break;
      default: e2 = h.pick(2) ? sym::min(e1, h.expr(1)) : sym::max(e1, h.expr(1)); break;
    }
    sym::Valuation v = h.valuation();
    auto r = sym::compare(e1, e2);
    if (r == sym::CmpResult::UNKNOWN) continue;
    ++decided;
    try {
      auto x = sym::valuate(e1, v), y = sym::valuate(e2, v);
      bool ok = (r == sym::CmpResult::LE && x <= y) || (r == sym::CmpResult::GE && y <= x) ||
                (r == sym::CmpResult::EQ && x == y);
      if (!ok) ++wrong;
    } catch (const sym::EvalError&) {
    }
  }
  report(8, "lattice laws, concretization and compare soundness", law == 0 && hom == 0 && wrong == 0,
         std::to_string(checked) + " lattice cases, " + std::to_string(law + hom) + " broken; " +
             std::to_string(decided) + " decided comparisons, " + std::to_string(wrong) + " wrong");
}

}  // namespace

int main() {
  golden_driver();
  aes_sigma();
  five_cells();
  Tally t = soundness();
  coverage();
  budgets_and_cycles(t.budget);
  inconsistencies();
  lattice_and_compare();
  return failures;
}
