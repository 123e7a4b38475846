#include "ctxgen/cli.hpp"

#include "ctxgen/codegen.hpp"
#include "ctxgen/oracle.hpp"
#include "ctxgen/pipeline.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ctxgen::cli {

namespace {

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) return false;
  f << text;
  return static_cast<bool>(f);
}

int bytes_of(int bits) { return bits / 8; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generates a C calling context from the ACSL precondition of a function."};
  app.name("ctxgen");
  std::string input, output, style = "framac", prefix = "cfp_";
  int int_width = 32, long_width = 32, ptr_width = 32;
  bool dump_sigma = false, dump_depgraph = false, dump_derivation = false, emit_ir = false;
  std::size_t check = 0, max_disjuncts = 64;
  std::uint64_t seed = 1;

  app.add_option("input", input, "Header with the annotated prototype")->required();
  app.add_option("-o,--output", output, "Write the driver here (default: standard output)");
  app.add_option("--style", style, "Primitive names: framac or generic")
      ->check(CLI::IsMember({"framac", "generic"}));
  app.add_option("--int-width", int_width, "Width of int in bits")->check(CLI::IsMember({16, 32, 64}));
  app.add_option("--long-width", long_width, "Width of long in bits")->check(CLI::IsMember({32, 64}));
  app.add_option("--ptr-width", ptr_width, "Width of pointers in bits")->check(CLI::IsMember({16, 32, 64}));
  app.add_option("--prefix", prefix, "Prefix of generated names");
  app.add_flag("--dump-sigma", dump_sigma, "Print the inferred state constraints");
  app.add_flag("--dump-depgraph", dump_depgraph, "Print the dependency graphs (DOT)");
  app.add_flag("--dump-derivation", dump_derivation, "Print the inference derivations");
  app.add_flag("--emit-ir", emit_ir, "Print the driver IR");
  app.add_option("--check", check, "Check the driver against the precondition over N random resolutions");
  app.add_option("--seed", seed, "First seed for --check");
  app.add_option("--max-disjuncts", max_disjuncts, "Largest disjunctive normal form accepted");

  std::vector<std::string> argv_s{"ctxgen"};
  argv_s.insert(argv_s.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_s) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? OK : FRONTEND_ERROR;
  }

  std::ifstream in(input, std::ios::binary);
  if (!in) {
    err << "ctxgen: cannot read " << input << "\n";
    return IO_ERROR;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  TargetConfig cfg = TargetConfig::defaults();
  cfg.set_int_width(bytes_of(int_width));
  cfg.set_long_width(bytes_of(long_width));
  cfg.pointer_bytes = bytes_of(ptr_width);
  cfg.prefix = prefix;

  Analysis a;
  try {
    a = analyze(buf.str(), cfg, max_disjuncts, input);
  } catch (const FrontendError& e) {
    err << format_diagnostic(input, e.diagnostic()) << "\n";
    return FRONTEND_ERROR;
  }
  for (const auto& w : a.typed.spec.warnings) err << format_diagnostic(input, w) << "\n";

  std::vector<const InferenceResult*> ok;
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    const InferenceResult& r = a.results[i];
    std::string tag = a.results.size() > 1 ? "disjunct " + std::to_string(i + 1) + ": " : "";
    if (dump_sigma) out << "// sigma " << tag << "\n" << r.sigma.dump();
    if (dump_depgraph) out << r.graph.to_dot();
    if (dump_derivation) out << "// derivation " << tag << "\n" << r.derivation.render();
    if (r.ok()) {
      ok.push_back(&r);
      continue;
    }
    const InferenceFailure& f = *r.failure;
    err << input << ":" << f.pos.line << ":" << f.pos.col << ": error: " << tag << spelling(f.cause) << " at `"
        << f.literal << "`: " << f.explanation << "\n";
  }
  if (ok.empty()) {
    err << "ctxgen: no disjunct of the precondition can be satisfied by a generated context\n";
    return INFERENCE_FAILED;
  }
  if (ok.size() < a.results.size())
    err << "ctxgen: warning: generating a context for " << ok.size() << " of " << a.results.size() << " disjuncts\n";

  ir::Program prog = generate(a.typed, ok);
  if (emit_ir) out << ir::dump(prog);
  EmitStyle es = style == "generic" ? EmitStyle::GENERIC : EmitStyle::FRAMAC;
  std::string c = emit_c(prog, a.typed, es);
  if (output.empty()) {
    out << c;
  } else {
    if (!write_file(output, c)) {
      err << "ctxgen: cannot write " << output << "\n";
      return IO_ERROR;
    }
    if (es == EmitStyle::GENERIC) {
      auto h = std::filesystem::path(output).replace_filename("ctxgen.h");
      if (!write_file(h.string(), generic_header(cfg))) {
        err << "ctxgen: cannot write " << h.string() << "\n";
        return IO_ERROR;
      }
    }
  }

  if (check > 0) {
    oracle::SoundnessReport rep = oracle::check_soundness(a.typed, prog, check, seed);
    err << "check: " << rep.runs << " resolutions, " << rep.states << " calls reached, " << rep.pruned
        << " paths pruned, " << rep.violations.size() << " violations, " << rep.faults.size() << " faults\n";
    for (const auto& v : rep.violations) err << "  violation (" << v.resolver << ") " << v.detail << " on " << v.path << "\n";
    for (const auto& f : rep.faults) err << "  fault " << f << "\n";
    out << oracle::to_json(rep, seed) << "\n";
    if (!rep.ok()) return CHECK_FAILED;
  }
  return OK;
}

}  // namespace ctxgen::cli
