#pragma once

#include "ctxgen/ir.hpp"
#include "ctxgen/typecheck.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctxgen::oracle {

/// A concrete value. Pointers are (object, element offset); object -1 is a
/// pointer of unknown provenance (e.g. read from make_unknown memory).
/// Array-typed struct members are stored as `Array` holding the id of the
/// object that carries their elements.
struct Value {
  enum class Kind { Uninit, Int, Ptr, Null, Struct, Array };

  Kind kind = Kind::Uninit;
  Int i;
  int obj = -1;
  Int off;
  std::map<std::string, Value> fields;

  static Value integer(Int v);
  static Value pointer(int obj, Int off);
  static Value null_ptr();
  bool is_init() const { return kind != Kind::Uninit; }
};

/// A region: one declared variable, one allocation or one array member.
struct Object {
  std::string name;
  CTypePtr elem;
  std::vector<Value> cells;
};

/// Machine state at the moment the target is called.
struct ConcreteState {
  std::vector<Object> heap;
  std::map<std::string, int> vars;  // driver locals and globals -> object
  std::vector<Value> args;          // call arguments, in parameter order
  std::string path;                 // resolved choices, e.g. "cfp_x=3 case=1"
};

struct Fault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Strategy { RANDOM, EXHAUSTIVE, EXTREMES };

struct Resolver {
  Strategy strategy = Strategy::RANDOM;
  std::uint64_t seed = 1;
  /// EXHAUSTIVE: candidate values by source scalar name (parameter or global).
  std::map<std::string, std::vector<Int>> domains;
  /// EXHAUSTIVE: candidates for ranges with no domain; ranges of at most
  /// `small_range` values are enumerated in full.
  std::vector<Int> default_domain{0, 1, 2};
  std::size_t small_range = 16;
  /// Larger allocations return null, as malloc may.
  std::size_t max_cells = 1 << 16;
  /// Stop after this many completed or pruned paths.
  std::size_t max_paths = 100000;
};

struct RunResult {
  std::vector<ConcreteState> states;
  std::size_t pruned = 0;
  std::vector<std::string> faults;  // interpreter faults: codegen bugs
  bool truncated = false;
};

/// Runs the driver with nondeterminism resolved by `r`. RANDOM follows one
/// path; the other strategies enumerate.
RunResult interpret(const ir::Program& p, const TypedSpec& spec, const Resolver& r);

enum class Truth { TRUE, FALSE, FAULT };
const char* spelling(Truth t);

/// Evaluates a typed predicate in the state at the call: parameters are
/// bound to the call arguments, globals to their objects.
Truth eval_pred(const PredPtr& p, const ConcreteState& s, const TypedSpec& spec);

struct Violation {
  std::string resolver;  // "random seed=17" or "extremes"
  std::string path;
  std::string detail;
};

struct SoundnessReport {
  std::size_t runs = 0;
  std::size_t states = 0;
  std::size_t pruned = 0;
  std::vector<Violation> violations;
  std::vector<std::string> faults;
  bool ok() const { return violations.empty() && faults.empty(); }
};

/// n RANDOM resolutions (seeds seed, seed+1, ...) plus every EXTREMES
/// resolution; each reached state must satisfy the whole precondition.
SoundnessReport check_soundness(const TypedSpec& spec, const ir::Program& p, std::size_t n, std::uint64_t seed);

struct CoverageOptions {
  /// Candidate values per integer scalar (parameters and globals by name);
  /// scalars without an entry use `default_domain`.
  std::map<std::string, std::vector<Int>> domains;
  std::vector<Int> default_domain{0, 1, 2};
  /// Brute-force heaps: each pointer gets 0..region_cap cells, all
  /// uninitialized or all initialized with values from cell_domain (empty:
  /// default_domain).
  int region_cap = 4;
  std::vector<Int> cell_domain;
  std::size_t budget = 2000000;  // predicate evaluations
};

struct CoverageReport {
  bool vacuous = false;  // no driver (every clause failed)
  bool partial = false;  // budget exceeded
  std::vector<std::string> scalars;
  std::set<std::vector<Int>> satisfying;  // brute force
  std::set<std::vector<Int>> reachable;   // EXHAUSTIVE interpretation
  std::vector<std::vector<Int>> missing;  // satisfying but not reachable
  std::vector<std::vector<Int>> spurious; // reachable but not satisfying
  std::vector<std::string> faults;
  bool equal() const { return !vacuous && !partial && satisfying == reachable && faults.empty(); }
};

/// Compares the projection on integer scalars of the brute-force satisfying
/// states with that of the states the driver reaches. `p` null means no
/// driver was generated.
CoverageReport check_coverage(const TypedSpec& spec, const ir::Program* p, const CoverageOptions& opts);

std::string to_json(const SoundnessReport& r, std::uint64_t seed);
std::string to_json(const CoverageReport& r);

}  // namespace ctxgen::oracle
