#pragma once

#include "ctxgen/bigint.hpp"
#include "ctxgen/diagnostics.hpp"
#include "ctxgen/types.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ctxgen {

enum class BinOp { Add, Sub, Mul, Div, Mod };
enum class CmpOp { Eq, Ne, Le, Lt, Ge, Gt };
enum class DefKind { ValidWrite, ValidRead, Initialized };

const char* spelling(BinOp op);
const char* spelling(CmpOp op);
const char* spelling(DefKind k);
CmpOp flip(CmpOp op);  // a op b  <=>  b flip(op) a

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// One node of the term language. Terms, memory values and left-values share
/// this representation:
///   Const                  integer constant
///   Var                    C variable (left-value)
///   Deref  [m]             *m (left-value)
///   Field  [base]          base.name (left-value; `a->f` is Field(Deref a))
///   Disp   [base, lo, hi]  base ++ (lo..hi) (memory value)
///   Binary [l, r]          arithmetic
/// `type` is null until the spec has been typechecked.
struct Term {
  enum class Kind { Const, Var, Deref, Field, Disp, Binary };

  Kind kind = Kind::Const;
  Int value;
  std::string name;
  BinOp op = BinOp::Add;
  std::vector<TermPtr> kids;
  CTypePtr type;
  Pos pos;

  bool is_lvalue() const { return kind == Kind::Var || kind == Kind::Deref || kind == Kind::Field; }
  bool is_const() const { return kind == Kind::Const; }
  const TermPtr& kid(std::size_t i) const { return kids[i]; }
};

TermPtr make_const(Int v, Pos pos = {}, CTypePtr type = nullptr);
TermPtr make_var(std::string name, Pos pos = {}, CTypePtr type = nullptr);
TermPtr make_deref(TermPtr m, Pos pos = {}, CTypePtr type = nullptr);
TermPtr make_field(TermPtr base, std::string field, Pos pos = {}, CTypePtr type = nullptr);
TermPtr make_disp(TermPtr base, TermPtr lo, TermPtr hi, Pos pos = {}, CTypePtr type = nullptr);
TermPtr make_binary(BinOp op, TermPtr l, TermPtr r, Pos pos = {}, CTypePtr type = nullptr);

/// ACSL-like rendering; also the canonical key for structural equality.
std::string render(const Term& t);
inline std::string render(const TermPtr& t) { return render(*t); }

/// Structural equality, ignoring positions and types.
bool same_term(const Term& a, const Term& b);

/// Left-value handle: a left-value term keyed by its canonical rendering.
class LValue {
 public:
  LValue() = default;
  explicit LValue(TermPtr term);

  const TermPtr& term() const { return term_; }
  const std::string& key() const { return key_; }
  const CTypePtr& type() const { return term_->type; }

  friend bool operator==(const LValue& a, const LValue& b) { return a.key_ == b.key_; }
  friend bool operator<(const LValue& a, const LValue& b) { return a.key_ < b.key_; }

 private:
  TermPtr term_;
  std::string key_;
};

/// Every left-value occurring in `t` (including nested ones), post-order,
/// without duplicates. Left-values of aggregate type are skipped.
std::vector<LValue> lvalues_of(const TermPtr& t);

struct Predicate;
using PredPtr = std::shared_ptr<const Predicate>;

struct Predicate {
  enum class Kind { True, False, Cmp, Defined, And, Or, Not };

  Kind kind = Kind::True;
  CmpOp op = CmpOp::Eq;
  TermPtr lhs, rhs;
  DefKind def = DefKind::ValidWrite;
  TermPtr mem;
  std::vector<PredPtr> kids;
  Pos pos;
};

PredPtr make_bool(bool v, Pos pos = {});
PredPtr make_cmp(CmpOp op, TermPtr l, TermPtr r, Pos pos = {});
PredPtr make_defined(DefKind k, TermPtr m, Pos pos = {});
PredPtr make_and(std::vector<PredPtr> kids, Pos pos = {});
PredPtr make_or(std::vector<PredPtr> kids, Pos pos = {});
PredPtr make_not(PredPtr p, Pos pos = {});

std::string render(const Predicate& p);
inline std::string render(const PredPtr& p) { return render(*p); }
bool same_pred(const Predicate& a, const Predicate& b);

struct FieldDecl {
  std::string name;
  CTypePtr type;
};

struct StructDef {
  std::string name;
  std::vector<FieldDecl> fields;
  Pos pos;
};

struct VarDecl {
  std::string name;
  CTypePtr type;  // array parameters keep their declared array type
  Pos pos;
};

struct FunctionDecl {
  std::string name;
  CTypePtr return_type;
  std::vector<VarDecl> params;
  Pos pos;
};

struct RequiresClause {
  std::optional<std::string> label;
  PredPtr pred;
  Pos pos;
};

struct SpecFile {
  std::string filename;
  std::vector<StructDef> typedefs;
  /// Integer typedef aliases, e.g. `typedef unsigned int u32;`, as (alias, kind).
  std::vector<std::pair<std::string, std::string>> aliases;
  std::vector<VarDecl> globals;
  FunctionDecl target;
  std::vector<RequiresClause> requires_clauses;
  /// Non-fatal diagnostics (skipped clauses and the like).
  std::vector<Diagnostic> warnings;
};

/// Structural equality, ignoring positions and the file name.
bool same_spec(const SpecFile& a, const SpecFile& b);

}  // namespace ctxgen
