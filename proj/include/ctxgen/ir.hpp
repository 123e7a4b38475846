#pragma once

#include "ctxgen/ast.hpp"
#include "ctxgen/types.hpp"

#include <memory>
#include <string>
#include <vector>

namespace ctxgen::ir {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Driver expressions. Index(base, i) is `base[i]` with `base` a pointer
/// value; PtrAdd(p, k) is `p + k`; Null is the null pointer.
struct Expr {
  enum class Kind { Const, Var, Index, Field, AddrOf, PtrAdd, Binary, Min, Max, Cmp, And, Or, Null };

  Kind kind = Kind::Const;
  Int value;
  std::string name;
  BinOp op = BinOp::Add;
  CmpOp cmp = CmpOp::Eq;
  std::vector<ExprPtr> kids;
};

ExprPtr constant(const Int& v);
ExprPtr var(const std::string& name);
ExprPtr index(ExprPtr base, ExprPtr i);
ExprPtr field(ExprPtr base, const std::string& name);
ExprPtr addr_of(ExprPtr lv);
ExprPtr ptr_add(ExprPtr p, ExprPtr k);
ExprPtr binary(BinOp op, ExprPtr a, ExprPtr b);
ExprPtr min(ExprPtr a, ExprPtr b);
ExprPtr max(ExprPtr a, ExprPtr b);
ExprPtr cmp(CmpOp op, ExprPtr a, ExprPtr b);
ExprPtr conj(std::vector<ExprPtr> kids);  // single kid returned as is
ExprPtr disj(std::vector<ExprPtr> kids);
ExprPtr null();

/// C rendering; min/max become conditional expressions.
std::string render(const ExprPtr& e);

struct Stmt;
using Block = std::vector<Stmt>;

/// Driver statements:
///   Assign       lhs = a
///   RangeInit    lhs = make_range(int_kind, a, b)
///   MakeUnknown  mark `b` bytes from pointer `a` initialized, unknown contents
///   Alloc        lhs = heap block of max(a, 0) elements of `elem`
///   Guard        if (cond) bodies[0]
///   Switch       scrutinee a, bodies[i] is case i + first_case
///   Call         callee(args)
struct Stmt {
  enum class Kind { Assign, RangeInit, MakeUnknown, Alloc, Guard, Switch, Call };

  Kind kind = Kind::Assign;
  ExprPtr lhs, a, b, cond;
  std::string int_kind;
  CTypePtr elem;
  std::vector<Block> bodies;
  int first_case = 1;
  std::string callee;
  std::vector<ExprPtr> args;
};

Stmt assign(ExprPtr lhs, ExprPtr rhs);
Stmt range_init(ExprPtr lhs, const std::string& int_kind, ExprPtr lo, ExprPtr hi);
Stmt make_unknown(ExprPtr region, ExprPtr bytes, CTypePtr elem);
Stmt alloc(ExprPtr lhs, CTypePtr elem, ExprPtr count);
Stmt guard(ExprPtr cond, Block body);
Stmt switch_on(ExprPtr scrutinee, std::vector<Block> cases, int first_case);
Stmt call(const std::string& callee, std::vector<ExprPtr> args);

struct Decl {
  std::string name;
  CTypePtr type;
};

/// A whole driver: locals declared up front, then the statement tree.
struct Program {
  std::string driver_name;
  std::string target;
  std::vector<Decl> decls;
  Block body;
  /// Globals of the input, visible to the driver without declaration.
  std::vector<Decl> globals;
};

/// Indented text, one statement per line (used by --emit-ir).
std::string dump(const Program& p);
std::string dump(const Block& b, int indent = 0);

/// Structural checks: every read left-value was declared and initialized
/// earlier on its path, every Alloc is immediately null-guarded, and every
/// root-to-leaf path ends with exactly one Call. Returns the violations.
std::vector<std::string> check_well_formed(const Program& p);

}  // namespace ctxgen::ir
