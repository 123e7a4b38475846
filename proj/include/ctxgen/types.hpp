#pragma once

#include "ctxgen/bigint.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace ctxgen {

struct CType;
using CTypePtr = std::shared_ptr<const CType>;

/// C types of the accepted fragment. Integer kinds are named ("int",
/// "unsigned long", "size_t") and resolved against a TargetConfig; the
/// pseudo-kind "integer" is the unbounded type of logic arithmetic.
struct CType {
  enum class Kind { Void, Integer, Pointer, Struct, Array };

  Kind kind = Kind::Void;
  std::string name;  // integer kind or struct name
  CTypePtr elem;     // pointee or array element
  std::int64_t length = 0;
  bool is_const = false;

  static CTypePtr void_type();
  static CTypePtr integer(const std::string& name, bool is_const = false);
  static CTypePtr logic_integer();
  static CTypePtr pointer(CTypePtr pointee);
  static CTypePtr structure(const std::string& name, bool is_const = false);
  static CTypePtr array(CTypePtr elem, std::int64_t length);

  bool is_integer() const { return kind == Kind::Integer; }
  bool is_pointer() const { return kind == Kind::Pointer; }
  bool is_array() const { return kind == Kind::Array; }
  bool is_struct() const { return kind == Kind::Struct; }
  bool is_logic_integer() const { return kind == Kind::Integer && name == "integer"; }
  /// Pointer or array: anything that designates a memory region.
  bool is_pointerish() const { return is_pointer() || is_array(); }

  /// Same type with top-level const removed.
  CTypePtr unqualified() const;

  /// C declaration of `declarator` with this type, e.g. "unsigned char x[16]".
  std::string declare(const std::string& declarator) const;
  /// Abstract type name, e.g. "unsigned char *".
  std::string spelling() const { return declare(""); }
};

bool same_type(const CType& a, const CType& b);

struct IntKindInfo {
  int bytes = 4;
  bool is_signed = true;
  /// Suffix used in interval builtins: Frama_C_<suffix>_interval.
  std::string builtin;
};

/// Target-dependent sizes and primitive names.
struct TargetConfig {
  std::map<std::string, IntKindInfo> kinds;
  int pointer_bytes = 4;
  std::string prefix = "cfp_";

  static TargetConfig defaults();

  bool has_kind(const std::string& name) const { return kinds.count(name) != 0; }
  const IntKindInfo& kind(const std::string& name) const;
  Int min_of(const std::string& name) const;
  Int max_of(const std::string& name) const;

  /// Override every kind whose canonical C width follows `int` or `long`.
  void set_int_width(int bytes);
  void set_long_width(int bytes);
};

struct StructDef;

/// Field lookup and sizes over the typedefs of one input file.
class TypeEnv {
 public:
  TypeEnv() = default;
  TypeEnv(std::vector<StructDef> structs, TargetConfig cfg);

  const StructDef* find_struct(const std::string& name) const;
  CTypePtr field_type(const std::string& struct_name, const std::string& field) const;
  std::int64_t size_of(const CType& t) const;
  std::int64_t align_of(const CType& t) const;
  const TargetConfig& config() const { return cfg_; }
  const std::vector<StructDef>& structs() const { return structs_; }

 private:
  std::vector<StructDef> structs_;
  TargetConfig cfg_;
};

}  // namespace ctxgen
