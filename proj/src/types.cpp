#include "ctxgen/types.hpp"

#include "ctxgen/ast.hpp"

#include <stdexcept>

namespace ctxgen {

CTypePtr CType::void_type() {
  static const CTypePtr v = std::make_shared<CType>(CType{Kind::Void, "void", nullptr, 0, false});
  return v;
}

CTypePtr CType::integer(const std::string& name, bool is_const) {
  return std::make_shared<CType>(CType{Kind::Integer, name, nullptr, 0, is_const});
}

CTypePtr CType::logic_integer() {
  static const CTypePtr t = integer("integer");
  return t;
}

CTypePtr CType::pointer(CTypePtr pointee) {
  return std::make_shared<CType>(CType{Kind::Pointer, "", std::move(pointee), 0, false});
}

CTypePtr CType::structure(const std::string& name, bool is_const) {
  return std::make_shared<CType>(CType{Kind::Struct, name, nullptr, 0, is_const});
}

CTypePtr CType::array(CTypePtr elem, std::int64_t length) {
  return std::make_shared<CType>(CType{Kind::Array, "", std::move(elem), length, false});
}

CTypePtr CType::unqualified() const {
  CType copy = *this;
  copy.is_const = false;
  return std::make_shared<CType>(std::move(copy));
}

std::string CType::declare(const std::string& declarator) const {
  switch (kind) {
    case Kind::Void:
    case Kind::Integer:
    case Kind::Struct: {
      std::string base = (is_const ? "const " : "") + name;
      return declarator.empty() ? base : base + " " + declarator;
    }
    case Kind::Pointer: {
      std::string inner = "*" + declarator;
      if (elem->is_array()) inner = "(" + inner + ")";
      if (declarator.empty() && !elem->is_array()) return elem->declare("") + " *";
      return elem->declare(inner);
    }
    case Kind::Array:
      return elem->declare(declarator + "[" + std::to_string(length) + "]");
  }
  return name;
}

bool same_type(const CType& a, const CType& b) {
  if (a.kind != b.kind || a.is_const != b.is_const) return false;
  switch (a.kind) {
    case CType::Kind::Void: return true;
    case CType::Kind::Integer:
    case CType::Kind::Struct: return a.name == b.name;
    case CType::Kind::Pointer: return same_type(*a.elem, *b.elem);
    case CType::Kind::Array: return a.length == b.length && same_type(*a.elem, *b.elem);
  }
  return false;
}

TargetConfig TargetConfig::defaults() {
  TargetConfig cfg;
  auto add = [&](const std::string& n, int bytes, bool sgn, const std::string& builtin) {
    cfg.kinds[n] = IntKindInfo{bytes, sgn, builtin};
  };
  add("char", 1, true, "char");
  add("signed char", 1, true, "signed_char");
  add("unsigned char", 1, false, "unsigned_char");
  add("short", 2, true, "short");
  add("unsigned short", 2, false, "unsigned_short");
  add("int", 4, true, "int");
  add("unsigned int", 4, false, "unsigned_int");
  add("long", 4, true, "long");
  add("unsigned long", 4, false, "unsigned_long");
  add("long long", 8, true, "long_long");
  add("unsigned long long", 8, false, "unsigned_long_long");
  add("size_t", 4, false, "unsigned_int");
  add("int8_t", 1, true, "signed_char");
  add("uint8_t", 1, false, "unsigned_char");
  add("int16_t", 2, true, "short");
  add("uint16_t", 2, false, "unsigned_short");
  add("int32_t", 4, true, "int");
  add("uint32_t", 4, false, "unsigned_int");
  add("int64_t", 8, true, "long_long");
  add("uint64_t", 8, false, "unsigned_long_long");
  cfg.pointer_bytes = 4;
  return cfg;
}

const IntKindInfo& TargetConfig::kind(const std::string& name) const {
  auto it = kinds.find(name);
  if (it == kinds.end()) throw std::out_of_range("unknown integer kind: " + name);
  return it->second;
}

Int TargetConfig::min_of(const std::string& name) const {
  const auto& k = kind(name);
  if (!k.is_signed) return 0;
  return -(Int(1) << (8 * k.bytes - 1));
}

Int TargetConfig::max_of(const std::string& name) const {
  const auto& k = kind(name);
  if (!k.is_signed) return (Int(1) << (8 * k.bytes)) - 1;
  return (Int(1) << (8 * k.bytes - 1)) - 1;
}

void TargetConfig::set_int_width(int bytes) {
  for (const char* n : {"int", "unsigned int"}) kinds[n].bytes = bytes;
  // size_t follows the int-sized builtin it is mapped to
  if (kinds["size_t"].builtin == "unsigned_int") kinds["size_t"].bytes = bytes;
}

void TargetConfig::set_long_width(int bytes) {
  for (const char* n : {"long", "unsigned long"}) kinds[n].bytes = bytes;
}

TypeEnv::TypeEnv(std::vector<StructDef> structs, TargetConfig cfg) : structs_(std::move(structs)), cfg_(std::move(cfg)) {}

const StructDef* TypeEnv::find_struct(const std::string& name) const {
  for (const auto& s : structs_)
    if (s.name == name) return &s;
  return nullptr;
}

CTypePtr TypeEnv::field_type(const std::string& struct_name, const std::string& field) const {
  const StructDef* s = find_struct(struct_name);
  if (!s) return nullptr;
  for (const auto& f : s->fields)
    if (f.name == field) return f.type;
  return nullptr;
}

std::int64_t TypeEnv::align_of(const CType& t) const {
  switch (t.kind) {
    case CType::Kind::Void: return 1;
    case CType::Kind::Integer: return t.is_logic_integer() ? 8 : cfg_.kind(t.name).bytes;
    case CType::Kind::Pointer: return cfg_.pointer_bytes;
    case CType::Kind::Array: return align_of(*t.elem);
    case CType::Kind::Struct: {
      std::int64_t a = 1;
      if (const StructDef* s = find_struct(t.name))
        for (const auto& f : s->fields) a = std::max(a, align_of(*f.type));
      return a;
    }
  }
  return 1;
}

std::int64_t TypeEnv::size_of(const CType& t) const {
  switch (t.kind) {
    case CType::Kind::Void: return 1;
    case CType::Kind::Integer: return t.is_logic_integer() ? 8 : cfg_.kind(t.name).bytes;
    case CType::Kind::Pointer: return cfg_.pointer_bytes;
    case CType::Kind::Array: return t.length * size_of(*t.elem);
    case CType::Kind::Struct: {
      const StructDef* s = find_struct(t.name);
      if (!s) throw std::out_of_range("unknown struct: " + t.name);
      std::int64_t off = 0;
      for (const auto& f : s->fields) {
        std::int64_t a = align_of(*f.type);
        off = (off + a - 1) / a * a + size_of(*f.type);
      }
      std::int64_t a = align_of(t);
      return std::max<std::int64_t>(a, (off + a - 1) / a * a);
    }
  }
  return 1;
}

}  // namespace ctxgen
