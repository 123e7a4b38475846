#include "ctxgen/parser.hpp"

#include <cctype>
#include <cstring>
#include <map>
#include <set>

namespace ctxgen {

namespace {

struct Token {
  enum class Kind { Ident, Number, Punct, AnnotOpen, AnnotClose, End };
  Kind kind = Kind::End;
  std::string text;
  Pos pos;
};

[[noreturn]] void syntax(Pos pos, const std::string& msg) { throw FrontendError(ErrorKind::Syntax, pos, msg); }
[[noreturn]] void unsupported(Pos pos, const std::string& msg) { throw FrontendError(ErrorKind::Unsupported, pos, msg); }

class Lexer {
 public:
  explicit Lexer(const std::string& text) : src_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_blank();
      if (i_ >= src_.size()) break;
      Pos pos = here();
      char c = src_[i_];
      if (!in_annot_ && starts("/*@")) {
        advance(3);
        in_annot_ = true;
        out.push_back({Token::Kind::AnnotOpen, "/*@", pos});
        continue;
      }
      if (in_annot_ && starts("*/")) {
        advance(2);
        in_annot_ = false;
        out.push_back({Token::Kind::AnnotClose, "*/", pos});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back({Token::Kind::Number, number(), pos});
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || (c == '\\' && in_annot_)) {
        std::size_t start = i_;
        advance(1);
        while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_')) advance(1);
        out.push_back({Token::Kind::Ident, src_.substr(start, i_ - start), pos});
        continue;
      }
      static const char* multi[] = {"<==>", "==>", "..", "->", "==", "!=", "<=", ">=", "&&", "||", "^^", "<<", ">>"};
      bool matched = false;
      for (const char* m : multi) {
        if (starts(m)) {
          out.push_back({Token::Kind::Punct, m, pos});
          advance(std::char_traits<char>::length(m));
          matched = true;
          break;
        }
      }
      if (matched) continue;
      if (std::string("+-*/%<>=!&|(){}[];:,.?~^'\"").find(c) == std::string::npos)
        syntax(pos, std::string("unexpected character '") + c + "'");
      out.push_back({Token::Kind::Punct, std::string(1, c), pos});
      advance(1);
    }
    if (in_annot_) syntax(here(), "unterminated annotation");
    out.push_back({Token::Kind::End, "", here()});
    return out;
  }

 private:
  Pos here() const { return {line_, col_}; }
  bool starts(const char* s) const { return src_.compare(i_, std::char_traits<char>::length(s), s) == 0; }

  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n && i_ < src_.size(); ++k, ++i_) {
      if (src_[i_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  bool line_is_blank_so_far() const {
    for (std::size_t k = i_; k-- > 0;) {
      if (src_[k] == '\n') return true;
      if (src_[k] != ' ' && src_[k] != '\t') return false;
    }
    return true;
  }

  void skip_blank() {
    while (i_ < src_.size()) {
      char c = src_[i_];
      bool at_line_start = line_is_blank_so_far();
      if (std::isspace(static_cast<unsigned char>(c)) || (in_annot_ && c == '@')) {
        advance(1);
      } else if (!in_annot_ && c == '#' && at_line_start) {
        while (i_ < src_.size() && src_[i_] != '\n') advance(1);
      } else if (starts("//")) {
        while (i_ < src_.size() && src_[i_] != '\n') advance(1);
      } else if (!in_annot_ && starts("/*") && !starts("/*@")) {
        Pos open = here();
        advance(2);
        while (i_ < src_.size() && !starts("*/")) advance(1);
        if (i_ >= src_.size()) syntax(open, "unterminated comment");
        advance(2);
      } else {
        break;
      }
    }
  }

  std::string number() {
    std::size_t start = i_;
    if (starts("0x") || starts("0X")) {
      advance(2);
      while (i_ < src_.size() && std::isxdigit(static_cast<unsigned char>(src_[i_]))) advance(1);
    } else {
      while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) advance(1);
    }
    std::string digits = src_.substr(start, i_ - start);
    while (i_ < src_.size() && std::strchr("uUlL", src_[i_]) && src_[i_] != '\0') advance(1);
    return digits;
  }

  const std::string& src_;
  std::size_t i_ = 0;
  int line_ = 1, col_ = 1;
  bool in_annot_ = false;
};

Int parse_int_literal(const std::string& s) {
  if (s.size() > 2 && (s[1] == 'x' || s[1] == 'X')) {
    Int v = 0;
    for (std::size_t k = 2; k < s.size(); ++k) {
      char c = static_cast<char>(std::tolower(static_cast<unsigned char>(s[k])));
      v = v * 16 + (std::isdigit(static_cast<unsigned char>(c)) ? c - '0' : c - 'a' + 10);
    }
    return v;
  }
  if (s.size() > 1 && s[0] == '0') {
    Int v = 0;
    for (char c : s) {
      if (c > '7') throw std::invalid_argument("bad octal literal");
      v = v * 8 + (c - '0');
    }
    return v;
  }
  return Int(s);
}

const std::set<std::string> kStdIntNames = {"size_t",  "int8_t",   "uint8_t",  "int16_t", "uint16_t",
                                            "int32_t", "uint32_t", "int64_t",  "uint64_t"};

const std::set<std::string> kUnsupportedBuiltins = {
    "\\forall", "\\exists", "\\let",       "\\old",   "\\at",         "\\separated", "\\result", "\\null",
    "\\base_addr", "\\offset", "\\block_length", "\\freeable", "\\allocable", "\\fresh", "\\dangling",
    "\\sum", "\\numof", "\\max", "\\min", "\\abs", "\\nothing"};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::string filename) : t_(std::move(toks)) { spec_.filename = std::move(filename); }

  SpecFile run() {
    std::vector<RequiresClause> pending;
    bool have_pending = false;
    std::vector<FunctionDecl> plain_functions;
    bool have_target = false;
    while (!at_end()) {
      if (peek().kind == Token::Kind::AnnotOpen) {
        annotation(pending);
        have_pending = true;
        continue;
      }
      if (is("typedef")) {
        if (have_pending) syntax(peek().pos, "annotation must precede a function declaration");
        typedef_decl();
        continue;
      }
      if (is(";")) {
        next();
        continue;
      }
      std::optional<FunctionDecl> fn = declaration();
      if (fn) {
        if (have_pending) {
          if (have_target) unsupported(fn->pos, "more than one annotated function declaration");
          spec_.target = std::move(*fn);
          spec_.requires_clauses = std::move(pending);
          pending.clear();
          have_pending = false;
          have_target = true;
        } else {
          plain_functions.push_back(std::move(*fn));
        }
      } else if (have_pending) {
        syntax(peek().pos, "annotation must precede a function declaration");
      }
    }
    if (have_pending) syntax(peek().pos, "annotation is not followed by a function declaration");
    if (!have_target) {
      if (plain_functions.size() != 1) syntax(peek().pos, "expected exactly one annotated function declaration");
      spec_.target = std::move(plain_functions.front());
    }
    return std::move(spec_);
  }

 private:
  // ---- token helpers ----------------------------------------------------
  const Token& peek(std::size_t k = 0) const { return t_[std::min(i_ + k, t_.size() - 1)]; }
  const Token& next() { return t_[std::min(i_++, t_.size() - 1)]; }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool is(const char* s, std::size_t k = 0) const {
    const Token& t = peek(k);
    return (t.kind == Token::Kind::Punct || t.kind == Token::Kind::Ident) && t.text == s;
  }
  bool accept(const char* s) {
    if (!is(s)) return false;
    next();
    return true;
  }
  const Token& expect(const char* s) {
    if (!is(s)) syntax(peek().pos, std::string("expected '") + s + "' but found " + describe(peek()));
    return next();
  }
  std::string ident() {
    const Token& t = peek();
    if (t.kind != Token::Kind::Ident || t.text[0] == '\\' || is_keyword(t.text))
      syntax(t.pos, "expected identifier but found " + describe(t));
    return next().text;
  }
  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Token::Kind::End: return "end of input";
      case Token::Kind::AnnotOpen: return "'/*@'";
      case Token::Kind::AnnotClose: return "'*/'";
      default: return "'" + t.text + "'";
    }
  }
  static bool is_keyword(const std::string& s) {
    static const std::set<std::string> kw = {"typedef", "struct", "const",  "volatile", "unsigned", "signed",
                                             "char",    "short",  "int",    "long",     "void",     "extern",
                                             "static",  "union",  "enum",   "sizeof",   "requires", "inline"};
    return kw.count(s) != 0;
  }

  // ---- C declarations ---------------------------------------------------
  bool starts_type() const {
    const Token& t = peek();
    if (t.kind != Token::Kind::Ident) return false;
    static const std::set<std::string> spec = {"const", "volatile", "unsigned", "signed", "char", "short",
                                               "int",   "long",     "void",     "struct", "union",  "enum"};
    return spec.count(t.text) || kStdIntNames.count(t.text) || structs_.count(t.text) || aliases_.count(t.text);
  }

  CTypePtr base_type() {
    Pos pos = peek().pos;
    bool is_const = false, is_unsigned = false, is_signed = false;
    int longs = 0;
    std::string core;
    CTypePtr named;
    while (true) {
      const Token& t = peek();
      if (t.kind != Token::Kind::Ident) break;
      const std::string& w = t.text;
      if (w == "const") {
        is_const = true;
      } else if (w == "volatile") {
        unsupported(t.pos, "volatile qualifier");
      } else if (w == "unsigned") {
        is_unsigned = true;
      } else if (w == "signed") {
        is_signed = true;
      } else if (w == "long") {
        ++longs;
      } else if (w == "char" || w == "short" || w == "int" || w == "void") {
        if (!core.empty() && !(core == "short" && w == "int")) syntax(t.pos, "conflicting type specifiers");
        if (core != "short") core = w;
      } else if (w == "union" || w == "enum") {
        unsupported(t.pos, w + " types");
      } else if (w == "struct") {
        next();
        Pos tp = peek().pos;
        std::string tag = ident();
        auto it = tags_.find(tag);
        if (it == tags_.end()) syntax(tp, "unknown struct tag '" + tag + "'");
        named = CType::structure(it->second);
        continue;
      } else if (!named && core.empty() && longs == 0 && !is_unsigned && !is_signed &&
                 (kStdIntNames.count(w) || structs_.count(w) || aliases_.count(w))) {
        if (structs_.count(w))
          named = CType::structure(w);
        else if (aliases_.count(w))
          named = CType::integer(aliases_[w]);
        else
          named = CType::integer(w);
      } else {
        break;
      }
      next();
    }
    if (named) {
      if (!core.empty() || longs || is_unsigned || is_signed) syntax(pos, "conflicting type specifiers");
      if (named->is_struct()) return CType::structure(named->name, is_const);
      return CType::integer(named->name, is_const);
    }
    if (core == "void") {
      if (longs || is_unsigned || is_signed) syntax(pos, "conflicting type specifiers");
      return is_const ? std::make_shared<CType>(CType{CType::Kind::Void, "void", nullptr, 0, true}) : CType::void_type();
    }
    if (core.empty() && !longs && !is_unsigned && !is_signed) syntax(pos, "expected a type but found " + describe(peek()));
    if (longs > 2) syntax(pos, "too many 'long' specifiers");
    std::string k;
    if (core == "char") {
      if (longs) syntax(pos, "conflicting type specifiers");
      k = is_unsigned ? "unsigned char" : is_signed ? "signed char" : "char";
    } else if (core == "short") {
      if (longs) syntax(pos, "conflicting type specifiers");
      k = is_unsigned ? "unsigned short" : "short";
    } else {
      k = longs == 2 ? "long long" : longs == 1 ? "long" : "int";
      if (is_unsigned) k = "unsigned " + k;
    }
    if (is_unsigned && is_signed) syntax(pos, "conflicting type specifiers");
    return CType::integer(k, is_const);
  }

  struct Declarator {
    std::string name;
    CTypePtr type;
    Pos pos;
    bool has_params = false;
    std::vector<VarDecl> params;
  };

  Declarator declarator(CTypePtr base, bool allow_function) {
    CTypePtr t = std::move(base);
    while (accept("*")) {
      t = CType::pointer(t);
      while (accept("const")) {
      }
    }
    if (is("(")) unsupported(peek().pos, "function pointers and parenthesized declarators");
    Declarator d;
    d.pos = peek().pos;
    d.name = ident();
    if (allow_function && is("(")) {
      next();
      d.has_params = true;
      if (is("void") && is(")", 1)) {
        next();
      } else if (!is(")")) {
        do {
          if (is(".")) unsupported(peek().pos, "variadic functions");
          Pos pp = peek().pos;
          CTypePtr pt = base_type();
          Declarator pd = declarator(pt, false);
          if (pd.type->kind == CType::Kind::Void) syntax(pp, "parameter of type void");
          d.params.push_back(VarDecl{pd.name, pd.type, pd.pos});
        } while (accept(","));
      }
      expect(")");
      d.type = t;
      return d;
    }
    std::vector<std::int64_t> dims;
    while (accept("[")) {
      if (accept("]")) {
        dims.push_back(-1);
        continue;
      }
      const Token& n = peek();
      if (n.kind != Token::Kind::Number) unsupported(n.pos, "array length must be an integer constant");
      next();
      Int v = parse_int_literal(n.text);
      if (v <= 0 || v > Int(1) << 40) syntax(n.pos, "array length must be strictly positive");
      dims.push_back(static_cast<std::int64_t>(v));
      expect("]");
    }
    for (std::size_t k = dims.size(); k-- > 0;) {
      if (dims[k] < 0) {
        if (k != 0 || allow_function) syntax(d.pos, "array of unknown length");
        t = CType::pointer(t);  // parameter `T x[]` decays
      } else {
        t = CType::array(t, dims[k]);
      }
    }
    d.type = t;
    return d;
  }

  void typedef_decl() {
    Pos pos = expect("typedef").pos;
    if (is("struct")) {
      next();
      std::optional<std::string> tag;
      if (peek().kind == Token::Kind::Ident && !is("{")) tag = ident();
      if (!is("{")) unsupported(peek().pos, "typedef of an incomplete struct");
      next();
      StructDef def;
      def.pos = pos;
      std::set<std::string> names;
      while (!accept("}")) {
        CTypePtr bt = base_type();
        do {
          Declarator d = declarator(bt, false);
          if (d.type->kind == CType::Kind::Void) syntax(d.pos, "field of type void");
          if (d.type->is_pointer() && !d.type->elem) syntax(d.pos, "bad field type");
          if (!names.insert(d.name).second) syntax(d.pos, "duplicate field '" + d.name + "'");
          def.fields.push_back(FieldDecl{d.name, d.type});
        } while (accept(","));
        expect(";");
      }
      if (is("*")) unsupported(peek().pos, "pointer typedefs");
      Pos np = peek().pos;
      def.name = ident();
      expect(";");
      if (structs_.count(def.name) || aliases_.count(def.name)) syntax(np, "redefinition of '" + def.name + "'");
      if (def.fields.empty()) syntax(np, "empty struct");
      structs_.insert(def.name);
      tags_[def.name] = def.name;
      if (tag) tags_[*tag] = def.name;
      spec_.typedefs.push_back(std::move(def));
      return;
    }
    CTypePtr bt = base_type();
    if (!bt->is_integer() || is("*")) unsupported(pos, "only struct and integer typedefs are accepted");
    Pos np = peek().pos;
    std::string name = ident();
    if (is("[")) unsupported(peek().pos, "array typedefs");
    expect(";");
    if (structs_.count(name) || aliases_.count(name)) syntax(np, "redefinition of '" + name + "'");
    aliases_[name] = bt->name;
    spec_.aliases.emplace_back(name, bt->name);
  }

  std::optional<FunctionDecl> declaration() {
    while (accept("extern") || accept("static") || accept("inline")) {
    }
    if (!starts_type()) syntax(peek().pos, "expected a declaration but found " + describe(peek()));
    CTypePtr bt = base_type();
    std::optional<FunctionDecl> fn;
    do {
      Declarator d = declarator(bt, true);
      if (d.has_params) {
        if (fn) syntax(d.pos, "one function per declaration");
        fn = FunctionDecl{d.name, d.type, std::move(d.params), d.pos};
        if (is("{")) unsupported(peek().pos, "function definitions (only prototypes are read)");
        continue;
      }
      if (d.type->kind == CType::Kind::Void) syntax(d.pos, "variable of type void");
      for (const auto& g : spec_.globals)
        if (g.name == d.name) syntax(d.pos, "redefinition of '" + d.name + "'");
      if (accept("=")) unsupported(peek().pos, "initialized globals");
      spec_.globals.push_back(VarDecl{d.name, d.type, d.pos});
    } while (accept(","));
    expect(";");
    return fn;
  }

  // ---- annotations ------------------------------------------------------
  void annotation(std::vector<RequiresClause>& out) {
    next();  // /*@
    while (peek().kind != Token::Kind::AnnotClose) {
      const Token& t = peek();
      if (t.kind == Token::Kind::End) syntax(t.pos, "unterminated annotation");
      if (is("requires")) {
        Pos pos = next().pos;
        RequiresClause rc;
        rc.pos = pos;
        if (peek().kind == Token::Kind::Ident && is(":", 1)) {
          Pos lp = peek().pos;
          rc.label = ident();
          next();
          for (const auto& c : out)
            if (c.label == rc.label) syntax(lp, "duplicate clause label '" + *rc.label + "'");
        }
        rc.pred = predicate();
        expect(";");
        out.push_back(std::move(rc));
      } else if (is("assigns") || is("ensures") || is("terminates") || is("decreases") || is("frees") ||
                 is("allocates")) {
        spec_.warnings.push_back({Severity::Warning, t.pos, "ignoring '" + t.text + "' clause"});
        while (!is(";") && peek().kind != Token::Kind::AnnotClose && !at_end()) next();
        expect(";");
      } else if (is("behavior") || is("assumes") || is("complete") || is("disjoint") || is("predicate") ||
                 is("logic") || is("axiomatic") || is("lemma") || is("loop") || is("ghost")) {
        unsupported(t.pos, "'" + t.text + "' in annotations");
      } else {
        syntax(t.pos, "expected 'requires' but found " + describe(t));
      }
    }
    next();  // */
  }

  PredPtr predicate() {
    PredPtr p = disjunction();
    if (is("==>") || is("<==>") || is("^^") || is("?"))
      unsupported(peek().pos, "'" + peek().text + "' connective");
    return p;
  }

  PredPtr disjunction() {
    Pos pos = peek().pos;
    std::vector<PredPtr> kids{conjunction()};
    while (accept("||")) kids.push_back(conjunction());
    return kids.size() == 1 ? kids[0] : make_or(std::move(kids), pos);
  }

  PredPtr conjunction() {
    Pos pos = peek().pos;
    std::vector<PredPtr> kids{negation()};
    while (accept("&&")) kids.push_back(negation());
    return kids.size() == 1 ? kids[0] : make_and(std::move(kids), pos);
  }

  PredPtr negation() {
    Pos pos = peek().pos;
    if (accept("!")) return make_not(negation(), pos);
    return atom();
  }

  static bool is_relop(const Token& t) {
    return t.kind == Token::Kind::Punct &&
           (t.text == "==" || t.text == "!=" || t.text == "<=" || t.text == "<" || t.text == ">=" || t.text == ">");
  }

  static CmpOp relop(const std::string& s) {
    if (s == "==") return CmpOp::Eq;
    if (s == "!=") return CmpOp::Ne;
    if (s == "<=") return CmpOp::Le;
    if (s == "<") return CmpOp::Lt;
    if (s == ">=") return CmpOp::Ge;
    return CmpOp::Gt;
  }

  PredPtr atom() {
    const Token& t = peek();
    Pos pos = t.pos;
    if (t.kind == Token::Kind::Ident && t.text[0] == '\\') {
      if (t.text == "\\true" || t.text == "\\false") {
        next();
        return make_bool(t.text == "\\true", pos);
      }
      std::optional<DefKind> k;
      if (t.text == "\\valid") k = DefKind::ValidWrite;
      if (t.text == "\\valid_read") k = DefKind::ValidRead;
      if (t.text == "\\initialized") k = DefKind::Initialized;
      if (k) {
        next();
        if (is("{")) unsupported(peek().pos, "label arguments of '" + t.text + "'");
        expect("(");
        TermPtr m = term();
        expect(")");
        return make_defined(*k, m, pos);
      }
      if (kUnsupportedBuiltins.count(t.text)) unsupported(pos, "'" + t.text + "'");
      unsupported(pos, "unknown builtin '" + t.text + "'");
    }
    if (is("(")) {
      std::size_t save = i_;
      try {
        return relation();
      } catch (const FrontendError& e) {
        if (e.kind() != ErrorKind::Syntax) throw;
        i_ = save;
      }
      next();
      PredPtr p = predicate();
      expect(")");
      return p;
    }
    return relation();
  }

  PredPtr relation() {
    Pos pos = peek().pos;
    TermPtr lhs = term();
    if (is("==>") || is("<==>") || is("^^")) unsupported(peek().pos, "'" + peek().text + "' connective");
    if (!is_relop(peek())) syntax(peek().pos, "expected a comparison but found " + describe(peek()));
    std::vector<PredPtr> cmps;
    while (is_relop(peek())) {
      Pos op_pos = peek().pos;
      CmpOp op = relop(next().text);
      TermPtr rhs = term();
      cmps.push_back(make_cmp(op, lhs, rhs, cmps.empty() ? pos : op_pos));
      lhs = rhs;
    }
    return cmps.size() == 1 ? cmps[0] : make_and(std::move(cmps), pos);
  }

  // ---- terms ------------------------------------------------------------
  TermPtr term() {
    TermPtr l = multiplicative();
    while (is("+") || is("-")) {
      Pos pos = peek().pos;
      bool plus = next().text == "+";
      if (plus && is("(")) {
        std::size_t save = i_;
        next();
        TermPtr lo;
        try {
          lo = term();
        } catch (const FrontendError& e) {
          if (e.kind() != ErrorKind::Syntax) throw;
        }
        if (lo && accept("..")) {
          TermPtr hi = term();
          expect(")");
          l = make_disp(l, lo, hi, pos);
          continue;
        }
        i_ = save;
      }
      TermPtr r = multiplicative();
      l = make_binary(plus ? BinOp::Add : BinOp::Sub, l, r, pos);
    }
    if (is("<<") || is(">>") || is("&") || is("|") || is("^"))
      unsupported(peek().pos, "bitwise operator '" + peek().text + "'");
    return l;
  }

  TermPtr multiplicative() {
    TermPtr l = unary();
    while (is("*") || is("/") || is("%")) {
      Pos pos = peek().pos;
      const std::string op = next().text;
      TermPtr r = unary();
      l = make_binary(op == "*" ? BinOp::Mul : op == "/" ? BinOp::Div : BinOp::Mod, l, r, pos);
    }
    return l;
  }

  TermPtr unary() {
    Pos pos = peek().pos;
    if (accept("-")) {
      if (peek().kind == Token::Kind::Number) return make_const(-parse_int_literal(next().text), pos);
      return make_binary(BinOp::Sub, make_const(0, pos), unary(), pos);
    }
    if (accept("+")) return unary();
    if (accept("*")) return make_deref(unary(), pos);
    if (is("&")) unsupported(pos, "address-of operator");
    if (is("~")) unsupported(pos, "bitwise operator '~'");
    if (is("(") && peek(1).kind == Token::Kind::Ident && !peek(1).text.empty() && peek(1).text[0] != '\\' &&
        (is_keyword(peek(1).text) || structs_.count(peek(1).text) || aliases_.count(peek(1).text) ||
         kStdIntNames.count(peek(1).text) || peek(1).text == "integer"))
      unsupported(pos, "casts");
    return postfix();
  }

  TermPtr postfix() {
    TermPtr t = primary();
    while (true) {
      Pos pos = peek().pos;
      if (accept("[")) {
        TermPtr idx = term();
        if (is("..")) unsupported(peek().pos, "ranges inside array subscripts");
        expect("]");
        t = make_deref(make_disp(t, idx, idx, pos), pos);
      } else if (accept("->")) {
        t = make_field(make_deref(t, pos), ident(), pos);
      } else if (accept(".")) {
        t = make_field(t, ident(), pos);
      } else {
        return t;
      }
    }
  }

  TermPtr primary() {
    const Token& t = peek();
    Pos pos = t.pos;
    if (t.kind == Token::Kind::Number) {
      next();
      try {
        return make_const(parse_int_literal(t.text), pos);
      } catch (const std::exception&) {
        syntax(pos, "malformed integer literal '" + t.text + "'");
      }
    }
    if (t.kind == Token::Kind::Ident) {
      if (t.text[0] == '\\') {
        if (kUnsupportedBuiltins.count(t.text)) unsupported(pos, "'" + t.text + "'");
        syntax(pos, "unexpected '" + t.text + "' in a term");
      }
      if (t.text == "sizeof") unsupported(pos, "sizeof");
      return make_var(ident(), pos);
    }
    if (accept("(")) {
      TermPtr inner = term();
      expect(")");
      return inner;
    }
    if (t.kind == Token::Kind::Punct && (t.text == "'" || t.text == "\"")) unsupported(pos, "character and string literals");
    syntax(pos, "expected a term but found " + describe(t));
  }

  std::vector<Token> t_;
  std::size_t i_ = 0;
  SpecFile spec_;
  std::set<std::string> structs_;
  std::map<std::string, std::string> tags_;
  std::map<std::string, std::string> aliases_;
};

std::string params_text(const std::vector<VarDecl>& ps) {
  if (ps.empty()) return "void";
  std::string s;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) s += ", ";
    s += ps[i].type->declare(ps[i].name);
  }
  return s;
}

}  // namespace

SpecFile parse_source(const std::string& text, const std::string& filename) {
  Lexer lx(text);
  Parser p(lx.run(), filename);
  return p.run();
}

std::string print_spec(const SpecFile& spec) {
  std::string out;
  for (const auto& [alias, kind] : spec.aliases) out += "typedef " + kind + " " + alias + ";\n";
  for (const auto& td : spec.typedefs) {
    out += "typedef struct {\n";
    for (const auto& f : td.fields) out += "  " + f.type->declare(f.name) + ";\n";
    out += "} " + td.name + ";\n";
  }
  for (const auto& g : spec.globals) out += g.type->declare(g.name) + ";\n";
  if (!spec.requires_clauses.empty()) {
    out += "/*@";
    for (std::size_t i = 0; i < spec.requires_clauses.size(); ++i) {
      const auto& rc = spec.requires_clauses[i];
      out += i ? "\n  @ requires " : " requires ";
      if (rc.label) out += *rc.label + ": ";
      out += render(*rc.pred) + ";";
    }
    out += " */\n";
  }
  out += spec.target.return_type->declare(spec.target.name + "(" + params_text(spec.target.params) + ")") + ";\n";
  return out;
}

}  // namespace ctxgen
