#pragma once

// Partial parser for a Java-like target language, structural comparison of
// the resulting trees, and context-condition checks.
//
// Only declaration-level structure is modelled. Expressions are kept as
// token lists plus the bare identifiers they use, which is enough for
// whitespace-insensitive comparison and use-before-definition checks.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "tunit/error.hpp"

namespace tunit::java {

enum class Modifier { Public, Protected, Private, Abstract, Static, Final };

inline constexpr std::array<Modifier, 6> kAllModifiers = {
    Modifier::Public, Modifier::Protected, Modifier::Private,
    Modifier::Abstract, Modifier::Static, Modifier::Final};

inline std::string_view to_string(Modifier m) {
  switch (m) {
    case Modifier::Public: return "public";
    case Modifier::Protected: return "protected";
    case Modifier::Private: return "private";
    case Modifier::Abstract: return "abstract";
    case Modifier::Static: return "static";
    case Modifier::Final: return "final";
  }
  return "";
}

using Modifiers = std::set<Modifier>;

struct JtlType {
  std::string baseName;
  int arrayDims = 0;
  /// Set on constructor "return types": baseName is then the class name.
  bool constructor = false;

  std::string print() const {
    std::string out = baseName;
    for (int i = 0; i < arrayDims; ++i) out += "[]";
    return out;
  }
  bool operator==(const JtlType&) const = default;
};

/// Token-normalized expression: token texts plus the bare identifiers used.
struct TokenSeq {
  std::vector<std::string> tokens;
  std::vector<std::string> usedIdents;

  std::string print() const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out += ' ';
      out += tokens[i];
    }
    return out;
  }
  bool operator==(const TokenSeq& o) const { return tokens == o.tokens; }
};

struct JtlStmt;

struct LocalVarDecl {
  JtlType type;
  std::string name;
  std::optional<TokenSeq> initializer;
  bool operator==(const LocalVarDecl&) const = default;
};
struct ExprStmt {
  TokenSeq expr;
  bool operator==(const ExprStmt&) const = default;
};
struct ReturnStmt {
  std::optional<TokenSeq> value;
  bool operator==(const ReturnStmt&) const = default;
};
struct Block {
  std::vector<JtlStmt> stmts;
  bool operator==(const Block&) const;
};

struct JtlStmt {
  std::variant<LocalVarDecl, ExprStmt, ReturnStmt, Block> node;
  SourcePos pos;
  bool operator==(const JtlStmt&) const = default;

  /// Identifiers used by this statement's own expressions (not nested blocks).
  std::vector<std::string> usedIdents() const {
    if (const auto* d = std::get_if<LocalVarDecl>(&node)) {
      return d->initializer ? d->initializer->usedIdents : std::vector<std::string>{};
    }
    if (const auto* e = std::get_if<ExprStmt>(&node)) return e->expr.usedIdents;
    if (const auto* r = std::get_if<ReturnStmt>(&node)) {
      return r->value ? r->value->usedIdents : std::vector<std::string>{};
    }
    return {};
  }
};

inline bool Block::operator==(const Block& o) const { return stmts == o.stmts; }

struct JtlParam {
  JtlType type;
  std::string name;
  bool operator==(const JtlParam&) const = default;
};

struct JtlFieldDecl {
  Modifiers modifiers;
  JtlType type;
  std::string name;
  std::optional<TokenSeq> initializer;
  SourcePos pos;
  bool operator==(const JtlFieldDecl&) const = default;
};

struct JtlMethodDecl {
  Modifiers modifiers;
  JtlType returnType;
  std::string name;
  std::vector<JtlParam> params;
  std::vector<std::string> throwsList;
  std::optional<std::vector<JtlStmt>> body;  // nullopt for a `;` terminator
  SourcePos pos;
  bool operator==(const JtlMethodDecl&) const = default;

  std::vector<std::string> paramTypes() const {
    std::vector<std::string> out;
    for (const auto& p : params) out.push_back(p.type.print());
    return out;
  }
};

using JtlMember = std::variant<JtlFieldDecl, JtlMethodDecl>;

struct JtlClassDecl {
  Modifiers modifiers;
  std::string name;
  std::optional<std::string> superclass;
  std::vector<std::string> interfaces;
  std::vector<JtlMember> members;
  SourcePos pos;
  bool operator==(const JtlClassDecl&) const = default;
};

struct JtlCompilationUnit {
  std::optional<std::string> packageName;
  std::vector<std::string> imports;
  std::vector<JtlClassDecl> types;
  bool operator==(const JtlCompilationUnit&) const = default;
};

struct JtlStatements {
  std::vector<JtlStmt> stmts;
  bool operator==(const JtlStatements&) const = default;
};

/// Any node a partial parse can produce.
using JtlNode = std::variant<JtlCompilationUnit, JtlClassDecl, JtlFieldDecl, JtlMethodDecl, JtlStatements>;

enum class EntryPoint { CompilationUnit, ClassDecl, FieldDecl, MethodDecl, Statements };

inline std::string_view to_string(EntryPoint e) {
  switch (e) {
    case EntryPoint::CompilationUnit: return "compilation_unit";
    case EntryPoint::ClassDecl: return "class_decl";
    case EntryPoint::FieldDecl: return "field_decl";
    case EntryPoint::MethodDecl: return "method_decl";
    case EntryPoint::Statements: return "statements";
  }
  return "";
}

inline std::optional<EntryPoint> parseEntryPoint(std::string_view s) {
  for (auto e : {EntryPoint::CompilationUnit, EntryPoint::ClassDecl, EntryPoint::FieldDecl,
                 EntryPoint::MethodDecl, EntryPoint::Statements}) {
    if (to_string(e) == s) return e;
  }
  return std::nullopt;
}

inline std::string_view nodeKindName(const JtlNode& n) {
  static constexpr std::array<std::string_view, 5> names = {
      "compilation unit", "class declaration", "field declaration", "method declaration", "statements"};
  return names[n.index()];
}

// ---------------------------------------------------------------------------
// Lexer

enum class TokKind { Ident, Number, String, Char, Op, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  SourcePos pos;
};

inline bool isKeyword(std::string_view s) {
  static const std::set<std::string_view> words = {
      "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
      "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
      "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long", "native",
      "new", "package", "private", "protected", "public", "return", "short", "static", "strictfp",
      "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try", "void",
      "volatile", "while", "true", "false", "null"};
  return words.count(s) != 0;
}

inline bool isPrimitiveType(std::string_view s) {
  static const std::set<std::string_view> prims = {
      "boolean", "byte", "char", "short", "int", "long", "float", "double", "void"};
  return prims.count(s) != 0;
}

/// Splits source into tokens, dropping whitespace and comments.
inline std::vector<Token> tokenize(std::string_view src) {
  static constexpr std::array<std::string_view, 27> ops = {
      ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=",
      ">=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "@", "#"};
  std::vector<Token> out;
  std::size_t at = 0;
  int line = 1;
  int col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t i = 0; i < n && at < src.size(); ++i, ++at) {
      if (src[at] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto isIdStart = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; };
  auto isIdPart = [&](char c) { return isIdStart(c) || std::isdigit(static_cast<unsigned char>(c)); };

  while (at < src.size()) {
    const char c = src[at];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f') {
      advance(1);
      continue;
    }
    const SourcePos pos{line, col};
    if (src.substr(at, 2) == "//") {
      while (at < src.size() && src[at] != '\n') advance(1);
      continue;
    }
    if (src.substr(at, 2) == "/*") {
      const std::size_t end = src.find("*/", at + 2);
      if (end == std::string_view::npos) throw Error(ErrorCode::SyntaxError, "unterminated comment", pos);
      advance(end + 2 - at);
      continue;
    }
    Token t;
    t.pos = pos;
    const std::size_t start = at;
    if (isIdStart(c)) {
      t.kind = TokKind::Ident;
      while (at < src.size() && isIdPart(src[at])) advance(1);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && at + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[at + 1])))) {
      t.kind = TokKind::Number;
      while (at < src.size()) {
        const char d = src[at];
        if ((d == 'e' || d == 'E') && at + 1 < src.size() && (src[at + 1] == '+' || src[at + 1] == '-') &&
            src.substr(start, 2) != "0x" && src.substr(start, 2) != "0X") {
          advance(2);
        } else if (std::isalnum(static_cast<unsigned char>(d)) || d == '.' || d == '_') {
          advance(1);
        } else {
          break;
        }
      }
    } else if (c == '"' || c == '\'') {
      t.kind = c == '"' ? TokKind::String : TokKind::Char;
      advance(1);
      for (;;) {
        if (at >= src.size() || src[at] == '\n') {
          throw Error(ErrorCode::SyntaxError, "unterminated literal", pos);
        }
        if (src[at] == '\\') {
          advance(2);
          continue;
        }
        const bool close = src[at] == c;
        advance(1);
        if (close) break;
      }
    } else {
      t.kind = TokKind::Op;
      std::size_t len = 1;
      for (auto op : ops) {
        if (src.substr(at, op.size()) == op) {
          len = op.size();
          break;
        }
      }
      advance(len);
    }
    t.text = std::string(src.substr(start, at - start));
    out.push_back(std::move(t));
  }
  out.push_back(Token{TokKind::End, "", {line, col}});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  JtlNode parse(EntryPoint entry) {
    if (peek().kind == TokKind::End && entry != EntryPoint::Statements && entry != EntryPoint::CompilationUnit) {
      fail("expected " + std::string(to_string(entry)) + ", found end of input");
    }
    JtlNode result = [&]() -> JtlNode {
      switch (entry) {
        case EntryPoint::CompilationUnit: return compilationUnit();
        case EntryPoint::ClassDecl: return classDecl();
        case EntryPoint::FieldDecl: return fieldDeclEntry();
        case EntryPoint::MethodDecl: return methodDeclEntry();
        case EntryPoint::Statements: {
          JtlStatements s;
          while (peek().kind != TokKind::End) statementInto(s.stmts);
          return s;
        }
      }
      fail("unknown entry point");
    }();
    if (peek().kind != TokKind::End) fail("unexpected '" + peek().text + "' after " + std::string(to_string(entry)));
    return result;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg) const { throw Error(ErrorCode::SyntaxError, msg, peek().pos); }
  [[noreturn]] void expected(std::string_view what) const {
    fail("expected " + std::string(what) + ", found " +
         (peek().kind == TokKind::End ? std::string("end of input") : "'" + peek().text + "'"));
  }

  bool is(std::string_view text, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return (t.kind == TokKind::Op || t.kind == TokKind::Ident) && t.text == text;
  }
  void expect(std::string_view text) {
    if (!is(text)) expected("'" + std::string(text) + "'");
    next();
  }
  bool isName(std::size_t ahead = 0) const {
    return peek(ahead).kind == TokKind::Ident && !isKeyword(peek(ahead).text);
  }
  std::string name() {
    if (!isName()) expected("identifier");
    return next().text;
  }
  std::string dottedName() {
    std::string out = name();
    while (is(".") && isName(1)) {
      next();
      out += "." + next().text;
    }
    return out;
  }

  std::optional<Modifier> modifierAt(std::size_t ahead) const {
    for (auto m : kAllModifiers) {
      if (peek(ahead).kind == TokKind::Ident && peek(ahead).text == to_string(m)) return m;
    }
    return std::nullopt;
  }
  Modifiers modifiers() {
    Modifiers out;
    while (auto m = modifierAt(0)) {
      if (!out.insert(*m).second) fail("duplicate modifier '" + std::string(to_string(*m)) + "'");
      next();
    }
    return out;
  }

  bool isTypeStart(std::size_t ahead = 0) const {
    return isName(ahead) || (peek(ahead).kind == TokKind::Ident && isPrimitiveType(peek(ahead).text));
  }
  JtlType type() {
    JtlType t;
    if (!isTypeStart()) expected("type");
    t.baseName = next().text;
    if (!isPrimitiveType(t.baseName)) {
      while (is(".") && isName(1)) {
        next();
        t.baseName += "." + next().text;
      }
    }
    while (is("[") && is("]", 1)) {
      next();
      next();
      ++t.arrayDims;
    }
    return t;
  }
  /// Lookahead: does a type followed by an identifier start here?
  std::optional<std::size_t> typeThenNameAt(std::size_t ahead) const {
    if (!isTypeStart(ahead)) return std::nullopt;
    const bool prim = isPrimitiveType(peek(ahead).text);
    std::size_t k = ahead + 1;
    if (!prim) {
      while (is(".", k) && isName(k + 1)) k += 2;
    }
    while (is("[", k) && is("]", k + 1)) k += 2;
    if (!isName(k)) return std::nullopt;
    return k;
  }

  /// Collects tokens up to (not including) `stop` at bracket depth zero.
  TokenSeq tokensUntil(std::string_view stop) {
    TokenSeq seq;
    int depth = 0;
    for (;;) {
      const Token& t = peek();
      if (t.kind == TokKind::End) expected("'" + std::string(stop) + "'");
      if (depth == 0 && t.kind == TokKind::Op && t.text == stop) break;
      if (t.kind == TokKind::Op && (t.text == "(" || t.text == "[" || t.text == "{")) ++depth;
      if (t.kind == TokKind::Op && (t.text == ")" || t.text == "]" || t.text == "}")) {
        if (depth == 0) fail("unbalanced '" + t.text + "'");
        --depth;
      }
      // Bare identifier uses: not keywords, not the right side of `a.b`, not
      // call targets `f(`, not the type after `new`.
      if (t.kind == TokKind::Ident && !isKeyword(t.text)) {
        const bool member = !seq.tokens.empty() && seq.tokens.back() == ".";
        const bool afterNew = !seq.tokens.empty() && seq.tokens.back() == "new";
        const bool call = is("(", 1);
        if (!member && !afterNew && !call) seq.usedIdents.push_back(t.text);
      }
      seq.tokens.push_back(next().text);
    }
    return seq;
  }

  // --- declarations -----------------------------------------------------

  JtlCompilationUnit compilationUnit() {
    JtlCompilationUnit unit;
    if (is("package")) {
      next();
      unit.packageName = dottedName();
      expect(";");
    }
    while (is("import")) {
      next();
      std::string imp;
      if (is("static")) {
        next();
        imp = "static ";
      }
      imp += dottedName();
      if (is(".") && is("*", 1)) {
        next();
        next();
        imp += ".*";
      }
      expect(";");
      unit.imports.push_back(std::move(imp));
    }
    while (peek().kind != TokKind::End) {
      if (is(";")) {
        next();
        continue;
      }
      unit.types.push_back(classDecl());
    }
    return unit;
  }

  JtlClassDecl classDecl() {
    JtlClassDecl cls;
    cls.pos = peek().pos;
    cls.modifiers = modifiers();
    expect("class");
    cls.name = name();
    if (is("extends")) {
      next();
      cls.superclass = dottedName();
    }
    if (is("implements")) {
      next();
      cls.interfaces.push_back(dottedName());
      while (is(",")) {
        next();
        cls.interfaces.push_back(dottedName());
      }
    }
    expect("{");
    while (!is("}")) {
      if (peek().kind == TokKind::End) expected("'}'");
      if (is(";")) {
        next();
        continue;
      }
      cls.members.push_back(member(cls.name));
    }
    expect("}");
    return cls;
  }

  JtlMember member(const std::string& className) {
    const SourcePos pos = peek().pos;
    Modifiers mods = modifiers();
    if (is(className) && is("(", 1)) {
      JtlType ctor{className, 0, true};
      next();
      return methodRest(std::move(mods), std::move(ctor), className, pos);
    }
    JtlType t = type();
    std::string n = name();
    if (is("(")) return methodRest(std::move(mods), std::move(t), std::move(n), pos);
    return fieldRest(std::move(mods), std::move(t), std::move(n), pos);
  }

  JtlFieldDecl fieldDeclEntry() {
    const SourcePos pos = peek().pos;
    Modifiers mods = modifiers();
    JtlType t = type();
    std::string n = name();
    if (is("(")) throw Error(ErrorCode::WrongFragmentKind, "found a method declaration, expected a field declaration", peek().pos);
    return fieldRest(std::move(mods), std::move(t), std::move(n), pos);
  }

  JtlMethodDecl methodDeclEntry() {
    const SourcePos pos = peek().pos;
    Modifiers mods = modifiers();
    JtlType t = type();
    if (is("(")) {
      // Constructor: `Name(...)`.
      if (t.arrayDims != 0 || isPrimitiveType(t.baseName)) expected("identifier");
      t.constructor = true;
      std::string n = t.baseName;
      return methodRest(std::move(mods), std::move(t), std::move(n), pos);
    }
    std::string n = name();
    if (!is("(")) throw Error(ErrorCode::WrongFragmentKind, "found a field declaration, expected a method declaration", peek().pos);
    return methodRest(std::move(mods), std::move(t), std::move(n), pos);
  }

  JtlFieldDecl fieldRest(Modifiers mods, JtlType t, std::string n, SourcePos pos) {
    JtlFieldDecl f;
    f.modifiers = std::move(mods);
    f.type = std::move(t);
    f.name = std::move(n);
    f.pos = pos;
    if (is("=")) {
      next();
      f.initializer = tokensUntil(";");
      if (f.initializer->tokens.empty()) expected("initializer");
      if (std::find(f.initializer->tokens.begin(), f.initializer->tokens.end(), ",") != f.initializer->tokens.end()) {
        // Only braces may contain commas; a top-level comma means `int a = 1, b;`.
        int depth = 0;
        for (const auto& tok : f.initializer->tokens) {
          if (tok == "(" || tok == "[" || tok == "{") ++depth;
          if (tok == ")" || tok == "]" || tok == "}") --depth;
          if (tok == "," && depth == 0) fail("multiple declarators are not supported");
        }
      }
    } else if (!is(";")) {
      expected("'=' or ';'");
    }
    expect(";");
    return f;
  }

  JtlMethodDecl methodRest(Modifiers mods, JtlType ret, std::string n, SourcePos pos) {
    JtlMethodDecl m;
    m.modifiers = std::move(mods);
    m.returnType = std::move(ret);
    m.name = std::move(n);
    m.pos = pos;
    expect("(");
    if (!is(")")) {
      for (;;) {
        JtlParam p;
        if (is("final")) next();
        p.type = type();
        p.name = name();
        m.params.push_back(std::move(p));
        if (!is(",")) break;
        next();
      }
    }
    expect(")");
    if (is("throws")) {
      next();
      m.throwsList.push_back(dottedName());
      while (is(",")) {
        next();
        m.throwsList.push_back(dottedName());
      }
    }
    if (is(";")) {
      next();
    } else if (is("{")) {
      m.body = block().stmts;
    } else {
      expected("'{' or ';'");
    }
    return m;
  }

  // --- statements -------------------------------------------------------

  Block block() {
    Block b;
    expect("{");
    while (!is("}")) {
      if (peek().kind == TokKind::End) expected("'}'");
      statementInto(b.stmts);
    }
    expect("}");
    return b;
  }

  void statementInto(std::vector<JtlStmt>& out) {
    const SourcePos pos = peek().pos;
    if (is(";")) {
      next();
      return;
    }
    if (is("{")) {
      out.push_back(JtlStmt{block(), pos});
      return;
    }
    if (is("return")) {
      next();
      ReturnStmt r;
      if (!is(";")) r.value = tokensUntil(";");
      expect(";");
      out.push_back(JtlStmt{std::move(r), pos});
      return;
    }
    if (auto k = typeThenNameAt(0); k && (is("=", *k + 1) || is(";", *k + 1))) {
      LocalVarDecl d;
      d.type = type();
      d.name = name();
      if (is("=")) {
        next();
        d.initializer = tokensUntil(";");
        if (d.initializer->tokens.empty()) expected("initializer");
      }
      expect(";");
      out.push_back(JtlStmt{std::move(d), pos});
      return;
    }
    if (peek().kind == TokKind::Ident && isKeyword(peek().text) &&
        !(peek().text == "this" || peek().text == "super" || peek().text == "new" ||
          peek().text == "true" || peek().text == "false" || peek().text == "null")) {
      fail("unsupported statement '" + peek().text + "'");
    }
    ExprStmt e{tokensUntil(";")};
    if (e.expr.tokens.empty()) expected("statement");
    expect(";");
    out.push_back(JtlStmt{std::move(e), pos});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses exactly one fragment of the requested kind. Trailing tokens are a
/// SyntaxError; a field where a method was requested (or vice versa) is
/// WrongFragmentKind.
inline JtlNode partialParse(EntryPoint entry, std::string_view source) {
  return detail::Parser(source).parse(entry);
}

template <typename T>
T partialParseAs(EntryPoint entry, std::string_view source) {
  return std::get<T>(partialParse(entry, source));
}

inline JtlFieldDecl parseFieldDeclaration(std::string_view s) { return partialParseAs<JtlFieldDecl>(EntryPoint::FieldDecl, s); }
inline JtlMethodDecl parseMethodDeclaration(std::string_view s) { return partialParseAs<JtlMethodDecl>(EntryPoint::MethodDecl, s); }
inline JtlClassDecl parseClassDeclaration(std::string_view s) { return partialParseAs<JtlClassDecl>(EntryPoint::ClassDecl, s); }
inline JtlCompilationUnit parseCompilationUnit(std::string_view s) { return partialParseAs<JtlCompilationUnit>(EntryPoint::CompilationUnit, s); }

// ---------------------------------------------------------------------------
// Printer

inline std::string printModifiers(const Modifiers& mods) {
  std::string out;
  for (auto m : kAllModifiers) {
    if (mods.count(m)) {
      out += to_string(m);
      out += ' ';
    }
  }
  return out;
}

inline std::string printStmt(const JtlStmt& s);

inline std::string printBody(const std::vector<JtlStmt>& stmts) {
  if (stmts.empty()) return "{}";
  std::string out = "{";
  for (const auto& s : stmts) out += " " + printStmt(s);
  return out + " }";
}

inline std::string printStmt(const JtlStmt& s) {
  if (const auto* d = std::get_if<LocalVarDecl>(&s.node)) {
    std::string out = d->type.print() + " " + d->name;
    if (d->initializer) out += " = " + d->initializer->print();
    return out + ";";
  }
  if (const auto* e = std::get_if<ExprStmt>(&s.node)) return e->expr.print() + ";";
  if (const auto* r = std::get_if<ReturnStmt>(&s.node)) {
    return r->value ? "return " + r->value->print() + ";" : "return;";
  }
  return printBody(std::get<Block>(s.node).stmts);
}

inline std::string printField(const JtlFieldDecl& f) {
  std::string out = printModifiers(f.modifiers) + f.type.print() + " " + f.name;
  if (f.initializer) out += " = " + f.initializer->print();
  return out + ";";
}

inline std::string printParams(const std::vector<JtlParam>& params) {
  std::string out = "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    out += params[i].type.print() + " " + params[i].name;
  }
  return out + ")";
}

inline std::string printMethod(const JtlMethodDecl& m) {
  std::string out = printModifiers(m.modifiers);
  if (!m.returnType.constructor) out += m.returnType.print() + " ";
  out += m.name + printParams(m.params);
  for (std::size_t i = 0; i < m.throwsList.size(); ++i) out += (i ? ", " : " throws ") + m.throwsList[i];
  return out + (m.body ? " " + printBody(*m.body) : ";");
}

inline std::string printClass(const JtlClassDecl& c) {
  std::string out = printModifiers(c.modifiers) + "class " + c.name;
  if (c.superclass) out += " extends " + *c.superclass;
  for (std::size_t i = 0; i < c.interfaces.size(); ++i) out += (i ? ", " : " implements ") + c.interfaces[i];
  if (c.members.empty()) return out + " {}";
  out += " {";
  for (const auto& m : c.members) {
    out += " ";
    out += std::visit([](const auto& d) {
      if constexpr (std::is_same_v<std::decay_t<decltype(d)>, JtlFieldDecl>) return printField(d);
      else return printMethod(d);
    }, m);
  }
  return out + " }";
}

inline std::string printUnit(const JtlCompilationUnit& u) {
  std::vector<std::string> parts;
  if (u.packageName) parts.push_back("package " + *u.packageName + ";");
  for (const auto& i : u.imports) parts.push_back("import " + i + ";");
  for (const auto& t : u.types) parts.push_back(printClass(t));
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " " : "") + parts[i];
  return out;
}

/// Canonical rendering: single spaces between tokens, modifiers in a fixed
/// order. Re-parses to an equal node.
inline std::string printNode(const JtlNode& node) {
  struct V {
    std::string operator()(const JtlCompilationUnit& u) const { return printUnit(u); }
    std::string operator()(const JtlClassDecl& c) const { return printClass(c); }
    std::string operator()(const JtlFieldDecl& f) const { return printField(f); }
    std::string operator()(const JtlMethodDecl& m) const { return printMethod(m); }
    std::string operator()(const JtlStatements& s) const {
      std::string out;
      for (std::size_t i = 0; i < s.stmts.size(); ++i) out += (i ? " " : "") + printStmt(s.stmts[i]);
      return out;
    }
  };
  return std::visit(V{}, node);
}

// ---------------------------------------------------------------------------
// Structural comparison

struct Mismatch {
  std::string path;
  std::string expected;
  std::string actual;
  bool operator==(const Mismatch&) const = default;
};

struct AstDiff {
  std::vector<Mismatch> mismatches;
  bool empty() const noexcept { return mismatches.empty(); }
  std::size_t size() const noexcept { return mismatches.size(); }

  std::string render() const {
    std::string out;
    for (const auto& m : mismatches) {
      out += "  " + (m.path.empty() ? std::string("<root>") : m.path) + ": expected `" + m.expected +
             "`, actual `" + m.actual + "`\n";
    }
    return out;
  }
};

namespace detail {

inline constexpr std::string_view kNone = "<none>";

class Differ {
 public:
  std::vector<Mismatch> out;

  void leaf(const std::string& path, const std::string& actual, const std::string& expected) {
    if (actual != expected) out.push_back({path, expected, actual});
  }

  static std::string join(const std::string& path, std::string_view field) {
    return path.empty() ? std::string(field) : path + "." + std::string(field);
  }
  static std::string index(const std::string& path, std::string_view field, std::size_t i) {
    return join(path, field) + "[" + std::to_string(i) + "]";
  }
  static std::string opt(const std::optional<TokenSeq>& t) { return t ? t->print() : std::string(kNone); }
  static std::string opt(const std::optional<std::string>& t) { return t ? *t : std::string(kNone); }
  static std::string list(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
    return out;
  }
  static std::string typeText(const JtlType& t) { return t.constructor ? "<constructor " + t.baseName + ">" : t.print(); }

  template <typename T, typename Fn, typename Print>
  void seq(const std::string& path, std::string_view field, const std::vector<T>& actual,
           const std::vector<T>& expected, Fn&& each, Print&& print) {
    const std::size_t n = std::max(actual.size(), expected.size());
    for (std::size_t i = 0; i < n; ++i) {
      const std::string p = index(path, field, i);
      if (i >= actual.size()) out.push_back({p, print(expected[i]), std::string(kNone)});
      else if (i >= expected.size()) out.push_back({p, std::string(kNone), print(actual[i])});
      else each(p, actual[i], expected[i]);
    }
  }

  void field(const std::string& p, const JtlFieldDecl& a, const JtlFieldDecl& e) {
    leaf(join(p, "modifiers"), printModifiers(a.modifiers), printModifiers(e.modifiers));
    leaf(join(p, "type"), typeText(a.type), typeText(e.type));
    leaf(join(p, "name"), a.name, e.name);
    leaf(join(p, "initializer"), opt(a.initializer), opt(e.initializer));
  }

  void method(const std::string& p, const JtlMethodDecl& a, const JtlMethodDecl& e) {
    leaf(join(p, "modifiers"), printModifiers(a.modifiers), printModifiers(e.modifiers));
    leaf(join(p, "returnType"), typeText(a.returnType), typeText(e.returnType));
    leaf(join(p, "name"), a.name, e.name);
    seq(p, "params", a.params, e.params,
        [&](const std::string& pp, const JtlParam& x, const JtlParam& y) {
          leaf(join(pp, "type"), x.type.print(), y.type.print());
          leaf(join(pp, "name"), x.name, y.name);
        },
        [](const JtlParam& x) { return x.type.print() + " " + x.name; });
    leaf(join(p, "throws"), list(a.throwsList), list(e.throwsList));
    if (a.body.has_value() != e.body.has_value()) {
      out.push_back({join(p, "body"), e.body ? printBody(*e.body) : ";", a.body ? printBody(*a.body) : ";"});
    } else if (a.body) {
      stmts(p, "body", *a.body, *e.body);
    }
  }

  void stmts(const std::string& p, std::string_view fieldName, const std::vector<JtlStmt>& a, const std::vector<JtlStmt>& e) {
    seq(p, fieldName, a, e, [&](const std::string& sp, const JtlStmt& x, const JtlStmt& y) { stmt(sp, x, y); }, printStmt);
  }

  void stmt(const std::string& p, const JtlStmt& a, const JtlStmt& e) {
    if (a.node.index() != e.node.index()) {
      out.push_back({p, printStmt(e), printStmt(a)});
      return;
    }
    if (const auto* x = std::get_if<LocalVarDecl>(&a.node)) {
      const auto& y = std::get<LocalVarDecl>(e.node);
      leaf(join(p, "type"), x->type.print(), y.type.print());
      leaf(join(p, "name"), x->name, y.name);
      leaf(join(p, "initializer"), opt(x->initializer), opt(y.initializer));
    } else if (const auto* x = std::get_if<ExprStmt>(&a.node)) {
      leaf(join(p, "expr"), x->expr.print(), std::get<ExprStmt>(e.node).expr.print());
    } else if (const auto* x = std::get_if<ReturnStmt>(&a.node)) {
      leaf(join(p, "value"), opt(x->value), opt(std::get<ReturnStmt>(e.node).value));
    } else {
      stmts(p, "stmts", std::get<Block>(a.node).stmts, std::get<Block>(e.node).stmts);
    }
  }

  void member(const std::string& p, const JtlMember& a, const JtlMember& e) {
    if (a.index() != e.index()) {
      out.push_back({p, printMember(e), printMember(a)});
    } else if (const auto* f = std::get_if<JtlFieldDecl>(&a)) {
      field(p, *f, std::get<JtlFieldDecl>(e));
    } else {
      method(p, std::get<JtlMethodDecl>(a), std::get<JtlMethodDecl>(e));
    }
  }

  static std::string printMember(const JtlMember& m) {
    if (const auto* f = std::get_if<JtlFieldDecl>(&m)) return printField(*f);
    return printMethod(std::get<JtlMethodDecl>(m));
  }

  void cls(const std::string& p, const JtlClassDecl& a, const JtlClassDecl& e) {
    leaf(join(p, "modifiers"), printModifiers(a.modifiers), printModifiers(e.modifiers));
    leaf(join(p, "name"), a.name, e.name);
    leaf(join(p, "superclass"), opt(a.superclass), opt(e.superclass));
    leaf(join(p, "interfaces"), list(a.interfaces), list(e.interfaces));
    seq(p, "members", a.members, e.members,
        [&](const std::string& mp, const JtlMember& x, const JtlMember& y) { member(mp, x, y); }, printMember);
  }

  void unit(const std::string& p, const JtlCompilationUnit& a, const JtlCompilationUnit& e) {
    leaf(join(p, "package"), opt(a.packageName), opt(e.packageName));
    leaf(join(p, "imports"), list(a.imports), list(e.imports));
    seq(p, "types", a.types, e.types,
        [&](const std::string& tp, const JtlClassDecl& x, const JtlClassDecl& y) { cls(tp, x, y); }, printClass);
  }
};

}  // namespace detail

/// One mismatch per differing field, paths rooted at the compared node
/// (`type`, `params[0].type`, `members[1].body[0].initializer`, ...).
/// Throws KindMismatch when the nodes are of different kinds.
inline AstDiff astDiff(const JtlNode& actual, const JtlNode& expected) {
  if (actual.index() != expected.index()) {
    throw Error(ErrorCode::KindMismatch, "cannot compare a " + std::string(nodeKindName(actual)) + " with a " +
                                             std::string(nodeKindName(expected)));
  }
  detail::Differ d;
  std::visit([&](const auto& a) {
    using T = std::decay_t<decltype(a)>;
    const auto& e = std::get<T>(expected);
    if constexpr (std::is_same_v<T, JtlCompilationUnit>) d.unit("", a, e);
    else if constexpr (std::is_same_v<T, JtlClassDecl>) d.cls("", a, e);
    else if constexpr (std::is_same_v<T, JtlFieldDecl>) d.field("", a, e);
    else if constexpr (std::is_same_v<T, JtlMethodDecl>) d.method("", a, e);
    else d.stmts("", "stmts", a.stmts, e.stmts);
  }, actual);
  return AstDiff{std::move(d.out)};
}

inline bool astEquals(const JtlNode& a, const JtlNode& b) { return astDiff(a, b).empty(); }

// ---------------------------------------------------------------------------
// Context conditions

struct Violation {
  std::string code;  // "CC1" use before definition, "CC2" duplicate member
  std::string path;
  std::string message;
  bool operator==(const Violation&) const = default;
};

namespace detail {

class ConditionChecker {
 public:
  std::vector<Violation> out;

  void unit(const JtlCompilationUnit& u) {
    for (std::size_t i = 0; i < u.types.size(); ++i) cls("types[" + std::to_string(i) + "]", u.types[i]);
  }

  void cls(const std::string& path, const JtlClassDecl& c) {
    std::vector<std::string> fields;
    std::set<std::string> fieldNames;
    std::set<std::string> signatures;
    for (std::size_t i = 0; i < c.members.size(); ++i) {
      const std::string mp = Differ::index(path, "members", i);
      if (const auto* f = std::get_if<JtlFieldDecl>(&c.members[i])) {
        if (!fieldNames.insert(f->name).second) {
          out.push_back({"CC2", mp, "duplicate field '" + f->name + "' in class " + c.name});
        }
        fields.push_back(f->name);
      } else {
        const auto& m = std::get<JtlMethodDecl>(c.members[i]);
        const std::string sig = m.name + "(" + Differ::list(m.paramTypes()) + ")";
        if (!signatures.insert(sig).second) {
          out.push_back({"CC2", mp, "duplicate method '" + sig + "' in class " + c.name});
        }
      }
    }
    for (std::size_t i = 0; i < c.members.size(); ++i) {
      if (const auto* m = std::get_if<JtlMethodDecl>(&c.members[i])) {
        method(Differ::index(path, "members", i), *m, fields);
      }
    }
  }

  void method(const std::string& path, const JtlMethodDecl& m, const std::vector<std::string>& fields) {
    std::vector<std::vector<std::string>> scopes{fields, {}};
    std::set<std::string> seen;
    for (std::size_t i = 0; i < m.params.size(); ++i) {
      if (!seen.insert(m.params[i].name).second) {
        out.push_back({"CC2", Differ::index(path, "params", i), "duplicate parameter '" + m.params[i].name + "'"});
      }
      scopes.back().push_back(m.params[i].name);
    }
    if (m.body) stmts(path, "body", *m.body, scopes);
  }

  void stmts(const std::string& path, std::string_view field, const std::vector<JtlStmt>& list,
             std::vector<std::vector<std::string>>& scopes) {
    scopes.emplace_back();
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string sp = Differ::index(path, field, i);
      const JtlStmt& s = list[i];
      for (const auto& id : s.usedIdents()) {
        if (!declared(scopes, id)) {
          out.push_back({"CC1", sp, "'" + id + "' is used before it is defined"});
        }
      }
      if (const auto* d = std::get_if<LocalVarDecl>(&s.node)) scopes.back().push_back(d->name);
      if (const auto* b = std::get_if<Block>(&s.node)) stmts(sp, "stmts", b->stmts, scopes);
    }
    scopes.pop_back();
  }

  static bool declared(const std::vector<std::vector<std::string>>& scopes, const std::string& id) {
    for (const auto& scope : scopes) {
      if (std::find(scope.begin(), scope.end(), id) != scope.end()) return true;
    }
    return false;
  }
};

}  // namespace detail

/// CC1: every identifier used in a method body is declared earlier in a live
/// enclosing block, is a parameter, or (for class/unit input) is a field of
/// the enclosing class. CC2: duplicate fields, method signatures or
/// parameters. All violations are reported in document order.
inline std::vector<Violation> checkContextConditions(const JtlNode& node) {
  detail::ConditionChecker c;
  std::visit([&](const auto& n) {
    using T = std::decay_t<decltype(n)>;
    if constexpr (std::is_same_v<T, JtlCompilationUnit>) c.unit(n);
    else if constexpr (std::is_same_v<T, JtlClassDecl>) c.cls("", n);
    else if constexpr (std::is_same_v<T, JtlMethodDecl>) c.method("", n, {});
    else if constexpr (std::is_same_v<T, JtlStatements>) {
      std::vector<std::vector<std::string>> scopes;
      c.stmts("", "stmts", n.stmts, scopes);
    }
  }, node);
  return std::move(c.out);
}

}  // namespace tunit::java
