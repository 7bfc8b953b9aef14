#pragma once

// Class-diagram input language: lexer, recursive-descent parser, printer,
// node traversal, qualified-name addressing and symbol tables.
//
// Grammar:
//   model     := 'classdiagram' Name '{' (classDecl | ifaceDecl | enumDecl)* '}'
//   classDecl := 'class' Name ('extends' Name)? '{' member* '}'
//   ifaceDecl := 'interface' Name ('extends' Name (',' Name)*)? '{' member* '}'
//   enumDecl  := 'enum' Name '{' (Name (',' Name)*)? ';'? '}'
//   member    := visibility? Type Name ('=' Literal)? ';'
//              | visibility? Type Name '(' params? ')' ('throws' Type (',' Type)*)? ';'
//   Type      := Name ('.' Name)* ('[' ']')*
//   Literal   := '-'? integer | '-'? decimal | string | 'true' | 'false' | 'null'

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "tunit/error.hpp"

namespace tunit::cd {

enum class Visibility { Public, Private, Protected };

inline std::string_view to_string(Visibility v) {
  switch (v) {
    case Visibility::Public: return "public";
    case Visibility::Private: return "private";
    case Visibility::Protected: return "protected";
  }
  return "";
}

struct CdType {
  std::string baseName;
  int arrayDims = 0;

  std::string print() const {
    std::string out = baseName;
    for (int i = 0; i < arrayDims; ++i) out += "[]";
    return out;
  }
  bool operator==(const CdType&) const = default;
};

struct CdAttribute {
  std::optional<Visibility> visibility;
  CdType type;
  std::string name;
  std::optional<std::string> value;  // literal source text, e.g. "5" or "\"a\""
  SourcePos pos;
  bool operator==(const CdAttribute&) const = default;
};

struct CdParameter {
  CdType type;
  std::string name;
  SourcePos pos;
  bool operator==(const CdParameter&) const = default;
};

struct CdMethod {
  std::optional<Visibility> visibility;
  CdType returnType;
  std::string name;
  std::vector<CdParameter> parameters;
  std::vector<CdType> exceptions;  // always arrayDims == 0
  SourcePos pos;
  bool operator==(const CdMethod&) const = default;
};

struct CdClass {
  std::string name;
  std::optional<std::string> superclass;
  std::vector<CdAttribute> attributes;
  std::vector<CdMethod> methods;
  SourcePos pos;
  bool operator==(const CdClass&) const = default;
};

struct CdInterface {
  std::string name;
  std::vector<std::string> extends;
  std::vector<CdAttribute> attributes;
  std::vector<CdMethod> methods;
  SourcePos pos;
  bool operator==(const CdInterface&) const = default;
};

struct CdEnum {
  std::string name;
  std::vector<std::string> constants;
  SourcePos pos;
  bool operator==(const CdEnum&) const = default;
};

using CdTypeDecl = std::variant<CdClass, CdInterface, CdEnum>;

inline const std::string& declName(const CdTypeDecl& decl) {
  return std::visit([](const auto& d) -> const std::string& { return d.name; }, decl);
}

inline SourcePos declPos(const CdTypeDecl& decl) {
  return std::visit([](const auto& d) { return d.pos; }, decl);
}

/// A parsed class diagram. Top-level declarations are kept in one list so
/// that document order across classes, interfaces and enums survives.
struct CdModel {
  std::string name;
  std::vector<CdTypeDecl> types;
  std::string origin;  // file path or "<input>"; not part of structure

  template <typename T>
  std::vector<const T*> declsOf() const {
    std::vector<const T*> out;
    for (const auto& decl : types) {
      if (const auto* d = std::get_if<T>(&decl)) out.push_back(d);
    }
    return out;
  }
  std::vector<const CdClass*> classes() const { return declsOf<CdClass>(); }
  std::vector<const CdInterface*> interfaces() const { return declsOf<CdInterface>(); }
  std::vector<const CdEnum*> enums() const { return declsOf<CdEnum>(); }

  friend bool operator==(const CdModel& a, const CdModel& b) {
    return a.name == b.name && a.types == b.types;
  }
};

// ---------------------------------------------------------------------------
// Lexer

namespace detail {

enum class TokKind { Ident, Int, Decimal, String, Punct, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  SourcePos pos;
};

inline std::string_view describe(const Token& t) {
  return t.kind == TokKind::End ? std::string_view("end of input") : std::string_view(t.text);
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skipTrivia();
      Token t;
      t.pos = {line_, col_};
      if (at_ >= src_.size()) {
        out.push_back(std::move(t));
        return out;
      }
      const char c = src_[at_];
      if (isIdentStart(c)) {
        t.kind = TokKind::Ident;
        while (at_ < src_.size() && isIdentPart(src_[at_])) t.text += advance();
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = TokKind::Int;
        while (at_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[at_]))) t.text += advance();
        if (at_ + 1 < src_.size() && src_[at_] == '.' &&
            std::isdigit(static_cast<unsigned char>(src_[at_ + 1]))) {
          t.kind = TokKind::Decimal;
          t.text += advance();
          while (at_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[at_]))) t.text += advance();
        }
      } else if (c == '"') {
        t.kind = TokKind::String;
        t.text += advance();
        for (;;) {
          if (at_ >= src_.size() || src_[at_] == '\n') {
            throw Error(ErrorCode::SyntaxError, "unterminated string literal", t.pos);
          }
          const char d = advance();
          t.text += d;
          if (d == '\\' && at_ < src_.size()) {
            t.text += advance();
          } else if (d == '"') {
            break;
          }
        }
      } else if (std::string_view("{}();,=.[]-").find(c) != std::string_view::npos) {
        t.kind = TokKind::Punct;
        t.text += advance();
      } else {
        throw Error(ErrorCode::SyntaxError,
                    std::string("unexpected character '") + c + "'", t.pos);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  static bool isIdentStart(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
  }
  static bool isIdentPart(char c) {
    return isIdentStart(c) || std::isdigit(static_cast<unsigned char>(c));
  }

  char advance() {
    const char c = src_[at_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skipTrivia() {
    while (at_ < src_.size()) {
      const char c = src_[at_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f') {
        advance();
      } else if (src_.substr(at_, 2) == "//") {
        while (at_ < src_.size() && src_[at_] != '\n') advance();
      } else if (src_.substr(at_, 2) == "/*") {
        const SourcePos start{line_, col_};
        advance();
        advance();
        for (;;) {
          if (at_ >= src_.size()) throw Error(ErrorCode::SyntaxError, "unterminated block comment", start);
          if (src_.substr(at_, 2) == "*/") {
            advance();
            advance();
            break;
          }
          advance();
        }
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t at_ = 0;
  int line_ = 1;
  int col_ = 1;
};

inline bool isReservedWord(std::string_view s) {
  static const std::set<std::string_view> words = {
      "classdiagram", "class", "interface", "enum", "extends", "throws",
      "public", "private", "protected", "true", "false", "null"};
  return words.count(s) != 0;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  CdModel parseModel() {
    CdModel model;
    keyword("classdiagram");
    model.name = name();
    punct("{");
    std::set<std::string> seen;
    while (!isPunct("}")) {
      if (peek().kind == TokKind::End) fail({"class", "interface", "enum", "}"});
      CdTypeDecl decl = typeDecl();
      if (!seen.insert(declName(decl)).second) {
        throw Error(ErrorCode::DuplicateName, "duplicate type '" + declName(decl) + "'", declPos(decl));
      }
      model.types.push_back(std::move(decl));
    }
    punct("}");
    if (peek().kind != TokKind::End) fail({"end of input"});
    return model;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(std::initializer_list<std::string_view> expected) const {
    std::string msg = "expected ";
    if (expected.size() > 1) msg += "one of ";
    bool first = true;
    for (auto e : expected) {
      if (!first) msg += ", ";
      msg += "'";
      msg += e;
      msg += "'";
      first = false;
    }
    msg += ", found '";
    msg += describe(peek());
    msg += "'";
    throw Error(ErrorCode::SyntaxError, msg, peek().pos);
  }

  bool isPunct(std::string_view p) const {
    return peek().kind == TokKind::Punct && peek().text == p;
  }
  bool isKeyword(std::string_view k) const {
    return peek().kind == TokKind::Ident && peek().text == k;
  }
  void punct(std::string_view p) {
    if (!isPunct(p)) fail({p});
    next();
  }
  void keyword(std::string_view k) {
    if (!isKeyword(k)) fail({k});
    next();
  }
  std::string name() {
    if (peek().kind != TokKind::Ident || isReservedWord(peek().text)) fail({"identifier"});
    return next().text;
  }

  CdTypeDecl typeDecl() {
    const SourcePos pos = peek().pos;
    if (isKeyword("class")) {
      next();
      CdClass cls;
      cls.pos = pos;
      cls.name = name();
      if (isKeyword("extends")) {
        next();
        cls.superclass = name();
      }
      members(cls.name, cls.attributes, cls.methods);
      return cls;
    }
    if (isKeyword("interface")) {
      next();
      CdInterface iface;
      iface.pos = pos;
      iface.name = name();
      if (isKeyword("extends")) {
        next();
        iface.extends.push_back(name());
        while (isPunct(",")) {
          next();
          iface.extends.push_back(name());
        }
      }
      members(iface.name, iface.attributes, iface.methods);
      return iface;
    }
    if (isKeyword("enum")) {
      next();
      CdEnum en;
      en.pos = pos;
      en.name = name();
      punct("{");
      if (peek().kind == TokKind::Ident && !isReservedWord(peek().text)) {
        en.constants.push_back(name());
        while (isPunct(",")) {
          next();
          en.constants.push_back(name());
        }
      }
      if (isPunct(";")) next();
      punct("}");
      std::set<std::string> seen;
      for (const auto& c : en.constants) {
        if (!seen.insert(c).second) {
          throw Error(ErrorCode::DuplicateName, "duplicate enum constant '" + en.name + "." + c + "'", pos);
        }
      }
      return en;
    }
    fail({"class", "interface", "enum", "}"});
  }

  CdType type() {
    CdType t;
    t.baseName = name();
    while (isPunct(".")) {
      next();
      t.baseName += ".";
      t.baseName += name();
    }
    while (isPunct("[")) {
      next();
      punct("]");
      ++t.arrayDims;
    }
    return t;
  }

  std::string literal() {
    const Token& t = peek();
    if (isPunct("-")) {
      next();
      if (peek().kind != TokKind::Int && peek().kind != TokKind::Decimal) fail({"number"});
      return "-" + next().text;
    }
    if (t.kind == TokKind::Int || t.kind == TokKind::Decimal || t.kind == TokKind::String) {
      return next().text;
    }
    if (isKeyword("true") || isKeyword("false") || isKeyword("null")) return next().text;
    fail({"literal"});
  }

  void members(const std::string& owner, std::vector<CdAttribute>& attributes,
               std::vector<CdMethod>& methods) {
    punct("{");
    std::set<std::string> attrNames;
    std::set<std::string> methodSigs;
    while (!isPunct("}")) {
      if (peek().kind == TokKind::End) fail({"member", "}"});
      const SourcePos pos = peek().pos;
      std::optional<Visibility> vis;
      if (isKeyword("public")) vis = Visibility::Public;
      else if (isKeyword("private")) vis = Visibility::Private;
      else if (isKeyword("protected")) vis = Visibility::Protected;
      if (vis) next();
      CdType t = type();
      std::string memberName = name();
      if (isPunct("(")) {
        next();
        CdMethod m;
        m.visibility = vis;
        m.returnType = std::move(t);
        m.name = std::move(memberName);
        m.pos = pos;
        std::set<std::string> paramNames;
        if (!isPunct(")")) {
          for (;;) {
            CdParameter p;
            p.pos = peek().pos;
            p.type = type();
            p.name = name();
            if (!paramNames.insert(p.name).second) {
              throw Error(ErrorCode::DuplicateName,
                          "duplicate parameter '" + p.name + "' in " + owner + "." + m.name, p.pos);
            }
            m.parameters.push_back(std::move(p));
            if (!isPunct(",")) break;
            next();
          }
        }
        punct(")");
        if (isKeyword("throws")) {
          next();
          for (;;) {
            CdType ex;
            ex.baseName = name();
            while (isPunct(".")) {
              next();
              ex.baseName += "." + name();
            }
            m.exceptions.push_back(std::move(ex));
            if (!isPunct(",")) break;
            next();
          }
        }
        punct(";");
        std::string sig = m.name + "(";
        for (std::size_t i = 0; i < m.parameters.size(); ++i) {
          if (i) sig += ",";
          sig += m.parameters[i].type.print();
        }
        sig += ")";
        if (!methodSigs.insert(sig).second) {
          throw Error(ErrorCode::DuplicateName, "duplicate method '" + owner + "." + sig + "'", pos);
        }
        methods.push_back(std::move(m));
      } else {
        CdAttribute a;
        a.visibility = vis;
        a.type = std::move(t);
        a.name = std::move(memberName);
        a.pos = pos;
        if (isPunct("=")) {
          next();
          a.value = literal();
        }
        if (!isPunct(";")) fail({"=", "(", ";"});
        next();
        if (!attrNames.insert(a.name).second) {
          throw Error(ErrorCode::DuplicateName, "duplicate attribute '" + owner + "." + a.name + "'", pos);
        }
        attributes.push_back(std::move(a));
      }
    }
    punct("}");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses one class diagram. Throws Error(SyntaxError) with the position of
/// the first offending token, or Error(DuplicateName).
inline CdModel parseModel(std::string_view source, std::string origin = "<input>") {
  CdModel model = detail::Parser(source).parseModel();
  model.origin = std::move(origin);
  return model;
}

// ---------------------------------------------------------------------------
// Printer

namespace detail {

inline void printMembers(std::string& out, const std::vector<CdAttribute>& attributes,
                         const std::vector<CdMethod>& methods) {
  for (const auto& a : attributes) {
    out += "    ";
    if (a.visibility) {
      out += to_string(*a.visibility);
      out += ' ';
    }
    out += a.type.print() + " " + a.name;
    if (a.value) out += " = " + *a.value;
    out += ";\n";
  }
  for (const auto& m : methods) {
    out += "    ";
    if (m.visibility) {
      out += to_string(*m.visibility);
      out += ' ';
    }
    out += m.returnType.print() + " " + m.name + "(";
    for (std::size_t i = 0; i < m.parameters.size(); ++i) {
      if (i) out += ", ";
      out += m.parameters[i].type.print() + " " + m.parameters[i].name;
    }
    out += ")";
    for (std::size_t i = 0; i < m.exceptions.size(); ++i) {
      out += i ? ", " : " throws ";
      out += m.exceptions[i].print();
    }
    out += ";\n";
  }
}

}  // namespace detail

inline std::string printModel(const CdModel& model) {
  std::string out = "classdiagram " + model.name + " {\n";
  for (const auto& decl : model.types) {
    if (const auto* c = std::get_if<CdClass>(&decl)) {
      out += "  class " + c->name;
      if (c->superclass) out += " extends " + *c->superclass;
      out += " {\n";
      detail::printMembers(out, c->attributes, c->methods);
      out += "  }\n";
    } else if (const auto* i = std::get_if<CdInterface>(&decl)) {
      out += "  interface " + i->name;
      for (std::size_t k = 0; k < i->extends.size(); ++k) {
        out += k ? ", " : " extends ";
        out += i->extends[k];
      }
      out += " {\n";
      detail::printMembers(out, i->attributes, i->methods);
      out += "  }\n";
    } else if (const auto* e = std::get_if<CdEnum>(&decl)) {
      out += "  enum " + e->name + " {";
      for (std::size_t k = 0; k < e->constants.size(); ++k) {
        out += k ? ", " : " ";
        out += e->constants[k];
      }
      out += " }\n";
    }
  }
  out += "}\n";
  return out;
}

// ---------------------------------------------------------------------------
// Nodes and qualified names

/// Node kinds addressable from manifests, spelled as in the test definitions.
enum class NodeKind { CDClass, CDInterface, CDEnum, CDAttribute, CDMethod, CDParameter, CDType };

inline std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::CDClass: return "CDClass";
    case NodeKind::CDInterface: return "CDInterface";
    case NodeKind::CDEnum: return "CDEnum";
    case NodeKind::CDAttribute: return "CDAttribute";
    case NodeKind::CDMethod: return "CDMethod";
    case NodeKind::CDParameter: return "CDParameter";
    case NodeKind::CDType: return "CDType";
  }
  return "";
}

/// Parses a manifest node-type name. CDType is internal and not selectable.
inline std::optional<NodeKind> parseNodeKind(std::string_view s) {
  for (auto k : {NodeKind::CDClass, NodeKind::CDInterface, NodeKind::CDEnum,
                 NodeKind::CDAttribute, NodeKind::CDMethod, NodeKind::CDParameter}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

/// Textual address of a model element: `A`, `A.attr`, `A.m(T1,T2)` or, for
/// parameters, `A.m(T1,T2).param`.
class QualifiedRef {
 public:
  QualifiedRef() = default;
  explicit QualifiedRef(std::string text) : text_(std::move(text)) {}

  const std::string& str() const noexcept { return text_; }
  bool empty() const noexcept { return text_.empty(); }

  auto operator<=>(const QualifiedRef&) const = default;

 private:
  std::string text_;
};

/// Non-owning handle to a node of a parsed model together with its qualified
/// reference. The model must outlive the handle.
struct CdNode {
  std::variant<const CdClass*, const CdInterface*, const CdEnum*, const CdAttribute*,
               const CdMethod*, const CdParameter*, const CdType*>
      ptr;
  QualifiedRef ref;

  NodeKind kind() const { return static_cast<NodeKind>(ptr.index()); }

  template <typename T>
  const T* as() const {
    const auto* p = std::get_if<const T*>(&ptr);
    return p ? *p : nullptr;
  }

  friend bool operator==(const CdNode& a, const CdNode& b) { return a.ptr == b.ptr; }
};

inline std::string methodSignature(const CdMethod& m) {
  std::string sig = m.name + "(";
  for (std::size_t i = 0; i < m.parameters.size(); ++i) {
    if (i) sig += ",";
    sig += m.parameters[i].type.print();
  }
  return sig + ")";
}

/// Qualified name of a member given the name of its owning type.
inline QualifiedRef qualifiedName(const CdAttribute& a, std::string_view owner) {
  return QualifiedRef(std::string(owner) + "." + a.name);
}
inline QualifiedRef qualifiedName(const CdMethod& m, std::string_view owner) {
  return QualifiedRef(std::string(owner) + "." + methodSignature(m));
}
inline QualifiedRef qualifiedName(const CdParameter& p, const CdMethod& m, std::string_view owner) {
  return QualifiedRef(qualifiedName(m, owner).str() + "." + p.name);
}
inline QualifiedRef qualifiedName(const CdTypeDecl& decl) { return QualifiedRef(declName(decl)); }

namespace detail {

template <typename Fn>
void forEachNode(const CdModel& model, Fn&& fn) {
  auto visitMembers = [&](const std::string& owner, const std::vector<CdAttribute>& attributes,
                          const std::vector<CdMethod>& methods) {
    for (const auto& a : attributes) fn(CdNode{&a, qualifiedName(a, owner)});
    for (const auto& m : methods) {
      fn(CdNode{&m, qualifiedName(m, owner)});
      for (const auto& p : m.parameters) fn(CdNode{&p, qualifiedName(p, m, owner)});
    }
  };
  for (const auto& decl : model.types) {
    if (const auto* c = std::get_if<CdClass>(&decl)) {
      fn(CdNode{c, QualifiedRef(c->name)});
      visitMembers(c->name, c->attributes, c->methods);
    } else if (const auto* i = std::get_if<CdInterface>(&decl)) {
      fn(CdNode{i, QualifiedRef(i->name)});
      visitMembers(i->name, i->attributes, i->methods);
    } else if (const auto* e = std::get_if<CdEnum>(&decl)) {
      fn(CdNode{e, QualifiedRef(e->name)});
    }
  }
}

}  // namespace detail

/// All nodes of `kind` in document order. The position in the result is the
/// node's traversal index.
inline std::vector<CdNode> collectNodes(const CdModel& model, NodeKind kind) {
  std::vector<CdNode> out;
  detail::forEachNode(model, [&](CdNode n) {
    if (n.kind() == kind) out.push_back(std::move(n));
  });
  return out;
}

/// Every node whose qualified name equals `ref` exactly.
inline std::vector<CdNode> findByRef(const CdModel& model, const QualifiedRef& ref) {
  std::vector<CdNode> out;
  detail::forEachNode(model, [&](CdNode n) {
    if (n.ref == ref) out.push_back(std::move(n));
  });
  return out;
}

// ---------------------------------------------------------------------------
// Symbol table

enum class SymbolKind { Class, Interface, Enum };

inline std::string_view to_string(SymbolKind k) {
  switch (k) {
    case SymbolKind::Class: return "class";
    case SymbolKind::Interface: return "interface";
    case SymbolKind::Enum: return "enum";
  }
  return "";
}

struct MemberSummary {
  std::string name;
  std::string kind;  // "attribute", "method" or "constant"
  std::string printedType;
  bool operator==(const MemberSummary&) const = default;
};

struct SymbolEntry {
  SymbolKind kind = SymbolKind::Class;
  std::string name;
  std::vector<MemberSummary> members;
  std::string location;  // origin:line:col of the declaration
  bool operator==(const SymbolEntry& o) const {
    return kind == o.kind && name == o.name && members == o.members;
  }
};

class SymbolTable {
 public:
  const SymbolEntry* resolve(std::string_view qualifiedName) const {
    auto it = entries_.find(qualifiedName);
    return it == entries_.end() ? nullptr : &it->second;
  }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::map<std::string, SymbolEntry, std::less<>>& entries() const noexcept { return entries_; }

  /// Adds every top-level type of `model`; throws DuplicateSymbol on clash.
  void add(const CdModel& model) {
    for (const auto& decl : model.types) {
      SymbolEntry entry;
      entry.name = declName(decl);
      const SourcePos pos = declPos(decl);
      entry.location = model.origin + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.col);
      auto summarize = [&](const std::vector<CdAttribute>& attributes, const std::vector<CdMethod>& methods) {
        for (const auto& a : attributes) entry.members.push_back({a.name, "attribute", a.type.print()});
        for (const auto& m : methods) entry.members.push_back({methodSignature(m), "method", m.returnType.print()});
      };
      if (const auto* c = std::get_if<CdClass>(&decl)) {
        entry.kind = SymbolKind::Class;
        summarize(c->attributes, c->methods);
      } else if (const auto* i = std::get_if<CdInterface>(&decl)) {
        entry.kind = SymbolKind::Interface;
        summarize(i->attributes, i->methods);
      } else if (const auto* e = std::get_if<CdEnum>(&decl)) {
        entry.kind = SymbolKind::Enum;
        for (const auto& k : e->constants) entry.members.push_back({k, "constant", e->name});
      }
      if (auto it = entries_.find(entry.name); it != entries_.end()) {
        throw Error(ErrorCode::DuplicateSymbol, "symbol '" + entry.name + "' declared at " +
                                                    it->second.location + " and " + entry.location);
      }
      entries_.emplace(entry.name, std::move(entry));
    }
  }

  bool operator==(const SymbolTable&) const = default;

 private:
  std::map<std::string, SymbolEntry, std::less<>> entries_;
};

template <typename Models>
SymbolTable buildSymbolTable(const Models& models) {
  SymbolTable table;
  for (const CdModel& m : models) table.add(m);
  return table;
}

inline const SymbolEntry* resolve(const SymbolTable& table, std::string_view name) {
  return table.resolve(name);
}

}  // namespace tunit::cd
