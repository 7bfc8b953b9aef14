#pragma once

// Minimal template language evaluated against a class-diagram node.
//
//   ${expr}                         interpolation
//   <#if expr> ... <#else> ... </#if>
//   <#list expr as name> ... </#list>
//   ${tc.include("Name", expr)}     sub-template call, routed through the
//                                   context's IncludeInterceptor
//
// Expressions: names, member access `a.b`, calls `a.b(x, y)`, string
// literals, `x??` (defined and not absent), `==`, `!=`, `!` and parentheses.
// Literal text is emitted byte for byte; directives emit nothing.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "tunit/cdmodel.hpp"
#include "tunit/error.hpp"

namespace tunit {

// ---------------------------------------------------------------------------
// Template AST

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct VarRef { std::string name; };
struct PathAccess { ExprPtr base; std::string member; };
struct Call { ExprPtr base; std::string method; std::vector<ExprPtr> args; };
struct Exists { ExprPtr operand; };
struct StringLit { std::string value; };
struct Eq { ExprPtr lhs; ExprPtr rhs; };
struct Not { ExprPtr operand; };

struct Expr {
  std::variant<VarRef, PathAccess, Call, Exists, StringLit, Eq, Not> node;
  SourcePos pos;
};

struct Part;
using Parts = std::vector<Part>;

struct LiteralPart { std::string text; };
struct InterpPart { ExprPtr expr; SourcePos pos; };
struct IfPart { ExprPtr cond; Parts thenParts; std::optional<Parts> elseParts; SourcePos pos; };
struct ListPart { ExprPtr list; std::string loopVar; Parts body; SourcePos pos; };
/// `tc.include("name", arg)`; a missing arg means "the current ast".
struct IncludePart { std::string templateName; ExprPtr arg; SourcePos pos; };

struct Part {
  std::variant<LiteralPart, InterpPart, IfPart, ListPart, IncludePart> node;
};

struct Template {
  std::string name;
  Parts body;
};

using TemplateRegistry = std::map<std::string, Template, std::less<>>;

inline constexpr std::string_view kAstName = "ast";
inline constexpr std::string_view kSymbolTableName = "st";
inline constexpr std::string_view kTemplateControllerName = "tc";

inline bool isReservedName(std::string_view name) {
  return name == kAstName || name == kSymbolTableName || name == kTemplateControllerName;
}

// ---------------------------------------------------------------------------
// Parser

namespace detail {

class TemplateParser {
 public:
  TemplateParser(std::string_view name, std::string_view src) : name_(name), src_(src) {}

  Template run() {
    Template t;
    t.name = std::string(name_);
    t.body = parts(Stop::End);
    return t;
  }

 private:
  enum class Stop { End, If, List };

  SourcePos posAt(std::size_t offset) const {
    SourcePos p{1, 1};
    for (std::size_t i = 0; i < offset && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++p.line;
        p.col = 1;
      } else {
        ++p.col;
      }
    }
    return p;
  }

  [[noreturn]] void fail(ErrorCode code, const std::string& msg, std::size_t offset) const {
    throw Error(code, std::string(name_) + ": " + msg, posAt(offset));
  }

  bool startsWith(std::string_view s) const { return src_.substr(at_, s.size()) == s; }

  // Parses parts until the terminator implied by `stop`. For Stop::If the
  // `<#else>`/`</#if>` tag is left unconsumed for the caller.
  Parts parts(Stop stop) {
    Parts out;
    std::string literal;
    auto flush = [&] {
      if (!literal.empty()) out.push_back(Part{LiteralPart{std::move(literal)}});
      literal.clear();
    };
    while (at_ < src_.size()) {
      if (startsWith("${")) {
        flush();
        out.push_back(interpolation());
      } else if (startsWith("</#")) {
        if ((stop == Stop::If && startsWith("</#if>")) || (stop == Stop::List && startsWith("</#list>"))) {
          flush();
          return out;
        }
        fail(ErrorCode::UnbalancedDirective, "unexpected closing directive", at_);
      } else if (startsWith("<#")) {
        if (startsWith("<#else>")) {
          if (stop != Stop::If) fail(ErrorCode::UnbalancedDirective, "<#else> outside <#if>", at_);
          flush();
          return out;
        }
        flush();
        out.push_back(directive());
      } else {
        literal += src_[at_++];
      }
    }
    flush();
    if (stop == Stop::If) fail(ErrorCode::UnbalancedDirective, "missing </#if>", openAt_);
    if (stop == Stop::List) fail(ErrorCode::UnbalancedDirective, "missing </#list>", openAt_);
    return out;
  }

  Part interpolation() {
    const std::size_t start = at_;
    at_ += 2;
    ExprPtr e = expression();
    skipSpace();
    if (!startsWith("}")) fail(ErrorCode::MalformedExpr, "expected '}'", at_);
    ++at_;
    if (const auto* call = std::get_if<Call>(&e->node); call && isIncludeCall(*call)) {
      return Part{includePart(*call, e->pos)};
    }
    return Part{InterpPart{std::move(e), posAt(start)}};
  }

  static bool isIncludeCall(const Call& c) {
    const auto* base = std::get_if<VarRef>(&c.base->node);
    return base && base->name == kTemplateControllerName && c.method == "include";
  }

  IncludePart includePart(const Call& call, SourcePos pos) {
    if (call.args.empty() || call.args.size() > 2) {
      throw Error(ErrorCode::ArityMismatch, std::string(name_) + ": tc.include takes a template name and an optional node", pos);
    }
    const auto* lit = std::get_if<StringLit>(&call.args[0]->node);
    if (!lit) {
      throw Error(ErrorCode::MalformedExpr, std::string(name_) + ": tc.include requires a string literal template name", pos);
    }
    return IncludePart{lit->value, call.args.size() == 2 ? call.args[1] : nullptr, pos};
  }

  Part directive() {
    const std::size_t start = at_;
    at_ += 2;
    std::string word = identifier();
    if (word == "if") {
      ExprPtr cond = expression();
      closeTag(start);
      const std::size_t savedOpen = openAt_;
      openAt_ = start;
      IfPart node{std::move(cond), parts(Stop::If), std::nullopt, posAt(start)};
      if (startsWith("<#else>")) {
        at_ += 7;
        node.elseParts = parts(Stop::If);
        if (startsWith("<#else>")) fail(ErrorCode::UnbalancedDirective, "duplicate <#else>", at_);
      }
      at_ += std::string_view("</#if>").size();
      openAt_ = savedOpen;
      return Part{std::move(node)};
    }
    if (word == "list") {
      ExprPtr list = expression();
      skipSpace();
      if (identifier() != "as") fail(ErrorCode::MalformedExpr, "expected 'as' in <#list>", at_);
      skipSpace();
      const std::size_t varAt = at_;
      std::string var = identifier();
      if (var.empty()) fail(ErrorCode::MalformedExpr, "expected loop variable name", varAt);
      if (isReservedName(var)) fail(ErrorCode::ReservedNameCollision, "loop variable may not be named '" + var + "'", varAt);
      closeTag(start);
      const std::size_t savedOpen = openAt_;
      openAt_ = start;
      ListPart node{std::move(list), std::move(var), parts(Stop::List), posAt(start)};
      at_ += std::string_view("</#list>").size();
      openAt_ = savedOpen;
      return Part{std::move(node)};
    }
    fail(ErrorCode::MalformedExpr, "unknown directive '<#" + word + "'", start);
  }

  void closeTag(std::size_t start) {
    skipSpace();
    if (!startsWith(">")) fail(ErrorCode::MalformedExpr, "expected '>' to close directive", at_ < src_.size() ? at_ : start);
    ++at_;
  }

  // --- expressions -------------------------------------------------------

  void skipSpace() {
    while (at_ < src_.size() && (src_[at_] == ' ' || src_[at_] == '\t' || src_[at_] == '\n' || src_[at_] == '\r')) ++at_;
  }

  static bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool identPart(char c) { return identStart(c) || std::isdigit(static_cast<unsigned char>(c)); }

  std::string identifier() {
    std::string out;
    if (at_ < src_.size() && identStart(src_[at_])) {
      while (at_ < src_.size() && identPart(src_[at_])) out += src_[at_++];
    }
    return out;
  }

  ExprPtr make(decltype(Expr::node) node, std::size_t offset) {
    return std::make_shared<const Expr>(Expr{std::move(node), posAt(offset)});
  }

  ExprPtr expression() {
    skipSpace();
    const std::size_t start = at_;
    ExprPtr lhs = unary();
    for (;;) {
      skipSpace();
      if (startsWith("==")) {
        at_ += 2;
        lhs = make(Eq{lhs, unary()}, start);
      } else if (startsWith("!=")) {
        at_ += 2;
        lhs = make(Not{make(Eq{lhs, unary()}, start)}, start);
      } else {
        return lhs;
      }
    }
  }

  ExprPtr unary() {
    skipSpace();
    const std::size_t start = at_;
    if (startsWith("!") && !startsWith("!=")) {
      ++at_;
      return make(Not{unary()}, start);
    }
    return postfix();
  }

  ExprPtr postfix() {
    skipSpace();
    const std::size_t start = at_;
    ExprPtr e = primary();
    for (;;) {
      skipSpace();
      if (startsWith("??")) {
        at_ += 2;
        e = make(Exists{e}, start);
        continue;
      }
      if (!startsWith(".")) return e;
      ++at_;
      skipSpace();
      const std::size_t memberAt = at_;
      std::string member = identifier();
      if (member.empty()) fail(ErrorCode::MalformedExpr, "expected member name after '.'", memberAt);
      skipSpace();
      if (startsWith("(")) {
        ++at_;
        std::vector<ExprPtr> args;
        skipSpace();
        if (!startsWith(")")) {
          for (;;) {
            args.push_back(expression());
            skipSpace();
            if (startsWith(",")) {
              ++at_;
              continue;
            }
            break;
          }
        }
        if (!startsWith(")")) fail(ErrorCode::MalformedExpr, "expected ')'", at_);
        ++at_;
        e = make(Call{e, std::move(member), std::move(args)}, start);
      } else {
        e = make(PathAccess{e, std::move(member)}, start);
      }
    }
  }

  ExprPtr primary() {
    skipSpace();
    const std::size_t start = at_;
    if (at_ >= src_.size()) fail(ErrorCode::MalformedExpr, "unexpected end of template in expression", start);
    if (startsWith("(")) {
      ++at_;
      ExprPtr inner = expression();
      skipSpace();
      if (!startsWith(")")) fail(ErrorCode::MalformedExpr, "expected ')'", at_);
      ++at_;
      return inner;
    }
    if (src_[at_] == '"' || src_[at_] == '\'') {
      const char quote = src_[at_++];
      std::string value;
      for (;;) {
        if (at_ >= src_.size()) fail(ErrorCode::MalformedExpr, "unterminated string literal", start);
        char c = src_[at_++];
        if (c == quote) break;
        if (c == '\\' && at_ < src_.size()) {
          c = src_[at_++];
          if (c == 'n') c = '\n';
          else if (c == 't') c = '\t';
        }
        value += c;
      }
      return make(StringLit{std::move(value)}, start);
    }
    std::string name = identifier();
    if (name.empty()) fail(ErrorCode::MalformedExpr, std::string("unexpected character '") + src_[at_] + "'", start);
    return make(VarRef{std::move(name)}, start);
  }

  std::string_view name_;
  std::string_view src_;
  std::size_t at_ = 0;
  std::size_t openAt_ = 0;
};

}  // namespace detail

/// Parses template source. Throws Error(UnbalancedDirective | MalformedExpr |
/// ArityMismatch) positioned at the offending directive.
inline Template parseTemplate(std::string_view name, std::string_view source) {
  return detail::TemplateParser(name, source).run();
}

// ---------------------------------------------------------------------------
// Values and context

struct Absent {
  bool operator==(const Absent&) const = default;
};

using NodeList = std::vector<cd::CdNode>;
using Value = std::variant<std::string, bool, cd::CdNode, NodeList, cd::SymbolEntry, Absent>;

/// Object callable from templates as `name.method(args...)`.
class Helper {
 public:
  virtual ~Helper() = default;
  virtual std::string invoke(std::string_view method, std::span<const Value> args) const = 0;
};

struct RenderContext;

/// Decides the text that replaces each `tc.include` during rendering.
class IncludeInterceptor {
 public:
  virtual ~IncludeInterceptor() = default;
  virtual std::string include(const RenderContext& caller, std::string_view templateName,
                              const Value& arg) const = 0;
};

/// The evaluation context: bound node, variables, helpers, symbol table,
/// template registry, and the interceptor every include goes through.
struct RenderContext {
  cd::CdNode ast;
  std::map<std::string, std::string, std::less<>> variables;
  std::map<std::string, std::shared_ptr<const Helper>, std::less<>> helpers;
  std::shared_ptr<const cd::SymbolTable> symbolTable = std::make_shared<const cd::SymbolTable>();
  std::shared_ptr<const TemplateRegistry> registry = std::make_shared<const TemplateRegistry>();
  std::shared_ptr<const IncludeInterceptor> interceptor;
  std::size_t includeDepth = 0;
};

inline constexpr std::size_t kMaxIncludeDepth = 64;

/// Rejects reserved or colliding names among variables and helpers.
inline void validateContext(const RenderContext& ctx) {
  for (const auto& [name, _] : ctx.variables) {
    if (isReservedName(name)) throw Error(ErrorCode::ReservedNameCollision, "variable may not be named '" + name + "'");
  }
  for (const auto& [name, helper] : ctx.helpers) {
    if (isReservedName(name)) throw Error(ErrorCode::ReservedNameCollision, "helper may not be named '" + name + "'");
    if (ctx.variables.count(name)) throw Error(ErrorCode::NameCollision, "'" + name + "' is both a variable and a helper");
    if (!helper) throw Error(ErrorCode::UnknownName, "helper '" + name + "' is null");
  }
}

inline std::string render(const Template& tmpl, const RenderContext& ctx);

/// Context for a sub-template called from `caller` with `arg` bound as
/// `ast`. Variables, helpers, symbol table, registry and interceptor are
/// inherited unchanged.
inline RenderContext includeContext(const RenderContext& caller, std::string_view templateName, const Value& arg) {
  const auto* node = std::get_if<cd::CdNode>(&arg);
  if (!node) throw Error(ErrorCode::TypeError, "include argument for '" + std::string(templateName) + "' is not a model node");
  if (caller.includeDepth + 1 > kMaxIncludeDepth) {
    throw Error(ErrorCode::IncludeDepthExceeded,
                "include depth exceeds " + std::to_string(kMaxIncludeDepth) + " at '" + std::string(templateName) + "'");
  }
  RenderContext child = caller;
  child.ast = *node;
  child.includeDepth = caller.includeDepth + 1;
  return child;
}

/// Renders the real sub-template from the registry.
class PassthroughInterceptor final : public IncludeInterceptor {
 public:
  std::string include(const RenderContext& caller, std::string_view templateName, const Value& arg) const override {
    auto it = caller.registry->find(templateName);
    if (it == caller.registry->end()) {
      throw Error(ErrorCode::TemplateNotFound, "template '" + std::string(templateName) + "' is not registered");
    }
    return render(it->second, includeContext(caller, templateName, arg));
  }
};

/// Routes an include through the context's interceptor (passthrough if none).
inline std::string includeCall(const RenderContext& ctx, std::string_view templateName, const Value& arg) {
  if (ctx.interceptor) return ctx.interceptor->include(ctx, templateName, arg);
  return PassthroughInterceptor().include(ctx, templateName, arg);
}

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

using Locals = std::vector<std::pair<std::string, Value>>;

inline std::string_view valueKind(const Value& v) {
  switch (v.index()) {
    case 0: return "text";
    case 1: return "boolean";
    case 2: return "node";
    case 3: return "node list";
    case 4: return "symbol";
    default: return "absent";
  }
}

inline Value textOrAbsent(const std::optional<std::string>& s) {
  if (s) return *s;
  return Absent{};
}

inline NodeList typeNodes(const std::vector<cd::CdType>& types, const std::string& ownerRef) {
  NodeList out;
  for (const auto& t : types) out.push_back(cd::CdNode{&t, cd::QualifiedRef(ownerRef)});
  return out;
}

/// Property table for model nodes. `isCall` distinguishes `x.f()` from `x.f`.
inline Value nodeMember(const cd::CdNode& node, const std::string& member, bool isCall) {
  const std::string owner = node.ref.str();
  auto ownerOf = [&]() {
    const auto dot = owner.find('.');
    return dot == std::string::npos ? owner : owner.substr(0, dot);
  };
  auto unknown = [&]() -> Value {
    throw Error(ErrorCode::UnknownProperty, std::string(cd::to_string(node.kind())) + " has no " +
                                                (isCall ? "method '" + member + "()'" : "property '" + member + "'"));
  };
  if (const auto* a = node.as<cd::CdAttribute>()) {
    if (!isCall && member == "name") return a->name;
    if (!isCall && member == "type") return cd::CdNode{&a->type, node.ref};
    if (!isCall && member == "value") return textOrAbsent(a->value);
    if (isCall && member == "printType") return a->type.print();
    if (isCall && member == "printValue") return textOrAbsent(a->value);
    return unknown();
  }
  if (const auto* m = node.as<cd::CdMethod>()) {
    if (!isCall && member == "name") return m->name;
    if (isCall && member == "printName") return m->name;
    if (!isCall && member == "returnType") return cd::CdNode{&m->returnType, node.ref};
    if (isCall && member == "printReturnType") return m->returnType.print();
    if (!isCall && member == "parameters") {
      NodeList out;
      for (const auto& p : m->parameters) out.push_back(cd::CdNode{&p, cd::qualifiedName(p, *m, ownerOf())});
      return out;
    }
    if (!isCall && member == "exceptions") return typeNodes(m->exceptions, owner);
    return unknown();
  }
  if (const auto* p = node.as<cd::CdParameter>()) {
    if (!isCall && member == "name") return p->name;
    if (!isCall && member == "type") return cd::CdNode{&p->type, node.ref};
    if (isCall && member == "printType") return p->type.print();
    return unknown();
  }
  auto members = [&](const auto& decl) -> std::optional<Value> {
    if (!isCall && member == "attributes") {
      NodeList out;
      for (const auto& a : decl.attributes) out.push_back(cd::CdNode{&a, cd::qualifiedName(a, decl.name)});
      return Value{out};
    }
    if (!isCall && member == "methods") {
      NodeList out;
      for (const auto& m : decl.methods) out.push_back(cd::CdNode{&m, cd::qualifiedName(m, decl.name)});
      return Value{out};
    }
    return std::nullopt;
  };
  if (const auto* c = node.as<cd::CdClass>()) {
    if (!isCall && member == "name") return c->name;
    if (!isCall && member == "superclass") return textOrAbsent(c->superclass);
    if (auto v = members(*c)) return *v;
    return unknown();
  }
  if (const auto* i = node.as<cd::CdInterface>()) {
    if (!isCall && member == "name") return i->name;
    if (auto v = members(*i)) return *v;
    return unknown();
  }
  if (const auto* e = node.as<cd::CdEnum>()) {
    if (!isCall && member == "name") return e->name;
    return unknown();
  }
  if (const auto* t = node.as<cd::CdType>()) {
    if (!isCall && member == "name") return t->print();
    if (!isCall && member == "baseName") return t->baseName;
    return unknown();
  }
  return unknown();
}

inline Value symbolMember(const cd::SymbolEntry& entry, const std::string& member, bool isCall) {
  if (!isCall && member == "name") return entry.name;
  if (!isCall && member == "kind") return std::string(cd::to_string(entry.kind));
  throw Error(ErrorCode::UnknownProperty, "symbol entry has no " + std::string(isCall ? "method" : "property") + " '" + member + "'");
}

class Evaluator {
 public:
  Evaluator(const RenderContext& ctx, const Locals& locals) : ctx_(ctx), locals_(locals) {}

  Value eval(const Expr& e) const {
    return std::visit([&](const auto& n) { return evalNode(n, e); }, e.node);
  }

 private:
  Value evalNode(const VarRef& v, const Expr&) const {
    if (v.name == kAstName) return ctx_.ast;
    if (v.name == kSymbolTableName || v.name == kTemplateControllerName) {
      throw Error(ErrorCode::TypeError, "'" + v.name + "' is only usable through its methods");
    }
    for (auto it = locals_.rbegin(); it != locals_.rend(); ++it) {
      if (it->first == v.name) return it->second;
    }
    if (auto it = ctx_.variables.find(v.name); it != ctx_.variables.end()) return it->second;
    if (ctx_.helpers.count(v.name)) {
      throw Error(ErrorCode::TypeError, "helper '" + v.name + "' is only usable through its methods");
    }
    throw Error(ErrorCode::UnknownName, "unknown name '" + v.name + "'");
  }

  Value evalNode(const PathAccess& p, const Expr&) const {
    return member(eval(*p.base), p.member, false);
  }

  Value evalNode(const Call& c, const Expr&) const {
    if (const auto* base = std::get_if<VarRef>(&c.base->node)) {
      if (base->name == kSymbolTableName) {
        if (c.method != "resolve") throw Error(ErrorCode::UnknownProperty, "st has no method '" + c.method + "'");
        if (c.args.size() != 1) throw Error(ErrorCode::ArityMismatch, "st.resolve takes 1 argument");
        const Value name = eval(*c.args[0]);
        const auto* text = std::get_if<std::string>(&name);
        if (!text) throw Error(ErrorCode::TypeError, "st.resolve expects text, got " + std::string(valueKind(name)));
        if (const auto* entry = ctx_.symbolTable->resolve(*text)) return *entry;
        return Absent{};
      }
      if (base->name == kTemplateControllerName) {
        if (c.method == "include") {
          throw Error(ErrorCode::MalformedExpr, "tc.include must form a whole interpolation");
        }
        throw Error(ErrorCode::UnknownProperty, "tc has no method '" + c.method + "'");
      }
      const bool shadowed = base->name == kAstName ||
                            std::any_of(locals_.begin(), locals_.end(), [&](const auto& l) { return l.first == base->name; }) ||
                            ctx_.variables.count(base->name);
      if (!shadowed) {
        if (auto it = ctx_.helpers.find(base->name); it != ctx_.helpers.end()) {
          std::vector<Value> args;
          args.reserve(c.args.size());
          for (const auto& a : c.args) args.push_back(eval(*a));
          return it->second->invoke(c.method, args);
        }
      }
    }
    const Value base = eval(*c.base);
    if (!c.args.empty() && !std::holds_alternative<cd::SymbolEntry>(base)) {
      throw Error(ErrorCode::ArityMismatch, "'" + c.method + "()' takes no arguments");
    }
    return member(base, c.method, true);
  }

  Value evalNode(const Exists& x, const Expr&) const {
    try {
      return !std::holds_alternative<Absent>(eval(*x.operand));
    } catch (const Error& err) {
      // An undefined bare name is "not present"; anything else is a real error.
      if (err.code() == ErrorCode::UnknownName && std::holds_alternative<VarRef>(x.operand->node)) return false;
      throw;
    }
  }

  Value evalNode(const StringLit& s, const Expr&) const { return s.value; }

  Value evalNode(const Eq& e, const Expr&) const { return eval(*e.lhs) == eval(*e.rhs); }

  Value evalNode(const Not& n, const Expr&) const {
    const Value v = eval(*n.operand);
    const auto* b = std::get_if<bool>(&v);
    if (!b) throw Error(ErrorCode::TypeError, "'!' expects a boolean, got " + std::string(valueKind(v)));
    return !*b;
  }

  static Value member(const Value& base, const std::string& name, bool isCall) {
    if (const auto* node = std::get_if<cd::CdNode>(&base)) return nodeMember(*node, name, isCall);
    if (const auto* entry = std::get_if<cd::SymbolEntry>(&base)) return symbolMember(*entry, name, isCall);
    if (std::holds_alternative<Absent>(base)) {
      throw Error(ErrorCode::TypeError, "cannot access '" + name + "' on an absent value");
    }
    throw Error(ErrorCode::UnknownProperty, std::string(valueKind(base)) + " has no member '" + name + "'");
  }

  const RenderContext& ctx_;
  const Locals& locals_;
};

/// Text of an interpolated value. Only text and type nodes are printable.
inline std::string printValue(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* n = std::get_if<cd::CdNode>(&v)) {
    if (const auto* t = n->as<cd::CdType>()) return t->print();
  }
  if (std::holds_alternative<Absent>(v)) {
    throw Error(ErrorCode::TypeError, "interpolated value is absent; guard it with an existence test");
  }
  throw Error(ErrorCode::TypeError, "cannot interpolate a " + std::string(valueKind(v)));
}

class Renderer {
 public:
  Renderer(const Template& tmpl, const RenderContext& ctx) : tmpl_(tmpl), ctx_(ctx) {}

  std::string run() {
    std::string out;
    emit(tmpl_.body, out);
    return out;
  }

 private:
  template <typename Fn>
  auto located(SourcePos pos, Fn&& fn) -> decltype(fn()) {
    try {
      return fn();
    } catch (const Error& err) {
      throw Error(err.code(), tmpl_.name + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + err.detail());
    }
  }

  Value eval(const Expr& e) { return Evaluator(ctx_, locals_).eval(e); }

  void emit(const Parts& parts, std::string& out) {
    for (const auto& part : parts) {
      std::visit([&](const auto& p) { emitPart(p, out); }, part.node);
    }
  }

  void emitPart(const LiteralPart& p, std::string& out) { out += p.text; }

  void emitPart(const InterpPart& p, std::string& out) {
    out += located(p.pos, [&] { return printValue(eval(*p.expr)); });
  }

  void emitPart(const IfPart& p, std::string& out) {
    const bool cond = located(p.pos, [&] {
      const Value v = eval(*p.cond);
      const auto* b = std::get_if<bool>(&v);
      if (!b) throw Error(ErrorCode::TypeError, "<#if> condition is a " + std::string(valueKind(v)) + ", not a boolean");
      return *b;
    });
    if (cond) {
      emit(p.thenParts, out);
    } else if (p.elseParts) {
      emit(*p.elseParts, out);
    }
  }

  void emitPart(const ListPart& p, std::string& out) {
    const NodeList items = located(p.pos, [&] {
      const Value v = eval(*p.list);
      const auto* list = std::get_if<NodeList>(&v);
      if (!list) throw Error(ErrorCode::TypeError, "<#list> expects a node list, got " + std::string(valueKind(v)));
      return *list;
    });
    for (const auto& item : items) {
      locals_.emplace_back(p.loopVar, item);
      emit(p.body, out);
      locals_.pop_back();
    }
  }

  void emitPart(const IncludePart& p, std::string& out) {
    out += located(p.pos, [&] {
      const Value arg = p.arg ? eval(*p.arg) : Value{ctx_.ast};
      return includeCall(ctx_, p.templateName, arg);
    });
  }

  const Template& tmpl_;
  const RenderContext& ctx_;
  Locals locals_;
};

}  // namespace detail

/// Evaluates one expression against `ctx` (no loop variables in scope).
inline Value evalExpr(const Expr& expr, const RenderContext& ctx) {
  const detail::Locals none;
  return detail::Evaluator(ctx, none).eval(expr);
}

/// Renders `tmpl`. Errors carry the template name and the position of the
/// failing part; errors from nested includes are prefixed at each level.
inline std::string render(const Template& tmpl, const RenderContext& ctx) {
  return detail::Renderer(tmpl, ctx).run();
}

}  // namespace tunit
