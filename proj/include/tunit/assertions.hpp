#pragma once

// Assertion families over template output: normalized string comparison,
// AST equality, and targeted queries on the parsed target AST. Every
// assertion returns a Verdict; nothing here throws on a failed check.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tunit/error.hpp"
#include "tunit/java.hpp"

namespace tunit {

enum class AssertionKind {
  StringEquals,
  AstEquals,
  HasClass,
  HasAttribute,
  HasMethod,
  MethodSignature,
  ContextConditionsClean,
  OutputCount,
};

inline std::string_view to_string(AssertionKind k) {
  switch (k) {
    case AssertionKind::StringEquals: return "string_equals";
    case AssertionKind::AstEquals: return "ast_equals";
    case AssertionKind::HasClass: return "has_class";
    case AssertionKind::HasAttribute: return "has_attribute";
    case AssertionKind::HasMethod: return "has_method";
    case AssertionKind::MethodSignature: return "method_signature";
    case AssertionKind::ContextConditionsClean: return "context_conditions_clean";
    case AssertionKind::OutputCount: return "output_count";
  }
  return "";
}

struct Verdict {
  bool passed = false;
  AssertionKind kind = AssertionKind::StringEquals;
  std::string explanation;
  /// Set when the verdict failed because a text did not parse.
  bool syntactic = false;

  static Verdict pass(AssertionKind k) { return {true, k, {}, false}; }
  static Verdict fail(AssertionKind k, std::string why, bool syntactic = false) {
    return {false, k, std::move(why), syntactic};
  }
  explicit operator bool() const noexcept { return passed; }
};

// ---------------------------------------------------------------------------
// String comparison

struct NormalizationPolicy {
  bool normalizeLineEndings = false;     // CRLF -> LF
  bool ignoreTrailingWhitespace = false;
  bool ignoreIndentation = false;        // strip leading whitespace per line
  bool ignoreBlankLines = false;
  bool collapseInnerWhitespace = false;  // runs of spaces/tabs -> one space

  bool operator==(const NormalizationPolicy&) const = default;

  static NormalizationPolicy all() { return {true, true, true, true, true}; }
};

namespace detail {

inline bool isBlankChar(char c) { return c == ' ' || c == '\t'; }

inline std::vector<std::string> splitLines(std::string_view s) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (;;) {
    const std::size_t nl = s.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.emplace_back(s.substr(start));
      return lines;
    }
    lines.emplace_back(s.substr(start, nl - start));
    start = nl + 1;
  }
}

inline std::vector<std::string> normalizedLines(std::string_view text, const NormalizationPolicy& p) {
  std::string s(text);
  if (p.normalizeLineEndings) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
      if (c == '\n') {
        while (!out.empty() && out.back() == '\r') out.pop_back();
      }
      out += c;
    }
    s = std::move(out);
  }
  std::vector<std::string> lines;
  for (std::string line : splitLines(s)) {
    if (p.ignoreIndentation) {
      const auto first = std::find_if_not(line.begin(), line.end(), isBlankChar);
      line.erase(line.begin(), first);
    }
    if (p.ignoreTrailingWhitespace) {
      while (!line.empty() && (isBlankChar(line.back()) || line.back() == '\r')) line.pop_back();
    }
    if (p.collapseInnerWhitespace) {
      std::string collapsed;
      for (char c : line) {
        const bool blank = isBlankChar(c);
        if (blank && !collapsed.empty() && collapsed.back() == ' ') continue;
        collapsed += blank ? ' ' : c;
      }
      line = std::move(collapsed);
    }
    if (p.ignoreBlankLines && std::all_of(line.begin(), line.end(), isBlankChar)) continue;
    lines.push_back(std::move(line));
  }
  return lines;
}

inline std::string quoteLine(const std::string& s) {
  std::string out = "`";
  for (char c : s) {
    if (c == '\t') out += "\\t";
    else if (c == '\r') out += "\\r";
    else out += c;
  }
  return out + "`";
}

}  // namespace detail

/// Applies `policy` to `text`. Idempotent for every policy.
inline std::string normalize(std::string_view text, const NormalizationPolicy& policy) {
  const auto lines = detail::normalizedLines(text, policy);
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += '\n';
    out += lines[i];
  }
  return out;
}

/// Compares normalized texts; on failure names the first differing
/// normalized line and column (both 1-based).
inline Verdict compareStrings(std::string_view actual, std::string_view expected, const NormalizationPolicy& policy) {
  const auto a = detail::normalizedLines(actual, policy);
  const auto e = detail::normalizedLines(expected, policy);
  if (a == e) return Verdict::pass(AssertionKind::StringEquals);
  const std::size_t n = std::min(a.size(), e.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == e[i]) continue;
    const auto diff = std::mismatch(a[i].begin(), a[i].end(), e[i].begin(), e[i].end());
    const std::size_t col = static_cast<std::size_t>(diff.first - a[i].begin()) + 1;
    std::ostringstream why;
    why << "first difference at line " << i + 1 << ", column " << col << ": expected "
        << detail::quoteLine(e[i]) << ", actual " << detail::quoteLine(a[i]);
    return Verdict::fail(AssertionKind::StringEquals, why.str());
  }
  std::ostringstream why;
  if (a.size() > e.size()) {
    why << "first difference at line " << n + 1 << ", column 1: actual has extra line " << detail::quoteLine(a[n]);
  } else {
    why << "first difference at line " << n + 1 << ", column 1: actual is missing line " << detail::quoteLine(e[n]);
  }
  return Verdict::fail(AssertionKind::StringEquals, why.str());
}

// ---------------------------------------------------------------------------
// AST comparison

/// Parses both texts at `entry` and compares the trees. A parse failure on
/// either side is a failed, syntactic verdict naming that side.
inline Verdict assertAstEquals(std::string_view actualText, std::string_view expectedText, java::EntryPoint entry) {
  auto parseSide = [&](std::string_view text, std::string_view side, java::JtlNode& out) -> std::optional<Verdict> {
    try {
      out = java::partialParse(entry, text);
      return std::nullopt;
    } catch (const Error& err) {
      return Verdict::fail(AssertionKind::AstEquals,
                           std::string(side) + " text does not parse as " + std::string(java::to_string(entry)) + ": " + err.what(),
                           true);
    }
  };
  java::JtlNode actual;
  java::JtlNode expected;
  if (auto v = parseSide(actualText, "actual", actual)) return *v;
  if (auto v = parseSide(expectedText, "expected", expected)) return *v;
  const java::AstDiff diff = java::astDiff(actual, expected);
  if (diff.empty()) return Verdict::pass(AssertionKind::AstEquals);
  return Verdict::fail(AssertionKind::AstEquals,
                       std::to_string(diff.size()) + " mismatch(es) between actual and expected AST:\n" + diff.render());
}

// ---------------------------------------------------------------------------
// AST query API

inline Verdict assertHasClass(const java::JtlCompilationUnit& unit, std::string_view name) {
  for (const auto& t : unit.types) {
    if (t.name == name) return Verdict::pass(AssertionKind::HasClass);
  }
  std::string names;
  for (const auto& t : unit.types) names += (names.empty() ? "" : ", ") + t.name;
  return Verdict::fail(AssertionKind::HasClass, "no class named `" + std::string(name) + "` (classes: " +
                                                    (names.empty() ? "none" : names) + ")");
}

inline Verdict assertHasAttribute(const java::JtlClassDecl& cls, std::string_view name, std::string_view printedType) {
  for (const auto& m : cls.members) {
    const auto* f = std::get_if<java::JtlFieldDecl>(&m);
    if (!f || f->name != name) continue;
    if (f->type.print() == printedType) return Verdict::pass(AssertionKind::HasAttribute);
    return Verdict::fail(AssertionKind::HasAttribute, "attribute `" + f->name + "` of class " + cls.name + " has type `" +
                                                          f->type.print() + "`, expected `" + std::string(printedType) + "`");
  }
  return Verdict::fail(AssertionKind::HasAttribute, "class " + cls.name + " has no attribute `" + std::string(name) + "`");
}

inline std::string printTypeList(const std::vector<std::string>& types) {
  std::string out = "(";
  for (std::size_t i = 0; i < types.size(); ++i) out += (i ? ", " : "") + types[i];
  return out + ")";
}

inline Verdict assertHasMethod(const java::JtlClassDecl& cls, std::string_view name, std::string_view printedReturnType,
                               const std::vector<std::string>& printedParamTypes) {
  std::vector<std::string> candidates;
  for (const auto& m : cls.members) {
    const auto* method = std::get_if<java::JtlMethodDecl>(&m);
    if (!method || method->name != name) continue;
    if (method->returnType.print() == printedReturnType && method->paramTypes() == printedParamTypes) {
      return Verdict::pass(AssertionKind::HasMethod);
    }
    candidates.push_back(method->returnType.print() + " " + method->name + printTypeList(method->paramTypes()));
  }
  std::string why = "class " + cls.name + " has no method `" + std::string(printedReturnType) + " " + std::string(name) +
                    printTypeList(printedParamTypes) + "`";
  if (!candidates.empty()) {
    why += "; methods with that name:";
    for (const auto& c : candidates) why += " `" + c + "`";
  }
  return Verdict::fail(AssertionKind::HasMethod, why);
}

struct ReturnTypeEquals { std::string printedType; };
struct NameEquals { std::string name; };
struct HasParameter { std::string printedType; std::string name; };
using SignatureCheck = std::variant<ReturnTypeEquals, NameEquals, HasParameter>;

inline Verdict assertMethodSignature(const java::JtlMethodDecl& m, const SignatureCheck& check) {
  constexpr auto kind = AssertionKind::MethodSignature;
  if (const auto* c = std::get_if<ReturnTypeEquals>(&check)) {
    if (m.returnType.print() == c->printedType) return Verdict::pass(kind);
    return Verdict::fail(kind, "return type of " + m.name + " is `" + m.returnType.print() + "`, expected `" + c->printedType + "`");
  }
  if (const auto* c = std::get_if<NameEquals>(&check)) {
    if (m.name == c->name) return Verdict::pass(kind);
    return Verdict::fail(kind, "method name is `" + m.name + "`, expected `" + c->name + "`");
  }
  const auto& c = std::get<HasParameter>(check);
  for (const auto& p : m.params) {
    if (p.type.print() == c.printedType && p.name == c.name) return Verdict::pass(kind);
  }
  return Verdict::fail(kind, "method " + m.name + java::printParams(m.params) + " has no parameter `" + c.printedType + " " +
                                 c.name + "`");
}

/// Passes iff the node has no context-condition violations.
inline Verdict assertContextConditionsClean(const java::JtlNode& node) {
  const auto violations = java::checkContextConditions(node);
  if (violations.empty()) return Verdict::pass(AssertionKind::ContextConditionsClean);
  std::string why = std::to_string(violations.size()) + " context condition violation(s):";
  for (const auto& v : violations) {
    why += "\n  " + v.code + " at " + (v.path.empty() ? std::string("<root>") : v.path) + ": " + v.message;
  }
  return Verdict::fail(AssertionKind::ContextConditionsClean, why);
}

}  // namespace tunit
