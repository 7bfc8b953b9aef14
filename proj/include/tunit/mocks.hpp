#pragma once

// Mock surface for a template under test: canned-response helpers, variable
// bindings, symbol tables built from auxiliary models, and sub-template
// substitution policies.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "tunit/cdmodel.hpp"
#include "tunit/error.hpp"
#include "tunit/template.hpp"

namespace tunit {

// ---------------------------------------------------------------------------
// Substitution policies

/// Sub-template calls are rendered as usual.
struct Passthrough {
  bool operator==(const Passthrough&) const = default;
};
/// Every sub-template call yields "".
struct ReplaceWithEmpty {
  bool operator==(const ReplaceWithEmpty&) const = default;
};
/// Every sub-template call renders `templateName` instead, with the call's
/// argument bound as `ast`.
struct ReplaceAllWithTemplate {
  std::string templateName;
  bool operator==(const ReplaceAllWithTemplate&) const = default;
};
/// Every sub-template call yields `text`.
struct ReplaceWithString {
  std::string text;
  bool operator==(const ReplaceWithString&) const = default;
};

using BasicPolicy = std::variant<Passthrough, ReplaceWithEmpty, ReplaceAllWithTemplate, ReplaceWithString>;

struct TemplateReplacement {
  std::string templateName;
  bool operator==(const TemplateReplacement&) const = default;
};

struct SubstitutionRule {
  std::string match;                          // called template name
  std::optional<cd::QualifiedRef> node;       // argument node qualifier
  std::variant<std::string, TemplateReplacement> replacement;
  bool operator==(const SubstitutionRule&) const = default;
};

/// Per-call rules, first match wins; unmatched calls use `fallback`.
struct PerCall {
  std::vector<SubstitutionRule> rules;
  BasicPolicy fallback = Passthrough{};
  bool operator==(const PerCall&) const = default;
};

using SubstitutionPolicy = std::variant<Passthrough, ReplaceWithEmpty, ReplaceAllWithTemplate, ReplaceWithString, PerCall>;

using RenderFn = std::function<std::string(const Template&, const RenderContext&)>;

namespace detail {

class PolicyInterceptor final : public IncludeInterceptor {
 public:
  PolicyInterceptor(SubstitutionPolicy policy, RenderFn renderFn)
      : policy_(std::move(policy)), render_(std::move(renderFn)) {}

  std::string include(const RenderContext& caller, std::string_view name, const Value& arg) const override {
    if (const auto* perCall = std::get_if<PerCall>(&policy_)) {
      for (const auto& rule : perCall->rules) {
        if (!matches(rule, name, arg)) continue;
        if (const auto* text = std::get_if<std::string>(&rule.replacement)) return *text;
        return renderNamed(caller, std::get<TemplateReplacement>(rule.replacement).templateName, arg);
      }
      return applyBasic(perCall->fallback, caller, name, arg);
    }
    return std::visit([&](const auto& p) -> std::string {
      using T = std::decay_t<decltype(p)>;
      if constexpr (std::is_same_v<T, PerCall>) return {};
      else return applyBasic(BasicPolicy{p}, caller, name, arg);
    }, policy_);
  }

 private:
  static bool matches(const SubstitutionRule& rule, std::string_view name, const Value& arg) {
    if (rule.match != name) return false;
    if (!rule.node) return true;
    const auto* node = std::get_if<cd::CdNode>(&arg);
    return node && node->ref == *rule.node;
  }

  std::string applyBasic(const BasicPolicy& p, const RenderContext& caller, std::string_view name, const Value& arg) const {
    if (std::holds_alternative<ReplaceWithEmpty>(p)) return {};
    if (const auto* s = std::get_if<ReplaceWithString>(&p)) return s->text;
    if (const auto* t = std::get_if<ReplaceAllWithTemplate>(&p)) return renderNamed(caller, t->templateName, arg);
    return renderNamed(caller, name, arg);
  }

  std::string renderNamed(const RenderContext& caller, std::string_view name, const Value& arg) const {
    auto it = caller.registry->find(name);
    if (it == caller.registry->end()) {
      throw Error(ErrorCode::TemplateNotFound, "template '" + std::string(name) + "' is not registered");
    }
    return render_(it->second, includeContext(caller, name, arg));
  }

  SubstitutionPolicy policy_;
  RenderFn render_;
};

inline void requireTemplate(const TemplateRegistry& registry, const std::string& name) {
  if (registry.find(name) == registry.end()) {
    throw Error(ErrorCode::TemplateNotFound, "substitution policy refers to unregistered template '" + name + "'");
  }
}

}  // namespace detail

/// Builds the interceptor realizing `policy`. Template names used as
/// replacements must already be in `registry`.
inline std::shared_ptr<const IncludeInterceptor> buildInterceptor(const SubstitutionPolicy& policy,
                                                                  const TemplateRegistry& registry,
                                                                  RenderFn renderFn = render) {
  auto checkBasic = [&](const BasicPolicy& p) {
    if (const auto* t = std::get_if<ReplaceAllWithTemplate>(&p)) detail::requireTemplate(registry, t->templateName);
  };
  if (const auto* perCall = std::get_if<PerCall>(&policy)) {
    for (const auto& rule : perCall->rules) {
      if (const auto* t = std::get_if<TemplateReplacement>(&rule.replacement)) detail::requireTemplate(registry, t->templateName);
    }
    checkBasic(perCall->fallback);
  } else if (const auto* t = std::get_if<ReplaceAllWithTemplate>(&policy)) {
    detail::requireTemplate(registry, t->templateName);
  }
  return std::make_shared<detail::PolicyInterceptor>(policy, std::move(renderFn));
}

// ---------------------------------------------------------------------------
// Helpers

struct HelperRow {
  std::string method;
  std::optional<cd::QualifiedRef> arg;  // matches the first node argument
  std::string response;
};

struct HelperMock {
  std::string helperName;
  std::vector<HelperRow> table;
  bool strict = false;
};

namespace detail {

class TableHelper final : public Helper {
 public:
  explicit TableHelper(HelperMock mock) : mock_(std::move(mock)) {}

  std::string invoke(std::string_view method, std::span<const Value> args) const override {
    const cd::CdNode* firstNode = nullptr;
    for (const auto& a : args) {
      if ((firstNode = std::get_if<cd::CdNode>(&a))) break;
    }
    for (const auto& row : mock_.table) {
      if (row.method != method) continue;
      if (row.arg && (!firstNode || firstNode->ref != *row.arg)) continue;
      return row.response;
    }
    if (mock_.strict) {
      std::string msg = "no mock response for " + mock_.helperName + "." + std::string(method);
      if (firstNode) msg += " on " + firstNode->ref.str();
      throw Error(ErrorCode::UnmatchedInvocation, msg);
    }
    return {};
  }

 private:
  HelperMock mock_;
};

}  // namespace detail

/// A helper answering from `mock.table`: the first row with a matching
/// method name (and argument qualifier, if given) wins. Unmatched calls
/// return "" unless the mock is strict.
inline std::shared_ptr<const Helper> mockHelper(HelperMock mock) {
  return std::make_shared<detail::TableHelper>(std::move(mock));
}

// ---------------------------------------------------------------------------
// Symbol tables

inline std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "error reading '" + path.string() + "'");
  return ss.str();
}

inline cd::CdModel loadModel(const std::filesystem::path& path) {
  const std::string source = readFile(path);
  try {
    return cd::parseModel(source, path.string());
  } catch (const Error& err) {
    throw Error(err.code(), path.string() + ": " + err.detail(), err.pos());
  }
}

/// Expands directories to their `.cd` files (sorted) and parses every model.
inline std::vector<cd::CdModel> loadModels(const std::vector<std::filesystem::path>& paths) {
  std::vector<std::filesystem::path> files;
  for (const auto& p : paths) {
    std::error_code ec;
    if (std::filesystem::is_directory(p, ec)) {
      std::vector<std::filesystem::path> found;
      for (const auto& entry : std::filesystem::directory_iterator(p, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".cd") found.push_back(entry.path());
      }
      if (ec) throw Error(ErrorCode::IoError, "cannot list '" + p.string() + "': " + ec.message());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  std::vector<cd::CdModel> models;
  models.reserve(files.size());
  for (const auto& f : files) models.push_back(loadModel(f));
  return models;
}

/// One merged symbol table over the models at `modelPaths`.
inline cd::SymbolTable mockSymbolTable(const std::vector<std::filesystem::path>& modelPaths) {
  return cd::buildSymbolTable(loadModels(modelPaths));
}

// ---------------------------------------------------------------------------
// Context assembly

using VariableBindings = std::map<std::string, std::string, std::less<>>;

/// Assembles a validated RenderContext from mocks. Throws
/// ReservedNameCollision or NameCollision on bad names, TemplateNotFound for
/// dangling policy references.
inline RenderContext assembleContext(const cd::CdNode& astNode, const VariableBindings& bindings,
                                     const std::vector<HelperMock>& helperMocks,
                                     std::shared_ptr<const cd::SymbolTable> symtab,
                                     std::shared_ptr<const TemplateRegistry> registry,
                                     const SubstitutionPolicy& policy) {
  RenderContext ctx;
  ctx.ast = astNode;
  ctx.variables = bindings;
  for (const auto& mock : helperMocks) {
    if (ctx.helpers.count(mock.helperName)) {
      throw Error(ErrorCode::NameCollision, "helper '" + mock.helperName + "' is mocked twice");
    }
    ctx.helpers.emplace(mock.helperName, mockHelper(mock));
  }
  if (symtab) ctx.symbolTable = std::move(symtab);
  if (registry) ctx.registry = std::move(registry);
  validateContext(ctx);
  ctx.interceptor = buildInterceptor(policy, *ctx.registry);
  return ctx;
}

}  // namespace tunit
