#pragma once

// Manifest-driven test execution: load test cases, render the template under
// test once per matching model element, persist one output file per element,
// and evaluate assertions against the resulting trace.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tunit/assertions.hpp"
#include "tunit/cdmodel.hpp"
#include "tunit/error.hpp"
#include "tunit/java.hpp"
#include "tunit/mocks.hpp"
#include "tunit/template.hpp"

namespace tunit {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Test definitions

struct StringEqualsCheck { std::string expected; NormalizationPolicy policy; };
struct AstEqualsCheck { std::string expected; java::EntryPoint entry = java::EntryPoint::FieldDecl; };
struct HasClassCheck { std::string name; };
struct HasAttributeCheck { std::string name; std::string type; };
struct HasMethodCheck { std::string name; std::string returnType; std::vector<std::string> paramTypes; };
struct MethodSignatureCheck { SignatureCheck check; };
struct ContextConditionsCheck { java::EntryPoint entry = java::EntryPoint::MethodDecl; };
struct OutputCountCheck { std::size_t count = 0; };

using Check = std::variant<StringEqualsCheck, AstEqualsCheck, HasClassCheck, HasAttributeCheck, HasMethodCheck,
                           MethodSignatureCheck, ContextConditionsCheck, OutputCountCheck>;

inline constexpr std::string_view kAllTargets = "*";

struct AssertionSpec {
  std::string target{kAllTargets};  // qualified ref or "*"
  Check check;

  AssertionKind kind() const { return static_cast<AssertionKind>(check.index()); }
};

struct TestCase {
  std::string name;
  std::string templateUnderTest;
  cd::NodeKind nodeType = cd::NodeKind::CDClass;
  fs::path inputModel;
  std::map<std::string, fs::path, std::less<>> templates;
  VariableBindings variables;
  std::vector<HelperMock> helpers;
  std::vector<fs::path> symbolTablePath;
  SubstitutionPolicy substitutionPolicy = Passthrough{};
  std::vector<AssertionSpec> assertions;
  fs::path outputDir;  // empty: tunit-out/<name>
};

// ---------------------------------------------------------------------------
// Traces and results

struct TraceEntry {
  std::size_t index = 0;
  cd::QualifiedRef ref;
  fs::path filePath;
  std::string renderedText;
};

struct OutputTrace {
  std::vector<TraceEntry> entries;
};

struct AssertionOutcome {
  AssertionSpec spec;
  Verdict verdict;
};

struct TestResult {
  std::string caseName;
  std::vector<AssertionOutcome> perAssertion;
  std::vector<std::string> diagnostics;

  bool passed() const {
    if (!diagnostics.empty()) return false;
    for (const auto& a : perAssertion) {
      if (!a.verdict.passed) return false;
    }
    return true;
  }
};

/// Replaces every character outside [A-Za-z0-9._-] with '_'.
inline std::string sanitizeFileName(std::string_view text) {
  std::string out;
  for (char c : text) {
    const bool keep = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' ||
                      c == '_' || c == '-';
    out += keep ? c : '_';
  }
  return out;
}

/// `NNN_<sanitized ref>.out`.
inline std::string outputFileName(std::size_t index, const cd::QualifiedRef& ref) {
  std::ostringstream name;
  name << std::setw(3) << std::setfill('0') << index << '_' << sanitizeFileName(ref.str()) << ".out";
  return name.str();
}

inline std::string caseDirName(std::string_view caseName) {
  std::string out = sanitizeFileName(caseName);
  return out == "." || out == ".." || out.empty() ? "_" + out : out;
}

inline fs::path defaultOutputRoot() { return fs::path("tunit-out"); }

/// Rendered text recorded for `ref`. Throws NotFound or Ambiguous.
inline const std::string& outputFor(const OutputTrace& trace, const cd::QualifiedRef& ref) {
  const TraceEntry* found = nullptr;
  for (const auto& e : trace.entries) {
    if (e.ref != ref) continue;
    if (found) throw Error(ErrorCode::Ambiguous, "more than one output for '" + ref.str() + "'");
    found = &e;
  }
  if (!found) throw Error(ErrorCode::NotFound, "no output for '" + ref.str() + "'");
  return found->renderedText;
}

inline const std::string& outputFor(const OutputTrace& trace, std::string_view ref) {
  return outputFor(trace, cd::QualifiedRef(std::string(ref)));
}

// ---------------------------------------------------------------------------
// Assertion evaluation

namespace detail {

inline Verdict parseFailure(AssertionKind kind, java::EntryPoint entry, const Error& err) {
  return Verdict::fail(kind, "output does not parse as " + std::string(java::to_string(entry)) + ": " + err.what(), true);
}

inline Verdict checkOne(const Check& check, const std::string& text) {
  return std::visit([&](const auto& c) -> Verdict {
    using T = std::decay_t<decltype(c)>;
    if constexpr (std::is_same_v<T, StringEqualsCheck>) {
      return compareStrings(text, c.expected, c.policy);
    } else if constexpr (std::is_same_v<T, AstEqualsCheck>) {
      return assertAstEquals(text, c.expected, c.entry);
    } else if constexpr (std::is_same_v<T, HasClassCheck>) {
      try {
        return assertHasClass(java::parseCompilationUnit(text), c.name);
      } catch (const Error& err) {
        return parseFailure(AssertionKind::HasClass, java::EntryPoint::CompilationUnit, err);
      }
    } else if constexpr (std::is_same_v<T, HasAttributeCheck>) {
      try {
        return assertHasAttribute(java::parseClassDeclaration(text), c.name, c.type);
      } catch (const Error& err) {
        return parseFailure(AssertionKind::HasAttribute, java::EntryPoint::ClassDecl, err);
      }
    } else if constexpr (std::is_same_v<T, HasMethodCheck>) {
      try {
        return assertHasMethod(java::parseClassDeclaration(text), c.name, c.returnType, c.paramTypes);
      } catch (const Error& err) {
        return parseFailure(AssertionKind::HasMethod, java::EntryPoint::ClassDecl, err);
      }
    } else if constexpr (std::is_same_v<T, MethodSignatureCheck>) {
      try {
        return assertMethodSignature(java::parseMethodDeclaration(text), c.check);
      } catch (const Error& err) {
        return parseFailure(AssertionKind::MethodSignature, java::EntryPoint::MethodDecl, err);
      }
    } else if constexpr (std::is_same_v<T, ContextConditionsCheck>) {
      try {
        return assertContextConditionsClean(java::partialParse(c.entry, text));
      } catch (const Error& err) {
        return parseFailure(AssertionKind::ContextConditionsClean, c.entry, err);
      }
    } else {
      return Verdict::fail(AssertionKind::OutputCount, "output_count does not apply to a single output");
    }
  }, check);
}

}  // namespace detail

/// Evaluates one assertion against a trace. `*` requires every output to
/// pass; a named target must match a trace entry.
inline Verdict evaluate(const AssertionSpec& spec, const OutputTrace& trace) {
  if (const auto* count = std::get_if<OutputCountCheck>(&spec.check)) {
    if (trace.entries.size() == count->count) return Verdict::pass(AssertionKind::OutputCount);
    return Verdict::fail(AssertionKind::OutputCount, "expected " + std::to_string(count->count) + " output(s), got " +
                                                         std::to_string(trace.entries.size()));
  }
  if (spec.target != kAllTargets) {
    try {
      const std::string& text = outputFor(trace, cd::QualifiedRef(spec.target));
      return detail::checkOne(spec.check, text);
    } catch (const Error& err) {
      return Verdict::fail(spec.kind(), err.code() == ErrorCode::NotFound ? "target not found: " + spec.target : err.what());
    }
  }
  std::string why;
  bool syntactic = false;
  for (const auto& e : trace.entries) {
    Verdict v = detail::checkOne(spec.check, e.renderedText);
    if (!v.passed) {
      why += (why.empty() ? "" : "\n") + e.ref.str() + ": " + v.explanation;
      syntactic = syntactic || v.syntactic;
    }
  }
  if (why.empty()) return Verdict::pass(spec.kind());
  return Verdict::fail(spec.kind(), why, syntactic);
}

// ---------------------------------------------------------------------------
// Pipeline

namespace detail {

inline void writeFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "error writing '" + path.string() + "'");
}

/// Removes previous `*.out` files so renamed elements leave no stale output.
inline void prepareOutputDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create '" + dir.string() + "': " + ec.message());
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".out") fs::remove(entry.path());
  }
}

}  // namespace detail

/// Runs one case: parse model, collect nodes of the requested kind, render
/// the template under test for each, write outputs, evaluate assertions.
/// Errors are recorded as diagnostics; every element renders and every
/// assertion is evaluated regardless of earlier failures.
inline std::pair<OutputTrace, TestResult> runTestCase(const TestCase& tc) {
  OutputTrace trace;
  TestResult result;
  result.caseName = tc.name;
  auto diagnose = [&](const std::string& what, const std::exception& err) {
    result.diagnostics.push_back(what + ": " + err.what());
  };

  auto registry = std::make_shared<TemplateRegistry>();
  for (const auto& [name, path] : tc.templates) {
    try {
      registry->emplace(name, parseTemplate(name, readFile(path)));
    } catch (const Error& err) {
      diagnose("template " + name, err);
    }
  }

  std::optional<cd::CdModel> model;
  try {
    model = loadModel(tc.inputModel);
  } catch (const Error& err) {
    diagnose("input model", err);
  }

  auto symtab = std::make_shared<cd::SymbolTable>();
  try {
    if (!tc.symbolTablePath.empty()) {
      *symtab = mockSymbolTable(tc.symbolTablePath);
    } else if (model) {
      symtab->add(*model);
    }
  } catch (const Error& err) {
    diagnose("symbol table", err);
  }

  const fs::path outDir = tc.outputDir.empty() ? defaultOutputRoot() / caseDirName(tc.name) : tc.outputDir;
  try {
    detail::prepareOutputDir(outDir);
  } catch (const std::exception& err) {
    diagnose("output directory", err);
    return {std::move(trace), std::move(result)};
  }

  const auto tut = registry->find(tc.templateUnderTest);
  if (model && result.diagnostics.empty() && tut == registry->end()) {
    result.diagnostics.push_back("template under test '" + tc.templateUnderTest + "' is not registered");
  }

  if (model && result.diagnostics.empty()) {
    const std::shared_ptr<const TemplateRegistry> shared = registry;
    const auto nodes = cd::collectNodes(*model, tc.nodeType);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      TraceEntry entry;
      entry.index = i;
      entry.ref = nodes[i].ref;
      entry.filePath = outDir / outputFileName(i, nodes[i].ref);
      try {
        const RenderContext ctx =
            assembleContext(nodes[i], tc.variables, tc.helpers, symtab, shared, tc.substitutionPolicy);
        entry.renderedText = render(tut->second, ctx);
      } catch (const Error& err) {
        diagnose("render " + nodes[i].ref.str(), err);
      }
      try {
        detail::writeFile(entry.filePath, entry.renderedText);
      } catch (const Error& err) {
        diagnose("write " + entry.filePath.string(), err);
      }
      trace.entries.push_back(std::move(entry));
    }
  }

  for (const auto& spec : tc.assertions) {
    result.perAssertion.push_back({spec, evaluate(spec, trace)});
  }
  return {std::move(trace), std::move(result)};
}

// ---------------------------------------------------------------------------
// Manifest loading

namespace detail {

using nlohmann::json;

class ManifestReader {
 public:
  explicit ManifestReader(fs::path baseDir) : base_(std::move(baseDir)) {}

  std::vector<TestCase> read(const json& doc) {
    requireObject(doc, "");
    std::map<std::string, fs::path, std::less<>> templates;
    if (doc.contains("templates")) {
      const json& t = doc["templates"];
      requireObject(t, "/templates");
      for (const auto& [name, path] : t.items()) {
        templates.emplace(name, file(path, "/templates/" + escape(name)));
      }
    }
    std::vector<fs::path> symtab;
    if (doc.contains("symbol_table_path")) {
      const json& s = doc["symbol_table_path"];
      if (s.is_string()) {
        symtab.push_back(file(s, "/symbol_table_path"));
      } else {
        requireArray(s, "/symbol_table_path");
        for (std::size_t i = 0; i < s.size(); ++i) symtab.push_back(file(s[i], "/symbol_table_path/" + std::to_string(i)));
      }
    }
    std::optional<fs::path> suiteModel;
    if (doc.contains("input_model")) suiteModel = file(doc["input_model"], "/input_model");

    if (!doc.contains("tests")) schema("/tests", "required key is missing");
    const json& tests = doc["tests"];
    requireArray(tests, "/tests");
    std::vector<TestCase> out;
    std::set<std::string> names;
    for (std::size_t i = 0; i < tests.size(); ++i) {
      const std::string ptr = "/tests/" + std::to_string(i);
      TestCase tc = testCase(tests[i], ptr, suiteModel);
      tc.templates = templates;
      tc.symbolTablePath = symtab;
      if (!tc.templates.count(tc.templateUnderTest)) {
        schema(ptr + "/template_under_test", "template '" + tc.templateUnderTest + "' is not listed in /templates");
      }
      if (!names.insert(tc.name).second) schema(ptr + "/name", "duplicate test name '" + tc.name + "'");
      out.push_back(std::move(tc));
    }
    return out;
  }

 private:
  [[noreturn]] static void schema(const std::string& pointer, const std::string& msg) {
    throw Error(ErrorCode::SchemaError, (pointer.empty() ? std::string("/") : pointer) + ": " + msg);
  }
  static std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) {
      if (c == '~') out += "~0";
      else if (c == '/') out += "~1";
      else out += c;
    }
    return out;
  }
  static void requireObject(const json& j, const std::string& ptr) {
    if (!j.is_object()) schema(ptr, "expected an object");
  }
  static void requireArray(const json& j, const std::string& ptr) {
    if (!j.is_array()) schema(ptr, "expected an array");
  }
  static const json& required(const json& obj, const char* key, const std::string& ptr) {
    if (!obj.contains(key)) schema(ptr + "/" + key, "required key is missing");
    return obj[key];
  }
  static std::string text(const json& j, const std::string& ptr) {
    if (!j.is_string()) schema(ptr, "expected a string");
    return j.get<std::string>();
  }
  static std::string requiredText(const json& obj, const char* key, const std::string& ptr) {
    return text(required(obj, key, ptr), ptr + "/" + key);
  }

  fs::path file(const json& j, const std::string& ptr) const {
    fs::path p = base_ / text(j, ptr);
    if (!fs::exists(p)) throw Error(ErrorCode::MissingFile, "'" + p.string() + "' (referenced at " + ptr + ") does not exist");
    return p;
  }

  TestCase testCase(const json& t, const std::string& ptr, const std::optional<fs::path>& suiteModel) const {
    requireObject(t, ptr);
    TestCase tc;
    tc.name = requiredText(t, "name", ptr);
    tc.templateUnderTest = requiredText(t, "template_under_test", ptr);
    const std::string kind = requiredText(t, "node_type", ptr);
    auto nodeKind = cd::parseNodeKind(kind);
    if (!nodeKind) schema(ptr + "/node_type", "unknown node type '" + kind + "'");
    tc.nodeType = *nodeKind;
    if (t.contains("input_model")) {
      tc.inputModel = file(t["input_model"], ptr + "/input_model");
    } else if (suiteModel) {
      tc.inputModel = *suiteModel;
    } else {
      schema(ptr + "/input_model", "no input model for this test and no suite-level default");
    }
    if (t.contains("output_dir")) tc.outputDir = base_ / text(t["output_dir"], ptr + "/output_dir");
    if (t.contains("variables")) {
      const json& v = t["variables"];
      requireObject(v, ptr + "/variables");
      for (const auto& [name, value] : v.items()) {
        tc.variables.emplace(name, text(value, ptr + "/variables/" + escape(name)));
      }
    }
    if (t.contains("helpers")) {
      const json& h = t["helpers"];
      requireObject(h, ptr + "/helpers");
      for (const auto& [name, spec] : h.items()) tc.helpers.push_back(helper(name, spec, ptr + "/helpers/" + escape(name)));
    }
    if (t.contains("substitution_policy")) {
      tc.substitutionPolicy = policy(t["substitution_policy"], ptr + "/substitution_policy", true);
    }
    if (t.contains("assertions")) {
      const json& a = t["assertions"];
      requireArray(a, ptr + "/assertions");
      for (std::size_t i = 0; i < a.size(); ++i) tc.assertions.push_back(assertion(a[i], ptr + "/assertions/" + std::to_string(i)));
    }
    return tc;
  }

  static HelperMock helper(const std::string& name, const json& spec, const std::string& ptr) {
    requireObject(spec, ptr);
    HelperMock mock;
    mock.helperName = name;
    if (spec.contains("strict")) {
      if (!spec["strict"].is_boolean()) schema(ptr + "/strict", "expected a boolean");
      mock.strict = spec["strict"].get<bool>();
    }
    if (spec.contains("table")) {
      const json& table = spec["table"];
      requireArray(table, ptr + "/table");
      for (std::size_t i = 0; i < table.size(); ++i) {
        const std::string rp = ptr + "/table/" + std::to_string(i);
        requireObject(table[i], rp);
        HelperRow row;
        row.method = requiredText(table[i], "method", rp);
        if (table[i].contains("arg")) row.arg = cd::QualifiedRef(text(table[i]["arg"], rp + "/arg"));
        row.response = requiredText(table[i], "response", rp);
        mock.table.push_back(std::move(row));
      }
    }
    return mock;
  }

  static SubstitutionPolicy policy(const json& p, const std::string& ptr, bool allowPerCall) {
    requireObject(p, ptr);
    const std::string kind = requiredText(p, "kind", ptr);
    if (kind == "passthrough") return Passthrough{};
    if (kind == "replace_with_empty") return ReplaceWithEmpty{};
    if (kind == "replace_all_with_template") return ReplaceAllWithTemplate{requiredText(p, "value", ptr)};
    if (kind == "replace_with_string") return ReplaceWithString{requiredText(p, "value", ptr)};
    if (kind == "per_call") {
      if (!allowPerCall) schema(ptr + "/kind", "a per_call fallback may not itself be per_call");
      PerCall pc;
      if (p.contains("rules")) {
        const json& rules = p["rules"];
        requireArray(rules, ptr + "/rules");
        for (std::size_t i = 0; i < rules.size(); ++i) {
          const std::string rp = ptr + "/rules/" + std::to_string(i);
          const json& r = rules[i];
          requireObject(r, rp);
          SubstitutionRule rule;
          rule.match = requiredText(r, "template", rp);
          if (r.contains("node")) rule.node = cd::QualifiedRef(text(r["node"], rp + "/node"));
          const bool hasString = r.contains("replacement_string");
          const bool hasTemplate = r.contains("replacement_template");
          if (hasString == hasTemplate) {
            schema(rp, "exactly one of replacement_string and replacement_template is required");
          }
          if (hasString) rule.replacement = text(r["replacement_string"], rp + "/replacement_string");
          else rule.replacement = TemplateReplacement{text(r["replacement_template"], rp + "/replacement_template")};
          pc.rules.push_back(std::move(rule));
        }
      }
      if (p.contains("fallback")) {
        SubstitutionPolicy fb = policy(p["fallback"], ptr + "/fallback", false);
        std::visit([&](const auto& f) {
          if constexpr (!std::is_same_v<std::decay_t<decltype(f)>, PerCall>) pc.fallback = f;
        }, fb);
      }
      return pc;
    }
    schema(ptr + "/kind", "unknown substitution policy '" + kind + "'");
  }

  static java::EntryPoint entryPoint(const json& a, const std::string& ptr) {
    const std::string e = requiredText(a, "entry_point", ptr);
    auto entry = java::parseEntryPoint(e);
    if (!entry) schema(ptr + "/entry_point", "unknown entry point '" + e + "'");
    return *entry;
  }

  static NormalizationPolicy normalization(const json& a, const std::string& ptr) {
    NormalizationPolicy p;
    if (!a.contains("policy")) return p;
    const json& flags = a["policy"];
    requireArray(flags, ptr + "/policy");
    for (std::size_t i = 0; i < flags.size(); ++i) {
      const std::string f = text(flags[i], ptr + "/policy/" + std::to_string(i));
      if (f == "normalize_line_endings") p.normalizeLineEndings = true;
      else if (f == "ignore_trailing_whitespace") p.ignoreTrailingWhitespace = true;
      else if (f == "ignore_indentation") p.ignoreIndentation = true;
      else if (f == "ignore_blank_lines") p.ignoreBlankLines = true;
      else if (f == "collapse_inner_whitespace") p.collapseInnerWhitespace = true;
      else schema(ptr + "/policy/" + std::to_string(i), "unknown normalization flag '" + f + "'");
    }
    return p;
  }

  static AssertionSpec assertion(const json& a, const std::string& ptr) {
    requireObject(a, ptr);
    AssertionSpec spec;
    if (a.contains("target")) spec.target = text(a["target"], ptr + "/target");
    const std::string check = requiredText(a, "check", ptr);
    if (check == "string_equals") {
      spec.check = StringEqualsCheck{requiredText(a, "expected", ptr), normalization(a, ptr)};
    } else if (check == "ast_equals") {
      spec.check = AstEqualsCheck{requiredText(a, "expected", ptr), entryPoint(a, ptr)};
    } else if (check == "has_class") {
      spec.check = HasClassCheck{requiredText(a, "name", ptr)};
    } else if (check == "has_attribute") {
      spec.check = HasAttributeCheck{requiredText(a, "name", ptr), requiredText(a, "type", ptr)};
    } else if (check == "has_method") {
      HasMethodCheck m{requiredText(a, "name", ptr), requiredText(a, "return_type", ptr), {}};
      const json& params = required(a, "param_types", ptr);
      requireArray(params, ptr + "/param_types");
      for (std::size_t i = 0; i < params.size(); ++i) m.paramTypes.push_back(text(params[i], ptr + "/param_types/" + std::to_string(i)));
      spec.check = std::move(m);
    } else if (check == "method_signature") {
      const int n = int(a.contains("return_type_equals")) + int(a.contains("name_equals")) + int(a.contains("has_parameter"));
      if (n != 1) schema(ptr, "exactly one of return_type_equals, name_equals, has_parameter is required");
      if (a.contains("return_type_equals")) {
        spec.check = MethodSignatureCheck{ReturnTypeEquals{text(a["return_type_equals"], ptr + "/return_type_equals")}};
      } else if (a.contains("name_equals")) {
        spec.check = MethodSignatureCheck{NameEquals{text(a["name_equals"], ptr + "/name_equals")}};
      } else {
        const json& hp = a["has_parameter"];
        const std::string pp = ptr + "/has_parameter";
        requireObject(hp, pp);
        spec.check = MethodSignatureCheck{HasParameter{requiredText(hp, "type", pp), requiredText(hp, "name", pp)}};
      }
    } else if (check == "context_conditions_clean") {
      spec.check = ContextConditionsCheck{entryPoint(a, ptr)};
    } else if (check == "output_count") {
      const json& c = required(a, "count", ptr);
      if (!c.is_number_unsigned() && !(c.is_number_integer() && c.get<long long>() >= 0)) {
        schema(ptr + "/count", "expected a non-negative integer");
      }
      spec.check = OutputCountCheck{c.get<std::size_t>()};
    } else {
      schema(ptr + "/check", "unknown check '" + check + "'");
    }
    return spec;
  }

  fs::path base_;
};

}  // namespace detail

/// Loads a JSON manifest. Paths inside are relative to the manifest file and
/// are checked for existence eagerly. Throws IoError, SchemaError (message
/// starts with the JSON pointer of the offending value) or MissingFile.
inline std::vector<TestCase> loadManifest(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::MissingFile, "manifest '" + path.string() + "' does not exist");
  const std::string source = readFile(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(source);
  } catch (const nlohmann::json::parse_error& err) {
    throw Error(ErrorCode::SchemaError, "/: invalid JSON: " + std::string(err.what()));
  }
  return detail::ManifestReader(path.parent_path()).read(doc);
}

// ---------------------------------------------------------------------------
// Reports

inline std::string describeCheck(const AssertionSpec& spec) { return std::string(to_string(spec.kind())); }

/// One JSON object per assertion (and per pipeline diagnostic).
inline void writeJsonlCase(std::ostream& out, const TestResult& result) {
  for (const auto& d : result.diagnostics) {
    out << nlohmann::json{{"case", result.caseName}, {"target", std::string(kAllTargets)}, {"check", "pipeline"},
                          {"passed", false}, {"explanation", d}}
               .dump()
        << '\n';
  }
  for (const auto& a : result.perAssertion) {
    out << nlohmann::json{{"case", result.caseName}, {"target", a.spec.target}, {"check", describeCheck(a.spec)},
                          {"passed", a.verdict.passed}, {"explanation", a.verdict.explanation}}
               .dump()
        << '\n';
  }
}

inline void writeJsonlSummary(std::ostream& out, std::size_t cases, std::size_t passed) {
  out << nlohmann::json{{"summary", {{"cases", cases}, {"passed", passed}, {"failed", cases - passed}}}}.dump() << '\n';
}

inline void writeTextCase(std::ostream& out, const TestResult& result, const OutputTrace& trace) {
  std::size_t ok = 0;
  for (const auto& a : result.perAssertion) ok += a.verdict.passed ? 1 : 0;
  out << (result.passed() ? "PASS " : "FAIL ") << result.caseName << " (" << ok << "/" << result.perAssertion.size()
      << " assertions, " << trace.entries.size() << " outputs)\n";
  for (const auto& d : result.diagnostics) out << "  error: " << d << '\n';
  for (const auto& a : result.perAssertion) {
    if (a.verdict.passed) continue;
    out << "  failed " << describeCheck(a.spec) << " [" << a.spec.target << "]: ";
    std::string text = a.verdict.explanation;
    for (std::size_t p = 0; (p = text.find('\n', p)) != std::string::npos; p += 5) text.replace(p, 1, "\n    ");
    out << text << '\n';
  }
}

}  // namespace tunit
