#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "support/corpus.hpp"
#include "tunit/cli.hpp"
#include "tunit/tunit.hpp"

using namespace tunit;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kFixtures = TUNIT_FIXTURES;

struct Failure {
  std::string why;
};

void require(bool ok, const std::string& why) {
  if (!ok) throw Failure{why};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "tunit_acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void writeText(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

std::string readText(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TestCase attributeCase(const fs::path& model, const fs::path& out) {
  TestCase tc;
  tc.name = "attr";
  tc.templateUnderTest = "JavaAttribute";
  tc.nodeType = cd::NodeKind::CDAttribute;
  tc.inputModel = model;
  tc.templates = {{"JavaAttribute", kFixtures / "templates" / "JavaAttribute.tgl"}};
  tc.outputDir = out;
  return tc;
}

std::vector<std::string> fileNames(const fs::path& dir) {
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<json> jsonLines(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(json::parse(l));
  return out;
}

void requireJsonlSchema(const std::vector<json>& docs) {
  require(!docs.empty(), "empty jsonl report");
  for (std::size_t i = 0; i + 1 < docs.size(); ++i) {
    const json& d = docs[i];
    require(d.is_object() && d.size() == 5 && d.contains("case") && d["case"].is_string() && d.contains("target") &&
                d["target"].is_string() && d.contains("check") && d["check"].is_string() && d.contains("passed") &&
                d["passed"].is_boolean() && d.contains("explanation") && d["explanation"].is_string(),
            "bad jsonl line: " + d.dump());
  }
  const json& s = docs.back();
  require(s.size() == 1 && s.contains("summary") && s["summary"].is_object(), "bad summary line: " + s.dump());
  for (const char* k : {"cases", "passed", "failed"}) {
    require(s["summary"].contains(k) && s["summary"][k].is_number_unsigned(), std::string("summary lacks ") + k);
  }
}

// 1 ---------------------------------------------------------------------------
void attributeTemplate() {
  const fs::path dir = scratch("c1");
  const auto [trace, result] = runTestCase(attributeCase(kFixtures / "models" / "Attribute.cd", dir / "with"));
  require(result.passed() && trace.entries.size() == 1, "render of attributeName failed");
  const std::string& out = outputFor(trace, "Holder.attributeName");
  const Verdict v = assertAstEquals(out, "public int attributeName = 5;", java::EntryPoint::FieldDecl);
  require(v.passed, "assertAstEquals: " + v.explanation);

  const auto [trace2, result2] = runTestCase(attributeCase(kFixtures / "models" / "NoValue.cd", dir / "without"));
  const std::string& bare = outputFor(trace2, "Holder.x");
  require(bare.find('=') == std::string::npos, "no-initializer output contains '=': " + bare);
  const Verdict v2 = assertAstEquals(bare, "public int x;", java::EntryPoint::FieldDecl);
  require(v2.passed, "no-initializer assertAstEquals: " + v2.explanation);
}

// 2 ---------------------------------------------------------------------------
void traceability() {
  const fs::path dir = scratch("c2");
  const std::string model = readText(kFixtures / "models" / "TwoAttributes.cd");
  writeText(dir / "before.cd", model);
  const auto [trace, result] = runTestCase(attributeCase(dir / "before.cd", dir / "before"));
  require(fileNames(dir / "before") == std::vector<std::string>{"000_A.a.out", "001_A.b.out"}, "expected exactly two files");
  require(trace.entries.size() == 2, "expected two trace entries");
  require(outputFor(trace, "A.a") == readText(dir / "before" / "000_A.a.out"), "outputFor(A.a) differs from its file");
  require(outputFor(trace, "A.b") == readText(dir / "before" / "001_A.b.out"), "outputFor(A.b) differs from its file");
  require(assertAstEquals(outputFor(trace, "A.a"), "public int a = 1;", java::EntryPoint::FieldDecl).passed, "A.a content");
  require(assertAstEquals(outputFor(trace, "A.b"), "public String b;", java::EntryPoint::FieldDecl).passed, "A.b content");

  const auto nodes = cd::collectNodes(cd::parseModel(model), cd::NodeKind::CDAttribute);
  require(nodes.size() == trace.entries.size(), "trace is not a bijection");
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    require(trace.entries[k].ref == nodes[k].ref && trace.entries[k].index == k &&
                trace.entries[k].filePath.filename() == outputFileName(k, nodes[k].ref),
            "trace entry " + std::to_string(k) + " does not match its node");
  }

  std::string renamed = model;
  const std::size_t at = renamed.find("int a ");
  require(at != std::string::npos, "fixture lacks `int a`");
  renamed.replace(at, 6, "int renamed ");
  writeText(dir / "after.cd", renamed);
  const auto [trace2, result2] = runTestCase(attributeCase(dir / "after.cd", dir / "after"));
  require(fileNames(dir / "after") == std::vector<std::string>{"000_A.renamed.out", "001_A.b.out"},
          "renaming changed more than one file name");
  require(outputFor(trace2, "A.b") == outputFor(trace, "A.b"), "renaming changed A.b output");
}

// 3 ---------------------------------------------------------------------------
void astDiffExample() {
  const fs::path dir = scratch("c3");
  const auto [trace, result] = runTestCase(attributeCase(kFixtures / "models" / "Attribute.cd", dir));
  const std::string& out = outputFor(trace, "Holder.attributeName");
  const std::string expected = "public String otherName = 5;";
  const java::AstDiff d = java::astDiff(java::partialParse(java::EntryPoint::FieldDecl, out),
                                        java::partialParse(java::EntryPoint::FieldDecl, expected));
  std::set<std::string> paths;
  for (const auto& m : d.mismatches) paths.insert(m.path);
  require(d.size() == 2, "expected 2 mismatches, got " + std::to_string(d.size()) + ":\n" + d.render());
  require(paths == std::set<std::string>{"name", "type"}, "mismatch paths are not {name, type}:\n" + d.render());
  const Verdict v = assertAstEquals(out, expected, java::EntryPoint::FieldDecl);
  require(!v.passed, "assertAstEquals passed on differing fields");
  for (const char* s : {"attributeName", "otherName", "int", "String"}) {
    require(v.explanation.find(s) != std::string::npos, std::string("explanation lacks ") + s + ":\n" + v.explanation);
  }
}

// 4 ---------------------------------------------------------------------------
void policyMatrix() {
  const fs::path dir = scratch("c4");
  writeText(dir / "Parent.tgl", "A${tc.include(\"Sub\", ast)}B");
  writeText(dir / "Sub.tgl", "sub:${ast.name}");
  writeText(dir / "Alt.tgl", "alt:${ast.name}");
  writeText(dir / "Pair.tgl", "${tc.include(\"Sub\", ast)}|${tc.include(\"Other\", ast)}");
  writeText(dir / "Other.tgl", "other");
  writeText(dir / "m.cd", "classdiagram P { class K {} }");

  auto renderWith = [&](const std::string& tut, SubstitutionPolicy policy, const std::string& sub) {
    TestCase tc;
    tc.name = sub;
    tc.templateUnderTest = tut;
    tc.nodeType = cd::NodeKind::CDClass;
    tc.inputModel = dir / "m.cd";
    for (const char* t : {"Parent", "Sub", "Alt", "Pair", "Other"}) tc.templates[t] = dir / (std::string(t) + ".tgl");
    tc.substitutionPolicy = std::move(policy);
    tc.outputDir = dir / sub;
    const auto [trace, result] = runTestCase(tc);
    require(result.diagnostics.empty(), sub + ": " + (result.diagnostics.empty() ? "" : result.diagnostics[0]));
    return readText(trace.entries.at(0).filePath);
  };

  const std::vector<std::pair<std::string, std::string>> got = {
      {renderWith("Parent", Passthrough{}, "passthrough"), "Asub:KB"},
      {renderWith("Parent", ReplaceWithEmpty{}, "empty"), "AB"},
      {renderWith("Parent", ReplaceAllWithTemplate{"Alt"}, "template"), "Aalt:KB"},
      {renderWith("Parent", ReplaceWithString{"lit"}, "string"), "AlitB"},
      {renderWith("Pair", PerCall{{{"Sub", std::nullopt, std::string("S")}}, ReplaceWithString{"F"}}, "percall"), "S|F"},
  };
  for (const auto& [actual, expected] : got) {
    require(actual == expected, "expected `" + expected + "`, got `" + actual + "`");
  }
}

// 5 ---------------------------------------------------------------------------
void methodTemplate() {
  TestCase tc;
  tc.name = "method";
  tc.templateUnderTest = "JavaMethod";
  tc.nodeType = cd::NodeKind::CDMethod;
  tc.inputModel = kFixtures / "models" / "Method.cd";
  tc.templates = {{"JavaMethod", kFixtures / "templates" / "JavaMethod.tgl"}};
  tc.variables = {{"paramType", "String"}, {"paramName", "param"}};
  tc.helpers = {{"methodHelper", {}, false}};
  tc.substitutionPolicy = ReplaceWithString{"{}"};
  tc.outputDir = scratch("c5");
  const auto [trace, result] = runTestCase(tc);
  require(result.diagnostics.empty(), "render diagnostics");
  const auto method = java::parseMethodDeclaration(outputFor(trace, "A.methodName(String)"));
  require(assertMethodSignature(method, ReturnTypeEquals{"void"}).passed, "returnTypeEquals(void) failed");
  require(assertMethodSignature(method, NameEquals{"methodName"}).passed, "nameEquals(methodName) failed");
  require(assertMethodSignature(method, HasParameter{"String", "param"}).passed, "hasParameter(String, param) failed");
  require(!assertMethodSignature(method, HasParameter{"int", "param"}).passed, "hasParameter(int, param) passed");
}

// 6 ---------------------------------------------------------------------------
void symbolTable() {
  const cd::SymbolTable st = mockSymbolTable({kFixtures / "symtab" / "A.cd", kFixtures / "symtab" / "B.cd"});
  // A.cd declares class A; B.cd declares class B and enum Kind.
  std::set<std::string> names;
  for (const auto& [name, entry] : st.entries()) names.insert(name);
  require(names == std::set<std::string>{"A", "B", "Kind"}, "symbol table names differ from the declarations");
  require(st.resolve("A") && st.resolve("A")->kind == cd::SymbolKind::Class, "A does not resolve to a class");
  require(st.resolve("B") && st.resolve("B")->kind == cd::SymbolKind::Class, "B does not resolve to a class");

  const fs::path dir = scratch("c6");
  writeText(dir / "T.tgl", "${st.resolve(\"B\").name}");
  TestCase tc;
  tc.name = "st";
  tc.templateUnderTest = "T";
  tc.nodeType = cd::NodeKind::CDClass;
  tc.inputModel = kFixtures / "models" / "Method.cd";
  tc.templates = {{"T", dir / "T.tgl"}};
  tc.symbolTablePath = {kFixtures / "symtab" / "A.cd", kFixtures / "symtab" / "B.cd"};
  tc.outputDir = dir / "out";
  const auto [trace, result] = runTestCase(tc);
  require(result.diagnostics.empty() && outputFor(trace, "A") == "B", "st.resolve(\"B\").name did not render B");

  bool rejected = false;
  try {
    mockSymbolTable({kFixtures / "symtab_dup"});
  } catch (const Error& e) {
    rejected = e.code() == ErrorCode::DuplicateSymbol;
  }
  require(rejected, "duplicate declarations were accepted");
}

// 7 ---------------------------------------------------------------------------
void formattingInvariance() {
  std::mt19937 rng(7);
  const auto frags = corpus::fragments();
  require(frags.size() >= 20, "corpus has fewer than 20 fragments");
  for (const auto& f : frags) {
    const std::string original = corpus::joinSpaced(f.tokens);
    const java::JtlNode base = java::partialParse(f.entry, original);
    bool stringFailed = false;
    bool anyChanged = false;
    for (int i = 0; i < 100; ++i) {
      const std::string perturbed = corpus::perturb(rng, f.tokens);
      require(java::astEquals(base, java::partialParse(f.entry, perturbed)),
              "astEquals broke for `" + original + "` vs `" + perturbed + "`");
      if (perturbed != original) {
        anyChanged = true;
        stringFailed |= !compareStrings(perturbed, original, NormalizationPolicy{}).passed;
      }
    }
    require(anyChanged && stringFailed, "strict string compare never failed for `" + original + "`");
  }
}

// 8 ---------------------------------------------------------------------------
void oracleEquivalence() {
  NormalizationPolicy lenient;
  lenient.collapseInnerWhitespace = true;
  lenient.ignoreIndentation = true;
  lenient.ignoreBlankLines = true;
  lenient.normalizeLineEndings = true;

  std::mt19937 rng(8);
  std::vector<std::pair<java::EntryPoint, std::string>> texts;
  for (const auto& f : corpus::fragments()) {
    const std::string base = corpus::layout(f.tokens);
    texts.emplace_back(f.entry, base);
    for (int i = 0; i < 10; ++i) texts.emplace_back(f.entry, corpus::perturbLayout(rng, base));
    auto mutated = f.tokens;
    if (corpus::mutateIdentifier(rng, mutated)) {
      texts.emplace_back(f.entry, corpus::layout(mutated));
      texts.emplace_back(f.entry, corpus::perturbLayout(rng, corpus::layout(mutated)));
    }
  }
  std::vector<std::pair<java::EntryPoint, std::string>> parseable;
  for (const auto& t : texts) {
    try {
      java::partialParse(t.first, t.second);
      parseable.push_back(t);
    } catch (const Error&) {
    }
  }
  require(parseable.size() * 10 >= texts.size() * 9, "too few corpus texts parse");
  std::size_t agreeingEqual = 0;
  for (const auto& [ea, a] : parseable) {
    for (const auto& [eb, b] : parseable) {
      const bool str = compareStrings(a, b, lenient).passed;
      const bool tok = corpus::oracleTokens(a) == corpus::oracleTokens(b);
      require(str == tok, std::string("verdicts disagree (string ") + (str ? "pass" : "fail") + ") on\n" + a + "\n---\n" + b);
      agreeingEqual += str;
    }
  }
  require(agreeingEqual > parseable.size(), "no equal pairs beyond the diagonal");
}

// 9 ---------------------------------------------------------------------------
void contextConditions() {
  auto run = [](const std::string& declare) {
    TestCase tc;
    tc.name = "cc";
    tc.templateUnderTest = "UseBeforeDecl";
    tc.nodeType = cd::NodeKind::CDMethod;
    tc.inputModel = kFixtures / "models" / "Method.cd";
    tc.templates = {{"UseBeforeDecl", kFixtures / "templates" / "UseBeforeDecl.tgl"}};
    tc.variables = {{"declare", declare}};
    tc.assertions = {{"*", ContextConditionsCheck{java::EntryPoint::MethodDecl}}};
    tc.outputDir = scratch("c9") / declare;
    return runTestCase(tc);
  };
  const auto [bad, badResult] = run("no");
  const auto vs = java::checkContextConditions(java::partialParse(java::EntryPoint::MethodDecl, bad.entries.at(0).renderedText));
  require(vs.size() == 1 && vs[0].code == "CC1" && vs[0].message.find("'total'") != std::string::npos,
          "expected one CC1 violation naming total");
  require(!badResult.passed(), "contextConditionsClean passed on undeclared use");

  const auto [good, goodResult] = run("yes");
  require(java::checkContextConditions(java::partialParse(java::EntryPoint::MethodDecl, good.entries.at(0).renderedText)).empty(),
          "violations after declaring first");
  require(goodResult.passed(), "contextConditionsClean failed after declaring first");
}

// 10 --------------------------------------------------------------------------
void endToEnd() {
  const fs::path dir = scratch("c10");
  const std::string suite = (kFixtures / "suite" / "suite.json").string();
  std::ostringstream out;
  std::ostringstream err;
  require(cli::main({"run", suite, "--output-dir", (dir / "ok").string()}, out, err) == 0, "sample suite failed:\n" + out.str() + err.str());

  out.str("");
  require(cli::main({"run", suite, "--report", "jsonl", "--output-dir", (dir / "ok").string()}, out, err) == 0,
          "jsonl run failed");
  const auto okDocs = jsonLines(out.str());
  requireJsonlSchema(okDocs);

  fs::copy(kFixtures, dir / "fixtures", fs::copy_options::recursive);
  const fs::path corrupted = dir / "fixtures" / "suite" / "suite.json";
  json doc = json::parse(std::ifstream(corrupted));
  doc["tests"][0]["assertions"][1]["expected"] = "public String otherName = 5;";
  std::ofstream(corrupted) << doc.dump(2);

  out.str("");
  const int code = cli::main({"run", corrupted.string(), "--report", "jsonl", "--output-dir", (dir / "bad").string()}, out, err);
  require(code == 1, "corrupted suite exit code " + std::to_string(code));
  const auto badDocs = jsonLines(out.str());
  requireJsonlSchema(badDocs);
  require(badDocs.size() == okDocs.size(), "corruption changed the number of report lines");
  std::size_t flipped = 0;
  for (std::size_t i = 0; i + 1 < badDocs.size(); ++i) {
    flipped += okDocs[i]["passed"] != badDocs[i]["passed"];
    require(okDocs[i]["passed"].get<bool>(), "sample suite line failed: " + okDocs[i].dump());
  }
  require(flipped == 1, "expected exactly one flipped assertion, got " + std::to_string(flipped));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void()>>> criteria = {
      {"attribute template renders the expected field", attributeTemplate},
      {"two attributes trace to two files", traceability},
      {"field diff reports name and type", astDiffExample},
      {"substitution policy matrix", policyMatrix},
      {"method template signature checks", methodTemplate},
      {"symbol table from auxiliary models", symbolTable},
      {"AST comparison is formatting invariant", formattingInvariance},
      {"lenient string comparison matches token oracle", oracleEquivalence},
      {"context conditions detect use before declaration", contextConditions},
      {"end-to-end CLI run", endToEnd},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string why;
    try {
      criteria[i].second();
    } catch (const Failure& f) {
      why = f.why;
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    std::cout << (why.empty() ? "PASS " : "FAIL ") << i + 1 << ". " << criteria[i].first << '\n';
    if (!why.empty()) {
      std::cout << "  " << why << '\n';
      ++failed;
    }
  }
  return failed == 0 ? 0 : 1;
}
