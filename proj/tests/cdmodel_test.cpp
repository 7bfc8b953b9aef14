#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "tunit/cdmodel.hpp"

using namespace tunit;
using namespace tunit::cd;

namespace {

std::vector<std::string> refs(const std::vector<CdNode>& nodes) {
  std::vector<std::string> out;
  for (const auto& n : nodes) out.push_back(n.ref.str());
  return out;
}

ErrorCode codeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::NotFound;
}

}  // namespace

TEST(ParseModel, AttributeWithInitializer) {
  const CdModel m = parseModel("classdiagram D { class A { int attributeName = 5; } }");
  EXPECT_EQ(m.name, "D");
  ASSERT_EQ(m.classes().size(), 1u);
  const CdClass& a = *m.classes()[0];
  ASSERT_EQ(a.attributes.size(), 1u);
  EXPECT_EQ(a.attributes[0].type.print(), "int");
  EXPECT_EQ(a.attributes[0].name, "attributeName");
  EXPECT_EQ(a.attributes[0].value, "5");
}

TEST(ParseModel, EmptyModel) {
  const CdModel m = parseModel("classdiagram D { }");
  EXPECT_EQ(m.name, "D");
  EXPECT_TRUE(m.types.empty());
}

TEST(ParseModel, MethodWithParameter) {
  const CdModel m = parseModel("classdiagram D { class A { void methodName(String param); } }");
  const CdClass& a = *m.classes()[0];
  ASSERT_EQ(a.methods.size(), 1u);
  const CdMethod& method = a.methods[0];
  EXPECT_EQ(method.returnType.print(), "void");
  EXPECT_EQ(method.name, "methodName");
  ASSERT_EQ(method.parameters.size(), 1u);
  EXPECT_EQ(method.parameters[0].type.print(), "String");
  EXPECT_EQ(method.parameters[0].name, "param");
}

TEST(ParseModel, FullGrammar) {
  const CdModel m = parseModel(R"(
    // fixture
    classdiagram Shop {
      /* a base */
      class Item extends Base {
        private java.lang.String name = "x y";
        protected double price = -1.5;
        int[][] grid;
        boolean active = true;
        Object ref = null;
        public void save(java.io.File f, int n) throws java.io.IOException, Oops;
      }
      interface Named extends A, B { String name(); }
      enum Color { RED, GREEN; }
    })");
  ASSERT_EQ(m.types.size(), 3u);
  const CdClass& item = *m.classes()[0];
  EXPECT_EQ(item.superclass, "Base");
  EXPECT_EQ(item.attributes[0].visibility, Visibility::Private);
  EXPECT_EQ(item.attributes[0].type.baseName, "java.lang.String");
  EXPECT_EQ(item.attributes[0].value, "\"x y\"");
  EXPECT_EQ(item.attributes[1].value, "-1.5");
  EXPECT_EQ(item.attributes[2].type.arrayDims, 2);
  EXPECT_EQ(item.attributes[2].type.print(), "int[][]");
  EXPECT_EQ(item.attributes[3].value, "true");
  EXPECT_EQ(item.attributes[4].value, "null");
  ASSERT_EQ(item.methods[0].exceptions.size(), 2u);
  EXPECT_EQ(item.methods[0].exceptions[0].print(), "java.io.IOException");
  EXPECT_EQ(m.interfaces()[0]->extends, (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(m.enums()[0]->constants, (std::vector<std::string>{"RED", "GREEN"}));
}

TEST(ParseModel, CrlfAccepted) {
  const CdModel m = parseModel("classdiagram D {\r\n  class A {\r\n    int x;\r\n  }\r\n}\r\n");
  EXPECT_EQ(m.classes()[0]->attributes[0].name, "x");
}

TEST(ParseModel, SyntaxErrorCarriesPosition) {
  try {
    parseModel("classdiagram D {\n  class A {\n    int x = ;\n  }\n}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SyntaxError);
    ASSERT_TRUE(e.pos());
    EXPECT_EQ(e.pos()->line, 3);
    EXPECT_EQ(e.pos()->col, 13);
  }
}

TEST(ParseModel, ErrorsAtEndAndBadTokens) {
  EXPECT_EQ(codeOf([] { parseModel("classdiagram D {"); }), ErrorCode::SyntaxError);
  EXPECT_EQ(codeOf([] { parseModel("classdiagram D { } extra"); }), ErrorCode::SyntaxError);
  EXPECT_EQ(codeOf([] { parseModel("classdiagram D { class A { int x = \"open; } }"); }), ErrorCode::SyntaxError);
  EXPECT_EQ(codeOf([] { parseModel("classdiagram D { /* never closed"); }), ErrorCode::SyntaxError);
  EXPECT_EQ(codeOf([] { parseModel("classdiagram D { class class {} }"); }), ErrorCode::SyntaxError);
  EXPECT_EQ(codeOf([] { parseModel("classdiagram D { class A { int x # } }"); }), ErrorCode::SyntaxError);
}

TEST(ParseModel, Duplicates) {
  EXPECT_EQ(codeOf([] { parseModel("classdiagram D { class A {} enum A {} }"); }), ErrorCode::DuplicateName);
  EXPECT_EQ(codeOf([] { parseModel("classdiagram D { class A { int x; String x; } }"); }), ErrorCode::DuplicateName);
  EXPECT_EQ(codeOf([] { parseModel("classdiagram D { class A { void m(int a); void m(int b); } }"); }),
            ErrorCode::DuplicateName);
  EXPECT_EQ(codeOf([] { parseModel("classdiagram D { class A { void m(int a, int a); } }"); }), ErrorCode::DuplicateName);
  // Overloads differ in parameter types and are fine.
  EXPECT_NO_THROW(parseModel("classdiagram D { class A { void m(int a); void m(String a); } }"));
}

TEST(CollectNodes, AttributesInDocumentOrder) {
  const CdModel m = parseModel("classdiagram D { class A { int a; int b; } }");
  EXPECT_EQ(refs(collectNodes(m, NodeKind::CDAttribute)), (std::vector<std::string>{"A.a", "A.b"}));
}

TEST(CollectNodes, NoInstancesGivesEmptyList) {
  const CdModel m = parseModel("classdiagram D { class A { int a; } }");
  EXPECT_TRUE(collectNodes(m, NodeKind::CDEnum).empty());
  EXPECT_TRUE(collectNodes(m, NodeKind::CDMethod).empty());
}

TEST(CollectNodes, MethodsAcrossClasses) {
  const CdModel m = parseModel(
      "classdiagram D { class B { int f(); } interface I { void g(); } class A { void h(String s); } }");
  // Hand enumeration against the source text: B.f, I.g, A.h in that order.
  EXPECT_EQ(refs(collectNodes(m, NodeKind::CDMethod)), (std::vector<std::string>{"B.f()", "I.g()", "A.h(String)"}));
  EXPECT_EQ(refs(collectNodes(m, NodeKind::CDParameter)), (std::vector<std::string>{"A.h(String).s"}));
  EXPECT_EQ(refs(collectNodes(m, NodeKind::CDClass)), (std::vector<std::string>{"B", "A"}));
}

TEST(QualifiedName, Scheme) {
  const CdModel m = parseModel(
      "classdiagram D { class A { int attributeName; void methodName(String p); int[] m2(java.util.List a, int[] b); } }");
  const CdClass& a = *m.classes()[0];
  EXPECT_EQ(qualifiedName(a.attributes[0], a.name).str(), "A.attributeName");
  EXPECT_EQ(qualifiedName(a.methods[0], a.name).str(), "A.methodName(String)");
  EXPECT_EQ(qualifiedName(a.methods[1], a.name).str(), "A.m2(java.util.List,int[])");
  EXPECT_EQ(qualifiedName(m.types[0]).str(), "A");
}

TEST(SymbolTable, BuildAndResolve) {
  const std::vector<CdModel> models{parseModel("classdiagram D { class A { int x; } class B {} }")};
  const SymbolTable table = buildSymbolTable(models);
  EXPECT_EQ(table.size(), 2u);
  const SymbolEntry* a = resolve(table, "A");
  ASSERT_NE(a, nullptr);
  EXPECT_EQ(a->kind, SymbolKind::Class);
  EXPECT_EQ(a->name, "A");
  ASSERT_EQ(a->members.size(), 1u);
  EXPECT_EQ(a->members[0], (MemberSummary{"x", "attribute", "int"}));
  EXPECT_NE(resolve(table, "B"), nullptr);
  EXPECT_EQ(resolve(table, "a"), nullptr);
}

TEST(SymbolTable, EmptyResolvesNothing) {
  const SymbolTable table = buildSymbolTable(std::vector<CdModel>{});
  EXPECT_TRUE(table.empty());
  EXPECT_EQ(resolve(table, "X"), nullptr);
}

TEST(SymbolTable, DuplicateAcrossModelsNamesBothLocations) {
  const std::vector<CdModel> models{parseModel("classdiagram P { class A {} }", "p.cd"),
                                    parseModel("classdiagram Q {\n class A {} }", "q.cd")};
  try {
    buildSymbolTable(models);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateSymbol);
    EXPECT_NE(std::string(e.what()).find("p.cd:1:"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("q.cd:2:"), std::string::npos) << e.what();
  }
}

// --- properties over generated models --------------------------------------

namespace {

struct GeneratedModel {
  std::string source;
  std::size_t classes = 0;
  std::size_t attributes = 0;
  std::size_t methods = 0;
  std::size_t parameters = 0;
};

GeneratedModel generate(std::mt19937& rng, const std::string& prefix = "T") {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
  const std::vector<std::string> types = {"int", "String", "java.util.List", "double[]", "boolean", "x.Y[][]"};
  const std::vector<std::string> literals = {"5", "-3", "2.25", "\"s t\"", "true", "false", "null"};
  const std::vector<std::string> vis = {"", "public ", "private ", "protected "};
  GeneratedModel g;
  g.source = "classdiagram M" + prefix + " {\n";
  const int nTypes = pick(5);
  for (int t = 0; t < nTypes; ++t) {
    const std::string name = prefix + std::to_string(t);
    const int kind = pick(3);
    if (kind == 2) {
      g.source += "  enum " + name + " { K0, K1 }\n";
      continue;
    }
    if (kind == 0) ++g.classes;
    g.source += (kind == 0 ? "  class " : "  interface ") + name + " {\n";
    const int nAttr = pick(4);
    for (int a = 0; a < nAttr; ++a) {
      g.source += "    " + vis[pick(4)] + types[pick(6)] + " a" + std::to_string(a);
      if (pick(2)) g.source += " = " + literals[pick(7)];
      g.source += ";\n";
      ++g.attributes;
    }
    const int nMeth = pick(3);
    for (int k = 0; k < nMeth; ++k) {
      g.source += "    " + vis[pick(4)] + types[pick(6)] + " m" + std::to_string(k) + "(";
      const int nParam = pick(3);
      for (int p = 0; p < nParam; ++p) {
        g.source += (p ? ", " : "") + types[pick(6)] + " p" + std::to_string(p);
        ++g.parameters;
      }
      g.source += ")";
      if (pick(3) == 0) g.source += " throws java.io.IOException";
      g.source += ";\n";
      ++g.methods;
    }
    g.source += "  }\n";
  }
  g.source += "}\n";
  return g;
}

}  // namespace

TEST(CdModelProperties, PrintParseRoundTrip) {
  std::mt19937 rng(1234);
  for (int i = 0; i < 200; ++i) {
    const GeneratedModel g = generate(rng);
    const CdModel m = parseModel(g.source);
    const CdModel again = parseModel(printModel(m));
    EXPECT_EQ(m, again) << g.source;
  }
}

TEST(CdModelProperties, CollectCountsMatchDeclarations) {
  std::mt19937 rng(99);
  for (int i = 0; i < 200; ++i) {
    const GeneratedModel g = generate(rng);
    const CdModel m = parseModel(g.source);
    EXPECT_EQ(collectNodes(m, NodeKind::CDClass).size(), g.classes);
    EXPECT_EQ(collectNodes(m, NodeKind::CDAttribute).size(), g.attributes);
    EXPECT_EQ(collectNodes(m, NodeKind::CDMethod).size(), g.methods);
    EXPECT_EQ(collectNodes(m, NodeKind::CDParameter).size(), g.parameters);
  }
}

TEST(CdModelProperties, QualifiedNamesResolveUniquely) {
  std::mt19937 rng(7);
  for (int i = 0; i < 100; ++i) {
    const CdModel m = parseModel(generate(rng).source);
    for (auto kind : {NodeKind::CDClass, NodeKind::CDInterface, NodeKind::CDEnum, NodeKind::CDAttribute,
                      NodeKind::CDMethod, NodeKind::CDParameter}) {
      for (const auto& n : collectNodes(m, kind)) {
        const auto found = findByRef(m, n.ref);
        ASSERT_EQ(found.size(), 1u) << n.ref.str();
        EXPECT_TRUE(found[0] == n);
      }
    }
  }
}

TEST(CdModelProperties, SymbolTableMergeIsOrderIndependent) {
  std::mt19937 rng(42);
  for (int i = 0; i < 50; ++i) {
    const CdModel a = parseModel(generate(rng, "A").source);
    const CdModel b = parseModel(generate(rng, "B").source);
    const CdModel c = parseModel(generate(rng, "C").source);
    const SymbolTable abc = buildSymbolTable(std::vector<CdModel>{a, b, c});
    const SymbolTable cba = buildSymbolTable(std::vector<CdModel>{c, b, a});
    EXPECT_EQ(abc, cba);
  }
}
