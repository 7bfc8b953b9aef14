#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "tunit/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kFixtures = TUNIT_FIXTURES;
const std::string kSuite = (kFixtures / "suite" / "suite.json").string();

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = tunit::cli::main(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "tunit_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

fs::path corruptedSuite(const std::string& name) {
  const fs::path root = scratch(name);
  fs::copy(kFixtures, root / "fixtures", fs::copy_options::recursive);
  const fs::path suite = root / "fixtures" / "suite" / "suite.json";
  json doc = json::parse(std::ifstream(suite));
  doc["tests"][0]["assertions"][1]["expected"] = "public String otherName = 5;";
  std::ofstream(suite) << doc.dump(2);
  return suite;
}

}  // namespace

TEST(Cli, RunSampleSuitePasses) {
  const auto r = cli({"run", kSuite, "--output-dir", scratch("pass").string()});
  EXPECT_EQ(r.code, tunit::cli::kExitPass) << r.out << r.err;
  const auto ls = lines(r.out);
  ASSERT_FALSE(ls.empty());
  EXPECT_EQ(ls.back(), "10 case(s): 10 passed, 0 failed");
  EXPECT_EQ(ls.front().rfind("PASS attribute_with_value (", 0), 0u) << ls.front();
  EXPECT_TRUE(fs::exists(fs::temp_directory_path() / "tunit_cli_test" / "pass" / "two_attributes_trace" / "001_A.b.out"));
}

TEST(Cli, ListAndFilter) {
  auto r = cli({"list", kSuite});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out).size(), 10u);
  r = cli({"list", kSuite, "--filter", "policy_"});
  EXPECT_EQ(lines(r.out).size(), 6u);
  r = cli({"run", kSuite, "--filter", "attribute_without", "--output-dir", scratch("filter").string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out).back(), "1 case(s): 1 passed, 0 failed");
}

TEST(Cli, ConfigurationErrorsExitTwo) {
  EXPECT_EQ(cli({"run", "/nonexistent/suite.json"}).code, tunit::cli::kExitConfig);
  EXPECT_EQ(cli({"list", "/nonexistent/suite.json"}).code, tunit::cli::kExitConfig);
  EXPECT_EQ(cli({"run", kSuite, "--report", "xml"}).code, tunit::cli::kExitConfig);
  EXPECT_EQ(cli({"frobnicate"}).code, tunit::cli::kExitConfig);
  EXPECT_EQ(cli({}).code, tunit::cli::kExitConfig);
  const fs::path dir = scratch("badjson");
  std::ofstream(dir / "suite.json") << "{\"templates\": 3}";
  const auto r = cli({"run", (dir / "suite.json").string()});
  EXPECT_EQ(r.code, tunit::cli::kExitConfig);
  EXPECT_NE(r.err.find("/templates"), std::string::npos) << r.err;
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(cli({"--help"}).code, 0); }

TEST(Cli, JsonlSchema) {
  const auto r = cli({"run", kSuite, "--report", "jsonl", "--output-dir", scratch("jsonl").string()});
  EXPECT_EQ(r.code, 0);
  const auto ls = lines(r.out);
  ASSERT_GT(ls.size(), 1u);
  std::size_t assertions = 0;
  for (std::size_t i = 0; i + 1 < ls.size(); ++i) {
    const json doc = json::parse(ls[i]);
    ASSERT_TRUE(doc.is_object());
    EXPECT_EQ(doc.size(), 5u) << ls[i];
    EXPECT_TRUE(doc.at("case").is_string());
    EXPECT_TRUE(doc.at("target").is_string());
    EXPECT_TRUE(doc.at("check").is_string());
    EXPECT_TRUE(doc.at("passed").is_boolean());
    EXPECT_TRUE(doc.at("explanation").is_string());
    ++assertions;
  }
  const json summary = json::parse(ls.back());
  EXPECT_EQ(summary["summary"]["cases"], 10);
  EXPECT_EQ(summary["summary"]["passed"], 10);
  EXPECT_EQ(summary["summary"]["failed"], 0);
  EXPECT_GT(assertions, 10u);
}

TEST(Cli, CorruptedExpectationFailsExactlyOnce) {
  const fs::path suite = corruptedSuite("corrupt");
  const auto r = cli({"run", suite.string(), "--report", "jsonl", "--output-dir", (suite.parent_path() / "out").string()});
  EXPECT_EQ(r.code, tunit::cli::kExitFail);
  std::vector<json> failed;
  for (const auto& l : lines(r.out)) {
    const json doc = json::parse(l);
    if (doc.contains("passed") && !doc["passed"].get<bool>()) failed.push_back(doc);
  }
  ASSERT_EQ(failed.size(), 1u);
  EXPECT_EQ(failed[0]["case"], "attribute_with_value");
  EXPECT_EQ(failed[0]["check"], "ast_equals");
  const std::string why = failed[0]["explanation"];
  EXPECT_NE(why.find("attributeName"), std::string::npos) << why;
  EXPECT_NE(why.find("otherName"), std::string::npos) << why;
}

TEST(Cli, FailFastStopsAfterFirstFailure) {
  const fs::path suite = corruptedSuite("failfast");
  const auto r = cli({"run", suite.string(), "--fail-fast", "--output-dir", (suite.parent_path() / "out").string()});
  EXPECT_EQ(r.code, tunit::cli::kExitFail);
  EXPECT_EQ(lines(r.out).back(), "1 case(s): 0 passed, 1 failed");
}
