#pragma once

// Command-line front end:
//
//   tunit run <manifest> [--output-dir DIR] [--report text|jsonl]
//                        [--fail-fast] [--filter SUBSTRING]
//   tunit list <manifest> [--filter SUBSTRING]
//
// Exit codes: 0 all cases passed, 1 at least one case failed, 2 the
// manifest or command line could not be used.

#include <algorithm>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tunit/error.hpp"
#include "tunit/runner.hpp"

namespace tunit::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;

struct Options {
  std::string manifest;
  std::string outputDir;
  std::string report = "text";
  bool failFast = false;
  std::string filter;
};

inline std::vector<TestCase> selectCases(const Options& opts) {
  std::vector<TestCase> cases = loadManifest(opts.manifest);
  if (!opts.filter.empty()) {
    std::erase_if(cases, [&](const TestCase& tc) { return tc.name.find(opts.filter) == std::string::npos; });
  }
  return cases;
}

inline int runCases(const Options& opts, std::ostream& out, std::ostream& err) {
  std::vector<TestCase> cases;
  try {
    cases = selectCases(opts);
  } catch (const Error& e) {
    err << "tunit: " << e.what() << '\n';
    return kExitConfig;
  }
  const bool jsonl = opts.report == "jsonl";
  std::size_t ran = 0;
  std::size_t passed = 0;
  for (auto& tc : cases) {
    if (!opts.outputDir.empty()) {
      tc.outputDir = std::filesystem::path(opts.outputDir) / caseDirName(tc.name);
    } else if (tc.outputDir.empty()) {
      tc.outputDir = defaultOutputRoot() / caseDirName(tc.name);
    }
    const auto [trace, result] = runTestCase(tc);
    ++ran;
    if (result.passed()) ++passed;
    if (jsonl) writeJsonlCase(out, result);
    else writeTextCase(out, result, trace);
    if (opts.failFast && !result.passed()) break;
  }
  if (jsonl) {
    writeJsonlSummary(out, ran, passed);
  } else {
    out << ran << " case(s): " << passed << " passed, " << ran - passed << " failed\n";
  }
  return passed == ran ? kExitPass : kExitFail;
}

inline int listCases(const Options& opts, std::ostream& out, std::ostream& err) {
  try {
    for (const auto& tc : selectCases(opts)) out << tc.name << '\n';
  } catch (const Error& e) {
    err << "tunit: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitPass;
}

/// Entry point. `args` excludes the program name.
inline int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unit tests for code-generator templates", "tunit"};
  app.require_subcommand(1);
  Options opts;

  auto* run = app.add_subcommand("run", "Execute every test case in a manifest");
  run->add_option("manifest", opts.manifest, "Test manifest (JSON)")->required();
  run->add_option("--output-dir", opts.outputDir, "Root for per-case output directories (default ./tunit-out)");
  run->add_option("--report", opts.report, "Report format")->check(CLI::IsMember({"text", "jsonl"}));
  run->add_flag("--fail-fast", opts.failFast, "Stop after the first failing case");
  run->add_option("--filter", opts.filter, "Only cases whose name contains this text");

  auto* list = app.add_subcommand("list", "Print the case names of a manifest");
  list->add_option("manifest", opts.manifest, "Test manifest (JSON)")->required();
  list->add_option("--filter", opts.filter, "Only cases whose name contains this text");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitConfig;
  }
  if (run->parsed()) return runCases(opts, out, err);
  return listCases(opts, out, err);
}

inline int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
  return main(args, out, err);
}

}  // namespace tunit::cli
