// Prints one PASS/FAIL line per acceptance criterion.
//
// Exit status is 0 when the failing criteria are exactly those named by
// --expect-fail, so a known, recorded failure does not break ctest while an
// unexpected failure (or an unexpected pass) does.

#include <algorithm>
#include <iostream>
#include <set>
#include <vector>

#include <CLI11.hpp>

#include "gsepp/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"gsepp acceptance criteria"};
  std::string suite = "fast";
  std::vector<int> only, expect_fail;
  app.add_option("--suite", suite, "fast or full")->check(CLI::IsMember({"fast", "full"}));
  app.add_option("--only", only, "criteria to run (default all)")->check(CLI::Range(1, gsepp::kCriteria));
  app.add_option("--expect-fail", expect_fail, "criteria known to fail")->check(CLI::Range(1, gsepp::kCriteria));
  CLI11_PARSE(app, argc, argv);

  if (only.empty())
    for (int i = 1; i <= gsepp::kCriteria; ++i) only.push_back(i);
  const auto s = gsepp::parse_suite(suite);
  std::set<int> failed;
  for (int id : only) {
    const auto r = gsepp::run_criterion(id, s);
    std::cout << gsepp::format_result(r) << std::endl;
    if (!r.passed) failed.insert(id);
  }

  std::set<int> expected;
  for (int id : expect_fail)
    if (std::find(only.begin(), only.end(), id) != only.end()) expected.insert(id);
  std::cout << (only.size() - failed.size()) << "/" << only.size() << " criteria pass";
  if (!expected.empty()) std::cout << " (" << expected.size() << " expected to fail)";
  std::cout << std::endl;
  if (failed != expected) {
    for (int id : failed)
      if (!expected.count(id)) std::cout << "unexpected failure: criterion " << id << std::endl;
    for (int id : expected)
      if (!failed.count(id)) std::cout << "expected failure now passes: criterion " << id << std::endl;
    return 1;
  }
  return 0;
}
