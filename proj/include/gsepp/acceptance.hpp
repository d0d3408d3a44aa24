#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gsepp/mbqec.hpp"

// The eleven acceptance criteria as runnable checks. Each check records what
// it expected and what it measured; `verify` and the acceptance binary print
// one line per criterion.

namespace gsepp {

enum class Suite { Fast, Full };
Suite parse_suite(const std::string& s);
std::string to_string(Suite s);

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string expected;
  std::string actual;
  /// Extra lines (skipped points, convention notes, reported values).
  std::vector<std::string> notes;
  double seconds = 0.0;
};

inline constexpr int kCriteria = 11;

/// Runs criterion `id` (1..kCriteria). An exception inside a check is
/// reported as a failure; only an out-of-range id throws.
CriterionResult run_criterion(int id, Suite suite);

/// "PASS  3  title | expected ... | actual ... | 1.2 s".
std::string format_result(const CriterionResult& r);

/// Error-free Bell patterns of the 3-qubit repetition code with their
/// corrections, in table order.
std::vector<std::pair<std::string, char>> repetition_pattern_reference();
/// Empty when the rows match that table exactly, else a description of the
/// first difference.
std::string pattern_table_mismatch(const std::vector<PatternRow>& rows);

}  // namespace gsepp
