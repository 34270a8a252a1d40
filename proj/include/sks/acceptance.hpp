#pragma once

// Acceptance suite: end-to-end checks that exercise the full solver stack
// (transforms, operators, certified model validation, stepping, fixed-point
// solve, ledgers, ensembles, estimators) against pinned tolerances.  Each
// criterion is independent and reports a single pass/fail verdict with a
// human-readable detail string.

#include <string>
#include <vector>

namespace sks {

struct CriterionResult {
  int id = 0;               // 1-based criterion number
  std::string name;         // short slug, stable across releases
  bool pass = false;
  std::string detail;       // measured values and the pinned bounds
  double seconds = 0.0;     // wall-clock runtime of the check
};

// Number of criteria in the suite.
int criteria_count();

// Runs a single criterion (id in [1, criteria_count()]).  Throws
// std::invalid_argument for an unknown id; any internal error is caught and
// reported as a failure with the exception text in `detail`.
CriterionResult run_criterion(int id);

// Runs every criterion in order.
std::vector<CriterionResult> run_all_criteria();

// One line per criterion: "criterion <id> <name>: PASS|FAIL — <detail>".
std::string format_criterion_line(const CriterionResult& r);

// JSON document summarizing a set of results (used by the `verify` command).
std::string criteria_summary_json(const std::vector<CriterionResult>& rs);

}  // namespace sks
