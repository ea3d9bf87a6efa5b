#pragma once

#include <string>
#include <vector>

#include "minij/program.hpp"

namespace minij {

enum class Outcome { Pass, FailAssert, FailError, FailTimeout };

const char* outcome_name(Outcome o);  // "pass", "fail_assert", "fail_error", "fail_timeout"

struct TestVerdict {
    std::string test_name;
    Outcome outcome = Outcome::Pass;
    std::string detail;  // assertion location, runtime error message, ...
};

/// Deterministic execution limit: every statement and expression evaluation
/// costs one step; array allocation costs its length. Exhaustion yields
/// fail_timeout and cannot be caught in-language.
struct StepBudget {
    long max_steps = 1'000'000;
};

/// Names of all `test_*` functions, in file order then declaration order.
std::vector<std::string> list_tests(const std::vector<SourceFile>& files);

/// Runs the selected tests (all tests when `selection` is empty) against the
/// program formed by all files. Tests are independent: globals are reset to
/// defaults and re-initialized (files in order, declarations top-down) before
/// each test. `assert` failure → fail_assert; uncaught throw or runtime error
/// (division by zero, index out of bounds, bad shift, missing return, ...) →
/// fail_error; step budget exhaustion → fail_timeout.
/// Throws UnknownTest for a selection entry with no matching test.
std::vector<TestVerdict> run_tests(const std::vector<SourceFile>& files,
                                   const std::vector<std::string>& selection,
                                   StepBudget budget = {});

}  // namespace minij
