#pragma once

#include "jetforge/checks.hpp"

namespace jetforge {

struct SuiteEntryOutcome {
    CheckResult result;
    std::string expected; // pass | fail | skipped
    bool matched = false;
};

struct SuiteRunOutcome {
    std::string suite;
    std::uint64_t seed = 0;
    int points = 0;
    std::vector<SuiteEntryOutcome> entries; // ordered by check name
    int passed = 0, failed = 0, skipped = 0;
    bool all_matched = false;
    bool engines_agree = true;
};

/// Execute every check in the manifest (optionally in parallel); entries are
/// merged by check name so the outcome is independent of scheduling.
SuiteRunOutcome run_suite(const Bundle& bundle, const SuiteDecl& suite, CheckOptions opt,
                          int jobs = 1);

/// Deterministic serializations: byte-identical for identical inputs and
/// seed.  Wall-clock times never enter these artifacts.
std::string render_report_json(const SuiteRunOutcome& o);
std::string render_report_txt(const SuiteRunOutcome& o);

/// Write report.json and report.txt under dir (created if needed).
void write_reports(const SuiteRunOutcome& o, const std::string& dir);

} // namespace jetforge
