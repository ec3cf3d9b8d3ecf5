#include <doctest.h>

#include "jetforge/report.hpp"

using namespace jetforge;

namespace {

Bundle load_manifest(const char* rel) {
    Bundle b;
    b.load(std::string(JETFORGE_PAPER_DIR) + "/" + rel);
    REQUIRE(b.ok());
    return b;
}

} // namespace

TEST_CASE("suite reports are byte-identical across runs and job counts") {
    Bundle b = load_manifest("mutations-suite.jf");
    CheckOptions opt;
    opt.seed = 7;
    SuiteRunOutcome o1 = run_suite(b, b.suite("mutations"), opt, 1);
    SuiteRunOutcome o2 = run_suite(b, b.suite("mutations"), opt, 3);
    CHECK(render_report_json(o1) == render_report_json(o2));
    CHECK(render_report_txt(o1) == render_report_txt(o2));
    CHECK(o1.all_matched);

    CheckOptions other = opt;
    other.seed = 8;
    SuiteRunOutcome o3 = run_suite(b, b.suite("mutations"), other, 1);
    CHECK(render_report_json(o1) != render_report_json(o3)); // seed is part of the report
}

TEST_CASE("mutation controls fail with agreeing engines") {
    Bundle b = load_manifest("mutations-suite.jf");
    CheckOptions opt;
    opt.seed = 7;
    SuiteRunOutcome o = run_suite(b, b.suite("mutations"), opt, 2);
    REQUIRE(o.entries.size() == 6);
    for (const auto& e : o.entries) {
        CAPTURE(e.result.name);
        CHECK(e.result.status == CheckResult::Status::Fail);
        CHECK(e.expected == "fail");
        CHECK(e.matched);
        CHECK(!e.result.symbolic_zero);
        CHECK(!e.result.oracle_zero);
        CHECK(e.result.engines_agree);
    }
    CHECK(o.all_matched);
}

TEST_CASE("empty manifest runs clean") {
    Bundle b;
    ParseResult pr = parse_source("suite empty { }", "mem.jf");
    REQUIRE(pr.ok());
    const auto* s = std::get_if<SuiteDecl>(&pr.file.decls[0]);
    REQUIRE(s);
    CheckOptions opt;
    SuiteRunOutcome o = run_suite(b, *s, opt, 1);
    CHECK(o.entries.empty());
    CHECK(o.all_matched);
}

TEST_CASE("missing references fail the suite") {
    Bundle b = load_manifest("rmmdKP.jf");
    ParseResult pr = parse_source("suite broken { check compat nosuch expect pass }", "mem.jf");
    REQUIRE(pr.ok());
    const auto* s = std::get_if<SuiteDecl>(&pr.file.decls[0]);
    REQUIRE(s);
    CheckOptions opt;
    SuiteRunOutcome o = run_suite(b, *s, opt, 1);
    REQUIRE(o.entries.size() == 1);
    CHECK(o.entries[0].result.status == CheckResult::Status::Fail);
    CHECK(!o.all_matched);
}

TEST_CASE("expected status semantics") {
    Bundle b = load_manifest("c15.jf");
    ParseResult pr =
        parse_source("suite s { check compat c15 expect fail }", "mem.jf");
    REQUIRE(pr.ok());
    const auto* s = std::get_if<SuiteDecl>(&pr.file.decls[0]);
    CheckOptions opt;
    SuiteRunOutcome o = run_suite(b, *s, opt, 1);
    CHECK(o.entries[0].result.status == CheckResult::Status::Pass);
    CHECK(!o.entries[0].matched); // passed but fail was expected
    CHECK(!o.all_matched);
}
