#include "jetforge/report.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace jetforge {

SuiteRunOutcome run_suite(const Bundle& bundle, const SuiteDecl& suite, CheckOptions opt,
                          int jobs) {
    CheckRunner runner(bundle, opt);
    SuiteRunOutcome out;
    out.suite = suite.name;
    out.seed = opt.seed;
    out.points = opt.points;
    const size_t n = suite.checks.size();
    std::vector<SuiteEntryOutcome> entries(n);
    if (jobs <= 1) {
        for (size_t i = 0; i < n; ++i) {
            entries[i].result = runner.run(suite.checks[i]);
            entries[i].expected = suite.checks[i].expect;
        }
    } else {
        std::atomic<size_t> next{0};
        auto work = [&]() {
            while (true) {
                size_t i = next.fetch_add(1);
                if (i >= n) break;
                entries[i].result = runner.run(suite.checks[i]);
                entries[i].expected = suite.checks[i].expect;
            }
        };
        std::vector<std::thread> pool;
        int count = std::min<int>(jobs, static_cast<int>(n));
        for (int i = 0; i < count; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    for (auto& e : entries) {
        const char* got = CheckResult::status_name(e.result.status);
        e.matched = (e.expected == "pass" && e.result.status == CheckResult::Status::Pass) ||
                    (e.expected == "fail" && e.result.status == CheckResult::Status::Fail) ||
                    (e.expected == "skipped" && e.result.status == CheckResult::Status::Skipped);
        (void)got;
    }
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return a.result.name < b.result.name;
    });
    out.entries = std::move(entries);
    out.all_matched = true;
    for (const auto& e : out.entries) {
        switch (e.result.status) {
            case CheckResult::Status::Pass: ++out.passed; break;
            case CheckResult::Status::Fail: ++out.failed; break;
            case CheckResult::Status::Skipped: ++out.skipped; break;
        }
        if (!e.matched) out.all_matched = false;
        if (!e.result.engines_agree) out.engines_agree = false;
    }
    return out;
}

std::string render_report_json(const SuiteRunOutcome& o) {
    nlohmann::ordered_json root;
    root["suite"] = o.suite;
    root["seed"] = o.seed;
    root["points"] = o.points;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& e : o.entries) {
        nlohmann::ordered_json c;
        c["name"] = e.result.name;
        c["status"] = CheckResult::status_name(e.result.status);
        c["expected"] = e.expected;
        c["matched"] = e.matched;
        c["detail"] = e.result.detail;
        c["symbolic_zero"] = e.result.symbolic_zero;
        c["oracle"] = e.result.oracle;
        c["engines_agree"] = e.result.engines_agree;
        c["residual_terms"] = e.result.residual_terms;
        c["residual_top"] = e.result.residual_top;
        c["assumptions"] = e.result.assumptions;
        nlohmann::ordered_json notes;
        for (const auto& [k, v] : e.result.notes) notes[k] = v;
        c["notes"] = notes;
        checks.push_back(std::move(c));
    }
    root["checks"] = std::move(checks);
    root["summary"] = {{"pass", o.passed},
                       {"fail", o.failed},
                       {"skipped", o.skipped},
                       {"engines_agree", o.engines_agree},
                       {"expected_matched", o.all_matched}};
    return root.dump(2) + "\n";
}

std::string render_report_txt(const SuiteRunOutcome& o) {
    std::ostringstream os;
    os << "suite " << o.suite << " (seed " << o.seed << ", " << o.points << " points)\n";
    for (const auto& e : o.entries) {
        os << "[" << CheckResult::status_name(e.result.status) << "] " << e.result.name
           << " (expected " << e.expected << (e.matched ? "" : ", MISMATCH") << ")\n";
        if (!e.result.detail.empty()) os << "    " << e.result.detail << "\n";
        if (!e.result.oracle.empty()) os << "    oracle: " << e.result.oracle << "\n";
        if (!e.result.engines_agree) os << "    WARNING: symbolic and numeric verdicts disagree\n";
        for (const auto& r : e.result.residual_top) os << "    residual: " << r << "\n";
        if (!e.result.assumptions.empty()) {
            os << "    nonvanishing:";
            for (const auto& a : e.result.assumptions) os << " " << a << ";";
            os << "\n";
        }
        for (const auto& [k, v] : e.result.notes) {
            std::string vv = v.size() > 240 ? v.substr(0, 240) + "..." : v;
            os << "    " << k << ": " << vv << "\n";
        }
    }
    os << "summary: " << o.passed << " pass, " << o.failed << " fail, " << o.skipped
       << " skipped; expectations " << (o.all_matched ? "matched" : "NOT matched") << "\n";
    return os.str();
}

void write_reports(const SuiteRunOutcome& o, const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream(std::filesystem::path(dir) / "report.json") << render_report_json(o);
    std::ofstream(std::filesystem::path(dir) / "report.txt") << render_report_txt(o);
}

} // namespace jetforge
