#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "jetforge/report.hpp"

using namespace jetforge;

namespace {

namespace fs = std::filesystem;

struct GlobalOpts {
    std::uint64_t seed = 1;
    int points = 5;
    int max_order = 6;
    int jobs = 1;
    std::string report_dir;
    std::string paper_dir = "paper";
};

CheckOptions check_options(const GlobalOpts& g) {
    CheckOptions o;
    o.seed = g.seed;
    o.points = g.points;
    o.max_order = g.max_order;
    return o;
}

/// Load either a single .jf file (plus its use-chain) or the full paper
/// bundle when the argument is a bare name.
Bundle load_for(const GlobalOpts& g, const std::string& arg, std::string& subject) {
    Bundle b;
    if (arg.size() > 3 && arg.substr(arg.size() - 3) == ".jf" && fs::exists(arg)) {
        b.load(arg);
        // the subject is the entity declared in that file
        std::ifstream in(arg);
        std::ostringstream buf;
        buf << in.rdbuf();
        ParseResult pr = parse_source(buf.str(), arg);
        for (const auto& d : pr.file.decls) {
            if (const auto* c = std::get_if<CoveringDecl>(&d)) subject = c->name;
            if (const auto* iv = std::get_if<InverseDecl>(&d)) subject = iv->name;
        }
    } else {
        b = load_paper_dir(g.paper_dir);
        subject = arg;
    }
    if (!b.ok()) {
        for (const auto& d : b.diagnostics()) std::cerr << d.to_string() << "\n";
        throw Error(ErrorCode::BadInput, "definitions failed to load");
    }
    return b;
}

int report_single(const CheckResult& r) {
    std::cout << "[" << CheckResult::status_name(r.status) << "] " << r.name << "\n";
    if (!r.detail.empty()) std::cout << "    " << r.detail << "\n";
    if (!r.oracle.empty()) std::cout << "    oracle: " << r.oracle << "\n";
    for (const auto& e : r.residual_top) std::cout << "    residual: " << e << "\n";
    if (!r.assumptions.empty()) {
        std::cout << "    nonvanishing:";
        for (const auto& a : r.assumptions) std::cout << " " << a << ";";
        std::cout << "\n";
    }
    for (const auto& [k, v] : r.notes) {
        std::string vv = v.size() > 200 ? v.substr(0, 200) + "..." : v;
        std::cout << "    " << k << ": " << vv << "\n";
    }
    std::cout << "    wall: " << static_cast<long>(r.wall_ms) << " ms\n";
    return r.status == CheckResult::Status::Pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"jetforge: mechanical verification of coverings, Backlund transformations\n"
                 "and Maurer-Cartan structure equations for the rmmdKP equation family"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "oracle suite seed")->envname("JETFORGE_SEED");
    app.add_option("--points,-n", g.points, "oracle sample points per check");
    app.add_option("--max-order", g.max_order, "prolongation order cap");
    app.add_option("--jobs,-j", g.jobs, "run suite checks concurrently");
    app.add_option("--report-dir", g.report_dir, "directory for report.json / report.txt");
    app.add_option("--paper-dir", g.paper_dir, "bundled definitions directory");

    app.fallthrough();
    auto* check = app.add_subcommand("check", "run a single named verification");
    check->fallthrough();
    check->require_subcommand(1);
    std::string compat_arg, offshell_arg, ab_cov, ab_eq;
    auto* compat = check->add_subcommand("compat", "covering compatibility");
    compat->fallthrough();
    compat->add_option("covering", compat_arg)->required();
    auto* offshell = check->add_subcommand("offshell", "off-shell factorization");
    offshell->fallthrough();
    offshell->add_option("covering", offshell_arg)->required();
    auto* autobt = check->add_subcommand("autobacklund", "pseudopotential solves the target");
    autobt->fallthrough();
    autobt->add_option("covering", ab_cov)->required();
    autobt->add_option("equation", ab_eq)->required();

    auto* derive = app.add_subcommand("derive", "derive a quotient equation");
    derive->fallthrough();
    derive->require_subcommand(1);
    std::string q_subject, q_target, q_equals, q_kappa0;
    auto* quotient = derive->add_subcommand("quotient", "inverse-system compatibility");
    quotient->fallthrough();
    quotient->add_option("subject", q_subject, "covering or inverse system")->required();
    quotient->add_option("--target", q_target, "factor through this equation");
    quotient->add_option("--equals", q_equals, "match this displayed expression");
    quotient->add_option("--kappa0", q_kappa0, "run the kappa=0 case against this expression");

    auto* verify = app.add_subcommand("verify", "verify a structure equation");
    verify->fallthrough();
    verify->require_subcommand(1);
    std::string s_name;
    auto* structure = verify->add_subcommand("structure", "d(form) against its declaration");
    structure->fallthrough();
    structure->add_option("name", s_name)->required();

    auto* solve = app.add_subcommand("solve", "solve for undetermined coefficients");
    solve->fallthrough();
    solve->require_subcommand(1);
    std::string c_name;
    auto* coeffs = solve->add_subcommand("coeffs", "unknowns of a structure equation");
    coeffs->fallthrough();
    coeffs->add_option("name", c_name)->required();

    auto* oracle_cmd = app.add_subcommand("oracle", "numeric oracle utilities");
    oracle_cmd->fallthrough();
    oracle_cmd->require_subcommand(1);
    std::string eval_file;
    auto* oracle_eval = oracle_cmd->add_subcommand("eval", "evaluate expressions at sample points");
    oracle_eval->fallthrough();
    oracle_eval->add_option("file", eval_file, "a .jf file of expr declarations")->required();

    auto* suite_cmd = app.add_subcommand("suite", "run a suite manifest");
    suite_cmd->fallthrough();
    std::string manifest;
    suite_cmd->add_option("manifest", manifest, "a .jf file containing a suite")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (compat->parsed()) {
            std::string subject;
            Bundle b = load_for(g, compat_arg, subject);
            return report_single(CheckRunner(b, check_options(g)).check_compat(subject));
        }
        if (offshell->parsed()) {
            std::string subject;
            Bundle b = load_for(g, offshell_arg, subject);
            return report_single(CheckRunner(b, check_options(g)).check_offshell(subject));
        }
        if (autobt->parsed()) {
            std::string subject;
            Bundle b = load_for(g, ab_cov, subject);
            return report_single(
                CheckRunner(b, check_options(g)).check_autobacklund(subject, ab_eq));
        }
        if (quotient->parsed()) {
            std::string subject;
            Bundle b = load_for(g, q_subject, subject);
            CheckRunner runner(b, check_options(g));
            if (!q_equals.empty())
                return report_single(runner.check_quotient_equals(subject, q_equals, q_kappa0));
            if (q_target.empty())
                throw Error(ErrorCode::BadInput, "derive quotient needs --target or --equals");
            if (b.has_covering(subject))
                return report_single(runner.check_quotient_derive(subject, q_target));
            throw Error(ErrorCode::BadInput, "no covering named '" + subject + "'");
        }
        if (structure->parsed()) {
            std::string subject;
            Bundle b = load_for(g, s_name, subject);
            return report_single(CheckRunner(b, check_options(g)).check_structure(subject));
        }
        if (coeffs->parsed()) {
            std::string subject;
            Bundle b = load_for(g, c_name, subject);
            return report_single(
                CheckRunner(b, check_options(g)).check_solve_coefficients(subject));
        }
        if (oracle_eval->parsed()) {
            Bundle b;
            b.load(eval_file);
            if (!b.ok()) {
                for (const auto& d : b.diagnostics()) std::cerr << d.to_string() << "\n";
                return 1;
            }
            std::ifstream in(eval_file);
            std::ostringstream buf;
            buf << in.rdbuf();
            ParseResult pr = parse_source(buf.str(), eval_file);
            for (const auto& d : pr.file.decls) {
                const auto* ex = std::get_if<ExprDecl>(&d);
                if (!ex) continue;
                const RatExpr& e = b.expr(ex->name);
                AssumptionSet a;
                a.add_expr(e);
                for (int i = 0; i < g.points; ++i) {
                    SamplePoint pt = sample(derive_seed(g.seed, ex->name) + i, e.vars(), a, {});
                    std::cout << ex->name << " @ kappa=" << pt.kappa << " seed=" << pt.seed
                              << " -> " << e.eval(mpq_class(pt.kappa), pt.values).get_str()
                              << "\n";
                }
            }
            return 0;
        }
        if (suite_cmd->parsed()) {
            Bundle b;
            b.load(manifest);
            if (!b.ok()) {
                for (const auto& d : b.diagnostics()) std::cerr << d.to_string() << "\n";
                return 1;
            }
            auto names = b.suite_names();
            if (names.empty()) {
                std::cerr << "no suite declared in " << manifest << "\n";
                return 1;
            }
            SuiteRunOutcome o = run_suite(b, b.suite(names.front()), check_options(g), g.jobs);
            std::cout << render_report_txt(o);
            double total = 0;
            for (const auto& e : o.entries) total += e.result.wall_ms;
            std::cout << "wall: " << static_cast<long>(total) << " ms total\n";
            if (!g.report_dir.empty()) write_reports(o, g.report_dir);
            return o.all_matched ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
