// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Everything runs at full scale (1000-case property suites).

#include <chrono>
#include <iostream>

#include "generators.hpp"
#include "jetforge/report.hpp"

using namespace jetforge;

namespace {

int g_failures = 0;

void criterion(int n, const std::string& what, bool ok, const std::string& extra = "") {
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << n << ": " << what;
    if (!extra.empty()) std::cout << " (" << extra << ")";
    std::cout << std::endl;
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string note(const CheckResult& r, const std::string& key) {
    for (const auto& [k, v] : r.notes)
        if (k == key) return v;
    return "";
}

} // namespace

int main() {
    Bundle bundle = load_paper_dir(JETFORGE_PAPER_DIR);
    for (const auto& d : bundle.diagnostics()) std::cout << d.to_string() << std::endl;
    if (!bundle.ok()) {
        std::cout << "[FAIL] bundled definitions failed to load" << std::endl;
        return 1;
    }
    CheckOptions opt;
    opt.seed = 7;
    opt.points = 5;
    CheckRunner runner(bundle, opt);

    // 1. covering validity with oracle confirmation, kappa in {1,2,3}
    {
        bool ok = true;
        std::string slowest;
        for (const char* c : {"c2", "c15", "c16", "c17"}) {
            auto t0 = std::chrono::steady_clock::now();
            CheckResult r = runner.check_compat(c);
            double secs = seconds_since(t0);
            if (r.status != CheckResult::Status::Pass || !r.symbolic_zero || !r.oracle_zero ||
                secs >= 60.0)
                ok = false;
            slowest += std::string(c) + "=" + std::to_string(secs).substr(0, 5) + "s ";
        }
        criterion(1, "covering compatibility for c2, c15, c16, c17 with oracle confirmation",
                  ok, slowest);
    }

    // 2. elimination of the base symbol factors exactly
    {
        CheckResult r = runner.check_eliminate("c2", "rmmdKP");
        criterion(2, "eliminating w from the u-covering yields the central equation exactly",
                  r.status == CheckResult::Status::Pass);
    }

    // 3. quotient derivation with pinned cofactor
    {
        CheckResult r = runner.check_quotient_derive("c15", "rmmdKP_I");
        bool ok = r.status == CheckResult::Status::Pass;
        std::string cof = note(r, "cofactor");
        bool pinned = cof == "-(kappa+2)*q[x]^(-1)*u[x]^(kappa+2)";
        criterion(3, "quotient of the q-covering factors through its second-order equation",
                  ok && pinned, "cofactor " + cof);
    }

    // 4. factorized compatibility reproduced exactly
    {
        CheckResult r = runner.check_quotient_equals("inv19", "compat20", "");
        bool ok = r.status == CheckResult::Status::Pass;
        criterion(4, "inverse r-system residual reproduces the displayed factorization exactly",
                  ok, "orientation " + note(r, "orientation"));
    }

    // 5. kappa = 0 specialization and kappa = 1 negative control
    {
        AssumptionSet a;
        const InverseSystem& inv = bundle.inverse("inv19");
        KappaZeroResult kz = kappa_zero_case(inv, bundle.expr("G"), a);
        bool ok = kz.cofactor_at_0.has_value() && kz.negative_control_at_1 &&
                  !kz.residual_at_0.is_zero();
        criterion(5, "at kappa=0 the residual is a unit multiple of G; at kappa=1 it is not",
                  ok,
                  kz.cofactor_at_0 ? "unit " + print_expr(*kz.cofactor_at_0) : "no unit");
    }

    // 6. third-order equation derivation
    {
        auto t0 = std::chrono::steady_clock::now();
        CheckResult r = runner.check_third_order("inv19", "H", "eq21");
        double secs = seconds_since(t0);
        bool ok = r.status == CheckResult::Status::Pass && secs < 300.0 &&
                  note(r, "u.dependence.cancels") == "yes" &&
                  note(r, "linear.in.H.derivatives") == "yes" &&
                  note(r, "cofactor") == "-((kappa+1)/(2*kappa^2+3*kappa))*r[x]^(-2)";
        criterion(6, "third-order quotient equation reproduced up to the derived cofactor", ok,
                  std::to_string(secs).substr(0, 5) + "s");
    }

    // 7. auto-Backlund property
    {
        auto t0 = std::chrono::steady_clock::now();
        CheckResult r = runner.check_autobacklund("c17", "rmmdKP");
        double secs = seconds_since(t0);
        criterion(7, "the s-covering is an auto-Backlund transformation",
                  r.status == CheckResult::Status::Pass && secs < 300.0,
                  std::to_string(secs).substr(0, 5) + "s");
    }

    // 8. structure equations with the ambiguity protocol
    {
        bool ok = true;
        std::string detail;
        for (const char* se : {"dxi1", "dtheta0", "dtheta2", "dxi2", "dxi3"}) {
            CheckResult r = runner.check_structure(se);
            bool this_ok = r.status == CheckResult::Status::Pass && r.symbolic_zero &&
                           r.oracle_zero && r.engines_agree;
            if (std::string(se) == "dxi2" &&
                note(r, "reading.dxi2_displayed").empty())
                this_ok = false; // the source reading must be reported
            if (std::string(se) == "dtheta2" && note(r, "adopted.theta23").empty())
                this_ok = false; // the sign-token protocol must be reported
            if (!this_ok) detail += std::string(se) + " ";
            ok = ok && this_ok;
        }
        criterion(8, "five structure equations verified with both engines agreeing", ok, detail);
    }

    // 9. coefficient recovery from the theta3 structure equation
    {
        CheckResult r = runner.check_solve_coefficients("dtheta3");
        bool ok = r.status == CheckResult::Status::Pass && !note(r, "A130").empty() &&
                  !note(r, "A132").empty() && !note(r, "A133").empty();
        criterion(9, "A130, A132, A133 solved uniquely with zero back-substitution residual", ok);
    }

    // 10. engine soundness properties, 1000 cases each
    {
        std::mt19937_64 rng(99);
        const Equation& eq = bundle.equation("rmmdKP");

        bool idem = true;
        for (int i = 0; i < 1000 && idem; ++i) {
            RatExpr e = testgen::random_expr(rng, 3);
            idem = normalize_raw(raw_from_ratexpr(e)) == e;
        }
        criterion(10, "normalize is idempotent (1000 cases)", idem);

        bool ring = true;
        for (int i = 0; i < 1000 && ring; ++i) {
            RatExpr a = testgen::random_expr(rng, 2), b = testgen::random_expr(rng, 2),
                    c = testgen::random_expr(rng, 2);
            ring = ((a + b) + c - (a + (b + c))).is_zero() &&
                   (a * (b + c) - a * b - a * c).is_zero();
        }
        criterion(10, "ring laws hold (1000 cases)", ring);

        bool leibniz = true;
        {
            Context free_ctx(std::nullopt, {}, {"u"});
            for (int i = 0; i < 1000 && leibniz; ++i) {
                RatExpr a = testgen::random_expr(rng, 2), b = testgen::random_expr(rng, 2);
                Dir dir = static_cast<Dir>(rng() % 3);
                leibniz = (free_ctx.total_derivative(a * b, dir) -
                           free_ctx.total_derivative(a, dir) * b -
                           a * free_ctx.total_derivative(b, dir))
                              .is_zero();
            }
        }
        criterion(10, "total derivative satisfies the Leibniz rule (1000 cases)", leibniz);

        bool commute = true;
        {
            Context ctx(eq, {}, {});
            for (int i = 0; i < 1000 && commute; ++i) {
                RatExpr e = testgen::random_expr(rng, 2, /*max_ny=*/1);
                Dir a = static_cast<Dir>(rng() % 3), b = static_cast<Dir>(rng() % 3);
                commute = ctx.commutation_check(e, a, b).is_zero();
            }
        }
        criterion(10, "restricted total derivatives commute (1000 cases)", commute);

        bool ddzero = true;
        {
            static const CobasisElt elts[] = {
                CobasisElt::d_coord(Dir::T), CobasisElt::d_coord(Dir::X),
                CobasisElt::d_coord(Dir::Y), CobasisElt::d_jet(JetVar{"u", {0, 1, 0}}),
                CobasisElt::d_jet(JetVar{"u", {0, 0, 1}})};
            for (int i = 0; i < 1000 && ddzero; ++i) {
                OneForm f;
                f.add_term(elts[rng() % 5], testgen::random_expr(rng, 2));
                f.add_term(elts[rng() % 5], testgen::random_expr(rng, 2));
                ddzero = exterior_d(exterior_d(f)).comps.empty();
            }
        }
        criterion(10, "d of d vanishes (1000 cases)", ddzero);

        bool antisym = true;
        {
            static const CobasisElt elts[] = {
                CobasisElt::d_coord(Dir::T), CobasisElt::d_coord(Dir::X),
                CobasisElt::d_jet(JetVar{"u", {0, 1, 0}}), CobasisElt::d_jet(JetVar{"u", {0, 0, 1}})};
            for (int i = 0; i < 1000 && antisym; ++i) {
                OneForm f, g;
                f.add_term(elts[rng() % 4], testgen::random_expr(rng, 2));
                g.add_term(elts[rng() % 4], testgen::random_expr(rng, 2));
                antisym = (wedge(f, g) + wedge(g, f)).comps.empty();
            }
        }
        criterion(10, "wedge is antisymmetric (1000 cases)", antisym);

        bool homo = true;
        for (int i = 0; i < 1000 && homo; ++i) {
            RawPtr t = testgen::random_tree(rng, 3);
            RatExpr norm;
            try {
                norm = normalize_raw(t);
            } catch (const Error&) {
                continue;
            }
            AssumptionSet a;
            a.add_expr(norm);
            std::set<JetVar> vars;
            raw_collect_vars(t, vars);
            SamplePoint p;
            try {
                p = sample(derive_seed(1234, std::to_string(i)), vars, a, {});
            } catch (const Error&) {
                continue;
            }
            RawEvaluator ev(mpq_class(p.kappa), &p.values);
            mpq_class raw_val, norm_val;
            bool raw_ok = true, norm_ok = true;
            try {
                raw_val = ev.eval(t);
            } catch (const Error&) {
                raw_ok = false;
            }
            try {
                norm_val = norm.eval(mpq_class(p.kappa), p.values);
            } catch (const Error&) {
                norm_ok = false;
            }
            if (raw_ok && norm_ok) homo = raw_val == norm_val;
        }
        criterion(10, "evaluation is a homomorphism through normalize (1000 cases)", homo);

        bool roundtrip = true;
        for (int i = 0; i < 1000 && roundtrip; ++i) {
            RatExpr e = testgen::random_expr(rng, 3);
            roundtrip = parse_ratexpr(print_expr(e)) == e;
        }
        criterion(10, "parse of print is the identity on canonical forms (1000 cases)",
                  roundtrip);
    }

    // 11. negative controls: all six shipped mutations fail with agreement
    {
        Bundle mut;
        mut.load(std::string(JETFORGE_PAPER_DIR) + "/mutations-suite.jf");
        bool ok = mut.ok();
        if (ok) {
            SuiteRunOutcome o = run_suite(mut, mut.suite("mutations"), opt, 2);
            ok = o.entries.size() == 6 && o.all_matched;
            for (const auto& e : o.entries)
                ok = ok && e.result.status == CheckResult::Status::Fail &&
                     !e.result.symbolic_zero && !e.result.oracle_zero && e.result.engines_agree;
        }
        criterion(11, "all six mutation controls fail symbolically and numerically", ok);
    }

    // the canonical suite end to end, as its own regression
    {
        Bundle suite_bundle;
        suite_bundle.load(std::string(JETFORGE_PAPER_DIR) + "/paper-suite.jf");
        bool ok = suite_bundle.ok();
        int pass = 0, skipped = 0;
        if (ok) {
            SuiteRunOutcome o = run_suite(suite_bundle, suite_bundle.suite("paper"), opt, 2);
            ok = o.all_matched && o.engines_agree;
            pass = o.passed;
            skipped = o.skipped;
        }
        criterion(0, "canonical suite matches its expectations", ok && pass == 14 && skipped == 5,
                  std::to_string(pass) + " pass, " + std::to_string(skipped) + " skipped");
    }

    std::cout << (g_failures == 0 ? "acceptance: all criteria satisfied"
                                  : "acceptance: FAILURES PRESENT")
              << std::endl;
    return g_failures == 0 ? 0 : 1;
}
