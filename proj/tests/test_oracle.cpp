#include <doctest.h>

#include "jetforge/oracle.hpp"
#include "jetforge/paperdefs.hpp"

using namespace jetforge;

namespace {

Bundle& bundle() {
    static Bundle b = load_paper_dir(JETFORGE_PAPER_DIR);
    return b;
}

} // namespace

TEST_CASE("sampling is deterministic and honors assumptions") {
    AssumptionSet a;
    a.add_expr(parse_ratexpr("1/u[x]"));
    std::set<JetVar> vars{JetVar{"u", {0, 1, 0}}, JetVar{"u", {0, 0, 1}}};
    SamplePoint p1 = sample(42, vars, a, {});
    SamplePoint p2 = sample(42, vars, a, {});
    CHECK(p1.kappa == p2.kappa);
    CHECK(p1.values == p2.values);
    CHECK(p1.values.at(JetVar{"u", {0, 1, 0}}) != 0);
    CHECK((p1.kappa >= 1 && p1.kappa <= 3));

    // identically zero assumption can never be satisfied
    AssumptionSet bad;
    bad.add_poly(parse_ratexpr("u[x] - u[x]").num());
    CHECK_THROWS_AS(sample(1, vars, bad, {}), Error);

    // kappa exclusions are respected
    SamplePoint p3 = sample(9, vars, a, {mpq_class(1), mpq_class(2)});
    CHECK(p3.kappa == 3);
}

TEST_CASE("positive-required variables are sampled positive") {
    AssumptionSet a;
    a.add_expr(parse_ratexpr("u[x]^(kappa+1)"));
    CHECK(a.positive.count(JetVar{"u", {0, 1, 0}}) == 1);
    for (int seed = 0; seed < 30; ++seed) {
        SamplePoint p = sample(seed, {JetVar{"u", {0, 1, 0}}}, a, {});
        CHECK(p.values.at(JetVar{"u", {0, 1, 0}}) > 0);
    }
}

TEST_CASE("exact evaluation examples") {
    JetVar ux{"u", {0, 1, 0}};
    RatExpr e = parse_ratexpr("u[x]^(kappa+1)");
    std::map<JetVar, mpq_class> pt{{ux, mpq_class(3)}};
    CHECK(e.eval(mpq_class(2), pt) == 27);

    // u = x solves the central equation: all terms carry u_y, u_t, or second
    // derivatives, so both sides vanish on that jet
    const Equation& eq = bundle().equation("rmmdKP");
    std::map<JetVar, mpq_class> jet;
    for (const auto& v : eq.rhs.vars()) jet[v] = 0;
    jet[ux] = 1;
    CHECK(eq.rhs.eval(mpq_class(2), jet) == 0);
}

TEST_CASE("shadow context mirrors the symbolic reduction") {
    const Equation& eq = bundle().equation("rmmdKP");
    Context ctx(eq, {}, {});
    ShadowContext shadow(eq, {}, {});
    JetVar uyyx{"u", {0, 1, 2}};
    RatExpr sym = ctx.reduce(uyyx);
    RawPtr raw = shadow.reduce(uyyx);
    AssumptionSet a;
    a.add_expr(sym);
    std::set<JetVar> vars = sym.vars();
    std::set<JetVar> rv;
    raw_collect_vars(raw, rv);
    vars.insert(rv.begin(), rv.end());
    for (int i = 0; i < 5; ++i) {
        SamplePoint p = sample(100 + i, vars, a, eq.excluded_kappa);
        RawEvaluator ev(mpq_class(p.kappa), &p.values);
        CHECK(sym.eval(mpq_class(p.kappa), p.values) == ev.eval(raw));
    }
}

TEST_CASE("confirm_zero on a compatibility bracket") {
    Bundle& b = bundle();
    const Equation& eq = b.equation("rmmdKP");
    const Covering& c = b.covering("c15");
    AssumptionSet a;
    RatExpr res = check_compatibility(c, eq, a);
    REQUIRE(res.is_zero());
    ShadowContext shadow(eq, {c}, {});
    RawPtr raw = raw_sub(shadow.total_derivative(c.f_t_raw, Dir::Y),
                         shadow.total_derivative(c.f_y_raw, Dir::T));
    OracleVerdict v = confirm_zero({{"compat/c15", res, raw}}, a, eq.excluded_kappa, 5, 7);
    CHECK(v.zero_confirmed);
    CHECK(v.homomorphism_ok);
    CHECK(v.float_smoke_ok);
    CHECK(v.points == 5);
}

TEST_CASE("confirm_zero flags a mutated covering with a witness") {
    Bundle& b = bundle();
    const Equation& eq = b.equation("rmmdKP");
    Covering bad = b.covering("c15");
    bad.f_t = bad.f_t * parse_ratexpr("(kappa+3)/(kappa+2)");
    bad.f_t_raw = raw_mul(bad.f_t_raw, ast_to_raw(parse_expression("(kappa+3)/(kappa+2)"),
                                                  nullptr, nullptr));
    AssumptionSet a;
    RatExpr res = check_compatibility(bad, eq, a);
    REQUIRE(!res.is_zero());
    ShadowContext shadow(eq, {bad}, {});
    RawPtr raw = raw_sub(shadow.total_derivative(bad.f_t_raw, Dir::Y),
                         shadow.total_derivative(bad.f_y_raw, Dir::T));
    OracleVerdict v = confirm_zero({{"compat/c15-mut", res, raw}}, a, eq.excluded_kappa, 5, 7);
    CHECK(!v.zero_confirmed);
    CHECK(!v.witness.empty());
}

TEST_CASE("literal zero is confirmed") {
    AssumptionSet a;
    OracleVerdict v = confirm_zero({{"zero", RatExpr::zero(), raw_num(0)}}, a, {}, 5, 3);
    CHECK(v.zero_confirmed);
}

TEST_CASE("confirm_equal compares two raw pipelines") {
    RawPtr lhs = ast_to_raw(parse_expression("(u[x]+u[y])^2"), nullptr, nullptr);
    RawPtr rhs = ast_to_raw(parse_expression("u[x]^2 + 2*u[x]*u[y] + u[y]^2"), nullptr, nullptr);
    AssumptionSet a;
    OracleVerdict v = confirm_equal({{"binomial", lhs, rhs}}, a, {}, 5, 11);
    CHECK(v.zero_confirmed);
    RawPtr bad = ast_to_raw(parse_expression("u[x]^2 + u[y]^2"), nullptr, nullptr);
    OracleVerdict w = confirm_equal({{"binomial-bad", lhs, bad}}, a, {}, 5, 11);
    CHECK(!w.zero_confirmed);
}

TEST_CASE("per-check seeds are stable") {
    CHECK(derive_seed(7, "compat/c15") == derive_seed(7, "compat/c15"));
    CHECK(derive_seed(7, "compat/c15") != derive_seed(8, "compat/c15"));
    CHECK(derive_seed(7, "compat/c15") != derive_seed(7, "compat/c16"));
}

TEST_CASE("eval homomorphism on random expressions") {
    std::mt19937_64 rng(23);
    static const std::vector<std::string> pool = {
        "u[x]^(kappa+1)", "u[y]/u[x]", "(u[t]+u[x,x])^2", "kappa*u[x]*u[y]",
        "1/(u[x]+3)", "(kappa+1)^2/(2*kappa+3)*u[x]^(2*kappa+2)"};
    for (int i = 0; i < 40; ++i) {
        std::string s = pool[rng() % pool.size()] + " + " + pool[rng() % pool.size()] + " - (" +
                        pool[rng() % pool.size()] + ")";
        RawPtr raw = ast_to_raw(parse_expression(s), nullptr, nullptr);
        RatExpr norm = normalize_raw(raw);
        AssumptionSet a;
        a.add_expr(norm);
        std::set<JetVar> vars;
        raw_collect_vars(raw, vars);
        SamplePoint p = sample(500 + i, vars, a, {});
        RawEvaluator ev(mpq_class(p.kappa), &p.values);
        mpq_class raw_val, norm_val;
        bool raw_ok = true, norm_ok = true;
        try {
            raw_val = ev.eval(raw);
        } catch (const Error&) {
            raw_ok = false;
        }
        try {
            norm_val = norm.eval(mpq_class(p.kappa), p.values);
        } catch (const Error&) {
            norm_ok = false;
        }
        REQUIRE(raw_ok == norm_ok);
        if (raw_ok) CHECK(raw_val == norm_val);
    }
}
