#include <doctest.h>

#include "jetforge/jet.hpp"
#include "jetforge/parser.hpp"

using namespace jetforge;

namespace {

const char* kRmmdkpRhs =
    "u[t,x] + ((kappa+1)*u[y]^2/u[x]^2 - u[t]/u[x] + kappa*u[x]^kappa*u[y]"
    " + (kappa+1)^2/(2*kappa+3)*u[x]^(2*(kappa+1))) * u[x,x]"
    " - kappa*(u[y]/u[x] + u[x]^(kappa+1)) * u[x,y]";

Equation rmmdkp() {
    Equation eq;
    eq.name = "rmmdKP";
    eq.principal = JetVar{"u", {0, 0, 2}};
    eq.rhs = parse_ratexpr(kRmmdkpRhs);
    eq.rhs_raw = ast_to_raw(parse_expression(kRmmdkpRhs), nullptr, nullptr);
    eq.excluded_kappa = {mpq_class(-2), mpq_class(-3, 2), mpq_class(-1)};
    return eq;
}

const JetVar UX{"u", {0, 1, 0}};
const JetVar UY{"u", {0, 0, 1}};
const JetVar UYY{"u", {0, 0, 2}};
const JetVar UXY{"u", {0, 1, 1}};

} // namespace

TEST_CASE("equation validation") {
    Equation eq = rmmdkp();
    CHECK_NOTHROW(eq.validate());

    Equation bad = eq;
    bad.rhs = parse_ratexpr("u[y,y,x]");
    CHECK_THROWS_AS(bad.validate(), Error);

    Equation missing = eq;
    missing.excluded_kappa = {mpq_class(-1)}; // -3/2 from 2kappa+3 not listed
    CHECK_THROWS_AS(missing.validate(), Error);
}

TEST_CASE("total derivative on free jets") {
    Context free_ctx(std::nullopt, {}, {"u"});
    CHECK(print_expr(free_ctx.total_derivative(parse_ratexpr("u[y]"), Dir::X)) == "u[x,y]");
    RatExpr d = free_ctx.total_derivative(parse_ratexpr("u[x]^(kappa+1)"), Dir::T);
    CHECK(RatExpr::equal(d, parse_ratexpr("(kappa+1)*u[x]^kappa*u[t,x]")));
    // derivation property on a product
    RatExpr a = parse_ratexpr("u[y]/u[x] + u[x]^(kappa+1)");
    RatExpr b = parse_ratexpr("u[t]*u[x,x] - 3");
    RatExpr lhs = free_ctx.total_derivative(a * b, Dir::Y);
    RatExpr rhs = free_ctx.total_derivative(a, Dir::Y) * b + a * free_ctx.total_derivative(b, Dir::Y);
    CHECK(RatExpr::equal(lhs, rhs));
}

TEST_CASE("reduce restricts to the solution manifold") {
    Equation eq = rmmdkp();
    Context ctx(eq, {}, {});
    CHECK(RatExpr::equal(ctx.reduce(UYY), eq.rhs));
    CHECK(ctx.reduce(UXY) == RatExpr::variable(UXY));
    // prolongation: u_yyx reduces to D_x(E)
    RatExpr viax = ctx.reduce(JetVar{"u", {0, 1, 2}});
    CHECK(RatExpr::equal(viax, ctx.total_derivative(eq.rhs, Dir::X)));
    // reduce is idempotent: everything in reduce output is internal
    for (const auto& v : viax.vars()) CHECK(ctx.is_internal(v));
    // total derivative of u_y in y is E itself
    CHECK(RatExpr::equal(ctx.total_derivative(RatExpr::variable(UY), Dir::Y), eq.rhs));
}

TEST_CASE("restricted total derivatives commute") {
    Equation eq = rmmdkp();
    Context ctx(eq, {}, {});
    CHECK(ctx.commutation_check(RatExpr::variable(UY), Dir::T, Dir::X).is_zero());
    CHECK(ctx.commutation_check(eq.rhs, Dir::X, Dir::Y).is_zero());
    CHECK(ctx.commutation_check(eq.rhs, Dir::T, Dir::Y).is_zero());
    CHECK(ctx.commutation_check(parse_ratexpr("u[y]*u[x]^(-kappa-2)"), Dir::T, Dir::Y).is_zero());
}

TEST_CASE("unclassified symbols are rejected") {
    Context ctx(std::nullopt, {}, {"u"});
    CHECK_THROWS_AS(ctx.total_derivative(parse_ratexpr("z[x]"), Dir::T), Error);
}

TEST_CASE("prolongation order cap") {
    Equation eq = rmmdkp();
    Context ctx(eq, {}, {}, 2);
    CHECK_THROWS_AS(ctx.reduce(JetVar{"u", {2, 1, 2}}), Error);
}
