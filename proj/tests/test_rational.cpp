#include <doctest.h>

#include "jetforge/rational.hpp"

using namespace jetforge;

TEST_CASE("kpoly arithmetic and gcd") {
    KPoly k = KPoly::kappa();
    KPoly p = (k + KPoly(1)) * (k + KPoly(1));            // (kappa+1)^2
    KPoly q = (k + KPoly(1)) * (KPoly(2) * k + KPoly(3)); // (kappa+1)(2kappa+3)
    KPoly g = gcd(p, q);
    CHECK(g == k + KPoly(1));
    CHECK(p.divexact(g) == k + KPoly(1));
    CHECK_THROWS_AS(p.divexact(KPoly(2) * k + KPoly(3)), Error);

    CHECK(p.eval(mpq_class(2)) == 9);
    CHECK(KPoly(0).is_zero());
    CHECK((p - p).is_zero());
}

TEST_CASE("kpoly rational roots") {
    KPoly k = KPoly::kappa();
    // (kappa+2)(2kappa+3)(kappa+1)
    KPoly p = (k + KPoly(2)) * (KPoly(2) * k + KPoly(3)) * (k + KPoly(1));
    auto roots = p.rational_roots();
    REQUIRE(roots.size() == 3);
    CHECK(roots[0] == mpq_class(-2));
    CHECK(roots[1] == mpq_class(-3, 2));
    CHECK(roots[2] == mpq_class(-1));
}

TEST_CASE("kappa rational canonical form") {
    KPoly k = KPoly::kappa();
    // kappa^2+2kappa+1 over 2kappa+3 equals (kappa+1)^2 over the same
    KappaRational a(KPoly({mpz_class(1), mpz_class(2), mpz_class(1)}), KPoly(2) * k + KPoly(3));
    KappaRational b((k + KPoly(1)) * (k + KPoly(1)), KPoly(2) * k + KPoly(3));
    CHECK(a == b);
    CHECK((a - b).is_zero());

    // canonical sign: denominator leading coefficient positive
    KappaRational c(KPoly(1), -(KPoly(2) * k + KPoly(3)));
    CHECK(c.den().leading() > 0);
    CHECK(c.canonical_sign() == -1);

    // gcd cancellation
    KappaRational d((k + KPoly(1)) * (k + KPoly(2)), (k + KPoly(1)) * (k + KPoly(3)));
    CHECK(d.num() == (k + KPoly(2)));
    CHECK(d.den() == (k + KPoly(3)));

    // joint content removal
    KappaRational e(KPoly(4) * k, KPoly(6));
    CHECK(e.num() == KPoly(2) * k);
    CHECK(e.den() == KPoly(3));
}

TEST_CASE("kappa rational arithmetic") {
    KappaRational k = KappaRational::kappa();
    KappaRational one(1);
    KappaRational expr = (k + one) * (k + one) / (KappaRational(2) * k + KappaRational(3));
    CHECK(expr.eval(mpq_class(1)) == mpq_class(4, 5));
    CHECK((expr - expr).is_zero());
    CHECK(expr.pow(2) == expr * expr);
    CHECK(expr.pow(-1) * expr == one);
    CHECK_THROWS_AS(KappaRational(0).inverse(), Error);
    CHECK_THROWS_AS(expr / KappaRational(0), Error);

    KappaRational vanishing = k + one;
    CHECK_THROWS_AS(vanishing.inverse().eval(mpq_class(-1)), Error);
}

TEST_CASE("kappa rational to_string") {
    KappaRational k = KappaRational::kappa();
    CHECK(KappaRational(5).to_string() == "5");
    CHECK(k.to_string() == "kappa");
    CHECK((k + KappaRational(1)).to_string() == "kappa+1");
    CHECK(((k + KappaRational(1)) / (KappaRational(2) * k + KappaRational(3))).to_string() ==
          "(kappa+1)/(2*kappa+3)");
}
