#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "jetforge/rational.hpp"

namespace jetforge {

enum class Dir { T = 0, X = 1, Y = 2 };

constexpr const char* dir_name(Dir d) {
    switch (d) {
        case Dir::T: return "t";
        case Dir::X: return "x";
        case Dir::Y: return "y";
    }
    return "?";
}

/// Derivative multi-index (n_t, n_x, n_y).
struct MultiIndex {
    int t = 0, x = 0, y = 0;

    int total() const { return t + x + y; }
    int order(Dir d) const { return d == Dir::T ? t : d == Dir::X ? x : y; }
    MultiIndex bumped(Dir d, int by = 1) const;
    bool dominates(const MultiIndex& o) const { return t >= o.t && x >= o.x && y >= o.y; }
    MultiIndex operator-(const MultiIndex& o) const { return {t - o.t, x - o.x, y - o.y}; }
    auto operator<=>(const MultiIndex&) const = default;
};

/// A jet coordinate: dependent-symbol name plus derivative multi-index.
struct JetVar {
    std::string sym;
    MultiIndex idx;

    std::string to_string() const; // "u", "u[t,x]", ...
    auto operator<=>(const JetVar&) const = default;
};

/// Exponent affine in kappa: a + b*kappa, both rational, stored exactly.
struct Exponent {
    mpq_class a, b;

    Exponent() : a(0), b(0) {}
    Exponent(long n) : a(n), b(0) {}
    Exponent(mpq_class a_, mpq_class b_) : a(std::move(a_)), b(std::move(b_)) {}

    bool is_zero() const { return a == 0 && b == 0; }
    bool is_integer() const { return b == 0 && a.get_den() == 1; }
    long as_long() const { return static_cast<long>(a.get_num().get_si()); }
    Exponent operator+(const Exponent& o) const { return {a + o.a, b + o.b}; }
    Exponent operator-(const Exponent& o) const { return {a - o.a, b - o.b}; }
    Exponent operator-() const { return {-a, -b}; }
    /// Product of two affine exponents; throws NonAffineExponent on a kappa^2 term.
    Exponent operator*(const Exponent& o) const;
    bool operator==(const Exponent& o) const { return a == o.a && b == o.b; }
    std::strong_ordering operator<=>(const Exponent& o) const;

    mpq_class eval(const mpq_class& kappa) const { return a + b * kappa; }
    double eval_double(double kappa) const { return a.get_d() + b.get_d() * kappa; }
    KappaRational as_kappa_rational() const;
    std::string to_string() const; // "2*kappa+3", "-kappa-2", "1/2", ...
};

/// Power product of jet variables with kappa-affine exponents.
/// Factors are kept sorted by variable; zero exponents are never stored.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(const JetVar& v, Exponent e = Exponent(1));

    bool is_one() const { return f_.empty(); }
    const std::vector<std::pair<JetVar, Exponent>>& factors() const { return f_; }
    Exponent exponent_of(const JetVar& v) const;

    Monomial operator*(const Monomial& o) const;
    Monomial operator/(const Monomial& o) const;
    Monomial pow_scalar(const Exponent& e) const; // throws NonAffineExponent
    Monomial inverse() const;

    /// Total degree as a pair (sum of a parts, sum of b parts).
    std::pair<mpq_class, mpq_class> grade() const;

    bool operator==(const Monomial& o) const { return f_ == o.f_; }
    /// Graded-lexicographic order; exponents compared as (a, b) pairs.
    std::strong_ordering operator<=>(const Monomial& o) const;

private:
    std::vector<std::pair<JetVar, Exponent>> f_;
};

/// Canonical sum of (coefficient, monomial) terms, sorted leading-first.
class PolyExpr {
public:
    struct Term {
        KappaRational coeff;
        Monomial mono;
        bool operator==(const Term& o) const { return coeff == o.coeff && mono == o.mono; }
    };

    PolyExpr() = default;
    static PolyExpr zero() { return PolyExpr(); }
    static PolyExpr constant(KappaRational c);
    static PolyExpr variable(const JetVar& v);
    static PolyExpr term(KappaRational c, Monomial m);

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    bool is_single_term() const { return terms_.size() == 1; }
    const std::vector<Term>& terms() const { return terms_; }
    size_t size() const { return terms_.size(); }
    const Term& leading() const { return terms_.front(); }

    PolyExpr operator-() const;
    PolyExpr operator+(const PolyExpr& o) const;
    PolyExpr operator-(const PolyExpr& o) const;
    PolyExpr operator*(const PolyExpr& o) const;
    PolyExpr scaled(const KappaRational& c) const;
    PolyExpr mono_scaled(const Monomial& m) const;
    PolyExpr pow(unsigned long n) const;
    bool operator==(const PolyExpr& o) const { return terms_ == o.terms_; }

    PolyExpr partial(const JetVar& v) const;
    std::optional<PolyExpr> try_divexact(const PolyExpr& g, size_t iter_cap = 4096) const;

    void collect_vars(std::set<JetVar>& out) const;
    bool depends_on(const JetVar& v) const;

    mpq_class eval(const mpq_class& kappa, const std::map<JetVar, mpq_class>& point) const;
    double eval_double(double kappa, const std::map<JetVar, double>& point) const;

    /// Canonical construction from an arbitrary term list (sorts, merges, prunes).
    static PolyExpr from_terms(std::vector<Term> terms);

private:
    std::vector<Term> terms_;
};

/// Quotient of canonical PolyExprs.  Normal form: a single-term denominator is
/// folded into the numerator (monomials are Laurent), the common monomial
/// factor and joint coefficient content of num/den are extracted, and a
/// multi-term denominator is monic in its leading coefficient.
class RatExpr {
public:
    RatExpr() : num_(), den_(PolyExpr::constant(1)) {}
    RatExpr(PolyExpr num, PolyExpr den); // normalizes; throws DivisionByZero
    static RatExpr zero() { return RatExpr(); }
    static RatExpr constant(KappaRational c) { return RatExpr(PolyExpr::constant(std::move(c)), PolyExpr::constant(1)); }
    static RatExpr from_long(long n) { return constant(KappaRational(n)); }
    static RatExpr kappa() { return constant(KappaRational::kappa()); }
    static RatExpr variable(const JetVar& v) { return RatExpr(PolyExpr::variable(v), PolyExpr::constant(1)); }

    const PolyExpr& num() const { return num_; }
    const PolyExpr& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool den_is_one() const { return den_.is_one(); }

    RatExpr operator-() const;
    RatExpr operator+(const RatExpr& o) const;
    RatExpr operator-(const RatExpr& o) const;
    RatExpr operator*(const RatExpr& o) const;
    RatExpr operator/(const RatExpr& o) const; // throws DivisionByZero
    RatExpr pow(long n) const;
    /// Raise to a kappa-affine exponent; the base must reduce to a monomial
    /// with unit coefficient unless the exponent is an integer constant.
    RatExpr pow_affine(const Exponent& e) const;
    bool operator==(const RatExpr& o) const { return num_ == o.num_ && den_ == o.den_; }

    /// Structural-equality-preserving algebraic zero test (cross-multiplied).
    static bool equal(const RatExpr& x, const RatExpr& y) { return (x - y).is_zero(); }

    /// Cancel a common polynomial factor of num and den when exact division
    /// finds one; used at reporting boundaries, not in hot arithmetic.
    RatExpr reduced() const;

    RatExpr partial(const JetVar& v) const;
    RatExpr substitute(const std::map<JetVar, RatExpr>& bindings) const;
    RatExpr specialize_kappa(const mpq_class& kappa0) const;

    /// Collect as a polynomial in v with RatExpr coefficients keyed by the
    /// integer exponent of v; throws if v occurs with a non-integer exponent
    /// or inside the denominator.
    std::map<long, RatExpr> collect(const JetVar& v) const;

    /// Replace every power of `v` whose exponent is an integer multiple of
    /// `unit` by the corresponding power of `repl`; throws CancellationFailure
    /// if some occurrence is not such a multiple.
    RatExpr replace_power(const JetVar& v, const Exponent& unit, const JetVar& repl) const;

    std::set<JetVar> vars() const;
    bool depends_on(const JetVar& v) const { return num_.depends_on(v) || den_.depends_on(v); }

    mpq_class eval(const mpq_class& kappa, const std::map<JetVar, mpq_class>& point) const;
    double eval_double(double kappa, const std::map<JetVar, double>& point) const;

private:
    void normalize();
    PolyExpr num_, den_;
};

/// Exact power with rational exponent; throws FractionalPowerOfNegative for a
/// negative base with fractional exponent, InexactPower when the exact root
/// does not exist, DivisionByZero for 0^negative.
mpq_class pow_exact(const mpq_class& base, const mpq_class& exp);

/// Read a kappa-affine constant a + b*kappa out of a scalar expression;
/// throws NonAffineExponent when it is anything else.
Exponent exponent_from_scalar(const RatExpr& e);

} // namespace jetforge
