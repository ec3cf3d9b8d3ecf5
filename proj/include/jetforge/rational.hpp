#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <vector>

#include "jetforge/error.hpp"

namespace jetforge {

/// Dense univariate polynomial in kappa with integer coefficients.
/// c[i] is the coefficient of kappa^i; trailing zeros are never stored.
class KPoly {
public:
    KPoly() = default;
    KPoly(long n) { if (n != 0) c_.push_back(mpz_class(n)); }
    explicit KPoly(const mpz_class& n) { if (n != 0) c_.push_back(n); }
    explicit KPoly(std::vector<mpz_class> coeffs);

    static KPoly kappa();                       // the monomial kappa
    static KPoly affine(const mpz_class& a, const mpz_class& b); // a + b*kappa

    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
    const mpz_class& coeff(int i) const;
    const mpz_class& leading() const;
    const std::vector<mpz_class>& coeffs() const { return c_; }

    KPoly operator-() const;
    KPoly operator+(const KPoly& o) const;
    KPoly operator-(const KPoly& o) const;
    KPoly operator*(const KPoly& o) const;
    bool operator==(const KPoly& o) const { return c_ == o.c_; }

    mpz_class content() const;                  // gcd of coefficients, 0 for zero poly
    KPoly primitive_part() const;
    KPoly divexact(const KPoly& d) const;       // exact division; throws NotDivisible
    mpq_class eval(const mpq_class& kappa) const;
    double eval_double(double kappa) const;

    /// All rational roots p/q (used to validate kappa exclusion sets).
    std::vector<mpq_class> rational_roots() const;

    std::string to_string() const;              // e.g. "2*kappa^2-kappa+3"

    std::strong_ordering operator<=>(const KPoly& o) const;

private:
    void trim();
    std::vector<mpz_class> c_;
};

KPoly gcd(const KPoly& a, const KPoly& b);

/// Exact rational function in kappa: num/den with integer-coefficient
/// polynomials, gcd(num,den) = 1, joint integer content 1, den leading
/// coefficient positive.  This is the coefficient field of every expression.
class KappaRational {
public:
    KappaRational() : num_(0), den_(1) {}
    KappaRational(long n) : num_(n), den_(1) {}
    explicit KappaRational(const mpq_class& q);
    KappaRational(KPoly num, KPoly den);

    static KappaRational kappa() { return KappaRational(KPoly::kappa(), KPoly(1)); }

    const KPoly& num() const { return num_; }
    const KPoly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_constant() const { return num_.degree() <= 0 && den_.degree() <= 0; }
    /// Constant value as a rational; requires is_constant().
    mpq_class constant_value() const;

    KappaRational operator-() const;
    KappaRational operator+(const KappaRational& o) const;
    KappaRational operator-(const KappaRational& o) const;
    KappaRational operator*(const KappaRational& o) const;
    KappaRational operator/(const KappaRational& o) const;   // throws DivisionByZero
    KappaRational inverse() const;
    KappaRational pow(long e) const;
    bool operator==(const KappaRational& o) const { return num_ == o.num_ && den_ == o.den_; }

    /// Sign of the leading numerator coefficient (0 for zero).
    int canonical_sign() const;

    mpq_class eval(const mpq_class& kappa) const;             // throws DivisionByZero
    double eval_double(double kappa) const;

    std::string to_string() const;

    std::strong_ordering operator<=>(const KappaRational& o) const;

private:
    void normalize();
    KPoly num_, den_;
};

} // namespace jetforge
