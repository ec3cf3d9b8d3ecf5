#include "jetforge/rational.hpp"

#include <algorithm>
#include <sstream>

namespace jetforge {

const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::NonAffineExponent: return "NonAffineExponent";
        case ErrorCode::UnclassifiedSymbol: return "UnclassifiedSymbol";
        case ErrorCode::RecursionLimit: return "RecursionLimit";
        case ErrorCode::Singular: return "Singular";
        case ErrorCode::NonLinear: return "NonLinear";
        case ErrorCode::NotDivisible: return "NotDivisible";
        case ErrorCode::CancellationFailure: return "CancellationFailure";
        case ErrorCode::DegreeOverflow: return "DegreeOverflow";
        case ErrorCode::SamplingExhausted: return "SamplingExhausted";
        case ErrorCode::FractionalPowerOfNegative: return "FractionalPowerOfNegative";
        case ErrorCode::InexactPower: return "InexactPower";
        case ErrorCode::BadInput: return "BadInput";
    }
    return "UnknownError";
}

KPoly::KPoly(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }

void KPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

KPoly KPoly::kappa() {
    KPoly p;
    p.c_ = {mpz_class(0), mpz_class(1)};
    return p;
}

KPoly KPoly::affine(const mpz_class& a, const mpz_class& b) {
    KPoly p;
    p.c_ = {a, b};
    p.trim();
    return p;
}

const mpz_class& KPoly::coeff(int i) const {
    static const mpz_class zero(0);
    if (i < 0 || i >= static_cast<int>(c_.size())) return zero;
    return c_[i];
}

const mpz_class& KPoly::leading() const {
    static const mpz_class zero(0);
    return c_.empty() ? zero : c_.back();
}

KPoly KPoly::operator-() const {
    KPoly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

KPoly KPoly::operator+(const KPoly& o) const {
    KPoly r;
    r.c_.resize(std::max(c_.size(), o.c_.size()));
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = coeff(static_cast<int>(i)) + o.coeff(static_cast<int>(i));
    r.trim();
    return r;
}

KPoly KPoly::operator-(const KPoly& o) const { return *this + (-o); }

KPoly KPoly::operator*(const KPoly& o) const {
    if (is_zero() || o.is_zero()) return KPoly();
    KPoly r;
    r.c_.assign(c_.size() + o.c_.size() - 1, mpz_class(0));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j)
            r.c_[i + j] += c_[i] * o.c_[j];
    r.trim();
    return r;
}

mpz_class KPoly::content() const {
    mpz_class g(0);
    for (const auto& x : c_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    return g;
}

KPoly KPoly::primitive_part() const {
    if (is_zero()) return *this;
    mpz_class g = content();
    if (leading() < 0) g = -g;
    KPoly r = *this;
    for (auto& x : r.c_) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return r;
}

KPoly KPoly::divexact(const KPoly& d) const {
    if (d.is_zero()) throw Error(ErrorCode::DivisionByZero, "KPoly division by zero");
    if (is_zero()) return KPoly();
    if (degree() < d.degree()) throw Error(ErrorCode::NotDivisible, "degree too small");
    std::vector<mpz_class> rem = c_;
    std::vector<mpz_class> q(degree() - d.degree() + 1, mpz_class(0));
    for (int i = degree(); i >= d.degree(); --i) {
        mpz_class& top = rem[i];
        if (top == 0) continue;
        mpz_class qi;
        mpz_class r0;
        mpz_fdiv_qr(qi.get_mpz_t(), r0.get_mpz_t(), top.get_mpz_t(), d.leading().get_mpz_t());
        if (r0 != 0) throw Error(ErrorCode::NotDivisible, "inexact KPoly division");
        q[i - d.degree()] = qi;
        for (int j = 0; j <= d.degree(); ++j) rem[i - d.degree() + j] -= qi * d.coeff(j);
    }
    for (const auto& x : rem)
        if (x != 0) throw Error(ErrorCode::NotDivisible, "nonzero remainder");
    return KPoly(std::move(q));
}

mpq_class KPoly::eval(const mpq_class& kappa) const {
    mpq_class acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * kappa + mpq_class(*it);
    return acc;
}

double KPoly::eval_double(double kappa) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * kappa + it->get_d();
    return acc;
}

std::vector<mpq_class> KPoly::rational_roots() const {
    std::vector<mpq_class> roots;
    if (degree() < 1) return roots;
    // candidates p/q with p | constant term (first nonzero) and q | leading
    int lo = 0;
    while (c_[lo] == 0) {
        roots.emplace_back(0);
        ++lo;
        break;
    }
    KPoly p = *this;
    // strip kappa^k factor
    int shift = 0;
    while (shift <= p.degree() && p.coeff(shift) == 0) ++shift;
    if (shift > 0) {
        std::vector<mpz_class> cs(p.c_.begin() + shift, p.c_.end());
        p = KPoly(std::move(cs));
        if (roots.empty()) roots.emplace_back(0);
    }
    if (p.degree() < 1) return roots;
    mpz_class a0 = abs(p.coeff(0)), an = abs(p.leading());
    auto divisors = [](const mpz_class& n) {
        std::vector<mpz_class> ds;
        for (mpz_class d(1); d * d <= n; ++d) {
            if (n % d == 0) {
                ds.push_back(d);
                if (d * d != n) ds.push_back(n / d);
            }
        }
        return ds;
    };
    for (const auto& pn : divisors(a0)) {
        for (const auto& qd : divisors(an)) {
            for (int s : {1, -1}) {
                mpq_class cand(s * pn, qd);
                cand.canonicalize();
                if (p.eval(cand) == 0 && std::find(roots.begin(), roots.end(), cand) == roots.end())
                    roots.push_back(cand);
            }
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::string KPoly::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const mpz_class& a = coeff(i);
        if (a == 0) continue;
        mpz_class mag = abs(a);
        if (first) {
            if (a < 0) os << "-";
            first = false;
        } else {
            os << (a < 0 ? "-" : "+");
        }
        if (i == 0 || mag != 1) {
            os << mag.get_str();
            if (i > 0) os << "*";
        }
        if (i >= 1) {
            os << "kappa";
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

std::strong_ordering KPoly::operator<=>(const KPoly& o) const {
    if (c_.size() != o.c_.size()) return c_.size() <=> o.c_.size();
    for (size_t i = c_.size(); i-- > 0;) {
        int c = mpz_cmp(c_[i].get_mpz_t(), o.c_[i].get_mpz_t());
        if (c != 0) return c <=> 0;
    }
    return std::strong_ordering::equal;
}

namespace {

// pseudo-remainder of a by b (lc(b)^(da-db+1) * a mod b)
KPoly prem(KPoly a, const KPoly& b) {
    int db = b.degree();
    while (!a.is_zero() && a.degree() >= db) {
        int shift = a.degree() - db;
        KPoly scaled_a = a * KPoly(b.leading());
        std::vector<mpz_class> mono(shift + 1, mpz_class(0));
        mono[shift] = a.leading();
        a = scaled_a - b * KPoly(std::move(mono));
    }
    return a;
}

} // namespace

KPoly gcd(const KPoly& a, const KPoly& b) {
    if (a.is_zero() && b.is_zero()) return KPoly();
    if (a.is_zero()) return b.leading() < 0 ? -b : b;
    if (b.is_zero()) return a.leading() < 0 ? -a : a;
    mpz_class cont;
    mpz_gcd(cont.get_mpz_t(), a.content().get_mpz_t(), b.content().get_mpz_t());
    KPoly x = a.primitive_part(), y = b.primitive_part();
    if (x.degree() < y.degree()) std::swap(x, y);
    while (!y.is_zero()) {
        KPoly r = prem(x, y).primitive_part();
        x = y;
        y = r;
    }
    return x * KPoly(cont);
}

KappaRational::KappaRational(const mpq_class& q)
    : num_(KPoly(mpz_class(q.get_num()))), den_(KPoly(mpz_class(q.get_den()))) {
    normalize();
}

KappaRational::KappaRational(KPoly num, KPoly den) : num_(std::move(num)), den_(std::move(den)) {
    normalize();
}

void KappaRational::normalize() {
    if (den_.is_zero()) throw Error(ErrorCode::DivisionByZero, "zero denominator in kappa-rational");
    if (num_.is_zero()) {
        den_ = KPoly(1);
        return;
    }
    KPoly g = gcd(num_, den_);
    if (!(g.degree() == 0 && g.coeff(0) == 1)) {
        num_ = num_.divexact(g);
        den_ = den_.divexact(g);
    }
    mpz_class cn = num_.content(), cd = den_.content(), c;
    mpz_gcd(c.get_mpz_t(), cn.get_mpz_t(), cd.get_mpz_t());
    if (c != 1) {
        num_ = num_.divexact(KPoly(c));
        den_ = den_.divexact(KPoly(c));
    }
    if (den_.leading() < 0) {
        num_ = -num_;
        den_ = -den_;
    }
}

mpq_class KappaRational::constant_value() const {
    mpq_class v(num_.coeff(0), den_.coeff(0) == 0 ? mpz_class(1) : den_.coeff(0));
    v.canonicalize();
    return v;
}

KappaRational KappaRational::operator-() const {
    KappaRational r = *this;
    r.num_ = -r.num_;
    return r;
}

KappaRational KappaRational::operator+(const KappaRational& o) const {
    return KappaRational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

KappaRational KappaRational::operator-(const KappaRational& o) const {
    return KappaRational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

KappaRational KappaRational::operator*(const KappaRational& o) const {
    return KappaRational(num_ * o.num_, den_ * o.den_);
}

KappaRational KappaRational::operator/(const KappaRational& o) const {
    if (o.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero kappa-rational");
    return KappaRational(num_ * o.den_, den_ * o.num_);
}

KappaRational KappaRational::inverse() const {
    if (is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
    return KappaRational(den_, num_);
}

KappaRational KappaRational::pow(long e) const {
    if (e == 0) return KappaRational(1);
    KappaRational base = e < 0 ? inverse() : *this;
    unsigned long n = static_cast<unsigned long>(e < 0 ? -e : e);
    KappaRational acc(1);
    while (n > 0) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

int KappaRational::canonical_sign() const {
    if (num_.is_zero()) return 0;
    return num_.leading() < 0 ? -1 : 1;
}

mpq_class KappaRational::eval(const mpq_class& kappa) const {
    mpq_class d = den_.eval(kappa);
    if (d == 0) throw Error(ErrorCode::DivisionByZero, "kappa-rational denominator vanishes at sample");
    return num_.eval(kappa) / d;
}

double KappaRational::eval_double(double kappa) const {
    return num_.eval_double(kappa) / den_.eval_double(kappa);
}

std::string KappaRational::to_string() const {
    auto wrap = [](const std::string& s) {
        return s.find_first_of("+-*/^", 1) != std::string::npos ? "(" + s + ")" : s;
    };
    if (den_.is_one()) return num_.to_string();
    return wrap(num_.to_string()) + "/" + wrap(den_.to_string());
}

std::strong_ordering KappaRational::operator<=>(const KappaRational& o) const {
    auto c = num_ <=> o.num_;
    if (c != 0) return c;
    return den_ <=> o.den_;
}

} // namespace jetforge
