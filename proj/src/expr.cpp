#include "jetforge/expr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace jetforge {

MultiIndex MultiIndex::bumped(Dir d, int by) const {
    MultiIndex r = *this;
    switch (d) {
        case Dir::T: r.t += by; break;
        case Dir::X: r.x += by; break;
        case Dir::Y: r.y += by; break;
    }
    return r;
}

std::string JetVar::to_string() const {
    if (idx.total() == 0) return sym;
    std::string s = sym + "[";
    bool first = true;
    auto emit = [&](char c, int n) {
        for (int i = 0; i < n; ++i) {
            if (!first) s += ",";
            s += c;
            first = false;
        }
    };
    emit('t', idx.t);
    emit('x', idx.x);
    emit('y', idx.y);
    return s + "]";
}

Exponent Exponent::operator*(const Exponent& o) const {
    if (b != 0 && o.b != 0)
        throw Error(ErrorCode::NonAffineExponent, "kappa^2 term in exponent product");
    return {a * o.a, a * o.b + b * o.a};
}

std::strong_ordering Exponent::operator<=>(const Exponent& o) const {
    int c = cmp(a, o.a);
    if (c != 0) return c <=> 0;
    c = cmp(b, o.b);
    return c <=> 0;
}

KappaRational Exponent::as_kappa_rational() const {
    mpz_class l = lcm(a.get_den(), b.get_den());
    mpz_class ai = a.get_num() * (l / a.get_den());
    mpz_class bi = b.get_num() * (l / b.get_den());
    return KappaRational(KPoly::affine(ai, bi), KPoly(l));
}

std::string Exponent::to_string() const {
    std::ostringstream os;
    auto qstr = [](const mpq_class& q) { return q.get_str(); };
    if (b != 0) {
        if (b == 1) {
        } else if (b == -1) {
            os << "-";
        } else {
            os << qstr(b) << "*";
        }
        os << "kappa";
        if (a != 0) {
            if (a > 0) os << "+";
            os << qstr(a);
        }
        return os.str();
    }
    return qstr(a);
}

Monomial::Monomial(const JetVar& v, Exponent e) {
    if (!e.is_zero()) f_.push_back({v, std::move(e)});
}

Exponent Monomial::exponent_of(const JetVar& v) const {
    for (const auto& [var, e] : f_)
        if (var == v) return e;
    return Exponent();
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r;
    size_t i = 0, j = 0;
    while (i < f_.size() || j < o.f_.size()) {
        if (j >= o.f_.size() || (i < f_.size() && f_[i].first < o.f_[j].first)) {
            r.f_.push_back(f_[i++]);
        } else if (i >= f_.size() || o.f_[j].first < f_[i].first) {
            r.f_.push_back(o.f_[j++]);
        } else {
            Exponent e = f_[i].second + o.f_[j].second;
            if (!e.is_zero()) r.f_.push_back({f_[i].first, e});
            ++i;
            ++j;
        }
    }
    return r;
}

Monomial Monomial::inverse() const {
    Monomial r = *this;
    for (auto& [v, e] : r.f_) e = -e;
    return r;
}

Monomial Monomial::operator/(const Monomial& o) const { return *this * o.inverse(); }

Monomial Monomial::pow_scalar(const Exponent& e) const {
    Monomial r;
    if (e.is_zero()) return r;
    for (const auto& [v, ve] : f_) {
        Exponent ne = ve * e;
        if (!ne.is_zero()) r.f_.push_back({v, ne});
    }
    return r;
}

std::pair<mpq_class, mpq_class> Monomial::grade() const {
    mpq_class a(0), b(0);
    for (const auto& [v, e] : f_) {
        a += e.a;
        b += e.b;
    }
    return {a, b};
}

std::strong_ordering Monomial::operator<=>(const Monomial& o) const {
    auto [ga, gb] = grade();
    auto [ha, hb] = o.grade();
    int c = cmp(ga, ha);
    if (c != 0) return c <=> 0;
    c = cmp(gb, hb);
    if (c != 0) return c <=> 0;
    size_t i = 0, j = 0;
    while (i < f_.size() || j < o.f_.size()) {
        // earliest variable in the merged list decides; larger exponent wins
        if (j >= o.f_.size() || (i < f_.size() && f_[i].first < o.f_[j].first)) {
            auto sc = f_[i].second <=> Exponent();
            if (sc != 0) return sc;
            ++i;
        } else if (i >= f_.size() || o.f_[j].first < f_[i].first) {
            auto sc = Exponent() <=> o.f_[j].second;
            if (sc != 0) return sc;
            ++j;
        } else {
            auto sc = f_[i].second <=> o.f_[j].second;
            if (sc != 0) return sc;
            ++i;
            ++j;
        }
    }
    return std::strong_ordering::equal;
}

PolyExpr PolyExpr::constant(KappaRational c) {
    PolyExpr p;
    if (!c.is_zero()) p.terms_.push_back({std::move(c), Monomial()});
    return p;
}

PolyExpr PolyExpr::variable(const JetVar& v) {
    PolyExpr p;
    p.terms_.push_back({KappaRational(1), Monomial(v)});
    return p;
}

PolyExpr PolyExpr::term(KappaRational c, Monomial m) {
    PolyExpr p;
    if (!c.is_zero()) p.terms_.push_back({std::move(c), std::move(m)});
    return p;
}

bool PolyExpr::is_one() const {
    return terms_.size() == 1 && terms_[0].mono.is_one() && terms_[0].coeff.is_one();
}

PolyExpr PolyExpr::from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.mono > b.mono; });
    PolyExpr p;
    for (auto& t : terms) {
        if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
            p.terms_.back().coeff = p.terms_.back().coeff + t.coeff;
            if (p.terms_.back().coeff.is_zero()) p.terms_.pop_back();
        } else if (!t.coeff.is_zero()) {
            p.terms_.push_back(std::move(t));
        }
    }
    return p;
}

PolyExpr PolyExpr::operator-() const {
    PolyExpr r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
}

PolyExpr PolyExpr::operator+(const PolyExpr& o) const {
    PolyExpr r;
    size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
        if (j >= o.terms_.size() || (i < terms_.size() && terms_[i].mono > o.terms_[j].mono)) {
            r.terms_.push_back(terms_[i++]);
        } else if (i >= terms_.size() || o.terms_[j].mono > terms_[i].mono) {
            r.terms_.push_back(o.terms_[j++]);
        } else {
            KappaRational c = terms_[i].coeff + o.terms_[j].coeff;
            if (!c.is_zero()) r.terms_.push_back({std::move(c), terms_[i].mono});
            ++i;
            ++j;
        }
    }
    return r;
}

PolyExpr PolyExpr::operator-(const PolyExpr& o) const { return *this + (-o); }

PolyExpr PolyExpr::operator*(const PolyExpr& o) const {
    if (is_zero() || o.is_zero()) return PolyExpr();
    std::map<Monomial, KappaRational> acc;
    for (const auto& a : terms_) {
        for (const auto& b : o.terms_) {
            Monomial m = a.mono * b.mono;
            KappaRational c = a.coeff * b.coeff;
            auto it = acc.find(m);
            if (it == acc.end()) {
                acc.emplace(std::move(m), std::move(c));
            } else {
                it->second = it->second + c;
            }
        }
    }
    PolyExpr r;
    for (auto it = acc.rbegin(); it != acc.rend(); ++it)
        if (!it->second.is_zero()) r.terms_.push_back({it->second, it->first});
    return r;
}

PolyExpr PolyExpr::scaled(const KappaRational& c) const {
    if (c.is_zero()) return PolyExpr();
    PolyExpr r = *this;
    for (auto& t : r.terms_) t.coeff = t.coeff * c;
    return r;
}

PolyExpr PolyExpr::mono_scaled(const Monomial& m) const {
    PolyExpr r;
    r.terms_.reserve(terms_.size());
    std::vector<Term> ts;
    for (const auto& t : terms_) ts.push_back({t.coeff, t.mono * m});
    return from_terms(std::move(ts));
}

PolyExpr PolyExpr::pow(unsigned long n) const {
    PolyExpr acc = constant(1);
    PolyExpr base = *this;
    while (n > 0) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

PolyExpr PolyExpr::partial(const JetVar& v) const {
    std::vector<Term> ts;
    for (const auto& t : terms_) {
        Exponent e = t.mono.exponent_of(v);
        if (e.is_zero()) continue;
        KappaRational c = t.coeff * e.as_kappa_rational();
        Monomial m = t.mono / Monomial(v);
        ts.push_back({std::move(c), std::move(m)});
    }
    return from_terms(std::move(ts));
}

std::optional<PolyExpr> PolyExpr::try_divexact(const PolyExpr& g, size_t iter_cap) const {
    if (g.is_zero()) return std::nullopt;
    if (is_zero()) return PolyExpr();
    Monomial bound = terms_.back().mono / g.terms_.back().mono;
    PolyExpr rem = *this;
    std::vector<Term> q;
    size_t iters = 0;
    while (!rem.is_zero()) {
        if (++iters > iter_cap) return std::nullopt;
        Monomial tm = rem.leading().mono / g.leading().mono;
        if (tm < bound) return std::nullopt;
        KappaRational tc = rem.leading().coeff / g.leading().coeff;
        rem = rem - g.mono_scaled(tm).scaled(tc);
        q.push_back({std::move(tc), std::move(tm)});
    }
    return from_terms(std::move(q));
}

void PolyExpr::collect_vars(std::set<JetVar>& out) const {
    for (const auto& t : terms_)
        for (const auto& [v, e] : t.mono.factors()) out.insert(v);
}

bool PolyExpr::depends_on(const JetVar& v) const {
    for (const auto& t : terms_)
        if (!t.mono.exponent_of(v).is_zero()) return true;
    return false;
}

mpq_class pow_exact(const mpq_class& base, const mpq_class& exp) {
    if (exp == 0) return mpq_class(1);
    if (exp.get_den() == 1) {
        mpz_class e = exp.get_num();
        bool neg = e < 0;
        if (base == 0) {
            if (neg) throw Error(ErrorCode::DivisionByZero, "0 raised to a negative power");
            return mpq_class(0);
        }
        unsigned long n = mpz_class(abs(e)).get_ui();
        mpz_class pn, pd;
        mpz_pow_ui(pn.get_mpz_t(), base.get_num().get_mpz_t(), n);
        mpz_pow_ui(pd.get_mpz_t(), base.get_den().get_mpz_t(), n);
        mpq_class r = neg ? mpq_class(pd, pn) : mpq_class(pn, pd);
        r.canonicalize();
        return r;
    }
    if (base == 0) {
        if (exp < 0) throw Error(ErrorCode::DivisionByZero, "0 raised to a negative power");
        return mpq_class(0);
    }
    if (base < 0)
        throw Error(ErrorCode::FractionalPowerOfNegative,
                    "fractional power of a negative base");
    mpz_class p = exp.get_num(), q = exp.get_den();
    bool neg = p < 0;
    unsigned long pn = mpz_class(abs(p)).get_ui();
    mpz_class bn, bd;
    mpz_pow_ui(bn.get_mpz_t(), base.get_num().get_mpz_t(), pn);
    mpz_pow_ui(bd.get_mpz_t(), base.get_den().get_mpz_t(), pn);
    mpz_class rn, rd;
    int en = mpz_root(rn.get_mpz_t(), bn.get_mpz_t(), q.get_ui());
    int ed = mpz_root(rd.get_mpz_t(), bd.get_mpz_t(), q.get_ui());
    if (!en || !ed) throw Error(ErrorCode::InexactPower, "no exact rational root");
    mpq_class r = neg ? mpq_class(rd, rn) : mpq_class(rn, rd);
    r.canonicalize();
    return r;
}

mpq_class PolyExpr::eval(const mpq_class& kappa, const std::map<JetVar, mpq_class>& point) const {
    mpq_class acc(0);
    for (const auto& t : terms_) {
        mpq_class v = t.coeff.eval(kappa);
        for (const auto& [var, e] : t.mono.factors()) {
            auto it = point.find(var);
            if (it == point.end())
                throw Error(ErrorCode::BadInput, "no sample value for " + var.to_string());
            v *= pow_exact(it->second, e.eval(kappa));
        }
        acc += v;
    }
    return acc;
}

double PolyExpr::eval_double(double kappa, const std::map<JetVar, double>& point) const {
    double acc = 0.0;
    for (const auto& t : terms_) {
        double v = t.coeff.eval_double(kappa);
        for (const auto& [var, e] : t.mono.factors()) {
            auto it = point.find(var);
            if (it == point.end())
                throw Error(ErrorCode::BadInput, "no sample value for " + var.to_string());
            v *= std::pow(it->second, e.eval_double(kappa));
        }
        acc += v;
    }
    return acc;
}

RatExpr::RatExpr(PolyExpr num, PolyExpr den) : num_(std::move(num)), den_(std::move(den)) {
    normalize();
}

void RatExpr::normalize() {
    if (den_.is_zero()) throw Error(ErrorCode::DivisionByZero, "zero denominator");
    if (num_.is_zero()) {
        den_ = PolyExpr::constant(1);
        return;
    }
    if (den_.is_single_term()) {
        const auto& dt = den_.leading();
        KappaRational ci = dt.coeff.inverse();
        Monomial mi = dt.mono.inverse();
        num_ = num_.mono_scaled(mi).scaled(ci);
        den_ = PolyExpr::constant(1);
        return;
    }
    // joint common monomial factor: per-variable minimum exponent across all
    // terms of num and den (absent occurrences count as zero)
    std::set<JetVar> vs;
    num_.collect_vars(vs);
    den_.collect_vars(vs);
    Monomial common;
    for (const auto& v : vs) {
        std::optional<Exponent> mn;
        auto scan = [&](const PolyExpr& p) {
            for (const auto& t : p.terms()) {
                Exponent e = t.mono.exponent_of(v);
                if (!mn || e < *mn) mn = e;
            }
        };
        scan(num_);
        scan(den_);
        // a positive minimum is a genuine common factor, a negative one
        // clears Laurent exponents out of num and den alike
        if (mn && !mn->is_zero()) common = common * Monomial(v, *mn);
    }
    if (!common.is_one()) {
        Monomial inv = common.inverse();
        num_ = num_.mono_scaled(inv);
        den_ = den_.mono_scaled(inv);
    }
    if (den_.is_single_term()) { // extraction may collapse the denominator
        const auto& dt = den_.leading();
        KappaRational ci = dt.coeff.inverse();
        Monomial mi = dt.mono.inverse();
        num_ = num_.mono_scaled(mi).scaled(ci);
        den_ = PolyExpr::constant(1);
        return;
    }
    KappaRational lead = den_.leading().coeff;
    if (!lead.is_one()) {
        KappaRational inv = lead.inverse();
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
    }
}

RatExpr RatExpr::operator-() const {
    RatExpr r = *this;
    r.num_ = -r.num_;
    return r;
}

RatExpr RatExpr::operator+(const RatExpr& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (den_ == o.den_) return RatExpr(num_ + o.num_, den_);
    if (den_.is_one()) return RatExpr(num_ * o.den_ + o.num_, o.den_);
    if (o.den_.is_one()) return RatExpr(num_ + o.num_ * den_, den_);
    if (auto q = o.den_.try_divexact(den_)) return RatExpr(num_ * *q + o.num_, o.den_);
    if (auto q = den_.try_divexact(o.den_)) return RatExpr(num_ + o.num_ * *q, den_);
    return RatExpr(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatExpr RatExpr::operator-(const RatExpr& o) const { return *this + (-o); }

RatExpr RatExpr::operator*(const RatExpr& o) const {
    if (is_zero() || o.is_zero()) return RatExpr();
    return RatExpr(num_ * o.num_, den_ * o.den_);
}

RatExpr RatExpr::operator/(const RatExpr& o) const {
    if (o.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero expression");
    if (is_zero()) return RatExpr();
    return RatExpr(num_ * o.den_, den_ * o.num_);
}

RatExpr RatExpr::pow(long n) const {
    if (n == 0) return from_long(1);
    if (is_zero()) {
        if (n < 0) throw Error(ErrorCode::DivisionByZero, "0 raised to a negative power");
        return RatExpr();
    }
    bool neg = n < 0;
    unsigned long k = static_cast<unsigned long>(neg ? -n : n);
    RatExpr base = neg ? from_long(1) / *this : *this;
    RatExpr acc = from_long(1);
    while (k > 0) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

RatExpr RatExpr::pow_affine(const Exponent& e) const {
    if (e.is_zero()) return from_long(1);
    if (e.is_integer()) return pow(e.as_long());
    if (!den_.is_one() || !num_.is_single_term())
        throw Error(ErrorCode::NonAffineExponent,
                    "non-integer power of a non-monomial expression");
    const auto& t = num_.leading();
    KappaRational c = t.coeff;
    if (!c.is_one()) {
        if (!c.is_constant())
            throw Error(ErrorCode::NonAffineExponent,
                        "non-integer power of a kappa-dependent coefficient");
        if (e.b != 0)
            throw Error(ErrorCode::NonAffineExponent,
                        "kappa-dependent power of a non-unit constant");
        // constant base, constant fractional exponent: exact root or give up
        mpq_class val = pow_exact(c.constant_value(), e.a);
        return constant(KappaRational(val)) *
               RatExpr(PolyExpr::term(KappaRational(1), t.mono.pow_scalar(e)), PolyExpr::constant(1));
    }
    return RatExpr(PolyExpr::term(KappaRational(1), t.mono.pow_scalar(e)), PolyExpr::constant(1));
}

RatExpr RatExpr::partial(const JetVar& v) const {
    if (den_.is_one()) return RatExpr(num_.partial(v), PolyExpr::constant(1));
    if (!den_.depends_on(v)) return RatExpr(num_.partial(v), den_);
    PolyExpr n = num_.partial(v) * den_ - num_ * den_.partial(v);
    return RatExpr(std::move(n), den_ * den_);
}

namespace {

RatExpr substitute_poly(const PolyExpr& p, const std::map<JetVar, RatExpr>& bindings) {
    RatExpr acc = RatExpr::zero();
    for (const auto& t : p.terms()) {
        RatExpr term = RatExpr::constant(t.coeff);
        Monomial untouched;
        for (const auto& [v, e] : t.mono.factors()) {
            auto it = bindings.find(v);
            if (it == bindings.end()) {
                untouched = untouched * Monomial(v, e);
            } else {
                term = term * it->second.pow_affine(e);
            }
        }
        if (!untouched.is_one())
            term = term * RatExpr(PolyExpr::term(KappaRational(1), untouched), PolyExpr::constant(1));
        acc = acc + term;
    }
    return acc;
}

PolyExpr replace_power_poly(const PolyExpr& p, const JetVar& v, const Exponent& unit,
                            const JetVar& repl) {
    std::vector<PolyExpr::Term> ts;
    for (const auto& t : p.terms()) {
        Exponent e = t.mono.exponent_of(v);
        if (e.is_zero()) {
            ts.push_back(t);
            continue;
        }
        // e must be an integer multiple of unit
        mpq_class m;
        if (unit.b != 0) {
            m = e.b / unit.b;
            if (e.a != m * unit.a)
                throw Error(ErrorCode::CancellationFailure,
                            v.to_string() + "^(" + e.to_string() + ") is not a power of " +
                                v.to_string() + "^(" + unit.to_string() + ")");
        } else {
            if (e.b != 0)
                throw Error(ErrorCode::CancellationFailure, "kappa-dependent exponent remains");
            m = e.a / unit.a;
        }
        if (m.get_den() != 1)
            throw Error(ErrorCode::CancellationFailure, "non-integer power multiple");
        Monomial nm = (t.mono / Monomial(v, e)) * Monomial(repl, Exponent(mpq_class(m), mpq_class(0)));
        ts.push_back({t.coeff, nm});
    }
    return PolyExpr::from_terms(std::move(ts));
}

} // namespace

RatExpr RatExpr::substitute(const std::map<JetVar, RatExpr>& bindings) const {
    RatExpr n = substitute_poly(num_, bindings);
    if (den_.is_one()) return n;
    RatExpr d = substitute_poly(den_, bindings);
    return n / d;
}

RatExpr RatExpr::specialize_kappa(const mpq_class& kappa0) const {
    auto spec = [&](const PolyExpr& p) {
        std::vector<PolyExpr::Term> ts;
        for (const auto& t : p.terms()) {
            KappaRational c(t.coeff.eval(kappa0));
            Monomial m;
            for (const auto& [v, e] : t.mono.factors())
                m = m * Monomial(v, Exponent(e.eval(kappa0), mpq_class(0)));
            ts.push_back({std::move(c), std::move(m)});
        }
        return PolyExpr::from_terms(std::move(ts));
    };
    return RatExpr(spec(num_), spec(den_));
}

std::map<long, RatExpr> RatExpr::collect(const JetVar& v) const {
    if (den_.depends_on(v))
        throw Error(ErrorCode::NonLinear, "collect: denominator depends on " + v.to_string());
    std::map<long, std::vector<PolyExpr::Term>> buckets;
    for (const auto& t : num_.terms()) {
        Exponent e = t.mono.exponent_of(v);
        if (!e.is_integer())
            throw Error(ErrorCode::NonAffineExponent,
                        "collect: non-integer exponent of " + v.to_string());
        buckets[e.as_long()].push_back({t.coeff, t.mono / Monomial(v, e)});
    }
    std::map<long, RatExpr> out;
    for (auto& [deg, ts] : buckets)
        out.emplace(deg, RatExpr(PolyExpr::from_terms(std::move(ts)), den_));
    return out;
}

RatExpr RatExpr::replace_power(const JetVar& v, const Exponent& unit, const JetVar& repl) const {
    return RatExpr(replace_power_poly(num_, v, unit, repl),
                   replace_power_poly(den_, v, unit, repl));
}

RatExpr RatExpr::reduced() const {
    if (den_.is_one() || num_.is_zero()) return *this;
    if (auto q = num_.try_divexact(den_)) return RatExpr(*q, PolyExpr::constant(1));
    if (auto q = den_.try_divexact(num_)) return RatExpr(PolyExpr::constant(1), *q);
    return *this;
}

std::set<JetVar> RatExpr::vars() const {
    std::set<JetVar> vs;
    num_.collect_vars(vs);
    den_.collect_vars(vs);
    return vs;
}

Exponent exponent_from_scalar(const RatExpr& e) {
    if (e.is_zero()) return Exponent();
    if (!e.den_is_one() || !e.num().is_single_term() || !e.num().leading().mono.is_one())
        throw Error(ErrorCode::NonAffineExponent, "exponent is not a kappa-affine constant");
    const KappaRational& c = e.num().leading().coeff;
    if (c.den().degree() > 0 || c.num().degree() > 1)
        throw Error(ErrorCode::NonAffineExponent,
                    "exponent is not affine in kappa: " + c.to_string());
    mpq_class d(c.den().coeff(0));
    mpq_class a(c.num().coeff(0));
    mpq_class b(c.num().coeff(1));
    a /= d;
    b /= d;
    a.canonicalize();
    b.canonicalize();
    return Exponent(a, b);
}

mpq_class RatExpr::eval(const mpq_class& kappa, const std::map<JetVar, mpq_class>& point) const {
    mpq_class d = den_.eval(kappa, point);
    if (d == 0) throw Error(ErrorCode::DivisionByZero, "denominator vanishes at sample point");
    return num_.eval(kappa, point) / d;
}

double RatExpr::eval_double(double kappa, const std::map<JetVar, double>& point) const {
    return num_.eval_double(kappa, point) / den_.eval_double(kappa, point);
}

} // namespace jetforge
