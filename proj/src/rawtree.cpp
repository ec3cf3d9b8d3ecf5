#include "jetforge/rawtree.hpp"

#include <cmath>

namespace jetforge {

namespace {

RawPtr make(RawExpr::Kind k, std::vector<RawPtr> kids) {
    auto e = std::make_shared<RawExpr>();
    e->kind = k;
    e->kids = std::move(kids);
    return e;
}

} // namespace

RawPtr raw_num(mpq_class q) {
    auto e = std::make_shared<RawExpr>();
    e->kind = RawExpr::Kind::Number;
    e->number = std::move(q);
    return e;
}

RawPtr raw_num(long n) { return raw_num(mpq_class(n)); }

RawPtr raw_kappa() {
    auto e = std::make_shared<RawExpr>();
    e->kind = RawExpr::Kind::Kappa;
    return e;
}

RawPtr raw_var(JetVar v) {
    auto e = std::make_shared<RawExpr>();
    e->kind = RawExpr::Kind::Var;
    e->var = std::move(v);
    return e;
}

RawPtr raw_add(RawPtr a, RawPtr b) { return make(RawExpr::Kind::Add, {std::move(a), std::move(b)}); }
RawPtr raw_sub(RawPtr a, RawPtr b) { return make(RawExpr::Kind::Sub, {std::move(a), std::move(b)}); }
RawPtr raw_mul(RawPtr a, RawPtr b) { return make(RawExpr::Kind::Mul, {std::move(a), std::move(b)}); }
RawPtr raw_div(RawPtr a, RawPtr b) { return make(RawExpr::Kind::Div, {std::move(a), std::move(b)}); }
RawPtr raw_neg(RawPtr a) { return make(RawExpr::Kind::Neg, {std::move(a)}); }
RawPtr raw_pow(RawPtr base, RawPtr exp) { return make(RawExpr::Kind::Pow, {std::move(base), std::move(exp)}); }

mpq_class RawEvaluator::eval(const RawPtr& e) {
    auto it = memo_.find(e.get());
    if (it != memo_.end()) return it->second;
    mpq_class v;
    switch (e->kind) {
        case RawExpr::Kind::Number: v = e->number; break;
        case RawExpr::Kind::Kappa: v = kappa_; break;
        case RawExpr::Kind::Var: {
            auto pit = point_->find(e->var);
            if (pit == point_->end())
                throw Error(ErrorCode::BadInput, "no sample value for " + e->var.to_string());
            v = pit->second;
            break;
        }
        case RawExpr::Kind::Add: v = eval(e->kids[0]) + eval(e->kids[1]); break;
        case RawExpr::Kind::Sub: v = eval(e->kids[0]) - eval(e->kids[1]); break;
        case RawExpr::Kind::Mul: v = eval(e->kids[0]) * eval(e->kids[1]); break;
        case RawExpr::Kind::Div: {
            mpq_class d = eval(e->kids[1]);
            if (d == 0) throw Error(ErrorCode::DivisionByZero, "raw evaluation divides by zero");
            v = eval(e->kids[0]) / d;
            break;
        }
        case RawExpr::Kind::Neg: v = -eval(e->kids[0]); break;
        case RawExpr::Kind::Pow: v = pow_exact(eval(e->kids[0]), eval(e->kids[1])); break;
    }
    memo_.emplace(e.get(), v);
    return v;
}

double RawDoubleEvaluator::eval(const RawPtr& e) {
    auto it = memo_.find(e.get());
    if (it != memo_.end()) return it->second;
    double v = 0.0;
    switch (e->kind) {
        case RawExpr::Kind::Number: v = e->number.get_d(); break;
        case RawExpr::Kind::Kappa: v = kappa_; break;
        case RawExpr::Kind::Var: {
            auto pit = point_->find(e->var);
            if (pit == point_->end())
                throw Error(ErrorCode::BadInput, "no sample value for " + e->var.to_string());
            v = pit->second;
            break;
        }
        case RawExpr::Kind::Add: v = eval(e->kids[0]) + eval(e->kids[1]); break;
        case RawExpr::Kind::Sub: v = eval(e->kids[0]) - eval(e->kids[1]); break;
        case RawExpr::Kind::Mul: v = eval(e->kids[0]) * eval(e->kids[1]); break;
        case RawExpr::Kind::Div: v = eval(e->kids[0]) / eval(e->kids[1]); break;
        case RawExpr::Kind::Neg: v = -eval(e->kids[0]); break;
        case RawExpr::Kind::Pow: v = std::pow(eval(e->kids[0]), eval(e->kids[1])); break;
    }
    maxmag_ = std::max(maxmag_, std::fabs(v));
    memo_.emplace(e.get(), v);
    return v;
}

namespace {

void collect_rec(const RawPtr& e, std::set<JetVar>& out, std::set<const RawExpr*>& seen) {
    if (!seen.insert(e.get()).second) return;
    if (e->kind == RawExpr::Kind::Var) out.insert(e->var);
    for (const auto& k : e->kids) collect_rec(k, out, seen);
}

} // namespace

void raw_collect_vars(const RawPtr& e, std::set<JetVar>& out) {
    std::set<const RawExpr*> seen;
    collect_rec(e, out, seen);
}

bool raw_has_jet_vars(const RawPtr& e) {
    std::set<JetVar> vs;
    raw_collect_vars(e, vs);
    return !vs.empty();
}

RawPtr raw_partial(const RawPtr& e, const JetVar& v) {
    switch (e->kind) {
        case RawExpr::Kind::Number:
        case RawExpr::Kind::Kappa:
            return raw_num(0);
        case RawExpr::Kind::Var:
            return raw_num(e->var == v ? 1 : 0);
        case RawExpr::Kind::Add:
            return raw_add(raw_partial(e->kids[0], v), raw_partial(e->kids[1], v));
        case RawExpr::Kind::Sub:
            return raw_sub(raw_partial(e->kids[0], v), raw_partial(e->kids[1], v));
        case RawExpr::Kind::Mul:
            return raw_add(raw_mul(raw_partial(e->kids[0], v), e->kids[1]),
                           raw_mul(e->kids[0], raw_partial(e->kids[1], v)));
        case RawExpr::Kind::Div:
            // (a/b)' = a'/b - a b'/b^2
            return raw_sub(raw_div(raw_partial(e->kids[0], v), e->kids[1]),
                           raw_div(raw_mul(e->kids[0], raw_partial(e->kids[1], v)),
                                   raw_mul(e->kids[1], e->kids[1])));
        case RawExpr::Kind::Neg:
            return raw_neg(raw_partial(e->kids[0], v));
        case RawExpr::Kind::Pow: {
            if (raw_has_jet_vars(e->kids[1]))
                throw Error(ErrorCode::NonAffineExponent, "derivative of variable exponent");
            // d(b^e) = e * b^(e-1) * db
            RawPtr em1 = raw_sub(e->kids[1], raw_num(1));
            return raw_mul(raw_mul(e->kids[1], raw_pow(e->kids[0], em1)),
                           raw_partial(e->kids[0], v));
        }
    }
    throw Error(ErrorCode::BadInput, "unreachable raw kind");
}

namespace {

RawPtr substitute_rec(const RawPtr& e, const std::map<JetVar, RawPtr>& bindings,
                      std::unordered_map<const RawExpr*, RawPtr>& memo) {
    auto it = memo.find(e.get());
    if (it != memo.end()) return it->second;
    RawPtr r;
    if (e->kind == RawExpr::Kind::Var) {
        auto bit = bindings.find(e->var);
        r = bit == bindings.end() ? e : bit->second;
    } else if (e->kids.empty()) {
        r = e;
    } else {
        std::vector<RawPtr> kids;
        bool changed = false;
        kids.reserve(e->kids.size());
        for (const auto& k : e->kids) {
            kids.push_back(substitute_rec(k, bindings, memo));
            changed = changed || kids.back() != k;
        }
        if (!changed) {
            r = e;
        } else {
            auto n = std::make_shared<RawExpr>();
            n->kind = e->kind;
            n->number = e->number;
            n->var = e->var;
            n->kids = std::move(kids);
            r = n;
        }
    }
    memo.emplace(e.get(), r);
    return r;
}

} // namespace

RawPtr raw_substitute(const RawPtr& e, const std::map<JetVar, RawPtr>& bindings) {
    std::unordered_map<const RawExpr*, RawPtr> memo;
    return substitute_rec(e, bindings, memo);
}

RatExpr normalize_raw(const RawPtr& e) {
    switch (e->kind) {
        case RawExpr::Kind::Number: return RatExpr::constant(KappaRational(e->number));
        case RawExpr::Kind::Kappa: return RatExpr::kappa();
        case RawExpr::Kind::Var: return RatExpr::variable(e->var);
        case RawExpr::Kind::Add: return normalize_raw(e->kids[0]) + normalize_raw(e->kids[1]);
        case RawExpr::Kind::Sub: return normalize_raw(e->kids[0]) - normalize_raw(e->kids[1]);
        case RawExpr::Kind::Mul: return normalize_raw(e->kids[0]) * normalize_raw(e->kids[1]);
        case RawExpr::Kind::Div: return normalize_raw(e->kids[0]) / normalize_raw(e->kids[1]);
        case RawExpr::Kind::Neg: return -normalize_raw(e->kids[0]);
        case RawExpr::Kind::Pow:
            return normalize_raw(e->kids[0]).pow_affine(exponent_from_scalar(normalize_raw(e->kids[1])));
    }
    throw Error(ErrorCode::BadInput, "unreachable raw kind");
}

RawPtr raw_from_ratexpr(const RatExpr& e) {
    auto poly_raw = [](const PolyExpr& p) -> RawPtr {
        if (p.is_zero()) return raw_num(0);
        RawPtr acc;
        for (const auto& t : p.terms()) {
            RawPtr term;
            const KappaRational& c = t.coeff;
            // coefficient num/den as polynomials in kappa
            auto kpoly_raw = [](const KPoly& kp) -> RawPtr {
                RawPtr acc2;
                for (int i = 0; i <= kp.degree(); ++i) {
                    if (kp.coeff(i) == 0) continue;
                    RawPtr piece = raw_num(mpq_class(kp.coeff(i)));
                    if (i >= 1) piece = raw_mul(piece, raw_pow(raw_kappa(), raw_num(i)));
                    acc2 = acc2 ? raw_add(acc2, piece) : piece;
                }
                return acc2 ? acc2 : raw_num(0);
            };
            term = kpoly_raw(c.num());
            if (!c.den().is_one()) term = raw_div(term, kpoly_raw(c.den()));
            for (const auto& [v, ex] : t.mono.factors()) {
                RawPtr exp_tree = raw_add(raw_num(ex.a), raw_mul(raw_num(ex.b), raw_kappa()));
                if (ex.b == 0) exp_tree = raw_num(ex.a);
                term = raw_mul(term, raw_pow(raw_var(v), exp_tree));
            }
            acc = acc ? raw_add(acc, term) : term;
        }
        return acc;
    };
    RawPtr n = poly_raw(e.num());
    if (e.den().is_one()) return n;
    return raw_div(n, poly_raw(e.den()));
}

} // namespace jetforge
