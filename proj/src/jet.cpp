#include "jetforge/jet.hpp"

#include <algorithm>

#include "jetforge/parser.hpp"

namespace jetforge {

std::vector<mpq_class> kappa_denominator_roots(const RatExpr& e) {
    std::vector<mpq_class> roots;
    auto scan = [&](const PolyExpr& p) {
        for (const auto& t : p.terms()) {
            if (t.coeff.den().degree() < 1) continue;
            for (const auto& r : t.coeff.den().rational_roots())
                if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
        }
    };
    scan(e.num());
    scan(e.den());
    std::sort(roots.begin(), roots.end());
    return roots;
}

void Equation::validate() const {
    for (const auto& v : rhs.vars()) {
        if (v.sym == unknown() && v.idx.dominates(principal.idx))
            throw Error(ErrorCode::BadInput,
                        "equation '" + name + "': rhs contains " + v.to_string() +
                            ", a consequence of the principal derivative");
    }
    for (const auto& r : kappa_denominator_roots(rhs)) {
        if (std::find(excluded_kappa.begin(), excluded_kappa.end(), r) == excluded_kappa.end())
            throw Error(ErrorCode::BadInput,
                        "equation '" + name + "': kappa = " + r.get_str() +
                            " makes a coefficient denominator vanish but is not excluded");
    }
}

std::string Equation::to_string() const {
    return principal.to_string() + " = " + print_expr(rhs);
}

void Covering::validate() const {
    auto scan = [&](const RatExpr& e, const char* which) {
        for (const auto& v : e.vars()) {
            if (v.sym == pseudo && (v.idx.t > 0 || v.idx.y > 0))
                throw Error(ErrorCode::BadInput,
                            "covering '" + name + "': " + which + " contains " + v.to_string() +
                                "; only x-derivatives of the pseudopotential are fiber coordinates");
        }
    };
    scan(f_t, "f_t");
    scan(f_y, "f_y");
}

std::string Covering::to_string() const {
    return pseudo + "[t] = " + print_expr(f_t) + "\n" + pseudo + "[y] = " + print_expr(f_y);
}

void AssumptionSet::add_poly(const PolyExpr& p) {
    if (p.is_zero()) {
        // an identically zero nonvanishing assumption can never be satisfied;
        // keep it so the sampler reports exhaustion instead of hiding it
        nonzero.emplace("0", p);
        return;
    }
    if (p.size() == 1 && p.leading().mono.is_one()) {
        // pure kappa-rational content: keep only a nontrivial kappa polynomial
        const KappaRational& c = p.leading().coeff;
        if (c.num().degree() >= 1) add_kappa_poly(c.num());
        return;
    }
    nonzero.emplace(print_poly(p), p);
}

void AssumptionSet::add_kappa_poly(const KPoly& p) {
    if (p.degree() < 1) return;
    KPoly pp = p.primitive_part();
    PolyExpr as_expr = PolyExpr::constant(KappaRational(pp, KPoly(1)));
    nonzero.emplace(pp.to_string(), as_expr);
}

void AssumptionSet::add_expr(const RatExpr& e) {
    if (!e.den().is_one()) add_poly(e.den());
    auto scan = [&](const PolyExpr& p) {
        for (const auto& t : p.terms()) {
            add_kappa_poly(t.coeff.den());
            for (const auto& [v, ex] : t.mono.factors()) {
                bool plain = ex.b == 0 && ex.a.get_den() == 1 && ex.a >= 0;
                if (!plain) nonzero.emplace(v.to_string(), PolyExpr::variable(v));
                if (ex.b != 0 || ex.a.get_den() != 1) positive.insert(v);
            }
        }
    };
    scan(e.num());
    scan(e.den());
}

void AssumptionSet::merge(const AssumptionSet& o) {
    for (const auto& [k, v] : o.nonzero) nonzero.emplace(k, v);
    positive.insert(o.positive.begin(), o.positive.end());
}

std::vector<std::string> AssumptionSet::rendered() const {
    std::vector<std::string> out;
    out.reserve(nonzero.size());
    for (const auto& [k, v] : nonzero) out.push_back(k);
    return out;
}

Context::Context(std::optional<Equation> base, std::vector<Covering> coverings,
                 std::set<std::string> free_symbols, int max_order)
    : base_(std::move(base)), coverings_(std::move(coverings)), free_(std::move(free_symbols)),
      max_order_(max_order) {
    if (base_) base_->validate();
    for (const auto& c : coverings_) c.validate();
}

Context::Class Context::classify(const std::string& sym) const {
    if (base_ && base_->unknown() == sym) return Class::BaseUnknown;
    for (const auto& c : coverings_)
        if (c.pseudo == sym) return Class::Pseudo;
    if (free_.count(sym)) return Class::Free;
    throw Error(ErrorCode::UnclassifiedSymbol, "symbol '" + sym + "' is not classified");
}

bool Context::is_internal(const JetVar& v) const {
    switch (classify(v.sym)) {
        case Class::Free: return true;
        case Class::BaseUnknown: return !v.idx.dominates(base_->principal.idx);
        case Class::Pseudo: return v.idx.t == 0 && v.idx.y == 0;
    }
    return true;
}

RatExpr Context::prolong(const MultiIndex& excess) const {
    auto it = prolong_memo_.find(excess);
    if (it != prolong_memo_.end()) return it->second;
    if (excess.total() > max_order_)
        throw Error(ErrorCode::RecursionLimit,
                    "prolongation order " + std::to_string(excess.total()) + " exceeds cap " +
                        std::to_string(max_order_));
    RatExpr r;
    if (excess == MultiIndex{}) {
        r = base_->rhs;
    } else if (excess.t > 0) {
        r = total_derivative(prolong(excess.bumped(Dir::T, -1)), Dir::T);
    } else if (excess.x > 0) {
        r = total_derivative(prolong(excess.bumped(Dir::X, -1)), Dir::X);
    } else {
        r = total_derivative(prolong(excess.bumped(Dir::Y, -1)), Dir::Y);
    }
    prolong_memo_.emplace(excess, r);
    return r;
}

RatExpr Context::covering_prolong(size_t ci, Dir dir, int xorder) const {
    auto key = std::make_tuple(ci, dir, xorder);
    auto it = covering_memo_.find(key);
    if (it != covering_memo_.end()) return it->second;
    if (xorder > max_order_ + 2)
        throw Error(ErrorCode::RecursionLimit, "covering prolongation exceeds cap");
    RatExpr r;
    if (xorder == 0) {
        r = dir == Dir::T ? coverings_[ci].f_t : coverings_[ci].f_y;
    } else {
        r = total_derivative(covering_prolong(ci, dir, xorder - 1), Dir::X);
    }
    covering_memo_.emplace(key, r);
    return r;
}

RatExpr Context::reduce(const JetVar& v) const {
    auto it = reduce_memo_.find(v);
    if (it != reduce_memo_.end()) return it->second;
    RatExpr r;
    switch (classify(v.sym)) {
        case Class::Free:
            r = RatExpr::variable(v);
            break;
        case Class::BaseUnknown:
            if (v.idx.dominates(base_->principal.idx)) {
                r = prolong(v.idx - base_->principal.idx);
            } else {
                r = RatExpr::variable(v);
            }
            break;
        case Class::Pseudo: {
            size_t ci = 0;
            while (coverings_[ci].pseudo != v.sym) ++ci;
            if (v.idx.t == 0 && v.idx.y == 0) {
                r = RatExpr::variable(v);
            } else if (v.idx.y > 0) {
                // peel one y-derivative: D_y of the lower coordinate
                JetVar lower{v.sym, v.idx.bumped(Dir::Y, -1)};
                if (lower.idx.t == 0 && lower.idx.y == 0) {
                    r = covering_prolong(ci, Dir::Y, lower.idx.x);
                } else {
                    r = total_derivative(reduce(lower), Dir::Y);
                }
            } else {
                JetVar lower{v.sym, v.idx.bumped(Dir::T, -1)};
                if (lower.idx.t == 0 && lower.idx.y == 0) {
                    r = covering_prolong(ci, Dir::T, lower.idx.x);
                } else {
                    r = total_derivative(reduce(lower), Dir::T);
                }
            }
            break;
        }
    }
    reduce_memo_.emplace(v, r);
    return r;
}

RatExpr Context::reduce_expr(const RatExpr& e) const {
    std::map<JetVar, RatExpr> bindings;
    for (const auto& v : e.vars()) {
        if (!is_internal(v)) bindings.emplace(v, reduce(v));
    }
    if (bindings.empty()) return e;
    return e.substitute(bindings);
}

RatExpr Context::total_derivative(const RatExpr& e, Dir dir) const {
    RatExpr acc;
    for (const auto& v : e.vars()) {
        RatExpr pd = e.partial(v);
        if (pd.is_zero()) continue;
        acc = acc + pd * reduce(JetVar{v.sym, v.idx.bumped(dir)});
    }
    return acc;
}

RatExpr Context::commutation_check(const RatExpr& e, Dir a, Dir b) const {
    RatExpr r = reduce_expr(e);
    return total_derivative(total_derivative(r, a), b) -
           total_derivative(total_derivative(r, b), a);
}

} // namespace jetforge
