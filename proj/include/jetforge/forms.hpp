#pragma once

#include <functional>

#include "jetforge/coverings.hpp"
#include "jetforge/parser.hpp"

namespace jetforge {

/// A coordinate differential on the equation manifold: dt, dx, dy, or du_J
/// for an internal jet coordinate.
struct CobasisElt {
    bool is_coord = true;
    Dir coord = Dir::T;
    JetVar jet;

    static CobasisElt d_coord(Dir d) { return CobasisElt{true, d, {}}; }
    static CobasisElt d_jet(JetVar v) { return CobasisElt{false, Dir::T, std::move(v)}; }

    std::string to_string() const {
        return is_coord ? std::string("d(") + dir_name(coord) + ")" : "d(" + jet.to_string() + ")";
    }
    auto operator<=>(const CobasisElt&) const = default;
};

/// Coefficient policies: canonical expressions for the symbolic engine, raw
/// trees for the numeric oracle.  Both instantiate the same form algebra.
struct RatOps {
    using Coeff = RatExpr;
    static Coeff zero() { return RatExpr::zero(); }
    static Coeff one() { return RatExpr::from_long(1); }
    static bool is_zero(const Coeff& c) { return c.is_zero(); }
    static Coeff add(const Coeff& a, const Coeff& b) { return a + b; }
    static Coeff sub(const Coeff& a, const Coeff& b) { return a - b; }
    static Coeff mul(const Coeff& a, const Coeff& b) { return a * b; }
    static Coeff div(const Coeff& a, const Coeff& b) { return a / b; }
    static Coeff neg(const Coeff& a) { return -a; }
    static Coeff from_number(const mpq_class& q) { return RatExpr::constant(KappaRational(q)); }
    static Coeff kappa() { return RatExpr::kappa(); }
    static Coeff var(const JetVar& v) { return RatExpr::variable(v); }
    static Coeff pow(const Coeff& base, const Coeff& exp);
    static std::set<JetVar> vars(const Coeff& c) { return c.vars(); }
    static Coeff partial(const Coeff& c, const JetVar& v) { return c.partial(v); }
};

struct TreeOps {
    using Coeff = RawPtr;
    static Coeff zero() { return raw_num(0); }
    static Coeff one() { return raw_num(1); }
    static bool is_zero(const Coeff& c) {
        return c->kind == RawExpr::Kind::Number && c->number == 0;
    }
    static Coeff add(const Coeff& a, const Coeff& b) { return raw_add(a, b); }
    static Coeff sub(const Coeff& a, const Coeff& b) { return raw_sub(a, b); }
    static Coeff mul(const Coeff& a, const Coeff& b) { return raw_mul(a, b); }
    static Coeff div(const Coeff& a, const Coeff& b) { return raw_div(a, b); }
    static Coeff neg(const Coeff& a) { return raw_neg(a); }
    static Coeff from_number(const mpq_class& q) { return raw_num(q); }
    static Coeff kappa() { return raw_kappa(); }
    static Coeff var(const JetVar& v) { return raw_var(v); }
    static Coeff pow(const Coeff& base, const Coeff& exp) { return raw_pow(base, exp); }
    static std::set<JetVar> vars(const Coeff& c) {
        std::set<JetVar> vs;
        raw_collect_vars(c, vs);
        return vs;
    }
    static Coeff partial(const Coeff& c, const JetVar& v) { return raw_partial(c, v); }
};

template <class Ops>
struct BasicOneForm {
    using Coeff = typename Ops::Coeff;
    std::map<CobasisElt, Coeff> comps;

    void add_term(const CobasisElt& e, const Coeff& c) {
        auto it = comps.find(e);
        if (it == comps.end()) {
            if (!Ops::is_zero(c)) comps.emplace(e, c);
        } else {
            it->second = Ops::add(it->second, c);
            if (Ops::is_zero(it->second)) comps.erase(it);
        }
    }
};

template <class Ops>
struct BasicTwoForm {
    using Coeff = typename Ops::Coeff;
    std::map<std::pair<CobasisElt, CobasisElt>, Coeff> comps; // key.first < key.second

    void add_term(CobasisElt a, CobasisElt b, Coeff c) {
        if (a == b) return;
        if (b < a) {
            std::swap(a, b);
            c = Ops::neg(c);
        }
        auto key = std::make_pair(a, b);
        auto it = comps.find(key);
        if (it == comps.end()) {
            if (!Ops::is_zero(c)) comps.emplace(key, std::move(c));
        } else {
            it->second = Ops::add(it->second, c);
            if (Ops::is_zero(it->second)) comps.erase(it);
        }
    }
};

template <class Ops>
struct BasicThreeForm {
    using Coeff = typename Ops::Coeff;
    std::map<std::tuple<CobasisElt, CobasisElt, CobasisElt>, Coeff> comps;

    void add_term(CobasisElt a, CobasisElt b, CobasisElt c, Coeff v) {
        // sort with sign
        int sign = 1;
        auto sw = [&](CobasisElt& x, CobasisElt& y) {
            if (y < x) {
                std::swap(x, y);
                sign = -sign;
            }
        };
        sw(a, b);
        sw(b, c);
        sw(a, b);
        if (a == b || b == c) return;
        if (sign < 0) v = Ops::neg(v);
        auto key = std::make_tuple(a, b, c);
        auto it = comps.find(key);
        if (it == comps.end()) {
            if (!Ops::is_zero(v)) comps.emplace(key, std::move(v));
        } else {
            it->second = Ops::add(it->second, v);
            if (Ops::is_zero(it->second)) comps.erase(it);
        }
    }
};

template <class Ops>
BasicOneForm<Ops> operator+(const BasicOneForm<Ops>& x, const BasicOneForm<Ops>& y) {
    BasicOneForm<Ops> r = x;
    for (const auto& [e, c] : y.comps) r.add_term(e, c);
    return r;
}

template <class Ops>
BasicOneForm<Ops> scaled(const BasicOneForm<Ops>& x, const typename Ops::Coeff& s) {
    BasicOneForm<Ops> r;
    for (const auto& [e, c] : x.comps) {
        auto v = Ops::mul(s, c);
        if (!Ops::is_zero(v)) r.comps.emplace(e, v);
    }
    return r;
}

template <class Ops>
BasicOneForm<Ops> negated(const BasicOneForm<Ops>& x) {
    BasicOneForm<Ops> r;
    for (const auto& [e, c] : x.comps) r.comps.emplace(e, Ops::neg(c));
    return r;
}

template <class Ops>
BasicTwoForm<Ops> operator+(const BasicTwoForm<Ops>& x, const BasicTwoForm<Ops>& y) {
    BasicTwoForm<Ops> r = x;
    for (const auto& [k, c] : y.comps) r.add_term(k.first, k.second, c);
    return r;
}

template <class Ops>
BasicTwoForm<Ops> scaled(const BasicTwoForm<Ops>& x, const typename Ops::Coeff& s) {
    BasicTwoForm<Ops> r;
    for (const auto& [k, c] : x.comps) {
        auto v = Ops::mul(s, c);
        if (!Ops::is_zero(v)) r.comps.emplace(k, v);
    }
    return r;
}

template <class Ops>
BasicTwoForm<Ops> negated(const BasicTwoForm<Ops>& x) {
    BasicTwoForm<Ops> r;
    for (const auto& [k, c] : x.comps) r.comps.emplace(k, Ops::neg(c));
    return r;
}

template <class Ops>
BasicThreeForm<Ops> operator+(const BasicThreeForm<Ops>& x, const BasicThreeForm<Ops>& y) {
    BasicThreeForm<Ops> r = x;
    for (const auto& [k, c] : y.comps)
        r.add_term(std::get<0>(k), std::get<1>(k), std::get<2>(k), c);
    return r;
}

template <class Ops>
BasicTwoForm<Ops> wedge(const BasicOneForm<Ops>& x, const BasicOneForm<Ops>& y) {
    BasicTwoForm<Ops> r;
    for (const auto& [a, ca] : x.comps)
        for (const auto& [b, cb] : y.comps) r.add_term(a, b, Ops::mul(ca, cb));
    return r;
}

template <class Ops>
BasicThreeForm<Ops> wedge(const BasicTwoForm<Ops>& x, const BasicOneForm<Ops>& y) {
    BasicThreeForm<Ops> r;
    for (const auto& [k, ca] : x.comps)
        for (const auto& [b, cb] : y.comps)
            r.add_term(k.first, k.second, b, Ops::mul(ca, cb));
    return r;
}

template <class Ops>
BasicThreeForm<Ops> wedge(const BasicOneForm<Ops>& x, const BasicTwoForm<Ops>& y) {
    BasicThreeForm<Ops> r;
    for (const auto& [a, ca] : x.comps)
        for (const auto& [k, cb] : y.comps)
            r.add_term(a, k.first, k.second, Ops::mul(ca, cb));
    return r;
}

/// d of a coefficient function: sum of partials against jet differentials.
template <class Ops>
BasicOneForm<Ops> d_scalar(const typename Ops::Coeff& f) {
    BasicOneForm<Ops> r;
    for (const auto& v : Ops::vars(f)) {
        auto p = Ops::partial(f, v);
        if (!Ops::is_zero(p)) r.add_term(CobasisElt::d_jet(v), p);
    }
    return r;
}

template <class Ops>
BasicTwoForm<Ops> exterior_d(const BasicOneForm<Ops>& x) {
    BasicTwoForm<Ops> r;
    for (const auto& [e, c] : x.comps) {
        for (const auto& v : Ops::vars(c)) {
            auto p = Ops::partial(c, v);
            if (!Ops::is_zero(p)) r.add_term(CobasisElt::d_jet(v), e, p);
        }
    }
    return r;
}

template <class Ops>
BasicThreeForm<Ops> exterior_d(const BasicTwoForm<Ops>& x) {
    BasicThreeForm<Ops> r;
    for (const auto& [k, c] : x.comps) {
        for (const auto& v : Ops::vars(c)) {
            auto p = Ops::partial(c, v);
            if (!Ops::is_zero(p)) r.add_term(CobasisElt::d_jet(v), k.first, k.second, p);
        }
    }
    return r;
}

/// A value of any degree 0..3, produced by evaluating a form expression.
template <class Ops>
struct FormVal {
    int degree = 0;
    typename Ops::Coeff scalar = Ops::zero();
    BasicOneForm<Ops> one;
    BasicTwoForm<Ops> two;
    BasicThreeForm<Ops> three;

    static FormVal from_scalar(typename Ops::Coeff c) {
        FormVal v;
        v.degree = 0;
        v.scalar = std::move(c);
        return v;
    }
    static FormVal from_one(BasicOneForm<Ops> f) {
        FormVal v;
        v.degree = 1;
        v.one = std::move(f);
        return v;
    }
    static FormVal from_two(BasicTwoForm<Ops> f) {
        FormVal v;
        v.degree = 2;
        v.two = std::move(f);
        return v;
    }
};

/// Evaluate a parsed expression into a form value.  Identifiers resolve to
/// named scalars, named forms, or (when permitted) bare jet symbols.
template <class Ops>
class FormEvaluator {
public:
    using Coeff = typename Ops::Coeff;
    std::function<std::optional<Coeff>(const std::string&)> scalar_lookup;
    std::function<std::optional<FormVal<Ops>>(const std::string&)> form_lookup;
    const std::set<std::string>* allowed_symbols = nullptr;

    FormVal<Ops> eval(const AstPtr& a) const;
};

using OneForm = BasicOneForm<RatOps>;
using TwoForm = BasicTwoForm<RatOps>;
using ThreeForm = BasicThreeForm<RatOps>;

std::string print_form(const OneForm& f);
std::string print_form(const TwoForm& f);

/// Result of matching d(lhs) against an rhs two-form.
struct StructureResidual {
    TwoForm lhs, rhs, residual;
    bool zero = false;
    /// entries of the residual, rendered, largest term count first
    std::vector<std::pair<std::string, std::string>> nonzero_entries;
};

StructureResidual structure_residual(const OneForm& lhs_form, const TwoForm& rhs);

struct CoefficientSolution {
    std::map<JetVar, RatExpr> solved;
    bool residual_zero = false;
    TwoForm residual; // after back-substitution
};

/// Solve for unknown scalar coefficients appearing linearly in the residual
/// of d(lhs) - rhs, then back-substitute and verify.
CoefficientSolution solve_structure_coefficients(const OneForm& lhs_form, const TwoForm& rhs,
                                                 const std::vector<JetVar>& unknowns,
                                                 AssumptionSet& assume);

/// Scaling weight (p(kappa), q(kappa)) of a jet coordinate of the symbol `u`
/// under the two-parameter scaling family preserved by the central equation;
/// used to lint transcriptions: every invariant form must be homogeneous of
/// weight zero.
std::pair<KappaRational, KappaRational> scaling_weight(const JetVar& v);
std::pair<KappaRational, KappaRational> scaling_weight(const CobasisElt& e);

/// Weight of an expression if homogeneous, nullopt otherwise.
std::optional<std::pair<KappaRational, KappaRational>> expr_weight(const RatExpr& e);

/// True when every component of the form has total weight zero.
bool is_weight_invariant(const OneForm& f);

template <class Ops>
FormVal<Ops> FormEvaluator<Ops>::eval(const AstPtr& a) const {
    auto scalar0 = [](typename Ops::Coeff c) { return FormVal<Ops>::from_scalar(std::move(c)); };
    switch (a->kind) {
        case Ast::Kind::Number: return scalar0(Ops::from_number(a->number));
        case Ast::Kind::Kappa: return scalar0(Ops::kappa());
        case Ast::Kind::Var: return scalar0(Ops::var(a->var));
        case Ast::Kind::Ident: {
            if (scalar_lookup)
                if (auto c = scalar_lookup(a->name)) return scalar0(*c);
            if (form_lookup)
                if (auto f = form_lookup(a->name)) return *f;
            if (!allowed_symbols || allowed_symbols->count(a->name))
                return scalar0(Ops::var(JetVar{a->name, {}}));
            throw Error(ErrorCode::BadInput, "unknown identifier '" + a->name + "' at line " +
                                                 std::to_string(a->span.line));
        }
        case Ast::Kind::DiffCoord: {
            BasicOneForm<Ops> f;
            f.comps.emplace(CobasisElt::d_coord(a->coord), Ops::one());
            return FormVal<Ops>::from_one(std::move(f));
        }
        case Ast::Kind::DiffVar: {
            BasicOneForm<Ops> f;
            f.comps.emplace(CobasisElt::d_jet(a->var), Ops::one());
            return FormVal<Ops>::from_one(std::move(f));
        }
        case Ast::Kind::Neg: {
            FormVal<Ops> v = eval(a->kids[0]);
            switch (v.degree) {
                case 0: v.scalar = Ops::neg(v.scalar); break;
                case 1: v.one = negated(v.one); break;
                case 2: v.two = negated(v.two); break;
                default: throw Error(ErrorCode::DegreeOverflow, "negation of a 3-form");
            }
            return v;
        }
        case Ast::Kind::Add:
        case Ast::Kind::Sub: {
            FormVal<Ops> x = eval(a->kids[0]);
            FormVal<Ops> y = eval(a->kids[1]);
            if (a->kind == Ast::Kind::Sub) {
                switch (y.degree) {
                    case 0: y.scalar = Ops::neg(y.scalar); break;
                    case 1: y.one = negated(y.one); break;
                    case 2: y.two = negated(y.two); break;
                    default: throw Error(ErrorCode::DegreeOverflow, "subtraction of a 3-form");
                }
            }
            if (x.degree != y.degree)
                throw Error(ErrorCode::BadInput,
                            "sum of forms of different degree at line " +
                                std::to_string(a->span.line));
            switch (x.degree) {
                case 0: x.scalar = Ops::add(x.scalar, y.scalar); break;
                case 1: x.one = x.one + y.one; break;
                case 2: x.two = x.two + y.two; break;
                default: throw Error(ErrorCode::DegreeOverflow, "sum of 3-forms");
            }
            return x;
        }
        case Ast::Kind::Mul: {
            FormVal<Ops> x = eval(a->kids[0]);
            FormVal<Ops> y = eval(a->kids[1]);
            if (x.degree > 0 && y.degree > 0)
                throw Error(ErrorCode::BadInput,
                            "'*' between forms; use the wedge '/\\' at line " +
                                std::to_string(a->span.line));
            if (x.degree == 0 && y.degree == 0)
                return scalar0(Ops::mul(x.scalar, y.scalar));
            const FormVal<Ops>& form = x.degree > 0 ? x : y;
            const typename Ops::Coeff& s = x.degree > 0 ? y.scalar : x.scalar;
            if (form.degree == 1) return FormVal<Ops>::from_one(scaled(form.one, s));
            return FormVal<Ops>::from_two(scaled(form.two, s));
        }
        case Ast::Kind::Div: {
            FormVal<Ops> x = eval(a->kids[0]);
            FormVal<Ops> y = eval(a->kids[1]);
            if (y.degree != 0)
                throw Error(ErrorCode::BadInput, "division by a form at line " +
                                                     std::to_string(a->span.line));
            auto inv = Ops::div(Ops::one(), y.scalar);
            switch (x.degree) {
                case 0: return scalar0(Ops::mul(x.scalar, inv));
                case 1: return FormVal<Ops>::from_one(scaled(x.one, inv));
                case 2: return FormVal<Ops>::from_two(scaled(x.two, inv));
                default: throw Error(ErrorCode::DegreeOverflow, "division of a 3-form");
            }
        }
        case Ast::Kind::Pow: {
            FormVal<Ops> b = eval(a->kids[0]);
            FormVal<Ops> e = eval(a->kids[1]);
            if (b.degree != 0 || e.degree != 0)
                throw Error(ErrorCode::BadInput, "power of a form at line " +
                                                     std::to_string(a->span.line));
            return scalar0(Ops::pow(b.scalar, e.scalar));
        }
        case Ast::Kind::Wedge: {
            FormVal<Ops> x = eval(a->kids[0]);
            FormVal<Ops> y = eval(a->kids[1]);
            if (x.degree == 1 && y.degree == 1)
                return FormVal<Ops>::from_two(wedge(x.one, y.one));
            if (x.degree + y.degree == 3 && x.degree >= 1 && y.degree >= 1) {
                FormVal<Ops> v;
                v.degree = 3;
                v.three = x.degree == 2 ? wedge(x.two, y.one) : wedge(x.one, y.two);
                return v;
            }
            if (x.degree == 0 || y.degree == 0)
                throw Error(ErrorCode::BadInput, "wedge with a scalar at line " +
                                                     std::to_string(a->span.line));
            throw Error(ErrorCode::DegreeOverflow, "wedge above degree 3 at line " +
                                                       std::to_string(a->span.line));
        }
    }
    throw Error(ErrorCode::BadInput, "unreachable form ast kind");
}

} // namespace jetforge
