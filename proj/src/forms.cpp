#include "jetforge/forms.hpp"

#include <algorithm>
#include <sstream>

namespace jetforge {

RatExpr RatOps::pow(const Coeff& base, const Coeff& exp) {
    return base.pow_affine(exponent_from_scalar(exp));
}

std::string print_form(const OneForm& f) {
    if (f.comps.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : f.comps) {
        if (!first) os << " + ";
        first = false;
        os << "(" << print_expr(c) << ")*" << e.to_string();
    }
    return os.str();
}

std::string print_form(const TwoForm& f) {
    if (f.comps.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : f.comps) {
        if (!first) os << " + ";
        first = false;
        os << "(" << print_expr(c) << ")*" << k.first.to_string() << "/\\"
           << k.second.to_string();
    }
    return os.str();
}

StructureResidual structure_residual(const OneForm& lhs_form, const TwoForm& rhs) {
    StructureResidual out;
    out.lhs = exterior_d(lhs_form);
    out.rhs = rhs;
    out.residual = out.lhs + negated(out.rhs);
    out.zero = out.residual.comps.empty();
    std::vector<std::pair<size_t, std::pair<std::string, std::string>>> entries;
    for (const auto& [k, c] : out.residual.comps) {
        entries.push_back({c.num().size(),
                           {k.first.to_string() + "/\\" + k.second.to_string(), print_expr(c)}});
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    for (auto& e : entries) out.nonzero_entries.push_back(std::move(e.second));
    return out;
}

CoefficientSolution solve_structure_coefficients(const OneForm& lhs_form, const TwoForm& rhs,
                                                 const std::vector<JetVar>& unknowns,
                                                 AssumptionSet& assume) {
    CoefficientSolution out;
    TwoForm diff = exterior_d(lhs_form) + negated(rhs);
    std::vector<RatExpr> eqs;
    for (const auto& [k, c] : diff.comps) eqs.push_back(c);
    out.solved = solve_linear(eqs, unknowns, assume);
    std::map<JetVar, RatExpr> subst;
    for (const auto& [v, e] : out.solved) subst.emplace(v, e);
    TwoForm back;
    for (const auto& [k, c] : diff.comps) back.add_term(k.first, k.second, c.substitute(subst));
    out.residual = back;
    out.residual_zero = back.comps.empty();
    return out;
}

std::pair<KappaRational, KappaRational> scaling_weight(const JetVar& v) {
    // weights of the two-parameter scaling family that preserves the central
    // equation: W(u_J) = (1 + 2(kappa+1) j_t + (kappa+1) j_y) w + (1 - |J|) c
    KPoly k = KPoly::kappa();
    KPoly kp1 = k + KPoly(1);
    KPoly p = KPoly(1) + KPoly(2 * v.idx.t) * kp1 + KPoly(v.idx.y) * kp1;
    KPoly q = KPoly(1 - v.idx.total());
    return {KappaRational(p, KPoly(1)), KappaRational(q, KPoly(1))};
}

std::pair<KappaRational, KappaRational> scaling_weight(const CobasisElt& e) {
    KPoly k = KPoly::kappa();
    KPoly kp1 = k + KPoly(1);
    if (!e.is_coord) return scaling_weight(e.jet);
    switch (e.coord) {
        case Dir::T: return {KappaRational(-(KPoly(2) * kp1), KPoly(1)), KappaRational(1)};
        case Dir::X: return {KappaRational(0), KappaRational(1)};
        case Dir::Y: return {KappaRational(-kp1, KPoly(1)), KappaRational(1)};
    }
    return {KappaRational(0), KappaRational(0)};
}

namespace {

std::optional<std::pair<KappaRational, KappaRational>> poly_weight(const PolyExpr& p) {
    std::optional<std::pair<KappaRational, KappaRational>> w;
    for (const auto& t : p.terms()) {
        KappaRational pw(0), qw(0);
        for (const auto& [v, e] : t.mono.factors()) {
            auto [vp, vq] = scaling_weight(v);
            KappaRational ek = e.as_kappa_rational();
            pw = pw + ek * vp;
            qw = qw + ek * vq;
        }
        if (!w) {
            w = {pw, qw};
        } else if (!(w->first == pw && w->second == qw)) {
            return std::nullopt;
        }
    }
    return w ? w : std::make_optional(std::make_pair(KappaRational(0), KappaRational(0)));
}

} // namespace

std::optional<std::pair<KappaRational, KappaRational>> expr_weight(const RatExpr& e) {
    if (e.is_zero()) return std::make_pair(KappaRational(0), KappaRational(0));
    auto wn = poly_weight(e.num());
    auto wd = poly_weight(e.den());
    if (!wn || !wd) return std::nullopt;
    return std::make_pair(wn->first - wd->first, wn->second - wd->second);
}

bool is_weight_invariant(const OneForm& f) {
    for (const auto& [e, c] : f.comps) {
        auto cw = expr_weight(c);
        if (!cw) return false;
        auto [ep, eq] = scaling_weight(e);
        if (!((cw->first + ep).is_zero() && (cw->second + eq).is_zero())) return false;
    }
    return true;
}

} // namespace jetforge
