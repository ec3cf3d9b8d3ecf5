#include "jetforge/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace jetforge {

ShadowContext::ShadowContext(std::optional<Equation> base, std::vector<Covering> coverings,
                             std::set<std::string> free_symbols, int max_order)
    : base_(std::move(base)), coverings_(std::move(coverings)), free_(std::move(free_symbols)),
      max_order_(max_order) {
    if (base_ && !base_->rhs_raw)
        throw Error(ErrorCode::BadInput, "shadow context needs the raw tree of the base rhs");
    for (const auto& c : coverings_)
        if (!c.f_t_raw || !c.f_y_raw)
            throw Error(ErrorCode::BadInput, "shadow context needs raw covering trees");
}

RawPtr ShadowContext::prolong(const MultiIndex& excess) const {
    auto it = prolong_memo_.find(excess);
    if (it != prolong_memo_.end()) return it->second;
    if (excess.total() > max_order_)
        throw Error(ErrorCode::RecursionLimit, "shadow prolongation exceeds cap");
    RawPtr r;
    if (excess == MultiIndex{}) {
        r = base_->rhs_raw;
    } else if (excess.t > 0) {
        r = derive(prolong(excess.bumped(Dir::T, -1)), Dir::T);
    } else if (excess.x > 0) {
        r = derive(prolong(excess.bumped(Dir::X, -1)), Dir::X);
    } else {
        r = derive(prolong(excess.bumped(Dir::Y, -1)), Dir::Y);
    }
    prolong_memo_.emplace(excess, r);
    return r;
}

RawPtr ShadowContext::covering_prolong(size_t ci, Dir dir, int xorder) const {
    auto key = std::make_tuple(ci, dir, xorder);
    auto it = covering_memo_.find(key);
    if (it != covering_memo_.end()) return it->second;
    if (xorder > max_order_ + 2)
        throw Error(ErrorCode::RecursionLimit, "shadow covering prolongation exceeds cap");
    RawPtr r;
    if (xorder == 0) {
        r = dir == Dir::T ? coverings_[ci].f_t_raw : coverings_[ci].f_y_raw;
    } else {
        r = derive(covering_prolong(ci, dir, xorder - 1), Dir::X);
    }
    covering_memo_.emplace(key, r);
    return r;
}

RawPtr ShadowContext::reduce(const JetVar& v) const {
    auto it = reduce_memo_.find(v);
    if (it != reduce_memo_.end()) return it->second;
    RawPtr r;
    if (base_ && base_->unknown() == v.sym) {
        if (v.idx.dominates(base_->principal.idx)) {
            r = prolong(v.idx - base_->principal.idx);
        } else {
            r = raw_var(v);
        }
    } else {
        size_t ci = coverings_.size();
        for (size_t i = 0; i < coverings_.size(); ++i)
            if (coverings_[i].pseudo == v.sym) ci = i;
        if (ci < coverings_.size()) {
            if (v.idx.t == 0 && v.idx.y == 0) {
                r = raw_var(v);
            } else if (v.idx.y > 0) {
                JetVar lower{v.sym, v.idx.bumped(Dir::Y, -1)};
                r = (lower.idx.t == 0 && lower.idx.y == 0)
                        ? covering_prolong(ci, Dir::Y, lower.idx.x)
                        : derive(reduce(lower), Dir::Y);
            } else {
                JetVar lower{v.sym, v.idx.bumped(Dir::T, -1)};
                r = (lower.idx.t == 0 && lower.idx.y == 0)
                        ? covering_prolong(ci, Dir::T, lower.idx.x)
                        : derive(reduce(lower), Dir::T);
            }
        } else if (free_.count(v.sym)) {
            r = raw_var(v);
        } else {
            throw Error(ErrorCode::UnclassifiedSymbol, "symbol '" + v.sym + "' is not classified");
        }
    }
    reduce_memo_.emplace(v, r);
    return r;
}

RawPtr ShadowContext::derive(const RawPtr& e, Dir dir) const {
    auto key = std::make_pair(e.get(), dir);
    auto it = derive_memo_.find(key);
    if (it != derive_memo_.end()) return it->second;
    RawPtr r;
    switch (e->kind) {
        case RawExpr::Kind::Number:
        case RawExpr::Kind::Kappa:
            r = raw_num(0);
            break;
        case RawExpr::Kind::Var:
            r = reduce(JetVar{e->var.sym, e->var.idx.bumped(dir)});
            break;
        case RawExpr::Kind::Add:
            r = raw_add(derive(e->kids[0], dir), derive(e->kids[1], dir));
            break;
        case RawExpr::Kind::Sub:
            r = raw_sub(derive(e->kids[0], dir), derive(e->kids[1], dir));
            break;
        case RawExpr::Kind::Mul:
            r = raw_add(raw_mul(derive(e->kids[0], dir), e->kids[1]),
                        raw_mul(e->kids[0], derive(e->kids[1], dir)));
            break;
        case RawExpr::Kind::Div:
            r = raw_sub(raw_div(derive(e->kids[0], dir), e->kids[1]),
                        raw_div(raw_mul(e->kids[0], derive(e->kids[1], dir)),
                                raw_mul(e->kids[1], e->kids[1])));
            break;
        case RawExpr::Kind::Neg:
            r = raw_neg(derive(e->kids[0], dir));
            break;
        case RawExpr::Kind::Pow: {
            if (raw_has_jet_vars(e->kids[1]))
                throw Error(ErrorCode::NonAffineExponent, "derivative of variable exponent");
            RawPtr em1 = raw_sub(e->kids[1], raw_num(1));
            r = raw_mul(raw_mul(e->kids[1], raw_pow(e->kids[0], em1)), derive(e->kids[0], dir));
            break;
        }
    }
    derive_memo_.emplace(key, r);
    return r;
}

RawPtr ShadowContext::total_derivative(const RawPtr& e, Dir dir) const { return derive(e, dir); }

namespace {

mpq_class draw_rational(std::mt19937_64& rng, bool positive) {
    std::uniform_int_distribution<int> num_d(positive ? 1 : -9, 9);
    std::uniform_int_distribution<int> den_d(1, 4);
    int p = 0;
    do {
        p = num_d(rng);
    } while (p == 0);
    mpq_class q(p, den_d(rng));
    q.canonicalize();
    return q;
}

} // namespace

SamplePoint sample(std::uint64_t seed, const std::set<JetVar>& vars, const AssumptionSet& assume,
                   const std::vector<mpq_class>& excluded_kappa, int max_retries) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> kappa_d(1, 3);
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        SamplePoint pt;
        pt.seed = seed;
        do {
            pt.kappa = kappa_d(rng);
        } while (std::find(excluded_kappa.begin(), excluded_kappa.end(), mpq_class(pt.kappa)) !=
                 excluded_kappa.end());
        for (const auto& v : vars) pt.values[v] = draw_rational(rng, assume.positive.count(v) > 0);
        // every variable named in an assumption also needs a value
        std::set<JetVar> avars;
        for (const auto& [name, p] : assume.nonzero) p.collect_vars(avars);
        for (const auto& v : avars)
            if (!pt.values.count(v)) pt.values[v] = draw_rational(rng, assume.positive.count(v) > 0);
        bool ok = true;
        for (const auto& [name, p] : assume.nonzero) {
            try {
                if (p.eval(mpq_class(pt.kappa), pt.values) == 0) {
                    ok = false;
                    break;
                }
            } catch (const Error&) {
                ok = false;
                break;
            }
        }
        if (ok) return pt;
    }
    throw Error(ErrorCode::SamplingExhausted, "no sample point satisfies the assumptions");
}

std::string OracleVerdict::to_string() const {
    if (zero_confirmed) return "ZERO-CONFIRMED(" + std::to_string(points) + " points)";
    return "NONZERO(" + witness + ")";
}

namespace {

std::set<JetVar> claim_vars(const std::vector<OracleClaim>& claims) {
    std::set<JetVar> vars;
    for (const auto& c : claims) {
        auto vs = c.symbolic.vars();
        vars.insert(vs.begin(), vs.end());
        if (c.raw) raw_collect_vars(c.raw, vars);
    }
    return vars;
}

} // namespace

OracleVerdict confirm_zero(const std::vector<OracleClaim>& claims, const AssumptionSet& assume,
                           const std::vector<mpq_class>& excluded_kappa, int n,
                           std::uint64_t seed) {
    OracleVerdict v;
    std::set<JetVar> vars = claim_vars(claims);
    for (int i = 0; i < n; ++i) {
        SamplePoint pt = sample(seed + static_cast<std::uint64_t>(i) * 0x9e3779b97f4a7c15ull,
                                vars, assume, excluded_kappa);
        ++v.points;
        for (const auto& c : claims) {
            mpq_class sym;
            try {
                sym = c.symbolic.eval(mpq_class(pt.kappa), pt.values);
            } catch (const Error& e) {
                v.witness = c.label + ": " + e.what();
                return v;
            }
            if (c.raw) {
                RawEvaluator ev(mpq_class(pt.kappa), &pt.values);
                mpq_class raw_val;
                try {
                    raw_val = ev.eval(c.raw);
                } catch (const Error& e) {
                    v.witness = c.label + " (raw): " + e.what();
                    return v;
                }
                if (raw_val != sym) v.homomorphism_ok = false;
                if (raw_val != 0) {
                    v.witness = c.label + " = " + raw_val.get_str() + " at kappa=" +
                                std::to_string(pt.kappa) + ", seed=" + std::to_string(pt.seed);
                    return v;
                }
            }
            if (sym != 0) {
                v.witness = c.label + " = " + sym.get_str() + " at kappa=" +
                            std::to_string(pt.kappa) + ", seed=" + std::to_string(pt.seed);
                return v;
            }
        }
    }
    // double-precision smoke test at a non-integer kappa
    {
        SamplePoint pt = sample(seed + 0xabcdull, vars, assume, excluded_kappa);
        std::map<JetVar, double> dvals;
        for (const auto& [var, q] : pt.values) {
            double d = q.get_d();
            dvals[var] = assume.positive.count(var) ? std::fabs(d) : d;
        }
        for (const auto& c : claims) {
            const RawPtr tree = c.raw ? c.raw : raw_from_ratexpr(c.symbolic);
            RawDoubleEvaluator ev(0.3, &dvals);
            double val = 0;
            try {
                val = ev.eval(tree);
            } catch (...) {
                continue; // singular double evaluation carries no verdict
            }
            double scale = std::max(1.0, ev.max_magnitude());
            if (std::isfinite(val) && std::fabs(val) > 1e-9 * scale) v.float_smoke_ok = false;
        }
    }
    v.zero_confirmed = v.float_smoke_ok;
    if (!v.float_smoke_ok) v.witness = "float smoke test at kappa=0.3 exceeded tolerance";
    return v;
}

OracleVerdict confirm_equal(const std::vector<OracleEquality>& pairs, const AssumptionSet& assume,
                            const std::vector<mpq_class>& excluded_kappa, int n,
                            std::uint64_t seed) {
    OracleVerdict v;
    std::set<JetVar> vars;
    for (const auto& p : pairs) {
        raw_collect_vars(p.lhs, vars);
        raw_collect_vars(p.rhs, vars);
    }
    for (int i = 0; i < n; ++i) {
        SamplePoint pt = sample(seed + static_cast<std::uint64_t>(i) * 0x9e3779b97f4a7c15ull,
                                vars, assume, excluded_kappa);
        ++v.points;
        RawEvaluator ev(mpq_class(pt.kappa), &pt.values);
        for (const auto& p : pairs) {
            mpq_class a, b;
            try {
                a = ev.eval(p.lhs);
                b = ev.eval(p.rhs);
            } catch (const Error& e) {
                v.witness = p.label + ": " + e.what();
                return v;
            }
            if (a != b) {
                v.witness = p.label + ": " + a.get_str() + " != " + b.get_str() + " at kappa=" +
                            std::to_string(pt.kappa) + ", seed=" + std::to_string(pt.seed);
                return v;
            }
        }
    }
    v.zero_confirmed = true;
    return v;
}

std::uint64_t derive_seed(std::uint64_t suite_seed, const std::string& check_name) {
    std::uint64_t h = 1469598103934665603ull ^ suite_seed;
    for (unsigned char c : check_name) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace jetforge
