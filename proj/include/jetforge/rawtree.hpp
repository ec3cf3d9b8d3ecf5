#pragma once

#include <map>
#include <memory>
#include <set>
#include <unordered_map>
#include <vector>

#include "jetforge/expr.hpp"

namespace jetforge {

/// Unsimplified expression DAG.  This is the pre-normalization representation:
/// the oracle evaluates these directly so that a symbolic zero is always
/// cross-checked by arithmetic that never went through canonicalization.
struct RawExpr {
    enum class Kind { Number, Kappa, Var, Add, Sub, Mul, Div, Neg, Pow };

    Kind kind;
    mpq_class number;                                  // Kind::Number
    JetVar var;                                        // Kind::Var
    std::vector<std::shared_ptr<const RawExpr>> kids;  // operands
};

using RawPtr = std::shared_ptr<const RawExpr>;

RawPtr raw_num(mpq_class q);
RawPtr raw_num(long n);
RawPtr raw_kappa();
RawPtr raw_var(JetVar v);
RawPtr raw_add(RawPtr a, RawPtr b);
RawPtr raw_sub(RawPtr a, RawPtr b);
RawPtr raw_mul(RawPtr a, RawPtr b);
RawPtr raw_div(RawPtr a, RawPtr b);
RawPtr raw_neg(RawPtr a);
RawPtr raw_pow(RawPtr base, RawPtr exp);

/// Exact evaluation with per-node memoization (the DAG may share nodes).
class RawEvaluator {
public:
    RawEvaluator(mpq_class kappa, const std::map<JetVar, mpq_class>* point)
        : kappa_(std::move(kappa)), point_(point) {}

    mpq_class eval(const RawPtr& e);

private:
    mpq_class kappa_;
    const std::map<JetVar, mpq_class>* point_;
    std::unordered_map<const RawExpr*, mpq_class> memo_;
};

/// Double-precision evaluation that also tracks the largest intermediate
/// magnitude, for scale-aware tolerance checks at non-integer kappa.
class RawDoubleEvaluator {
public:
    RawDoubleEvaluator(double kappa, const std::map<JetVar, double>* point)
        : kappa_(kappa), point_(point) {}

    double eval(const RawPtr& e);
    double max_magnitude() const { return maxmag_; }

private:
    double kappa_;
    const std::map<JetVar, double>* point_;
    double maxmag_ = 0.0;
    std::unordered_map<const RawExpr*, double> memo_;
};

bool raw_has_jet_vars(const RawPtr& e);
void raw_collect_vars(const RawPtr& e, std::set<JetVar>& out);

/// Formal partial derivative on the tree (power rule, quotient rule); the
/// exponent of a Pow node must be variable-free.
RawPtr raw_partial(const RawPtr& e, const JetVar& v);

RawPtr raw_substitute(const RawPtr& e, const std::map<JetVar, RawPtr>& bindings);

/// Canonicalize a raw tree into the kernel's normal form.  Power exponents
/// must normalize to kappa-affine constants.
RatExpr normalize_raw(const RawPtr& e);

/// Recover a raw tree from a canonical expression (used when only the
/// symbolic form of an input exists; the result shares no arithmetic with it).
RawPtr raw_from_ratexpr(const RatExpr& e);

} // namespace jetforge
