#pragma once

#include <optional>

#include "jetforge/rawtree.hpp"

namespace jetforge {

/// A PDE in solved form: the principal derivative of the unknown equals rhs,
/// rhs written in internal coordinates only.
struct Equation {
    std::string name;
    JetVar principal; // e.g. u[y,y]
    RatExpr rhs;
    RawPtr rhs_raw;   // pre-normalization tree, kept for the numeric oracle
    std::vector<mpq_class> excluded_kappa;

    const std::string& unknown() const { return principal.sym; }
    /// Checks that rhs avoids the principal derivative and its consequences
    /// and that every rational root of a kappa-denominator in rhs is excluded.
    void validate() const;
    std::string to_string() const;
};

/// Pseudopotential `pseudo` over a base equation: its t- and y-derivatives are
/// prescribed in terms of base jets and the fiber coordinates {p, p_x, ...}.
struct Covering {
    std::string name;
    std::string base;   // base equation name ("" when the base jets are free)
    std::string pseudo;
    RatExpr f_t, f_y;
    RawPtr f_t_raw, f_y_raw;

    void validate() const; // f_t / f_y free of t- and y-derivatives of pseudo
    std::string to_string() const;
};

/// Set of nonvanishing denominators a computation divided by, plus the
/// variables that must be sampled positive (kappa-dependent or fractional
/// exponents).  Rendered deterministically for reports.
struct AssumptionSet {
    std::map<std::string, PolyExpr> nonzero; // key: printed form
    std::set<JetVar> positive;

    void add_poly(const PolyExpr& p);
    void add_kappa_poly(const KPoly& p);
    /// Record the denominator of e, the kappa-denominators of all its
    /// coefficients, and every variable occurring with an exponent that is
    /// not a nonnegative integer.
    void add_expr(const RatExpr& e);
    void merge(const AssumptionSet& o);
    std::vector<std::string> rendered() const;
};

/// Classification of every symbol in play plus memoized reduction machinery.
/// Immutable after construction as far as callers can observe; each check
/// builds its own context, so memo tables are never shared across threads.
class Context {
public:
    Context() = default;
    Context(std::optional<Equation> base, std::vector<Covering> coverings,
            std::set<std::string> free_symbols, int max_order = 6);

    enum class Class { BaseUnknown, Pseudo, Free };
    Class classify(const std::string& sym) const; // throws UnclassifiedSymbol

    const std::optional<Equation>& base() const { return base_; }
    const std::vector<Covering>& coverings() const { return coverings_; }
    int max_order() const { return max_order_; }

    /// True when v is an internal coordinate (not rewritten by reduce).
    bool is_internal(const JetVar& v) const;

    /// Solution-manifold restriction of a single jet coordinate.
    RatExpr reduce(const JetVar& v) const;

    /// Simultaneous reduction of every coordinate in e.
    RatExpr reduce_expr(const RatExpr& e) const;

    /// Extended total derivative (chain rule over all jet coordinates, each
    /// differentiated coordinate reduced through the context).
    RatExpr total_derivative(const RatExpr& e, Dir dir) const;

    /// D_a(D_b(e)) - D_b(D_a(e)) after reduction; zero on well-formed contexts.
    RatExpr commutation_check(const RatExpr& e, Dir a, Dir b) const;

private:
    RatExpr prolong(const MultiIndex& excess) const;
    RatExpr covering_prolong(size_t ci, Dir dir, int xorder) const;

    std::optional<Equation> base_;
    std::vector<Covering> coverings_;
    std::set<std::string> free_;
    int max_order_ = 6;

    mutable std::map<MultiIndex, RatExpr> prolong_memo_;
    mutable std::map<std::tuple<size_t, Dir, int>, RatExpr> covering_memo_;
    mutable std::map<JetVar, RatExpr> reduce_memo_;
};

/// Collect the rational roots of every kappa-denominator occurring in e.
std::vector<mpq_class> kappa_denominator_roots(const RatExpr& e);

} // namespace jetforge
