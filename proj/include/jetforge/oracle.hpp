#pragma once

#include <cstdint>
#include <random>

#include "jetforge/coverings.hpp"

namespace jetforge {

/// Exact-rational sample: integer kappa plus rational values for every jet
/// coordinate a check touches.
struct SamplePoint {
    long kappa = 1;
    std::map<JetVar, mpq_class> values;
    std::uint64_t seed = 0;
};

/// Shadow of the jet-calculus Context on raw trees: the same reduction rules,
/// but every arithmetic step is an unsimplified tree node, so evaluating the
/// result never relies on the canonicalization kernel.
class ShadowContext {
public:
    ShadowContext() = default;
    ShadowContext(std::optional<Equation> base, std::vector<Covering> coverings,
                  std::set<std::string> free_symbols, int max_order = 6);

    RawPtr reduce(const JetVar& v) const;
    RawPtr total_derivative(const RawPtr& e, Dir dir) const;

private:
    RawPtr derive(const RawPtr& e, Dir dir) const;
    RawPtr prolong(const MultiIndex& excess) const;
    RawPtr covering_prolong(size_t ci, Dir dir, int xorder) const;

    std::optional<Equation> base_;
    std::vector<Covering> coverings_;
    std::set<std::string> free_;
    int max_order_ = 6;

    mutable std::map<MultiIndex, RawPtr> prolong_memo_;
    mutable std::map<std::tuple<size_t, Dir, int>, RawPtr> covering_memo_;
    mutable std::map<JetVar, RawPtr> reduce_memo_;
    mutable std::map<std::pair<const RawExpr*, Dir>, RawPtr> derive_memo_;
};

/// Deterministic sampler: jet values are rationals p/q with p in [-9,9]\{0}
/// (positive-only for variables carrying kappa-dependent or fractional
/// exponents) and q in [1,4]; kappa is drawn from {1,2,3}.  Resamples until
/// every recorded nonvanishing assumption holds.
SamplePoint sample(std::uint64_t seed, const std::set<JetVar>& vars,
                   const AssumptionSet& assume, const std::vector<mpq_class>& excluded_kappa,
                   int max_retries = 200);

/// One claimed-zero quantity: the canonical form plus, when available, the
/// pre-normalization tree it came from.
struct OracleClaim {
    std::string label;
    RatExpr symbolic;
    RawPtr raw; // may be null
};

struct OracleVerdict {
    bool zero_confirmed = false;
    int points = 0;
    std::string witness;       // first nonzero evaluation, if any
    bool homomorphism_ok = true; // raw and symbolic evaluations agreed
    bool float_smoke_ok = true;  // double evaluation at kappa = 0.3
    std::string to_string() const;
};

/// Evaluate every claim at n sample points; ZERO-CONFIRMED iff every
/// evaluation (raw when present, symbolic always) is exactly zero.  One
/// double-precision evaluation at kappa = 0.3 guards against integer-only
/// coincidences, with tolerance scaled by the largest intermediate magnitude.
OracleVerdict confirm_zero(const std::vector<OracleClaim>& claims, const AssumptionSet& assume,
                           const std::vector<mpq_class>& excluded_kappa, int n,
                           std::uint64_t seed);

/// Pairs of quantities that must agree numerically (used for two-sided checks
/// such as structure equations, where neither side is zero).
struct OracleEquality {
    std::string label;
    RawPtr lhs, rhs;
};

OracleVerdict confirm_equal(const std::vector<OracleEquality>& pairs, const AssumptionSet& assume,
                            const std::vector<mpq_class>& excluded_kappa, int n,
                            std::uint64_t seed);

/// Stable per-check seed derived from the suite seed and the check name.
std::uint64_t derive_seed(std::uint64_t suite_seed, const std::string& check_name);

} // namespace jetforge
