#pragma once

#include "jetforge/jet.hpp"

namespace jetforge {

/// Evolution of an unknown's t- and y-derivatives over another symbol's free
/// jets: u_t = u_t_expr(r-jets, u_x-jets), u_y = u_y_expr(...).
struct InverseSystem {
    std::string name;
    std::string over;    // symbol with free jets
    std::string unknown; // symbol treated as pseudopotential
    RatExpr u_t, u_y;
    RawPtr u_t_raw, u_y_raw;

    void validate() const;
    InverseSystem specialized(const mpq_class& kappa0) const;
};

/// Outcome of an exact-division step: residual = cofactor * target + remainder.
struct Factorization {
    RatExpr residual;
    RatExpr cofactor;
    RatExpr target;
    RatExpr remainder;
    bool exact = false;
};

/// Cross-derivative defect of a covering on the base solution manifold;
/// zero iff the covering is valid.
RatExpr check_compatibility(const Covering& c, const Equation& base, AssumptionSet& assume,
                            int max_order = 6);

/// The same defect over free base jets, factored through the base equation's
/// residual (principal - rhs) by division in the principal derivative.
Factorization offshell_residual(const Covering& c, const Equation& base, AssumptionSet& assume,
                                int max_order = 6);

/// Divide res, viewed as a polynomial in eq.principal, by (principal - rhs).
Factorization factor_through_equation(const RatExpr& res, const Equation& eq,
                                      AssumptionSet& assume);

/// Solve a system of expressions (== 0) that is affine in the target
/// variables; throws NonLinear / Singular.  Pivot denominators are recorded.
std::map<JetVar, RatExpr> solve_linear(const std::vector<RatExpr>& eqs,
                                       const std::vector<JetVar>& targets,
                                       AssumptionSet& assume);

/// Solve the covering relations for the base unknown's t- and y-derivatives,
/// producing the inverse system over the pseudopotential's free jets.
InverseSystem invert_covering(const Covering& c, const Equation& base, AssumptionSet& assume);

/// Eliminate the base symbol from a first-order covering whose pseudopotential
/// carries the target equation: solve for the base x/y-derivatives, then
/// factor the cross-derivative defect through the target residual.
Factorization eliminate_pseudopotential(const Covering& c, const Equation& base,
                                        const Equation& target, AssumptionSet& assume,
                                        int max_order = 6);

/// D~_y(u_t_expr) - D~_t(u_y_expr) with the unknown as pseudopotential over
/// the free over-symbol jets.
RatExpr quotient_residual(const InverseSystem& inv, AssumptionSet& assume, int max_order = 6);

/// zero_test(residual - cofactor*target).
bool verify_factorization(const RatExpr& residual, const RatExpr& cofactor,
                          const RatExpr& target, AssumptionSet& assume);

/// Is res a (kappa-constant times monomial) multiple of target?  Returns the
/// unit cofactor when it is.
std::optional<RatExpr> monomial_multiple_of(const RatExpr& res, const RatExpr& target);

struct KappaZeroResult {
    RatExpr residual_at_0;
    std::optional<RatExpr> cofactor_at_0; // set iff residual is a unit multiple of G
    bool negative_control_at_1 = false;   // true when the kappa=1 residual is NOT such a multiple
    RatExpr residual_at_1;
};

/// Specialize the inverse system at kappa = 0 and match its compatibility
/// residual against G (and nothing else); also run the kappa = 1 control.
KappaZeroResult kappa_zero_case(const InverseSystem& inv, const RatExpr& G,
                                AssumptionSet& assume, int max_order = 6);

struct ThirdOrderResult {
    RatExpr phi, psi;          // u_t = phi*u_x, u_y = psi*u_x with H opaque
    RatExpr bracket;           // reduced compatibility bracket, H opaque
    bool u_dependence_gone = false;
    bool linear_in_h_derivs = false;
    RatExpr cofactor;          // bracket = cofactor * eq21 (derived from the H_t slot)
    bool opaque_exact = false; // identity already holds with H opaque
    bool substituted_exact = false; // identity after substituting the r-jet H
};

/// Rewrite the inverse system through the opaque symbol H = u_x^(kappa+1),
/// compute the reduced compatibility bracket, verify the u-jet dependence
/// cancels, and factor the bracket through the given third-order equation.
ThirdOrderResult derive_third_order(const InverseSystem& inv, const RatExpr& h_def,
                                    const RatExpr& eq21_lhs, AssumptionSet& assume,
                                    int max_order = 6);

/// Residual of `target` (an equation in the pseudopotential's symbol) under
/// the covering and base-equation reductions; zero iff the covering maps
/// solutions of base to solutions of target.
RatExpr check_auto_backlund(const Covering& c, const Equation& base, const Equation& target,
                            AssumptionSet& assume, int max_order = 6);

/// Rename the dependent symbol of an equation (u-jets become s-jets).
Equation rename_unknown(const Equation& eq, const std::string& fresh);

Covering specialize_covering(const Covering& c, const mpq_class& kappa0);
Equation specialize_equation(const Equation& eq, const mpq_class& kappa0);

} // namespace jetforge
