#pragma once

#include <memory>
#include <mutex>

#include "jetforge/forms.hpp"
#include "jetforge/oracle.hpp"

namespace jetforge {

/// Registry of everything declared in a set of .jf files: equations,
/// coverings, inverse systems, named scalars, forms, structure equations, and
/// suites.  References resolve to prior declarations; `use "file"` pulls in
/// another file (relative to the using file) exactly once.
class Bundle {
public:
    Bundle() = default;

    /// Load a file and everything it uses; diagnostics accumulate.
    void load(const std::string& path);

    bool ok() const;
    const std::vector<Diagnostic>& diagnostics() const { return diags_; }

    bool has_equation(const std::string& n) const { return equations_.count(n) > 0; }
    const Equation& equation(const std::string& n) const;
    bool has_covering(const std::string& n) const { return coverings_.count(n) > 0; }
    const Covering& covering(const std::string& n) const;
    bool has_inverse(const std::string& n) const { return inverses_.count(n) > 0; }
    const InverseSystem& inverse(const std::string& n) const;
    bool has_expr(const std::string& n) const { return exprs_.count(n) > 0; }
    const RatExpr& expr(const std::string& n) const;
    RawPtr expr_raw(const std::string& n) const;
    bool has_form(const std::string& n) const { return form_asts_.count(n) > 0; }
    bool has_structeq(const std::string& n) const { return structeqs_.count(n) > 0; }
    const StructEqDecl& structeq(const std::string& n) const;
    const SuiteDecl& suite(const std::string& n) const;
    std::vector<std::string> suite_names() const;

    /// Expand a named one-form into cobasis components.  `overrides` swaps
    /// form references (e.g. theta23 -> theta23_alt) during expansion, for the
    /// ambiguous-reading protocol.
    OneForm expand_form(const std::string& name,
                        const std::map<std::string, std::string>& overrides = {}) const;
    BasicOneForm<TreeOps> expand_form_tree(
        const std::string& name, const std::map<std::string, std::string>& overrides = {}) const;

    /// Evaluate a two-form expression (a structure-equation rhs).
    TwoForm eval_two_form(const AstPtr& ast,
                          const std::map<std::string, std::string>& overrides = {}) const;
    BasicTwoForm<TreeOps> eval_two_form_tree(
        const std::string& structeq_name,
        const std::map<std::string, std::string>& overrides = {}) const;

    /// Builtin scalars for form files: E (the rmmdKP right-hand side) and its
    /// restricted total derivatives DtE, DxE, in both representations.
    void ensure_builtins() const;

private:
    template <class Ops>
    FormVal<Ops> eval_form_ast(const AstPtr& ast,
                               const std::map<std::string, std::string>& overrides) const;

    std::optional<RatExpr> scalar_for(const std::string& name) const;
    std::optional<RawPtr> scalar_raw_for(const std::string& name) const;

    void process(const SourceFile& sf, const std::string& dir);

    std::map<std::string, Equation> equations_;
    std::map<std::string, Covering> coverings_;
    std::map<std::string, InverseSystem> inverses_;
    std::map<std::string, RatExpr> exprs_;
    std::map<std::string, RawPtr> expr_raws_;
    std::map<std::string, AstPtr> form_asts_;
    std::map<std::string, StructEqDecl> structeqs_;
    std::map<std::string, SuiteDecl> suites_;
    std::set<std::string> all_names_;
    std::set<std::string> loaded_paths_;
    std::set<std::string> allowed_symbols_;
    std::vector<Diagnostic> diags_;

    // caches are filled lazily; the mutex keeps concurrent suite checks safe
    mutable std::unique_ptr<std::mutex> cache_mu_ = std::make_unique<std::mutex>();
    mutable std::map<std::string, RatExpr> builtin_exprs_;
    mutable std::map<std::string, RawPtr> builtin_raws_;
    mutable std::map<std::string, OneForm> form_cache_;
    mutable std::map<std::string, BasicOneForm<TreeOps>> tree_form_cache_;
};

/// Load the canonical bundle from a paper/ directory (every .jf file).
Bundle load_paper_dir(const std::string& dir);

} // namespace jetforge
