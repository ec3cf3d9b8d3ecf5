#include "jetforge/paperdefs.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace jetforge {

namespace fs = std::filesystem;

bool Bundle::ok() const {
    for (const auto& d : diags_)
        if (d.severity == Diagnostic::Severity::Error) return false;
    return true;
}

const Equation& Bundle::equation(const std::string& n) const {
    auto it = equations_.find(n);
    if (it == equations_.end()) throw Error(ErrorCode::BadInput, "no equation named '" + n + "'");
    return it->second;
}

const Covering& Bundle::covering(const std::string& n) const {
    auto it = coverings_.find(n);
    if (it == coverings_.end()) throw Error(ErrorCode::BadInput, "no covering named '" + n + "'");
    return it->second;
}

const InverseSystem& Bundle::inverse(const std::string& n) const {
    auto it = inverses_.find(n);
    if (it == inverses_.end())
        throw Error(ErrorCode::BadInput, "no inverse system named '" + n + "'");
    return it->second;
}

const RatExpr& Bundle::expr(const std::string& n) const {
    auto it = exprs_.find(n);
    if (it == exprs_.end()) throw Error(ErrorCode::BadInput, "no expression named '" + n + "'");
    return it->second;
}

RawPtr Bundle::expr_raw(const std::string& n) const {
    auto it = expr_raws_.find(n);
    if (it == expr_raws_.end()) throw Error(ErrorCode::BadInput, "no expression named '" + n + "'");
    return it->second;
}

const StructEqDecl& Bundle::structeq(const std::string& n) const {
    auto it = structeqs_.find(n);
    if (it == structeqs_.end())
        throw Error(ErrorCode::BadInput, "no structure equation named '" + n + "'");
    return it->second;
}

const SuiteDecl& Bundle::suite(const std::string& n) const {
    auto it = suites_.find(n);
    if (it == suites_.end()) throw Error(ErrorCode::BadInput, "no suite named '" + n + "'");
    return it->second;
}

std::vector<std::string> Bundle::suite_names() const {
    std::vector<std::string> out;
    for (const auto& [n, s] : suites_) out.push_back(n);
    return out;
}

void Bundle::load(const std::string& path) {
    std::error_code ec;
    fs::path canon = fs::weakly_canonical(fs::path(path), ec);
    std::string key = ec ? path : canon.string();
    if (!loaded_paths_.insert(key).second) return;
    std::ifstream in(path);
    if (!in) {
        diags_.push_back({Diagnostic::Severity::Error, path, {}, "cannot open file"});
        return;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    ParseResult pr = parse_source(buf.str(), path);
    for (auto& d : pr.diagnostics) diags_.push_back(d);
    if (!pr.ok()) return;
    process(pr.file, fs::path(path).parent_path().string());
}

std::optional<RatExpr> Bundle::scalar_for(const std::string& name) const {
    auto it = exprs_.find(name);
    if (it != exprs_.end()) return it->second;
    auto bit = builtin_exprs_.find(name);
    if (bit != builtin_exprs_.end()) return bit->second;
    return std::nullopt;
}

std::optional<RawPtr> Bundle::scalar_raw_for(const std::string& name) const {
    auto it = expr_raws_.find(name);
    if (it != expr_raws_.end()) return it->second;
    auto bit = builtin_raws_.find(name);
    if (bit != builtin_raws_.end()) return bit->second;
    return std::nullopt;
}

void Bundle::ensure_builtins() const {
    std::lock_guard<std::mutex> lock(*cache_mu_);
    if (!builtin_exprs_.empty()) return;
    auto eq_it = equations_.find("rmmdKP");
    if (eq_it == equations_.end()) return;
    const Equation& eq = eq_it->second;
    Context ctx(eq, {}, {});
    builtin_exprs_.emplace("E", eq.rhs);
    builtin_exprs_.emplace("DtE", ctx.total_derivative(eq.rhs, Dir::T));
    builtin_exprs_.emplace("DxE", ctx.total_derivative(eq.rhs, Dir::X));
    ShadowContext shadow(eq, {}, {});
    builtin_raws_.emplace("E", eq.rhs_raw);
    builtin_raws_.emplace("DtE", shadow.total_derivative(eq.rhs_raw, Dir::T));
    builtin_raws_.emplace("DxE", shadow.total_derivative(eq.rhs_raw, Dir::X));
}

void Bundle::process(const SourceFile& sf, const std::string& dir) {
    auto lookup = [&](const std::string& n) -> RawPtr {
        auto r = scalar_raw_for(n);
        return r ? *r : nullptr;
    };
    auto claim_name = [&](const std::string& n, const Span& sp) {
        if (!all_names_.insert(n).second) {
            diags_.push_back({Diagnostic::Severity::Error, sf.path, sp,
                              "duplicate declaration of '" + n + "'"});
            return false;
        }
        return true;
    };
    for (const auto& decl : sf.decls) {
        try {
            if (const auto* u = std::get_if<UseDecl>(&decl)) {
                fs::path p = fs::path(dir) / u->path;
                load(p.string());
            } else if (const auto* sy = std::get_if<SymbolsDecl>(&decl)) {
                allowed_symbols_.insert(sy->symbols.begin(), sy->symbols.end());
            } else if (const auto* e = std::get_if<EquationDecl>(&decl)) {
                if (!claim_name(e->name, e->span)) continue;
                ensure_builtins();
                Equation eq;
                eq.name = e->name;
                eq.principal = e->principal;
                eq.rhs_raw = ast_to_raw(e->rhs, lookup, &allowed_symbols_);
                eq.rhs = normalize_raw(eq.rhs_raw);
                eq.excluded_kappa = e->excluded_kappa;
                eq.validate();
                equations_.emplace(e->name, std::move(eq));
            } else if (const auto* c = std::get_if<CoveringDecl>(&decl)) {
                if (!claim_name(c->name, c->span)) continue;
                if (!has_equation(c->base)) {
                    diags_.push_back({Diagnostic::Severity::Error, sf.path, c->span,
                                      "covering '" + c->name + "' references unknown base '" +
                                          c->base + "'"});
                    continue;
                }
                Covering cov;
                cov.name = c->name;
                cov.base = c->base;
                cov.pseudo = c->pseudo;
                cov.f_t_raw = ast_to_raw(c->f_t, lookup, &allowed_symbols_);
                cov.f_y_raw = ast_to_raw(c->f_y, lookup, &allowed_symbols_);
                cov.f_t = normalize_raw(cov.f_t_raw);
                cov.f_y = normalize_raw(cov.f_y_raw);
                cov.validate();
                coverings_.emplace(c->name, std::move(cov));
            } else if (const auto* iv = std::get_if<InverseDecl>(&decl)) {
                if (!claim_name(iv->name, iv->span)) continue;
                InverseSystem inv;
                inv.name = iv->name;
                inv.over = iv->over;
                inv.unknown = iv->unknown;
                inv.u_t_raw = ast_to_raw(iv->u_t, lookup, &allowed_symbols_);
                inv.u_y_raw = ast_to_raw(iv->u_y, lookup, &allowed_symbols_);
                inv.u_t = normalize_raw(inv.u_t_raw);
                inv.u_y = normalize_raw(inv.u_y_raw);
                inv.validate();
                inverses_.emplace(iv->name, std::move(inv));
            } else if (const auto* ex = std::get_if<ExprDecl>(&decl)) {
                if (!claim_name(ex->name, ex->span)) continue;
                ensure_builtins();
                RawPtr raw = ast_to_raw(ex->value, lookup, &allowed_symbols_);
                expr_raws_.emplace(ex->name, raw);
                exprs_.emplace(ex->name, normalize_raw(raw));
            } else if (const auto* f = std::get_if<FormDecl>(&decl)) {
                if (!claim_name(f->name, f->span)) continue;
                form_asts_.emplace(f->name, f->value);
            } else if (const auto* s = std::get_if<StructEqDecl>(&decl)) {
                if (!claim_name(s->name, s->span)) continue;
                structeqs_.emplace(s->name, *s);
            } else if (const auto* su = std::get_if<SuiteDecl>(&decl)) {
                if (!claim_name(su->name, su->span)) continue;
                suites_.emplace(su->name, *su);
            }
        } catch (const Error& err) {
            Span sp;
            std::visit([&](const auto& d) { sp = d.span; }, decl);
            diags_.push_back({Diagnostic::Severity::Error, sf.path, sp, err.what()});
        }
    }
}

template <class Ops>
FormVal<Ops> Bundle::eval_form_ast(const AstPtr& ast,
                                   const std::map<std::string, std::string>& overrides) const {
    ensure_builtins();
    FormEvaluator<Ops> ev;
    ev.allowed_symbols = &allowed_symbols_;
    ev.scalar_lookup = [this](const std::string& n) -> std::optional<typename Ops::Coeff> {
        if constexpr (std::is_same_v<Ops, RatOps>) {
            return scalar_for(n);
        } else {
            return scalar_raw_for(n);
        }
    };
    ev.form_lookup = [this, &overrides](const std::string& n) -> std::optional<FormVal<Ops>> {
        std::string target = n;
        auto ov = overrides.find(n);
        if (ov != overrides.end()) target = ov->second;
        auto it = form_asts_.find(target);
        if (it == form_asts_.end()) return std::nullopt;
        FormVal<Ops> v = eval_form_ast<Ops>(it->second, overrides);
        if (v.degree != 1)
            throw Error(ErrorCode::BadInput, "form '" + target + "' is not a one-form");
        return v;
    };
    return ev.eval(ast);
}

OneForm Bundle::expand_form(const std::string& name,
                            const std::map<std::string, std::string>& overrides) const {
    if (overrides.empty()) {
        std::lock_guard<std::mutex> lock(*cache_mu_);
        auto it = form_cache_.find(name);
        if (it != form_cache_.end()) return it->second;
    }
    auto ait = form_asts_.find(name);
    if (ait == form_asts_.end()) throw Error(ErrorCode::BadInput, "no form named '" + name + "'");
    FormVal<RatOps> v = eval_form_ast<RatOps>(ait->second, overrides);
    if (v.degree != 1) throw Error(ErrorCode::BadInput, "form '" + name + "' is not a one-form");
    if (overrides.empty()) {
        std::lock_guard<std::mutex> lock(*cache_mu_);
        form_cache_.emplace(name, v.one);
    }
    return v.one;
}

BasicOneForm<TreeOps> Bundle::expand_form_tree(
    const std::string& name, const std::map<std::string, std::string>& overrides) const {
    if (overrides.empty()) {
        std::lock_guard<std::mutex> lock(*cache_mu_);
        auto it = tree_form_cache_.find(name);
        if (it != tree_form_cache_.end()) return it->second;
    }
    auto ait = form_asts_.find(name);
    if (ait == form_asts_.end()) throw Error(ErrorCode::BadInput, "no form named '" + name + "'");
    FormVal<TreeOps> v = eval_form_ast<TreeOps>(ait->second, overrides);
    if (v.degree != 1) throw Error(ErrorCode::BadInput, "form '" + name + "' is not a one-form");
    if (overrides.empty()) {
        std::lock_guard<std::mutex> lock(*cache_mu_);
        tree_form_cache_.emplace(name, v.one);
    }
    return v.one;
}

TwoForm Bundle::eval_two_form(const AstPtr& ast,
                              const std::map<std::string, std::string>& overrides) const {
    FormVal<RatOps> v = eval_form_ast<RatOps>(ast, overrides);
    if (v.degree != 2)
        throw Error(ErrorCode::BadInput, "structure-equation rhs is not a two-form");
    return v.two;
}

BasicTwoForm<TreeOps> Bundle::eval_two_form_tree(
    const std::string& structeq_name, const std::map<std::string, std::string>& overrides) const {
    const StructEqDecl& se = structeq(structeq_name);
    FormVal<TreeOps> v = eval_form_ast<TreeOps>(se.rhs, overrides);
    if (v.degree != 2)
        throw Error(ErrorCode::BadInput, "structure-equation rhs is not a two-form");
    return v.two;
}

Bundle load_paper_dir(const std::string& dir) {
    Bundle b;
    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jf")
            files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) b.load(f);
    return b;
}

} // namespace jetforge
