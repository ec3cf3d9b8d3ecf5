#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "jetforge/rawtree.hpp"

namespace jetforge {

struct Span {
    int line = 0, col = 0;
};

struct Diagnostic {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    std::string file;
    Span span;
    std::string message;

    std::string to_string() const;
};

/// Parsed expression tree.  Leaves may be differentials and named references;
/// lowering to scalars or forms decides what is legal where.
struct Ast;
using AstPtr = std::shared_ptr<const Ast>;

struct Ast {
    enum class Kind {
        Number, Kappa, Var, Ident, DiffCoord, DiffVar,
        Add, Sub, Neg, Mul, Div, Pow, Wedge,
    };
    Kind kind;
    Span span;
    mpq_class number;   // Number
    JetVar var;         // Var / DiffVar
    Dir coord = Dir::T; // DiffCoord
    std::string name;   // Ident
    std::vector<AstPtr> kids;
};

struct UseDecl { std::string path; Span span; };
struct SymbolsDecl { std::vector<std::string> symbols; Span span; };
struct EquationDecl {
    std::string name;
    JetVar principal;
    AstPtr rhs;
    std::vector<mpq_class> excluded_kappa;
    Span span;
};
struct CoveringDecl { std::string name, base, pseudo; AstPtr f_t, f_y; Span span; };
struct InverseDecl { std::string name, over, unknown; AstPtr u_t, u_y; Span span; };
struct ExprDecl { std::string name; AstPtr value; Span span; };
struct FormDecl { std::string name; AstPtr value; Span span; };
struct StructEqDecl {
    std::string name;
    std::string lhs;
    AstPtr rhs; // null when underspecified
    std::vector<std::string> unknowns;
    bool underspecified = false;
    std::string note;
    Span span;
};
struct SuiteCheckDecl {
    std::string kind;
    std::string subject;
    std::vector<std::pair<std::string, std::string>> options;
    std::string expect; // pass | fail | skipped
    Span span;

    std::string display_name() const { return kind + "/" + subject; }
};
struct SuiteDecl { std::string name; std::vector<SuiteCheckDecl> checks; Span span; };

using Declaration = std::variant<UseDecl, SymbolsDecl, EquationDecl, CoveringDecl, InverseDecl,
                                 ExprDecl, FormDecl, StructEqDecl, SuiteDecl>;

struct SourceFile {
    std::string path;
    std::vector<Declaration> decls;
};

struct ParseResult {
    SourceFile file;
    std::vector<Diagnostic> diagnostics;
    bool ok() const;
};

ParseResult parse_source(const std::string& text, const std::string& filename);

/// Parse a single scalar expression; throws Error(BadInput) on failure.
AstPtr parse_expression(const std::string& text);

/// Resolve an identifier during lowering: a raw tree for named scalar
/// expressions, or null when the name is not a declared expression.
using ScalarLookup = std::function<RawPtr(const std::string&)>;

/// Lower a parsed tree to a raw scalar tree.  Named references resolve through
/// `lookup`; remaining identifiers become order-0 jet variables when
/// `allowed_symbols` is null or contains them, otherwise the lowering fails.
/// Differential/wedge nodes are rejected.  Throws Error(BadInput).
RawPtr ast_to_raw(const AstPtr& ast, const ScalarLookup& lookup,
                  const std::set<std::string>* allowed_symbols = nullptr);

/// Deterministic rendering of canonical expressions; parse(print(e))
/// normalizes back to e.
std::string print_expr(const RatExpr& e);
std::string print_poly(const PolyExpr& p);

/// Convenience: parse + lower + normalize a scalar expression with no names.
RatExpr parse_ratexpr(const std::string& text);

} // namespace jetforge
