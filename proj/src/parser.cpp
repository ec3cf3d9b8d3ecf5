#include "jetforge/parser.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

namespace jetforge {

std::string Diagnostic::to_string() const {
    std::ostringstream os;
    os << file << ":" << span.line << ":" << span.col << ": "
       << (severity == Severity::Error ? "error" : "warning") << ": " << message;
    return os.str();
}

bool ParseResult::ok() const {
    for (const auto& d : diagnostics)
        if (d.severity == Diagnostic::Severity::Error) return false;
    return true;
}

namespace {

enum class Tok {
    Ident, Number, String,
    LParen, RParen, LBrack, RBrack, LBrace, RBrace,
    Comma, Plus, Minus, Star, Slash, Caret, Wedge, Equals, Semi,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    mpz_class number;
    Span span;
};

class Lexer {
public:
    Lexer(const std::string& text, const std::string& file, std::vector<Diagnostic>& diags)
        : s_(text), file_(file), diags_(diags) {}

    std::vector<Token> run() {
        std::vector<Token> toks;
        while (true) {
            skip_ws();
            Span sp{line_, col_};
            if (pos_ >= s_.size()) {
                toks.push_back({Tok::End, "", 0, sp});
                break;
            }
            char c = s_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::string id;
                while (pos_ < s_.size() &&
                       (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                    id += advance();
                toks.push_back({Tok::Ident, id, 0, sp});
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::string num;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                    num += advance();
                if (pos_ < s_.size() && s_[pos_] == '.') {
                    error(sp, "float literals are not supported");
                    advance();
                    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                        advance();
                }
                toks.push_back({Tok::Number, num, mpz_class(num), sp});
            } else if (c == '"') {
                advance();
                std::string str;
                while (pos_ < s_.size() && s_[pos_] != '"') str += advance();
                if (pos_ >= s_.size())
                    error(sp, "unterminated string literal");
                else
                    advance();
                toks.push_back({Tok::String, str, 0, sp});
            } else {
                advance();
                switch (c) {
                    case '(': toks.push_back({Tok::LParen, "(", 0, sp}); break;
                    case ')': toks.push_back({Tok::RParen, ")", 0, sp}); break;
                    case '[': toks.push_back({Tok::LBrack, "[", 0, sp}); break;
                    case ']': toks.push_back({Tok::RBrack, "]", 0, sp}); break;
                    case '{': toks.push_back({Tok::LBrace, "{", 0, sp}); break;
                    case '}': toks.push_back({Tok::RBrace, "}", 0, sp}); break;
                    case ',': toks.push_back({Tok::Comma, ",", 0, sp}); break;
                    case '+': toks.push_back({Tok::Plus, "+", 0, sp}); break;
                    case '-': toks.push_back({Tok::Minus, "-", 0, sp}); break;
                    case '*': toks.push_back({Tok::Star, "*", 0, sp}); break;
                    case '^': toks.push_back({Tok::Caret, "^", 0, sp}); break;
                    case '=': toks.push_back({Tok::Equals, "=", 0, sp}); break;
                    case ';': toks.push_back({Tok::Semi, ";", 0, sp}); break;
                    case '/':
                        if (pos_ < s_.size() && s_[pos_] == '\\') {
                            advance();
                            toks.push_back({Tok::Wedge, "/\\", 0, sp});
                        } else {
                            toks.push_back({Tok::Slash, "/", 0, sp});
                        }
                        break;
                    default:
                        error(sp, std::string("unexpected character '") + c + "'");
                }
            }
        }
        return toks;
    }

private:
    char advance() {
        char c = s_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_ws() {
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (c == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    void error(Span sp, const std::string& msg) {
        diags_.push_back({Diagnostic::Severity::Error, file_, sp, msg});
    }

    const std::string& s_;
    std::string file_;
    std::vector<Diagnostic>& diags_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

AstPtr mk(Ast::Kind k, Span sp, std::vector<AstPtr> kids = {}) {
    auto a = std::make_shared<Ast>();
    a->kind = k;
    a->span = sp;
    a->kids = std::move(kids);
    return a;
}

class Parser {
public:
    Parser(std::vector<Token> toks, const std::string& file, std::vector<Diagnostic>& diags)
        : toks_(std::move(toks)), file_(file), diags_(diags) {}

    SourceFile parse_file() {
        SourceFile sf;
        sf.path = file_;
        while (!at(Tok::End)) {
            size_t before = pos_;
            if (auto d = parse_decl()) sf.decls.push_back(std::move(*d));
            if (pos_ == before) ++pos_; // always make progress
        }
        return sf;
    }

    AstPtr parse_expr_entry() {
        AstPtr e = parse_expr();
        if (!at(Tok::End)) error(peek().span, "trailing input after expression");
        return e;
    }

private:
    const Token& peek(int off = 0) const {
        size_t i = pos_ + off;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    bool at(Tok k) const { return peek().kind == k; }
    bool at_ident(const char* kw) const { return at(Tok::Ident) && peek().text == kw; }
    Token take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
    bool accept(Tok k) {
        if (at(k)) {
            ++pos_;
            return true;
        }
        return false;
    }
    Token expect(Tok k, const char* what) {
        if (at(k)) return take();
        error(peek().span, std::string("expected ") + what);
        return Token{k, "", 0, peek().span};
    }
    std::string expect_ident(const char* what) { return expect(Tok::Ident, what).text; }
    void expect_keyword(const char* kw) {
        if (at_ident(kw)) {
            ++pos_;
            return;
        }
        error(peek().span, std::string("expected '") + kw + "'");
    }
    void error(Span sp, const std::string& msg) {
        diags_.push_back({Diagnostic::Severity::Error, file_, sp, msg});
    }

    void skip_to_decl() {
        static const char* kws[] = {"use", "symbols", "equation", "covering", "inverse",
                                    "expr", "form", "structeq", "suite"};
        while (!at(Tok::End)) {
            if (at(Tok::Ident))
                for (const char* k : kws)
                    if (peek().text == k) return;
            ++pos_;
        }
    }

    // ---- expressions ----

    AstPtr parse_expr() { return parse_add(); }

    AstPtr parse_add() {
        AstPtr lhs = parse_mul();
        while (at(Tok::Plus) || at(Tok::Minus)) {
            Token op = take();
            AstPtr rhs = parse_mul();
            lhs = mk(op.kind == Tok::Plus ? Ast::Kind::Add : Ast::Kind::Sub, op.span,
                     {lhs, rhs});
        }
        return lhs;
    }

    AstPtr parse_mul() {
        AstPtr lhs = parse_unary();
        while (at(Tok::Star) || at(Tok::Slash) || at(Tok::Wedge)) {
            Token op = take();
            AstPtr rhs = parse_unary();
            Ast::Kind k = op.kind == Tok::Star    ? Ast::Kind::Mul
                          : op.kind == Tok::Slash ? Ast::Kind::Div
                                                  : Ast::Kind::Wedge;
            lhs = mk(k, op.span, {lhs, rhs});
        }
        return lhs;
    }

    AstPtr parse_unary() {
        if (at(Tok::Minus)) {
            Token op = take();
            return mk(Ast::Kind::Neg, op.span, {parse_unary()});
        }
        if (at(Tok::Plus)) {
            take();
            return parse_unary();
        }
        return parse_power();
    }

    AstPtr parse_power() {
        AstPtr base = parse_primary();
        if (accept(Tok::Caret)) {
            AstPtr e = parse_exponent();
            return mk(Ast::Kind::Pow, base->span, {base, e});
        }
        return base;
    }

    AstPtr parse_exponent() {
        if (at(Tok::Minus)) {
            Token op = take();
            return mk(Ast::Kind::Neg, op.span, {parse_exponent()});
        }
        if (at(Tok::Number)) {
            Token n = take();
            auto a = mk(Ast::Kind::Number, n.span);
            const_cast<Ast*>(a.get())->number = mpq_class(n.number);
            return a;
        }
        if (at_ident("kappa")) {
            Token t = take();
            return mk(Ast::Kind::Kappa, t.span);
        }
        if (at(Tok::LParen)) {
            take();
            AstPtr e = parse_expr();
            expect(Tok::RParen, "')' after exponent");
            return e;
        }
        error(peek().span, "expected exponent (number, kappa, or parenthesized expression)");
        return mk(Ast::Kind::Number, peek().span);
    }

    std::optional<Dir> dir_from(const std::string& s) {
        if (s == "t") return Dir::T;
        if (s == "x") return Dir::X;
        if (s == "y") return Dir::Y;
        return std::nullopt;
    }

    std::optional<MultiIndex> parse_multi_index() {
        MultiIndex idx;
        if (!accept(Tok::LBrack)) return idx; // empty index
        if (accept(Tok::RBrack)) return idx;
        while (true) {
            Token t = expect(Tok::Ident, "derivative direction t, x, or y");
            auto d = dir_from(t.text);
            if (!d) {
                error(t.span, "malformed multi-index: '" + t.text + "' is not one of t, x, y");
                return std::nullopt;
            }
            idx = idx.bumped(*d);
            if (accept(Tok::RBrack)) break;
            if (!accept(Tok::Comma)) {
                error(peek().span, "expected ',' or ']' in multi-index");
                return std::nullopt;
            }
        }
        return idx;
    }

    AstPtr parse_primary() {
        Span sp = peek().span;
        if (at(Tok::Number)) {
            Token n = take();
            auto a = mk(Ast::Kind::Number, sp);
            const_cast<Ast*>(a.get())->number = mpq_class(n.number);
            return a;
        }
        if (at(Tok::LParen)) {
            take();
            AstPtr e = parse_expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        if (at(Tok::Ident)) {
            Token id = take();
            if (id.text == "kappa") return mk(Ast::Kind::Kappa, sp);
            if (id.text == "d" && at(Tok::LParen)) {
                take();
                Token t = expect(Tok::Ident, "differential target");
                auto d = dir_from(t.text);
                if (d && !at(Tok::LBrack)) {
                    expect(Tok::RParen, "')' after differential");
                    auto a = mk(Ast::Kind::DiffCoord, sp);
                    const_cast<Ast*>(a.get())->coord = *d;
                    return a;
                }
                auto idx = parse_multi_index();
                expect(Tok::RParen, "')' after differential");
                auto a = mk(Ast::Kind::DiffVar, sp);
                const_cast<Ast*>(a.get())->var = JetVar{t.text, idx.value_or(MultiIndex{})};
                return a;
            }
            if (at(Tok::LBrack)) {
                auto idx = parse_multi_index();
                auto a = mk(Ast::Kind::Var, sp);
                const_cast<Ast*>(a.get())->var = JetVar{id.text, idx.value_or(MultiIndex{})};
                return a;
            }
            auto a = mk(Ast::Kind::Ident, sp);
            const_cast<Ast*>(a.get())->name = id.text;
            return a;
        }
        error(sp, "expected expression");
        take();
        return mk(Ast::Kind::Number, sp);
    }

    // ---- declarations ----

    mpq_class parse_signed_rational() {
        bool neg = accept(Tok::Minus);
        Token n = expect(Tok::Number, "number");
        mpz_class num = n.number, den = 1;
        if (accept(Tok::Slash)) den = expect(Tok::Number, "denominator").number;
        mpq_class q(num, den);
        q.canonicalize();
        return neg ? mpq_class(-q) : q;
    }

    std::optional<Declaration> parse_decl() {
        Span sp = peek().span;
        if (!at(Tok::Ident)) {
            error(sp, "expected declaration");
            skip_to_decl();
            return std::nullopt;
        }
        std::string kw = peek().text;
        if (kw == "use") {
            take();
            Token s = expect(Tok::String, "file path string");
            return UseDecl{s.text, sp};
        }
        if (kw == "symbols") {
            take();
            SymbolsDecl d{{}, sp};
            d.symbols.push_back(expect_ident("symbol name"));
            while (accept(Tok::Comma)) d.symbols.push_back(expect_ident("symbol name"));
            return d;
        }
        if (kw == "equation") return parse_equation();
        if (kw == "covering") return parse_covering();
        if (kw == "inverse") return parse_inverse();
        if (kw == "expr") {
            take();
            ExprDecl d;
            d.span = sp;
            d.name = expect_ident("expression name");
            expect(Tok::Equals, "'='");
            d.value = parse_expr();
            accept(Tok::Semi);
            return d;
        }
        if (kw == "form") {
            take();
            FormDecl d;
            d.span = sp;
            d.name = expect_ident("form name");
            expect(Tok::Equals, "'='");
            d.value = parse_expr();
            accept(Tok::Semi);
            return d;
        }
        if (kw == "structeq") return parse_structeq();
        if (kw == "suite") return parse_suite();
        error(sp, "unknown declaration '" + kw + "'");
        take();
        skip_to_decl();
        return std::nullopt;
    }

    Declaration parse_equation() {
        Span sp = take().span;
        EquationDecl d;
        d.span = sp;
        d.name = expect_ident("equation name");
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace) && !at(Tok::End)) {
            if (at_ident("solved")) {
                take();
                Token sym = expect(Tok::Ident, "jet variable");
                auto idx = parse_multi_index();
                d.principal = JetVar{sym.text, idx.value_or(MultiIndex{})};
                expect(Tok::Equals, "'='");
                d.rhs = parse_expr();
                accept(Tok::Semi);
            } else if (at_ident("exclude")) {
                take();
                expect_keyword("kappa");
                expect(Tok::LBrace, "'{'");
                if (!at(Tok::RBrace)) {
                    d.excluded_kappa.push_back(parse_signed_rational());
                    while (accept(Tok::Comma)) d.excluded_kappa.push_back(parse_signed_rational());
                }
                expect(Tok::RBrace, "'}'");
                accept(Tok::Semi);
            } else {
                error(peek().span, "expected 'solved' or 'exclude' in equation body");
                take();
            }
        }
        expect(Tok::RBrace, "'}'");
        if (!d.rhs) error(sp, "equation '" + d.name + "' has no 'solved' clause");
        return d;
    }

    Declaration parse_covering() {
        Span sp = take().span;
        CoveringDecl d;
        d.span = sp;
        d.name = expect_ident("covering name");
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace) && !at(Tok::End)) {
            if (at_ident("base")) {
                take();
                d.base = expect_ident("base equation name");
                accept(Tok::Semi);
            } else if (at_ident("pseudo")) {
                take();
                d.pseudo = expect_ident("pseudopotential symbol");
                accept(Tok::Semi);
            } else if (at(Tok::Ident)) {
                Token sym = take();
                auto idx = parse_multi_index();
                expect(Tok::Equals, "'='");
                AstPtr rhs = parse_expr();
                accept(Tok::Semi);
                if (sym.text != d.pseudo) {
                    error(sym.span, "binding for '" + sym.text + "' but pseudopotential is '" +
                                        d.pseudo + "'");
                } else if (idx && *idx == MultiIndex{1, 0, 0}) {
                    d.f_t = rhs;
                } else if (idx && *idx == MultiIndex{0, 0, 1}) {
                    d.f_y = rhs;
                } else {
                    error(sym.span, "covering bindings must be for [t] and [y]");
                }
            } else {
                error(peek().span, "unexpected token in covering body");
                take();
            }
        }
        expect(Tok::RBrace, "'}'");
        if (!d.f_t || !d.f_y) error(sp, "covering '" + d.name + "' needs both [t] and [y] bindings");
        return d;
    }

    Declaration parse_inverse() {
        Span sp = take().span;
        InverseDecl d;
        d.span = sp;
        d.name = expect_ident("inverse system name");
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace) && !at(Tok::End)) {
            if (at_ident("over")) {
                take();
                d.over = expect_ident("free symbol");
                accept(Tok::Semi);
            } else if (at_ident("unknown")) {
                take();
                d.unknown = expect_ident("unknown symbol");
                accept(Tok::Semi);
            } else if (at(Tok::Ident)) {
                Token sym = take();
                auto idx = parse_multi_index();
                expect(Tok::Equals, "'='");
                AstPtr rhs = parse_expr();
                accept(Tok::Semi);
                if (sym.text != d.unknown) {
                    error(sym.span, "binding for '" + sym.text + "' but unknown is '" +
                                        d.unknown + "'");
                } else if (idx && *idx == MultiIndex{1, 0, 0}) {
                    d.u_t = rhs;
                } else if (idx && *idx == MultiIndex{0, 0, 1}) {
                    d.u_y = rhs;
                } else {
                    error(sym.span, "inverse-system bindings must be for [t] and [y]");
                }
            } else {
                error(peek().span, "unexpected token in inverse body");
                take();
            }
        }
        expect(Tok::RBrace, "'}'");
        if (!d.u_t || !d.u_y)
            error(sp, "inverse system '" + d.name + "' needs both [t] and [y] bindings");
        return d;
    }

    Declaration parse_structeq() {
        Span sp = take().span;
        StructEqDecl d;
        d.span = sp;
        d.name = expect_ident("structure equation name");
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace) && !at(Tok::End)) {
            if (at_ident("lhs")) {
                take();
                d.lhs = expect_ident("form name");
                accept(Tok::Semi);
            } else if (at_ident("rhs")) {
                take();
                d.rhs = parse_expr();
                accept(Tok::Semi);
            } else if (at_ident("unknowns")) {
                take();
                d.unknowns.push_back(expect_ident("coefficient name"));
                while (accept(Tok::Comma)) d.unknowns.push_back(expect_ident("coefficient name"));
                accept(Tok::Semi);
            } else if (at_ident("underspecified")) {
                take();
                d.underspecified = true;
                if (at(Tok::String)) d.note = take().text;
                accept(Tok::Semi);
            } else {
                error(peek().span, "expected lhs/rhs/unknowns/underspecified");
                take();
            }
        }
        expect(Tok::RBrace, "'}'");
        if (!d.underspecified && (!d.rhs || d.lhs.empty()))
            error(sp, "structure equation '" + d.name + "' needs lhs and rhs");
        return d;
    }

    Declaration parse_suite() {
        Span sp = take().span;
        SuiteDecl d;
        d.span = sp;
        d.name = expect_ident("suite name");
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace) && !at(Tok::End)) {
            if (at_ident("check")) {
                Span csp = take().span;
                SuiteCheckDecl c;
                c.span = csp;
                c.kind = expect_ident("check kind");
                c.subject = expect_ident("check subject");
                while (at(Tok::Ident) && peek().text != "expect" && peek().text != "check") {
                    std::string key = take().text;
                    std::string val = expect_ident("option value");
                    c.options.emplace_back(key, val);
                }
                expect_keyword("expect");
                c.expect = expect_ident("pass, fail, or skipped");
                if (c.expect != "pass" && c.expect != "fail" && c.expect != "skipped")
                    error(csp, "expected status must be pass, fail, or skipped");
                accept(Tok::Semi);
                d.checks.push_back(std::move(c));
            } else {
                error(peek().span, "expected 'check' in suite body");
                take();
            }
        }
        expect(Tok::RBrace, "'}'");
        return d;
    }

    std::vector<Token> toks_;
    std::string file_;
    std::vector<Diagnostic>& diags_;
    size_t pos_ = 0;
};

} // namespace

ParseResult parse_source(const std::string& text, const std::string& filename) {
    ParseResult r;
    Lexer lex(text, filename, r.diagnostics);
    Parser p(lex.run(), filename, r.diagnostics);
    r.file = p.parse_file();
    return r;
}

AstPtr parse_expression(const std::string& text) {
    std::vector<Diagnostic> diags;
    Lexer lex(text, "<expr>", diags);
    Parser p(lex.run(), "<expr>", diags);
    AstPtr e = p.parse_expr_entry();
    for (const auto& d : diags)
        if (d.severity == Diagnostic::Severity::Error)
            throw Error(ErrorCode::BadInput, d.to_string());
    return e;
}

RawPtr ast_to_raw(const AstPtr& ast, const ScalarLookup& lookup,
                  const std::set<std::string>* allowed_symbols) {
    auto rec = [&](auto&& self, const AstPtr& a) -> RawPtr {
        switch (a->kind) {
            case Ast::Kind::Number: return raw_num(a->number);
            case Ast::Kind::Kappa: return raw_kappa();
            case Ast::Kind::Var: return raw_var(a->var);
            case Ast::Kind::Ident: {
                if (lookup)
                    if (RawPtr r = lookup(a->name)) return r;
                if (!allowed_symbols || allowed_symbols->count(a->name))
                    return raw_var(JetVar{a->name, {}});
                throw Error(ErrorCode::BadInput,
                            "unknown identifier '" + a->name + "' at line " +
                                std::to_string(a->span.line));
            }
            case Ast::Kind::Add: return raw_add(self(self, a->kids[0]), self(self, a->kids[1]));
            case Ast::Kind::Sub: return raw_sub(self(self, a->kids[0]), self(self, a->kids[1]));
            case Ast::Kind::Neg: return raw_neg(self(self, a->kids[0]));
            case Ast::Kind::Mul: return raw_mul(self(self, a->kids[0]), self(self, a->kids[1]));
            case Ast::Kind::Div: return raw_div(self(self, a->kids[0]), self(self, a->kids[1]));
            case Ast::Kind::Pow: return raw_pow(self(self, a->kids[0]), self(self, a->kids[1]));
            case Ast::Kind::DiffCoord:
            case Ast::Kind::DiffVar:
                throw Error(ErrorCode::BadInput,
                            "differential is not a scalar expression (line " +
                                std::to_string(a->span.line) + ")");
            case Ast::Kind::Wedge:
                throw Error(ErrorCode::BadInput,
                            "wedge product is not a scalar expression (line " +
                                std::to_string(a->span.line) + ")");
        }
        throw Error(ErrorCode::BadInput, "unreachable ast kind");
    };
    return rec(rec, ast);
}

RatExpr parse_ratexpr(const std::string& text) {
    return normalize_raw(ast_to_raw(parse_expression(text), nullptr, nullptr));
}

// ---- printing ----

namespace {

std::string coeff_string(const KappaRational& c) {
    std::string s = c.to_string();
    bool composite = false;
    for (size_t i = 1; i < s.size(); ++i)
        if (s[i] == '+' || s[i] == '-') composite = true;
    return composite ? "(" + s + ")" : s;
}

std::string exponent_string(const Exponent& e) {
    if (e.is_integer() && e.a > 0) return e.a.get_str();
    if (e.b == 1 && e.a == 0) return "kappa";
    return "(" + e.to_string() + ")";
}

std::string mono_string(const Monomial& m) {
    std::string s;
    for (const auto& [v, e] : m.factors()) {
        if (!s.empty()) s += "*";
        s += v.to_string();
        if (!(e.is_integer() && e.a == 1)) s += "^" + exponent_string(e);
    }
    return s;
}

} // namespace

std::string print_poly(const PolyExpr& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : p.terms()) {
        KappaRational c = t.coeff;
        bool neg = c.canonical_sign() < 0;
        if (neg) c = -c;
        if (first) {
            if (neg) out += "-";
            first = false;
        } else {
            out += neg ? " - " : " + ";
        }
        std::string ms = mono_string(t.mono);
        if (ms.empty()) {
            out += coeff_string(c);
        } else if (c.is_one()) {
            out += ms;
        } else {
            out += coeff_string(c) + "*" + ms;
        }
    }
    return out;
}

std::string print_expr(const RatExpr& e) {
    if (e.den_is_one()) return print_poly(e.num());
    return "(" + print_poly(e.num()) + ")/(" + print_poly(e.den()) + ")";
}

} // namespace jetforge
