#include "reviso/parser.hpp"

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>

namespace reviso {

const Decl* Program::find_iso(const std::string& name) const {
    for (const auto& d : decls)
        if (d.kind == Decl::Kind::Iso && d.name == name) return &d;
    return nullptr;
}

namespace {

// ============================================================================
// Lexer
// ============================================================================

enum class Tok {
    Ident,    // lower- or upper-case identifier (keywords split out)
    Number,
    LParen, RParen, LBracket, RBracket, LBrace, RBrace,
    Comma, Semi, Colon, Dot, Bar, Plus, Star, Eq, Backslash,
    Biarrow,  // <->
    Arrow,    // ->
    Cons,     // ::
    Unit,     // ()
    KwType, KwIso, KwMu, KwFix, KwNfix, KwLet, KwIn,
    KwInl, KwInr, KwFold, KwTt, KwFf, KwNat, KwBool,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    std::uint64_t number = 0;
    SourceSpan span;
};

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    std::uint32_t line = 1, col = 1;
    std::size_t i = 0;
    auto push = [&](Tok k, std::string text, std::uint32_t l, std::uint32_t c) {
        out.push_back(Token{k, std::move(text), 0, SourceSpan{l, c}});
    };
    while (i < src.size()) {
        char ch = src[i];
        if (ch == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (ch == ' ' || ch == '\t' || ch == '\r') {
            ++col;
            ++i;
            continue;
        }
        if (ch == '-' && i + 1 < src.size() && src[i + 1] == '-') {
            while (i < src.size() && src[i] != '\n') ++i;
            continue;
        }
        std::uint32_t l = line, c = col;
        auto two = [&](char a, char b) {
            return ch == a && i + 1 < src.size() && src[i + 1] == b;
        };
        if (ch == '<' && i + 2 < src.size() && src[i + 1] == '-' && src[i + 2] == '>') {
            push(Tok::Biarrow, "<->", l, c);
            i += 3;
            col += 3;
            continue;
        }
        if (two('-', '>')) {
            push(Tok::Arrow, "->", l, c);
            i += 2;
            col += 2;
            continue;
        }
        if (two(':', ':')) {
            push(Tok::Cons, "::", l, c);
            i += 2;
            col += 2;
            continue;
        }
        if (two('(', ')')) {
            push(Tok::Unit, "()", l, c);
            i += 2;
            col += 2;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            Token t{Tok::Number, src.substr(i, j - i), 0, SourceSpan{l, c}};
            t.number = std::stoull(t.text);
            out.push_back(t);
            col += static_cast<std::uint32_t>(j - i);
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' ||
                    src[j] == '\''))
                ++j;
            std::string word = src.substr(i, j - i);
            static const std::map<std::string, Tok> keywords = {
                {"type", Tok::KwType}, {"iso", Tok::KwIso},   {"mu", Tok::KwMu},
                {"fix", Tok::KwFix},   {"nfix", Tok::KwNfix}, {"let", Tok::KwLet},
                {"in", Tok::KwIn},     {"inl", Tok::KwInl},   {"inr", Tok::KwInr},
                {"fold", Tok::KwFold}, {"tt", Tok::KwTt},     {"ff", Tok::KwFf},
                {"nat", Tok::KwNat},   {"bool", Tok::KwBool},
            };
            auto it = keywords.find(word);
            push(it == keywords.end() ? Tok::Ident : it->second, word, l, c);
            col += static_cast<std::uint32_t>(j - i);
            i = j;
            continue;
        }
        Tok k;
        switch (ch) {
            case '(': k = Tok::LParen; break;
            case ')': k = Tok::RParen; break;
            case '[': k = Tok::LBracket; break;
            case ']': k = Tok::RBracket; break;
            case '{': k = Tok::LBrace; break;
            case '}': k = Tok::RBrace; break;
            case ',': k = Tok::Comma; break;
            case ';': k = Tok::Semi; break;
            case ':': k = Tok::Colon; break;
            case '.': k = Tok::Dot; break;
            case '|': k = Tok::Bar; break;
            case '+': k = Tok::Plus; break;
            case '*': k = Tok::Star; break;
            case '=': k = Tok::Eq; break;
            case '\\': k = Tok::Backslash; break;
            default:
                throw ParseError(SourceSpan{l, c},
                                 std::string("unexpected character '") + ch + "'");
        }
        push(k, std::string(1, ch), l, c);
        ++i;
        ++col;
    }
    out.push_back(Token{Tok::End, "", 0, SourceSpan{line, col}});
    return out;
}

// ============================================================================
// Parser
// ============================================================================

struct Parser {
    std::vector<Token> toks;
    std::size_t pos = 0;

    std::map<std::string, TypePtr> aliases;        // type UIDENT = ...
    std::vector<std::string> tvar_scope;           // mu binders
    std::vector<std::pair<std::string, std::uint64_t>> term_scope;
    std::vector<std::pair<std::string, std::uint64_t>> iso_scope;

    const Token& peek(std::size_t k = 0) const {
        return toks[std::min(pos + k, toks.size() - 1)];
    }
    const Token& next() { return toks[pos++]; }
    bool at(Tok k) const { return peek().kind == k; }
    bool accept(Tok k) {
        if (at(k)) {
            ++pos;
            return true;
        }
        return false;
    }
    Token expect(Tok k, const std::string& what) {
        if (!at(k))
            throw ParseError(peek().span, "expected " + what + ", found '" + peek().text + "'");
        return next();
    }
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(peek().span, msg); }

    // ---- types -------------------------------------------------------------

    TypePtr parse_type() {
        TypePtr l = parse_type_prod();
        if (accept(Tok::Plus)) return t_sum(l, parse_type());
        return l;
    }

    TypePtr parse_type_prod() {
        TypePtr l = parse_type_atom();
        if (accept(Tok::Star)) return t_prod(l, parse_type_prod());
        return l;
    }

    TypePtr parse_type_atom() {
        const Token& t = peek();
        if (t.kind == Tok::Number && t.number == 1) {
            next();
            return t_unit();
        }
        if (accept(Tok::KwNat)) return t_nat();
        if (accept(Tok::KwBool)) return t_bool();
        if (accept(Tok::LBracket)) {
            TypePtr elem = parse_type();
            expect(Tok::RBracket, "']'");
            return t_list(elem);
        }
        if (accept(Tok::KwMu)) {
            Token name = expect(Tok::Ident, "type variable");
            expect(Tok::Dot, "'.'");
            tvar_scope.push_back(name.text);
            TypePtr body = parse_type();
            tvar_scope.pop_back();
            return t_mu(name.text, body);
        }
        if (accept(Tok::LParen)) {
            TypePtr inner = parse_type();
            expect(Tok::RParen, "')'");
            return inner;
        }
        if (t.kind == Tok::Ident) {
            next();
            for (auto it = tvar_scope.rbegin(); it != tvar_scope.rend(); ++it)
                if (*it == t.text) return t_tvar(t.text);
            auto it = aliases.find(t.text);
            if (it != aliases.end()) return it->second;
            throw ParseError(t.span, "unknown type name '" + t.text + "'");
        }
        fail("expected a type");
    }

    // ---- iso types ----------------------------------------------------------

    IsoTypePtr parse_iso_type() {
        IsoTypePtr l = parse_iso_type_base();
        if (accept(Tok::Arrow)) return it_arrow(l, parse_iso_type());
        return l;
    }

    IsoTypePtr parse_iso_type_base() {
        // Either `type <-> type` or a parenthesized iso type. The two cannot
        // be told apart without lookahead, so backtrack on failure.
        std::size_t save = pos;
        std::size_t tvar_save = tvar_scope.size();
        try {
            TypePtr a = parse_type();
            expect(Tok::Biarrow, "'<->'");
            TypePtr b = parse_type();
            return it_ground(a, b);
        } catch (const ParseError&) {
            pos = save;
            tvar_scope.resize(tvar_save);
        }
        expect(Tok::LParen, "'(' or a ground iso type");
        IsoTypePtr inner = parse_iso_type();
        expect(Tok::RParen, "')'");
        return inner;
    }

    // ---- variable scopes ----------------------------------------------------

    std::optional<std::uint64_t> lookup_term(const std::string& name) const {
        for (auto it = term_scope.rbegin(); it != term_scope.rend(); ++it)
            if (it->first == name) return it->second;
        return std::nullopt;
    }

    std::optional<std::uint64_t> lookup_iso(const std::string& name) const {
        for (auto it = iso_scope.rbegin(); it != iso_scope.rend(); ++it)
            if (it->first == name) return it->second;
        return std::nullopt;
    }

    // ---- values / expressions -----------------------------------------------

    /// binding = true: identifiers introduce fresh binders (clause LHS);
    /// binding = false: identifiers are uses resolved against scope.
    TermPtr parse_value(bool binding) {
        TermPtr head = parse_value_ctor(binding);
        if (accept(Tok::Cons)) return m_cons(head, parse_value(binding));
        return head;
    }

    TermPtr parse_value_ctor(bool binding) {
        SourceSpan sp = peek().span;
        if (accept(Tok::KwInl)) return with_span(m_inl(parse_value_ctor(binding)), sp);
        if (accept(Tok::KwInr)) return with_span(m_inr(parse_value_ctor(binding)), sp);
        if (accept(Tok::KwFold)) return with_span(m_fold(parse_value_ctor(binding)), sp);
        return parse_value_atom(binding);
    }

    TermPtr parse_value_atom(bool binding) {
        const Token& t = peek();
        if (accept(Tok::Unit)) return m_unit();
        if (t.kind == Tok::Number) {
            next();
            return m_nat(t.number);
        }
        if (accept(Tok::KwTt)) return m_tt();
        if (accept(Tok::KwFf)) return m_ff();
        if (accept(Tok::LBracket)) {
            std::vector<TermPtr> elems;
            if (!at(Tok::RBracket)) {
                elems.push_back(parse_value(binding));
                while (accept(Tok::Comma)) elems.push_back(parse_value(binding));
            }
            expect(Tok::RBracket, "']'");
            return m_list(elems);
        }
        if (accept(Tok::LParen)) {
            TermPtr a = parse_value(binding);
            if (accept(Tok::Comma)) {
                TermPtr b = parse_value(binding);
                expect(Tok::RParen, "')'");
                return m_pair(a, b);
            }
            expect(Tok::RParen, "')'");
            return a;
        }
        if (t.kind == Tok::Ident) {
            next();
            if (binding) {
                std::uint64_t uid = fresh_uid();
                term_scope.emplace_back(t.text, uid);
                return with_span(m_var(t.text, uid), t.span);
            }
            if (auto uid = lookup_term(t.text)) return with_span(m_var(t.text, *uid), t.span);
            // Leave unresolved with a fresh uid; the type checker reports it.
            return with_span(m_var(t.text, fresh_uid()), t.span);
        }
        fail("expected a value");
    }

    PatternPtr parse_pattern_binder() {
        const Token& t = peek();
        if (t.kind == Tok::Ident) {
            next();
            std::uint64_t uid = fresh_uid();
            term_scope.emplace_back(t.text, uid);
            PatternPtr p = p_var(t.text, uid);
            const_cast<Pattern*>(p.get())->span = t.span;
            return p;
        }
        expect(Tok::LParen, "a pattern");
        PatternPtr a = parse_pattern_binder();
        expect(Tok::Comma, "','");
        PatternPtr b = parse_pattern_binder();
        expect(Tok::RParen, "')'");
        return p_pair(a, b);
    }

    /// The applied argument of an expression-let: pattern shape, use semantics.
    TermPtr parse_pattern_use() {
        const Token& t = peek();
        if (t.kind == Tok::Ident) {
            next();
            if (auto uid = lookup_term(t.text)) return with_span(m_var(t.text, *uid), t.span);
            return with_span(m_var(t.text, fresh_uid()), t.span);
        }
        expect(Tok::LParen, "a pattern");
        TermPtr a = parse_pattern_use();
        expect(Tok::Comma, "','");
        TermPtr b = parse_pattern_use();
        expect(Tok::RParen, "')'");
        return m_pair(a, b);
    }

    TermPtr parse_expr() {
        if (accept(Tok::KwLet)) {
            SourceSpan sp = toks[pos - 1].span;
            std::size_t scope_mark = term_scope.size();
            // The applied argument uses the *outer* scope; bind the pattern
            // only for the body.
            // Parse shape first without committing the binders: read pattern
            // tokens by parsing into a detached scope.
            std::size_t before = term_scope.size();
            PatternPtr p = parse_pattern_binder();
            // Temporarily hide the new binders while parsing the argument.
            std::vector<std::pair<std::string, std::uint64_t>> binders(
                term_scope.begin() + static_cast<std::ptrdiff_t>(before), term_scope.end());
            term_scope.resize(before);
            expect(Tok::Eq, "'='");
            // `isoapp pattern` is ambiguous (both begin with idents/parens):
            // extend the application greedily, but the atom right before
            // 'in' is the applied pattern, not part of the iso.
            IsoPtr w = parse_iso_atom();
            while (at_iso_atom()) {
                std::size_t save = pos;
                std::size_t tsave = term_scope.size(), isave = iso_scope.size();
                IsoPtr more;
                try {
                    more = parse_iso_atom();
                } catch (const ParseError&) {
                    pos = save;
                    term_scope.resize(tsave);
                    iso_scope.resize(isave);
                    break;
                }
                if (at(Tok::KwIn)) {
                    pos = save;
                    break;
                }
                w = i_app(w, more);
            }
            TermPtr arg = parse_pattern_use();
            expect(Tok::KwIn, "'in'");
            term_scope.insert(term_scope.end(), binders.begin(), binders.end());
            TermPtr body = parse_expr();
            term_scope.resize(scope_mark);
            return with_span(m_let(p, m_app(w, arg), body), sp);
        }
        return parse_value(/*binding=*/false);
    }

    // ---- isos -----------------------------------------------------------------

    IsoPtr parse_iso() {
        SourceSpan sp = peek().span;
        if (accept(Tok::KwFix)) {
            Token name = expect(Tok::Ident, "iso variable");
            expect(Tok::Dot, "'.'");
            std::uint64_t uid = fresh_uid();
            iso_scope.emplace_back(name.text, uid);
            IsoPtr body = parse_iso();
            iso_scope.pop_back();
            return with_span(i_fix(name.text, uid, body), sp);
        }
        if (accept(Tok::Backslash)) {
            Token name = expect(Tok::Ident, "iso variable");
            expect(Tok::Dot, "'.'");
            std::uint64_t uid = fresh_uid();
            iso_scope.emplace_back(name.text, uid);
            IsoPtr body = parse_iso();
            iso_scope.pop_back();
            return with_span(i_lam(name.text, uid, body), sp);
        }
        if (accept(Tok::KwNfix)) {
            Token n = expect(Tok::Number, "unfolding bound");
            Token name = expect(Tok::Ident, "iso variable");
            expect(Tok::Dot, "'.'");
            std::uint64_t uid = fresh_uid();
            iso_scope.emplace_back(name.text, uid);
            IsoPtr body = parse_iso();
            iso_scope.pop_back();
            return with_span(i_nfix(n.number, name.text, uid, body), sp);
        }
        return parse_isoapp();
    }

    bool at_iso_atom() const {
        return at(Tok::Ident) || at(Tok::LBrace) || at(Tok::LParen);
    }

    IsoPtr parse_isoapp() {
        IsoPtr f = parse_iso_atom();
        while (at_iso_atom()) f = i_app(f, parse_iso_atom());
        return f;
    }

    IsoPtr parse_iso_atom() {
        const Token& t = peek();
        if (t.kind == Tok::Ident) {
            next();
            if (auto uid = lookup_iso(t.text)) return with_span(i_var(t.text, *uid), t.span);
            return with_span(i_var(t.text, 0), t.span);  // declaration reference
        }
        if (accept(Tok::LBrace)) {
            std::vector<Clause> cs;
            if (!at(Tok::RBrace)) {
                cs.push_back(parse_clause());
                while (accept(Tok::Bar)) cs.push_back(parse_clause());
            }
            expect(Tok::RBrace, "'}'");
            return with_span(i_clauses(std::move(cs)), t.span);
        }
        expect(Tok::LParen, "an iso");
        IsoPtr inner = parse_iso();
        expect(Tok::RParen, "')'");
        return inner;
    }

    Clause parse_clause() {
        std::size_t scope_mark = term_scope.size();
        TermPtr lhs = parse_value(/*binding=*/true);
        expect(Tok::Biarrow, "'<->'");
        TermPtr rhs = parse_expr();
        term_scope.resize(scope_mark);
        return Clause{lhs, rhs};
    }

    // ---- programs ---------------------------------------------------------------

    Program parse_program() {
        Program prog;
        while (!at(Tok::End)) {
            if (accept(Tok::KwType)) {
                Token name = expect(Tok::Ident, "type name");
                expect(Tok::Eq, "'='");
                TypePtr t = parse_type();
                expect(Tok::Semi, "';'");
                if (aliases.count(name.text))
                    throw ParseError(name.span, "duplicate type name '" + name.text + "'");
                aliases[name.text] = t;
                prog.decls.push_back(
                    Decl{Decl::Kind::TypeAlias, name.text, t, nullptr, nullptr, name.span});
                continue;
            }
            if (accept(Tok::KwIso)) {
                Token name = expect(Tok::Ident, "iso name");
                expect(Tok::Colon, "':'");
                IsoTypePtr t = parse_iso_type();
                expect(Tok::Eq, "'='");
                IsoPtr w = parse_iso();
                expect(Tok::Semi, "';'");
                prog.decls.push_back(
                    Decl{Decl::Kind::Iso, name.text, nullptr, t, w, name.span});
                continue;
            }
            fail("expected 'type' or 'iso' declaration");
        }
        return prog;
    }

    // ---- helpers ------------------------------------------------------------------

    static TermPtr with_span(TermPtr t, SourceSpan sp) {
        const_cast<Term*>(t.get())->span = sp;
        return t;
    }
    static IsoPtr with_span(IsoPtr w, SourceSpan sp) {
        const_cast<Iso*>(w.get())->span = sp;
        return w;
    }
};

}  // namespace

Program parse_program(const std::string& text) {
    Parser p;
    p.toks = lex(text);
    return p.parse_program();
}

TermPtr parse_value_text(const std::string& text) {
    Parser p;
    p.toks = lex(text);
    TermPtr v = p.parse_value(/*binding=*/false);
    p.expect(Tok::End, "end of input");
    if (!is_closed_value(v)) throw ParseError(v->span, "value must be closed");
    return v;
}

TypePtr parse_type_text(const std::string& text) {
    Parser p;
    p.toks = lex(text);
    TypePtr t = p.parse_type();
    p.expect(Tok::End, "end of input");
    return t;
}

IsoTypePtr parse_iso_type_text(const std::string& text) {
    Parser p;
    p.toks = lex(text);
    IsoTypePtr t = p.parse_iso_type();
    p.expect(Tok::End, "end of input");
    return t;
}

}  // namespace reviso
