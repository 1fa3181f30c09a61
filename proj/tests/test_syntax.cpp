//! Parser, pretty-printer, sugar and alpha-equivalence tests.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "helpers.hpp"
#include "reviso/stdlib_isos.hpp"

using namespace reviso;
using namespace reviso::test;

namespace {

/// Collect every pattern-value / let-pattern binder uid in an iso.
void collect_binder_uids(const TermPtr& t, std::set<std::uint64_t>& out);

void collect_pattern_uids(const PatternPtr& p, std::set<std::uint64_t>& out) {
    if (p->kind == Pattern::Kind::Var) {
        out.insert(p->uid);
    } else {
        collect_pattern_uids(p->fst, out);
        collect_pattern_uids(p->snd, out);
    }
}

void collect_binder_uids(const IsoPtr& w, std::set<std::uint64_t>& out) {
    switch (w->kind) {
        case Iso::Kind::Clauses:
            for (const Clause& c : w->clauses) {
                std::map<std::uint64_t, std::string> fv;
                free_vars(c.lhs, fv);
                for (auto& [uid, name] : fv) out.insert(uid);
                collect_binder_uids(c.rhs, out);
            }
            return;
        case Iso::Kind::Fix:
        case Iso::Kind::NFix:
        case Iso::Kind::Lam:
            out.insert(w->uid);
            collect_binder_uids(w->body, out);
            return;
        case Iso::Kind::App:
            collect_binder_uids(w->f, out);
            collect_binder_uids(w->g, out);
            return;
        default:
            return;
    }
}

void collect_binder_uids(const TermPtr& t, std::set<std::uint64_t>& out) {
    switch (t->kind) {
        case Term::Kind::InL:
        case Term::Kind::InR:
        case Term::Kind::Fold:
            collect_binder_uids(t->t1, out);
            return;
        case Term::Kind::Pair:
            collect_binder_uids(t->t1, out);
            collect_binder_uids(t->t2, out);
            return;
        case Term::Kind::App:
            collect_binder_uids(t->iso, out);
            collect_binder_uids(t->t1, out);
            return;
        case Term::Kind::Let:
            collect_pattern_uids(t->pat, out);
            collect_binder_uids(t->t1, out);
            collect_binder_uids(t->t2, out);
            return;
        default:
            return;
    }
}

/// Round-trip an iso through the printer at a declared type.
IsoPtr reparse_at(const IsoPtr& w, const IsoTypePtr& t) {
    std::string src = "iso t : " + print_iso_type(t) + " = " + print_iso(w) + ";";
    Program p = parse_program(src);
    REQUIRE(p.decls.size() == 1);
    return p.decls[0].iso;
}

}  // namespace

// ============================================================================
// Declarations
// ============================================================================

TEST_CASE("identity declaration parses to one ground decl with one clause") {
    Program p = parse_program("iso id : 1 <-> 1 = { () <-> () };");
    REQUIRE(p.decls.size() == 1);
    const Decl& d = p.decls[0];
    CHECK(d.kind == Decl::Kind::Iso);
    CHECK(d.name == "id");
    REQUIRE_FALSE(d.iso_type->arrow);
    CHECK(type_equal(d.iso_type->a, t_unit()));
    CHECK(type_equal(d.iso_type->b, t_unit()));
    REQUIRE(d.iso->kind == Iso::Kind::Clauses);
    REQUIRE(d.iso->clauses.size() == 1);
    CHECK(d.iso->clauses[0].lhs->kind == Term::Kind::Unit);
    CHECK(d.iso->clauses[0].rhs->kind == Term::Kind::Unit);
}

TEST_CASE("type aliases expand and arrow binds looser than <->") {
    Program p = parse_program(
        "type Sigma = 1 + 1;\n"
        "iso f : bool <-> bool -> [Sigma] <-> [Sigma] = \\g. { [] <-> [] };");
    const Decl& d = p.decls[1];
    REQUIRE(d.iso_type->arrow);
    REQUIRE_FALSE(d.iso_type->from->arrow);
    CHECK(type_equal(d.iso_type->from->a, t_bool()));
    CHECK(type_equal(d.iso_type->to->a, t_list(t_bool())));
    CHECK(type_equal(d.iso_type->to->b, t_list(t_bool())));
}

TEST_CASE("nat and bool abbreviations and comments") {
    Program p = parse_program(
        "-- a comment line\n"
        "iso f : nat <-> nat = { 0 <-> 0 }; -- trailing comment\n");
    CHECK(type_equal(p.decls[0].iso_type->a, t_mu("X", t_sum(t_unit(), t_tvar("X")))));
    CHECK(type_equal(parse_type_text("bool"), t_sum(t_unit(), t_unit())));
    CHECK(type_equal(parse_type_text("[nat]"), t_list(t_nat())));
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(parse_program("iso f : 1 <-> 1 = { () <-> () }"), ParseError);
    CHECK_THROWS_AS(parse_program("iso f 1 <-> 1 = { () <-> () };"), ParseError);
    try {
        parse_program("iso f :\n  1 <->\n= { () <-> () };");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.span.line >= 1);
        CHECK(e.span.col >= 1);
    }
}

// ============================================================================
// Literal sugar
// ============================================================================

TEST_CASE("numeric literal 3 desugars to the fold/inr spine") {
    TermPtr three = parse_value_text("3");
    TermPtr expected =
        m_fold(m_inr(m_fold(m_inr(m_fold(m_inr(m_fold(m_inl(m_unit()))))))));
    CHECK(value_equal(three, expected));
    CHECK(as_nat(three) == 3);
}

TEST_CASE("list literal desugars to cons cells over nil") {
    // [x, y] has free variables, so parse it as a clause pattern.
    Program p = parse_program("iso f : [1] <-> 1 = { [x, y] <-> () };");
    TermPtr v = p.decls[0].iso->clauses[0].lhs;
    // fold (inr (x, fold (inr (y, fold (inl ())))))
    REQUIRE(v->kind == Term::Kind::Fold);
    REQUIRE(v->t1->kind == Term::Kind::InR);
    const TermPtr& cell = v->t1->t1;
    REQUIRE(cell->kind == Term::Kind::Pair);
    CHECK(cell->t1->name == "x");
    const TermPtr& tail = cell->t2;
    REQUIRE(tail->kind == Term::Kind::Fold);
    REQUIRE(tail->t1->kind == Term::Kind::InR);
    CHECK(tail->t1->t1->t1->name == "y");
    const TermPtr& nil = tail->t1->t1->t2;
    CHECK(value_equal(nil, m_list({})));
}

TEST_CASE("tt, ff and cons sugar") {
    CHECK(value_equal(parse_value_text("tt"), m_inl(m_unit())));
    CHECK(value_equal(parse_value_text("ff"), m_inr(m_unit())));
    CHECK(value_equal(parse_value_text("1 :: [2]"), m_list({m_nat(1), m_nat(2)})));
    CHECK(value_equal(parse_value_text("[1, 2]"),
                      m_cons(m_nat(1), m_cons(m_nat(2), m_list({})))));
}

TEST_CASE("decimal sugar is a bijection below 1000") {
    for (std::uint64_t n = 0; n <= 1000; ++n) {
        TermPtr v = m_nat(n);
        CHECK(as_nat(v) == n);
        std::string printed = print_term(v);
        CHECK(printed == std::to_string(n));
        CHECK(value_equal(parse_value_text(printed), v));
    }
}

TEST_CASE("nat zero and list nil share their core value") {
    CHECK(value_equal(m_nat(0), m_list({})));
    // nil prints as "0" and re-parses to the same value.
    CHECK(print_term(m_list({})) == "0");
    CHECK(value_equal(parse_value_text(print_term(m_list({}))), m_list({})));
}

// ============================================================================
// Pretty / parse round trips
// ============================================================================

TEST_CASE("round trip for example programs") {
    for (const char* name : {"cantor.rev", "map.rev"}) {
        LinkedProgram lp = load_example(name);
        for (const LinkedIso& d : lp.isos) {
            IsoPtr again = reparse_at(d.iso, d.type);
            CHECK_MESSAGE(alpha_equiv(d.iso, again), d.name, " failed to round-trip");
        }
    }
}

TEST_CASE("round trip for generated isos") {
    using namespace stdlib_isos;
    std::vector<IsoPtr> ws = {
        dup(t_nat()),          dup(t_list(t_bool())), succ_iso(),
        cons_iso(t_bool()),    snoc_family(t_nat()).snoc,
        growth(t_bool(), m_tt()), iterator_iso(t_nat()),
        rm_blank(2, 0),        rev_iso(t_bool()),     cantor_pairing(),
        map_iso(t_bool(), t_bool()), concat_iso(t_nat()), encoder(t_nat()),
    };
    for (const IsoPtr& w : ws) {
        IsoTypePtr t = check_iso({}, w);
        IsoPtr again = reparse_at(w, t);
        // Printing drops inner annotations, so the reparsed iso need not
        // re-check on its own; round-tripping is up to alpha only.
        CHECK_MESSAGE(alpha_equiv(w, again), print_iso(w), " failed to round-trip");
    }
}

TEST_CASE("type printing round-trips") {
    for (const char* src : {"1", "nat", "bool", "[nat]", "nat * nat", "1 + nat * 1",
                            "mu X. 1 + (X + X)", "[1 + 1] * (1 + 1)"}) {
        TypePtr t = parse_type_text(src);
        CHECK(type_equal(parse_type_text(print_type(t)), t));
    }
    IsoTypePtr it = parse_iso_type_text("(bool <-> bool) -> [bool] <-> [bool]");
    CHECK(iso_type_equal(parse_iso_type_text(print_iso_type(it)), it));
}

// ============================================================================
// Barendregt convention
// ============================================================================

TEST_CASE("re-parsing allocates globally fresh binder uids") {
    std::string src = example("map.rev");
    Program p1 = parse_program(src);
    Program p2 = parse_program(src);
    std::set<std::uint64_t> u1, u2;
    for (const Decl& d : p1.decls)
        if (d.kind == Decl::Kind::Iso) collect_binder_uids(d.iso, u1);
    for (const Decl& d : p2.decls)
        if (d.kind == Decl::Kind::Iso) collect_binder_uids(d.iso, u2);
    CHECK_FALSE(u1.empty());
    for (std::uint64_t u : u1) CHECK(u2.count(u) == 0);
}

// ============================================================================
// Alpha-equivalence
// ============================================================================

TEST_CASE("alpha-equivalence examples") {
    std::uint64_t a = fresh_uid(), b = fresh_uid();
    CHECK(alpha_equiv(i_lam("phi", a, i_var("phi", a)), i_lam("psi", b, i_var("psi", b))));
    IsoPtr wx = i_clauses({{m_var("x", a), m_var("x", a)}});
    IsoPtr wy = i_clauses({{m_var("y", b), m_var("y", b)}});
    CHECK(alpha_equiv(wx, wy));
    CHECK_FALSE(alpha_equiv(m_inl(m_unit()), m_inr(m_unit())));
    CHECK_FALSE(alpha_equiv(i_lam("f", a, i_var("f", a)),
                            i_fix("f", b, i_var("f", b))));
    // Strict mode distinguishes distinct free variables, Bijection pairs them.
    CHECK_FALSE(alpha_equiv(m_var("x", a), m_var("y", b), FreeVarMode::Strict));
    CHECK(alpha_equiv(m_var("x", a), m_var("y", b), FreeVarMode::Bijection));
}

// ============================================================================
// Type substitution
// ============================================================================

TEST_CASE("subst_type examples") {
    TypePtr sum = t_sum(t_unit(), t_tvar("X"));
    CHECK(type_equal(subst_type(sum, "X", t_nat()), t_sum(t_unit(), t_nat())));
    CHECK(type_equal(subst_type(t_tvar("X"), "X", t_bool()), t_bool()));
    // Bound occurrences are untouched.
    TypePtr mu = t_mu("X", t_sum(t_unit(), t_tvar("X")));
    CHECK(type_equal(subst_type(mu, "X", t_bool()), mu));
}

TEST_CASE("subst_type is capture-avoiding") {
    // (mu Y. X + Y)[(mu Y. 1 + Y)/X]: the bound Y must not capture the free
    // Y-shaped replacement; the result equals mu Z. nat + Z up to alpha.
    TypePtr body = t_mu("Y", t_sum(t_tvar("X"), t_tvar("Y")));
    TypePtr result = subst_type(body, "X", t_nat());
    CHECK(type_closed(result));
    CHECK(type_equal(result, t_mu("Z", t_sum(t_nat(), t_tvar("Z")))));
}

TEST_CASE("type_equal is alpha for mu binders, type_key canonical") {
    TypePtr a = t_mu("X", t_sum(t_unit(), t_tvar("X")));
    TypePtr b = t_mu("Y", t_sum(t_unit(), t_tvar("Y")));
    CHECK(type_equal(a, b));
    CHECK(type_key(a) == type_key(b));
    CHECK(type_key(a) != type_key(t_list(t_unit())));
}

// ============================================================================
// Example programs parse and check
// ============================================================================

TEST_CASE("shipped examples parse, link and check") {
    CHECK_NOTHROW(load_example("cantor.rev"));
    CHECK_NOTHROW(load_example("map.rev"));
    // overlap.rev parses but must be rejected by the checker.
    LinkedProgram bad = link_program(parse_program(example("overlap.rev")));
    CHECK_THROWS_AS(check_program(bad), TypeError);
}
