//! Linear typing, pattern contexts, orthogonality and iso typing tests.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "helpers.hpp"
#include "reviso/rtm.hpp"
#include "reviso/stdlib_isos.hpp"

using namespace reviso;
using namespace reviso::test;

namespace {

TypeError::Kind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const TypeError& e) {
        return e.kind;
    }
    FAIL("expected a TypeError");
    return TypeError::Kind::Mismatch;
}

IsoPtr parse_decl_iso(const std::string& src) {
    LinkedProgram lp = link_program(parse_program(src));
    return lp.isos.back().iso;
}

}  // namespace

// ============================================================================
// Term typing
// ============================================================================

TEST_CASE("axioms: variables and unit") {
    std::uint64_t x = fresh_uid();
    TermContext delta{{x, {"x", t_nat()}}};
    CHECK_NOTHROW(check_term({}, delta, m_var("x", x), t_nat()));
    CHECK_NOTHROW(check_term({}, {}, m_unit(), t_unit()));
}

TEST_CASE("linearity: a variable is consumed exactly once") {
    std::uint64_t x = fresh_uid();
    TermContext delta{{x, {"x", t_nat()}}};
    TermPtr xx = m_pair(m_var("x", x), m_var("x", x));
    CHECK(kind_of([&] { check_term({}, delta, xx, t_prod(t_nat(), t_nat())); }) ==
          TypeError::Kind::Linearity);
    // Unused context is also a linearity violation.
    CHECK(kind_of([&] { check_term({}, delta, m_unit(), t_unit()); }) ==
          TypeError::Kind::Linearity);
    // A variable missing from the linear context is a linearity violation too.
    CHECK(kind_of([&] { check_term({}, {}, m_var("y", fresh_uid()), t_nat()); }) ==
          TypeError::Kind::Linearity);
}

TEST_CASE("constructor typing and mismatches") {
    CHECK_NOTHROW(check_term({}, {}, m_inl(m_unit()), t_sum(t_unit(), t_nat())));
    CHECK_NOTHROW(check_term({}, {}, m_nat(4), t_nat()));
    CHECK_NOTHROW(check_term({}, {}, m_list({m_tt(), m_ff()}), t_list(t_bool())));
    CHECK(kind_of([&] { check_term({}, {}, m_inl(m_unit()), t_nat()); }) ==
          TypeError::Kind::Mismatch);
    CHECK(kind_of([&] { check_term({}, {}, m_unit(), t_bool()); }) ==
          TypeError::Kind::Mismatch);
}

TEST_CASE("judgement types must be closed") {
    CHECK(kind_of([&] { check_term({}, {}, m_unit(), t_tvar("X")); }) ==
          TypeError::Kind::NonClosedType);
}

// ============================================================================
// Pattern contexts
// ============================================================================

TEST_CASE("pattern_context examples") {
    std::uint64_t x = fresh_uid(), h = fresh_uid(), t = fresh_uid();
    TypePtr a = t_nat(), b = t_bool();

    TermContext c1 = pattern_context(m_inl(m_var("x", x)), t_sum(a, b));
    REQUIRE(c1.size() == 1);
    CHECK(type_equal(c1.at(x).type, a));

    TermContext c2 = pattern_context(m_pair(m_var("h", h), m_var("t", t)),
                                     t_prod(a, t_list(a)));
    REQUIRE(c2.size() == 2);
    CHECK(type_equal(c2.at(h).type, a));
    CHECK(type_equal(c2.at(t).type, t_list(a)));

    CHECK_THROWS_AS(pattern_context(m_inl(m_var("x", x)), t_prod(a, b)), TypeError);
    // Non-linear patterns are rejected.
    CHECK_THROWS_AS(pattern_context(m_pair(m_var("x", x), m_var("x", x)),
                                    t_prod(a, a)),
                    TypeError);
}

// ============================================================================
// Orthogonality
// ============================================================================

TEST_CASE("orthogonality examples") {
    std::uint64_t x = fresh_uid(), y = fresh_uid(), i = fresh_uid(), j = fresh_uid();
    CHECK(orthogonal(m_inl(m_var("x", x)), m_inr(m_var("y", y))));
    CHECK_FALSE(orthogonal(m_var("x", x), m_var("x", x)));
    CHECK_FALSE(orthogonal(m_var("x", x), m_inl(m_unit())));
    // (S i, j) vs (0, 0): first components clash under the fold.
    TermPtr si_j = m_pair(m_fold(m_inr(m_var("i", i))), m_var("j", j));
    TermPtr zz = m_pair(m_nat(0), m_nat(0));
    CHECK(orthogonal(si_j, zz));
    CHECK(orthogonal(zz, si_j));  // symmetric
    CHECK_FALSE(orthogonal(si_j, si_j));  // irreflexive on patterns with vars
    CHECK_FALSE(orthogonal(zz, m_pair(m_nat(0), m_var("j", j))));
}

TEST_CASE("orthogonality looks through let prefixes on expressions") {
    // let y = w x in inl y  is orthogonal to  let y = w x in inr y.
    std::uint64_t x1 = fresh_uid(), x2 = fresh_uid(), y1 = fresh_uid(), y2 = fresh_uid();
    IsoPtr w = stdlib_isos::succ_iso();
    TermPtr e1 = m_let(p_var("y", y1), m_app(w, m_var("x", x1)), m_inl(m_var("y", y1)));
    TermPtr e2 = m_let(p_var("y", y2), m_app(w, m_var("x", x2)), m_inr(m_var("y", y2)));
    CHECK(orthogonal(e1, e2));
}

TEST_CASE("orthogonal patterns are matching-disjoint") {
    // Every pair of clause patterns deemed orthogonal matches disjoint value
    // sets, exhaustively at fold-depth <= 4.
    std::uint64_t i = fresh_uid(), j = fresh_uid(), x = fresh_uid();
    struct Case {
        TermPtr p1, p2;
        TypePtr at;
    };
    std::vector<Case> cases = {
        {m_inl(m_var("x", x)), m_inr(m_var("j", j)), t_sum(t_nat(), t_nat())},
        {m_pair(m_fold(m_inr(m_var("i", i))), m_var("j", j)),
         m_pair(m_nat(0), m_nat(0)), t_prod(t_nat(), t_nat())},
        {m_nat(0), m_fold(m_inr(m_var("i", i))), t_nat()},
        {m_list({}), m_cons(m_var("i", i), m_var("j", j)), t_list(t_bool())},
    };
    for (const Case& c : cases) {
        REQUIRE(orthogonal(c.p1, c.p2));
        UniversePtr u = enumerate(c.at, 4);
        for (const TermPtr& v : u->values) {
            bool m1 = match(c.p1, v).has_value();
            bool m2 = match(c.p2, v).has_value();
            CHECK_FALSE((m1 && m2));
        }
    }
}

// ============================================================================
// Iso typing
// ============================================================================

TEST_CASE("map example checks at its arrow type") {
    LinkedProgram lp = load_example("map.rev");
    const LinkedIso* map = lp.find("map");
    REQUIRE(map != nullptr);
    IsoTypePtr expected = parse_iso_type_text("(1+1 <-> 1+1) -> [1+1] <-> [1+1]");
    CHECK(iso_type_equal(check_iso({}, map->iso, map->type), expected));
}

TEST_CASE("overlapping right-hand sides are rejected with clause indices") {
    IsoPtr bad = parse_decl_iso(
        "iso bad : 1 + 1 <-> 1 + 1 = { inl x <-> inl x | inr x <-> inl x };");
    try {
        check_iso({}, bad, parse_iso_type_text("1+1 <-> 1+1"));
        FAIL("expected an overlap error");
    } catch (const TypeError& e) {
        CHECK(e.kind == TypeError::Kind::Overlap);
        std::string msg = e.what();
        CHECK(msg.find("1") != std::string::npos);
        CHECK(msg.find("2") != std::string::npos);
    }
    // Left-hand side overlap is likewise rejected.
    IsoPtr badl = parse_decl_iso(
        "iso bad : nat <-> nat = { x <-> x | 0 <-> 0 };");
    CHECK_THROWS_AS(check_iso({}, badl, parse_iso_type_text("nat <-> nat")), TypeError);
}

TEST_CASE("empty clause set checks at any ascribed ground type") {
    IsoPtr e = parse_decl_iso("iso e : nat <-> bool = { };");
    CHECK_NOTHROW(check_iso({}, e, parse_iso_type_text("nat <-> bool")));
    // But has no type on its own.
    CHECK_THROWS_AS(check_iso({}, i_clauses({})), TypeError);
}

TEST_CASE("clause sides must consume exactly the pattern variables") {
    CHECK_THROWS_AS(
        check_iso({}, parse_decl_iso("iso f : nat <-> nat = { x <-> 0 };"),
                  parse_iso_type_text("nat <-> nat")),
        TypeError);
    CHECK_THROWS_AS(
        check_program(link_program(parse_program("iso f : nat <-> nat = { x <-> y };"))),
        TypeError);  // y is not bound by the clause pattern
}

TEST_CASE("annotation conflicts are reported") {
    std::uint64_t x = fresh_uid();
    IsoPtr w = i_clauses({{m_var("x", x), m_var("x", x)}},
                         it_ground(t_nat(), t_nat()));
    CHECK(kind_of([&] { check_iso({}, w, it_ground(t_bool(), t_bool())); }) ==
          TypeError::Kind::Annotation);
}

TEST_CASE("iso application arity") {
    // Applying a ground iso to another iso is an arity error.
    IsoPtr w = i_app(stdlib_isos::succ_iso(), stdlib_isos::succ_iso());
    CHECK_THROWS_AS(check_iso({}, w), TypeError);
}

// ============================================================================
// Context inversion
// ============================================================================

TEST_CASE("invert_ctx flips every entry pointwise") {
    std::uint64_t phi = fresh_uid(), psi = fresh_uid();
    IsoContext ctx{
        {phi, parse_iso_type_text("nat <-> bool")},
        {psi, parse_iso_type_text("(nat <-> bool) -> [1] <-> nat")},
    };
    IsoContext inv = invert_ctx(ctx);
    CHECK(iso_type_equal(inv.at(phi), parse_iso_type_text("bool <-> nat")));
    CHECK(iso_type_equal(inv.at(psi),
                         parse_iso_type_text("(bool <-> nat) -> nat <-> [1]")));
    // Involutive.
    IsoContext twice = invert_ctx(inv);
    CHECK(iso_type_equal(twice.at(phi), ctx.at(phi)));
    CHECK(iso_type_equal(twice.at(psi), ctx.at(psi)));
}

// ============================================================================
// Stdlib and compiled isos are well-typed; inversion inverts the type
// ============================================================================

TEST_CASE("generated isos check and their inverses check at the inverse type") {
    using namespace stdlib_isos;
    std::vector<IsoPtr> ws = {
        dup(t_unit()),      dup(t_nat()),        dup(t_list(t_bool())),
        erase_const(m_tt(), t_nat(), t_bool()),  cons_iso(t_nat()),
        succ_iso(),         snoc_family(t_bool()).len,
        snoc_family(t_bool()).snoc_prime,        snoc_family(t_bool()).snoc,
        growth(t_bool(), m_tt()),                iterator_iso(t_nat()),
        rm_blank(3, 0),     rev_iso(t_nat()),
        clean_up(2, 0, t_bool()),                cantor_pairing(),
        map_iso(t_nat(), t_nat()),               concat_iso(t_bool()),
        encoder(t_nat()),   encoder(t_prod(t_bool(), t_nat())),
    };
    for (const IsoPtr& w : ws) {
        IsoTypePtr t = check_iso({}, w);
        // Inversion lemma at the level of types.
        IsoPtr wi = invert_iso(w);
        IsoTypePtr ti = check_iso({}, wi);
        CHECK(iso_type_equal(ti, invert_iso_type(t)));
    }
}

TEST_CASE("compiled machines check at the configuration type") {
    for (const char* name : {"identity.rtm", "increment.rtm", "copy.rtm"}) {
        RTMachine m = parse_rtm(fixture(name));
        TypePtr c = rtm_config_type(m);
        IsoPtr step = compile_rtm(m);
        CHECK(iso_type_equal(check_iso({}, step), it_ground(c, c)));
        IsoPtr flagged = compile_rtm_flagged(m);
        CHECK(iso_type_equal(check_iso({}, flagged),
                             it_ground(c, t_prod(c, t_bool()))));
    }
    // The full garbage-free pipeline is well-typed end to end.
    RTMachine ident = parse_rtm(fixture("identity.rtm"));
    TypePtr c = rtm_config_type(ident);
    CHECK(iso_type_equal(check_iso({}, pipeline(ident)), it_ground(c, c)));
}
