//! Matching, small-step evaluation, fuel, and syntactic inversion tests.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "helpers.hpp"
#include "reviso/stdlib_isos.hpp"

using namespace reviso;
using namespace reviso::test;

// ============================================================================
// Matching and substitution
// ============================================================================

TEST_CASE("match examples") {
    std::uint64_t x = fresh_uid(), i = fresh_uid(), j = fresh_uid();

    auto s1 = match(m_var("x", x), m_inl(m_unit()));
    REQUIRE(s1.has_value());
    CHECK(value_equal(s1->at(x), m_inl(m_unit())));

    CHECK_FALSE(match(m_inl(m_var("x", x)), m_inr(m_unit())).has_value());

    // (S i, j) against (1, 1): i = 0, j = 1.
    TermPtr pat = m_pair(m_fold(m_inr(m_var("i", i))), m_var("j", j));
    auto s2 = match(pat, m_pair(m_nat(1), m_nat(1)));
    REQUIRE(s2.has_value());
    CHECK(value_equal(s2->at(i), m_nat(0)));
    CHECK(value_equal(s2->at(j), m_nat(1)));

    // Ground patterns match only themselves.
    CHECK(match(m_nat(2), m_nat(2)).has_value());
    CHECK_FALSE(match(m_nat(2), m_nat(3)).has_value());
}

TEST_CASE("apply_subst example") {
    std::uint64_t i = fresh_uid(), j = fresh_uid();
    Subst s{{i, m_nat(0)}, {j, m_nat(1)}};
    TermPtr body = m_inl(m_pair(m_var("i", i), m_fold(m_inr(m_var("j", j)))));
    CHECK(value_equal(apply_subst(s, body), m_inl(m_pair(m_nat(0), m_nat(2)))));
}

TEST_CASE("match_pattern on let patterns") {
    std::uint64_t a = fresh_uid(), b = fresh_uid();
    PatternPtr p = p_pair(p_var("a", a), p_var("b", b));
    auto s = match_pattern(p, m_pair(m_nat(1), m_tt()));
    REQUIRE(s.has_value());
    CHECK(value_equal(s->at(a), m_nat(1)));
    CHECK(value_equal(s->at(b), m_tt()));
    CHECK_FALSE(match_pattern(p, m_nat(1)).has_value());
}

// ============================================================================
// Small-step reduction
// ============================================================================

TEST_CASE("let on a value pair steps to the substituted body") {
    std::uint64_t x = fresh_uid(), y = fresh_uid();
    TermPtr t = m_let(p_pair(p_var("x", x), p_var("y", y)),
                      m_pair(m_unit(), m_unit()),
                      m_pair(m_var("y", y), m_var("x", x)));
    auto t2 = step(t);
    REQUIRE(t2.has_value());
    CHECK(value_equal(*t2, m_pair(m_unit(), m_unit())));
    CHECK_FALSE(step(*t2).has_value());  // values are normal forms
}

TEST_CASE("unmatched clause application is stuck, not out of fuel") {
    std::uint64_t x = fresh_uid();
    IsoPtr w = i_clauses({{m_inl(m_var("x", x)), m_var("x", x)}},
                         it_ground(t_sum(t_unit(), t_unit()), t_unit()));
    EvalOutcome out = eval(m_app(w, m_inr(m_unit())));
    CHECK(out.kind == EvalOutcome::Kind::Stuck);
    CHECK(out.reason.find("clause") != std::string::npos);
}

TEST_CASE("nfix 0 empties and nfix n+1 unfolds") {
    std::uint64_t phi = fresh_uid();
    IsoTypePtr ty = parse_iso_type_text("1 <-> 1");
    IsoPtr loop = i_nfix(0, "phi", phi, i_var("phi", phi), ty);
    auto w2 = iso_step(loop);
    REQUIRE(w2.has_value());
    CHECK((*w2)->kind == Iso::Kind::Empty);
    // Applying the empty iso is stuck.
    EvalOutcome out = eval(m_app(loop, m_unit()));
    CHECK(out.kind == EvalOutcome::Kind::Stuck);

    IsoPtr once = i_nfix(2, "phi", phi, i_var("phi", phi), ty);
    auto w3 = iso_step(once);
    REQUIRE(w3.has_value());
    CHECK((*w3)->kind == Iso::Kind::NFix);
    CHECK((*w3)->bound == 1);
}

TEST_CASE("the divergent fixpoint runs out of fuel") {
    std::uint64_t phi = fresh_uid();
    IsoPtr loop = i_fix("phi", phi, i_var("phi", phi),
                        parse_iso_type_text("1 <-> 1"));
    EvalOutcome out = eval(m_app(loop, m_unit()), 1000);
    CHECK(out.kind == EvalOutcome::Kind::OutOfFuel);
    CHECK(out.steps == 1000);
}

TEST_CASE("CantorPairing evaluates (1,1) to 4 within 10^4 steps") {
    LinkedProgram lp = load_example("cantor.rev");
    const LinkedIso* cp = lp.find("CantorPairing");
    REQUIRE(cp != nullptr);
    EvalOutcome out = eval(m_app(cp->iso, m_pair(m_nat(1), m_nat(1))), 10000);
    REQUIRE(out.kind == EvalOutcome::Kind::Value);
    CHECK(value_equal(out.term, m_nat(4)));
    // The generated Cantor pairing agrees with the surface program.
    CHECK(value_equal(eval_value(stdlib_isos::cantor_pairing(),
                                 m_pair(m_nat(1), m_nat(1))),
                      m_nat(4)));
}

TEST_CASE("map applies the argument iso elementwise") {
    // (map {0 <-> 1}) [0, 0] evaluates to [1, 1].
    IsoPtr zero_one = i_clauses({{m_nat(0), m_nat(1)}});
    IsoPtr m = i_app(stdlib_isos::map_iso(t_nat(), t_nat()), zero_one);
    CHECK(value_equal(eval_value(m, m_list({m_nat(0), m_nat(0)})),
                      m_list({m_nat(1), m_nat(1)})));
    // Same through the surface program.
    LinkedProgram lp = load_example("map.rev");
    CHECK(value_equal(eval_value(lp.find("mapSwap")->iso, m_list({m_tt(), m_ff()})),
                      m_list({m_ff(), m_tt()})));
}

TEST_CASE("evaluation is deterministic: at most one redex fires") {
    LinkedProgram lp = load_example("cantor.rev");
    TermPtr t = m_app(lp.find("CantorPairing")->iso, m_pair(m_nat(2), m_nat(1)));
    std::uint64_t n = 0;
    while (auto next = step(t)) {
        t = *next;
        ++n;
        REQUIRE(n < 100000);
    }
    CHECK(is_value(t));
    CHECK(value_equal(t, m_nat(8)));  // (2+1)(2+2)/2 + 2
    // eval reports the same step count.
    EvalOutcome out = eval(m_app(lp.find("CantorPairing")->iso,
                                 m_pair(m_nat(2), m_nat(1))));
    CHECK(out.steps == n);
}

// ============================================================================
// Subject reduction (spot check; the acceptance binary randomizes at scale)
// ============================================================================

TEST_CASE("subject reduction along a whole evaluation") {
    LinkedProgram lp = load_example("cantor.rev");
    TypeTable table = check_program(lp);
    TermPtr t = m_app(lp.find("CantorPairing")->iso, m_pair(m_nat(1), m_nat(2)));
    check_term({}, {}, t, t_nat(), &table);
    while (auto next = step(t)) {
        t = *next;
        CHECK_NOTHROW(check_term({}, {}, normalize_lets(t), t_nat()));
    }
    CHECK(value_equal(t, m_nat(7)));
}

// ============================================================================
// Inversion
// ============================================================================

TEST_CASE("inversion of the unit identity is itself") {
    IsoPtr id = i_clauses({{m_unit(), m_unit()}}, it_ground(t_unit(), t_unit()));
    CHECK(alpha_equiv(invert_iso(id), id));
}

TEST_CASE("inversion reverses clause let-chains") {
    LinkedProgram lp = load_example("cantor.rev");
    IsoPtr cp = lp.find("CantorPairing")->iso;
    IsoPtr inv = invert_iso(cp);
    // The inverse unpairs: 4 back to (1, 1).
    CHECK(value_equal(eval_value(inv, m_nat(4)), m_pair(m_nat(1), m_nat(1))));
    // Round trips in both directions.
    for (std::uint64_t n = 0; n <= 14; ++n) {
        TermPtr pair = eval_value(inv, m_nat(n));
        CHECK(value_equal(eval_value(cp, pair), m_nat(n)));
    }
}

TEST_CASE("inversion is involutive up to alpha") {
    using namespace stdlib_isos;
    LinkedProgram lp = load_example("map.rev");
    std::vector<IsoPtr> ws = {
        lp.find("map")->iso,       lp.find("mapSwap")->iso,
        dup(t_nat()),              succ_iso(),
        cantor_pairing(),          rev_iso(t_bool()),
        concat_iso(t_nat()),       encoder(t_bool()),
        iterator_iso(t_nat()),     rm_blank(2, 0),
    };
    for (const IsoPtr& w : ws)
        CHECK_MESSAGE(alpha_equiv(invert_iso(invert_iso(w)), w),
                      "double inversion changed: ", print_iso(w));
}

TEST_CASE("inversion commutes with iso-level steps up to alpha") {
    // fix and nfix unfoldings: invert then step = step then invert.
    std::vector<IsoPtr> ws = {
        stdlib_isos::cantor_pairing(),
        finitize(stdlib_isos::dup(t_nat()), 3),
    };
    for (IsoPtr w : ws) {
        for (int k = 0; k < 4; ++k) {
            auto stepped = iso_step(w);
            if (!stepped) break;
            auto inv_stepped = iso_step(invert_iso(w));
            REQUIRE(inv_stepped.has_value());
            CHECK(alpha_equiv(invert_iso(*stepped), *inv_stepped));
            w = *stepped;
        }
    }
}

TEST_CASE("round trips for generated isos in both directions") {
    using namespace stdlib_isos;
    struct Case {
        IsoPtr w;
        TermPtr input;
    };
    std::vector<Case> cases = {
        {dup(t_nat()), m_nat(3)},
        {succ_iso(), m_nat(6)},
        {cons_iso(t_nat()), m_pair(m_nat(1), m_list({m_nat(2)}))},
        {snoc_family(t_nat()).snoc, m_pair(m_list({m_nat(1), m_nat(2)}), m_nat(3))},
        {rev_iso(t_nat()), m_list({m_nat(1), m_nat(2), m_nat(3)})},
        {concat_iso(t_nat()), m_pair(m_list({m_nat(1)}), m_list({m_nat(2)}))},
        {encoder(t_nat()), m_nat(5)},
        {cantor_pairing(), m_pair(m_nat(3), m_nat(4))},
    };
    for (const Case& c : cases) {
        IsoPtr inv = invert_iso(c.w);
        TermPtr out = eval_value(c.w, c.input);
        CHECK(value_equal(eval_value(inv, out), c.input));
        CHECK(value_equal(eval_value(c.w, eval_value(inv, out)), out));
    }
}

TEST_CASE("nfix approximations are monotone toward fix") {
    // CantorPairing at (1, 1): undefined (empties) at small budgets, then
    // stabilizes to the fix answer.
    IsoPtr cp = stdlib_isos::cantor_pairing();
    TermPtr arg = m_pair(m_nat(1), m_nat(1));
    TermPtr expected = eval_value(cp, arg);
    CHECK(value_equal(expected, m_nat(4)));
    bool defined_yet = false;
    for (std::uint64_t n = 0; n <= 10; ++n) {
        EvalOutcome out = eval(m_app(finitize(cp, n), arg));
        if (out.kind == EvalOutcome::Kind::Value) {
            defined_yet = true;
            CHECK(value_equal(out.term, expected));
        } else {
            CHECK_FALSE(defined_yet);  // once defined, stays defined
        }
    }
    CHECK(defined_yet);
}
