//! Reversible Turing machine tests: parsing, determinism validation, the
//! oracle simulator, inversion, configuration encoding and compilation.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "helpers.hpp"
#include "reviso/rtm.hpp"

using namespace reviso;
using namespace reviso::test;

namespace {

std::vector<std::size_t> strip_trailing_blanks(std::vector<std::size_t> xs) {
    while (!xs.empty() && xs.back() == 0) xs.pop_back();
    return xs;
}

Configuration strip(const Configuration& c) {
    return {c.state, strip_trailing_blanks(c.left), c.scanned,
            strip_trailing_blanks(c.right)};
}

/// Pad a configuration with k extra blanks at the far end of both tapes.
Configuration pad(Configuration c, std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) {
        c.left.push_back(0);
        c.right.push_back(0);
    }
    return c;
}

}  // namespace

// ============================================================================
// Parsing and validation
// ============================================================================

TEST_CASE("fixtures parse with the expected shapes") {
    RTMachine ident = parse_rtm(fixture("identity.rtm"));
    CHECK(ident.symbols == std::vector<std::string>{"b", "a"});
    CHECK(ident.states == std::vector<std::string>{"qs", "qf"});
    CHECK(ident.rules.size() == 1);
    CHECK(ident.initial == 0);
    CHECK(ident.final == 1);
    REQUIRE(ident.sample_input.has_value());

    RTMachine copy = parse_rtm(fixture("copy.rtm"));
    CHECK(copy.symbols.size() == 7);
    CHECK(copy.states.size() == 28);
    CHECK(copy.rules.size() == 37);
}

TEST_CASE("forward determinism violations are rejected") {
    std::string text =
        "symbols: b a c\n"
        "states: q0 q1 q2\n"
        "rule q0 a/b q1\n"
        "rule q0 a/c q2\n";
    CHECK_THROWS_AS(parse_rtm(text), RtmError);
    // A rewrite and a move out of the same state also conflict.
    CHECK_THROWS_AS(parse_rtm("symbols: b a\nstates: q0 q1\n"
                              "rule q0 a/b q1\nrule q0 left q1\n"),
                    RtmError);
}

TEST_CASE("backward determinism violations are rejected") {
    // Two rewrites writing the same symbol into the same state.
    CHECK_THROWS_AS(parse_rtm("symbols: b a c\nstates: q0 q1 q2\n"
                              "rule q0 a/b q2\nrule q1 c/b q2\n"),
                    RtmError);
}

TEST_CASE("an empty rule set is a valid machine") {
    RTMachine m = parse_rtm("symbols: b\nstates: qs qf\n");
    CHECK(m.rules.empty());
    // It cannot reach its final state: any run is stuck immediately.
    CHECK(rtm_run(m, {}).status == RtmRunResult::Status::Stuck);
}

TEST_CASE("unknown names and malformed directives are reported with lines") {
    try {
        parse_rtm("symbols: b a\nstates: q0 q1\nrule q0 z/a q1\n");
        FAIL("expected an error");
    } catch (const RtmError& e) {
        CHECK(e.line == 3);
    }
    CHECK_THROWS_AS(parse_rtm("states: q0 q1\n"), RtmError);       // no symbols
    CHECK_THROWS_AS(parse_rtm("symbols: b\nstates: q0\nbogus\n"), RtmError);
}

// ============================================================================
// The oracle simulator
// ============================================================================

TEST_CASE("stepping materializes blanks at the tape ends") {
    RTMachine m = parse_rtm("symbols: b a\nstates: q0 q1\nrule q0 left q1\n");
    Configuration c{0, {}, 1, {}};
    auto c2 = rtm_step(m, c);
    REQUIRE(c2.has_value());
    CHECK(c2->state == 1);
    CHECK(c2->left.empty());
    CHECK(c2->scanned == 0);                              // materialized blank
    CHECK(c2->right == std::vector<std::size_t>{1});      // old head pushed right
}

TEST_CASE("identity accepts in one step and outputs its input") {
    RTMachine m = parse_rtm(fixture("identity.rtm"));
    RtmRunResult r = rtm_run(m, parse_tape(m, "aa"));
    CHECK(r.status == RtmRunResult::Status::Ok);
    CHECK(r.steps == 1);
    CHECK(show_tape(m, r.output) == "aa");
}

TEST_CASE("increment appends one a") {
    RTMachine m = parse_rtm(fixture("increment.rtm"));
    for (std::size_t n = 0; n <= 6; ++n) {
        RtmRunResult r = rtm_run(m, std::vector<std::size_t>(n, 1));
        REQUIRE(r.status == RtmRunResult::Status::Ok);
        CHECK(r.output == std::vector<std::size_t>(n + 1, 1));
    }
}

TEST_CASE("copy duplicates its unary input around a separator") {
    RTMachine m = parse_rtm(fixture("copy.rtm"));
    for (std::size_t n = 0; n <= 4; ++n) {
        RtmRunResult r = rtm_run(m, std::vector<std::size_t>(n, 1));
        REQUIRE(r.status == RtmRunResult::Status::Ok);
        std::string expected(n, 'a');
        expected = expected + "c" + expected;
        std::string got;
        for (std::size_t s : r.output) got += m.symbols[s];
        CHECK(got == expected);
    }
    // Inputs off the oracle's domain get stuck.
    CHECK(rtm_run(m, parse_tape(m, "c")).status != RtmRunResult::Status::Ok);
    CHECK(rtm_run(m, parse_tape(m, "ax")).status != RtmRunResult::Status::Ok);
}

// ============================================================================
// Inversion
// ============================================================================

TEST_CASE("the inverse machine undoes the forward run") {
    for (const char* name : {"increment.rtm", "copy.rtm"}) {
        RTMachine m = parse_rtm(fixture(name));
        RTMachine mi = rtm_inverse(m);
        CHECK_NOTHROW(validate_rtm(mi));
        for (std::size_t n = 0; n <= 3; ++n) {
            std::vector<std::size_t> input(n, 1);
            RtmRunResult fwd = rtm_run(m, input);
            REQUIRE(fwd.status == RtmRunResult::Status::Ok);
            RtmRunResult bwd = rtm_run(mi, fwd.output);
            REQUIRE(bwd.status == RtmRunResult::Status::Ok);
            CHECK(bwd.output == input);
        }
    }
}

TEST_CASE("machine inversion is an involution") {
    RTMachine m = parse_rtm(fixture("copy.rtm"));
    RTMachine mii = rtm_inverse(rtm_inverse(m));
    CHECK(mii.initial == m.initial);
    CHECK(mii.final == m.final);
    REQUIRE(mii.rules.size() == m.rules.size());
    for (std::size_t i = 0; i < m.rules.size(); ++i) {
        CHECK(mii.rules[i].from == m.rules[i].from);
        CHECK(mii.rules[i].act == m.rules[i].act);
        CHECK(mii.rules[i].read == m.rules[i].read);
        CHECK(mii.rules[i].write == m.rules[i].write);
        CHECK(mii.rules[i].to == m.rules[i].to);
    }
}

// ============================================================================
// Configuration encoding
// ============================================================================

TEST_CASE("encode and decode round-trip") {
    RTMachine m = parse_rtm(fixture("copy.rtm"));
    Configuration c{3, {1, 0, 2}, 4, {2, 1}};
    TermPtr v = encode_config(m, c);
    CHECK_NOTHROW(check_term({}, {}, v, rtm_config_type(m)));
    auto back = decode_config(m, v);
    REQUIRE(back.has_value());
    CHECK(*back == c);
}

TEST_CASE("distinct states and symbols have orthogonal encodings") {
    RTMachine m = parse_rtm(fixture("increment.rtm"));
    std::size_t nq = m.states.size(), ns = m.symbols.size();
    for (std::size_t i = 0; i < nq; ++i)
        for (std::size_t j = 0; j < nq; ++j) {
            CHECK(orthogonal(m_inj(i, nq), m_inj(j, nq)) == (i != j));
        }
    for (std::size_t i = 0; i < ns; ++i)
        CHECK(as_inj(m_inj(i, ns), ns) == i);
}

// ============================================================================
// Compilation
// ============================================================================

TEST_CASE("one compiled step simulates one oracle step up to tape growth") {
    for (const char* name : {"identity.rtm", "increment.rtm", "copy.rtm"}) {
        RTMachine m = parse_rtm(fixture(name));
        IsoPtr step_iso = compile_rtm(m);
        // Walk the oracle run on the sample input; at every reachable
        // configuration the compiled iso (on a once-padded encoding) agrees
        // with the oracle step, up to trailing blanks.
        std::vector<std::size_t> input =
            m.sample_input ? *m.sample_input : std::vector<std::size_t>{};
        Configuration c{m.initial, {}, 0, input};
        for (int k = 0; k < 30; ++k) {
            auto next = rtm_step(m, c);
            if (!next) break;
            TermPtr in = encode_config(m, pad(c, 1));
            TermPtr out = eval_value(step_iso, in, kRtmFuel);
            auto decoded = decode_config(m, out);
            REQUIRE(decoded.has_value());
            CHECK(strip(*decoded) == strip(*next));
            c = *next;
        }
    }
}

TEST_CASE("the flagged step reports ff exactly on halting transitions") {
    RTMachine m = parse_rtm(fixture("identity.rtm"));
    IsoPtr flagged = compile_rtm_flagged(m);
    // The single rule of the identity machine enters the final state.
    Configuration start{m.initial, {}, 0, {1}};
    TermPtr out = eval_value(flagged, encode_config(m, pad(start, 1)), kRtmFuel);
    REQUIRE(out->kind == Term::Kind::Pair);
    CHECK(value_equal(out->t2, m_ff()));
    auto decoded = decode_config(m, out->t1);
    REQUIRE(decoded.has_value());
    CHECK(decoded->state == m.final);

    // A non-final transition flags tt.
    RTMachine inc = parse_rtm(fixture("increment.rtm"));
    IsoPtr finc = compile_rtm_flagged(inc);
    Configuration s2{inc.initial, {}, 0, {1, 1}};
    TermPtr out2 = eval_value(finc, encode_config(inc, pad(s2, 1)), kRtmFuel);
    REQUIRE(out2->kind == Term::Kind::Pair);
    CHECK(value_equal(out2->t2, m_tt()));
}

TEST_CASE("the garbage-free pipeline reproduces the oracle end to end") {
    struct Fixture {
        const char* name;
        std::vector<std::string> inputs;
    };
    std::vector<Fixture> fixtures = {
        {"identity.rtm", {"", "a", "aaa"}},
        {"increment.rtm", {"", "a", "aa", "aaaa"}},
        {"copy.rtm", {"", "a"}},
    };
    for (const Fixture& f : fixtures) {
        RTMachine m = parse_rtm(fixture(f.name));
        IsoPtr pipe = pipeline(m);
        for (const std::string& text : f.inputs) {
            std::vector<std::size_t> input = parse_tape(m, text);
            RtmRunResult oracle = rtm_run(m, input);
            REQUIRE(oracle.status == RtmRunResult::Status::Ok);
            Configuration start{m.initial, {}, 0, input};
            TermPtr out = eval_value(pipe, encode_config(m, start), kRtmFuel);
            auto decoded = decode_config(m, out);
            REQUIRE(decoded.has_value());
            Configuration got = strip(*decoded);
            CHECK(got.state == m.final);
            CHECK(got.left.empty());
            CHECK(got.scanned == 0);
            CHECK(strip_trailing_blanks(got.right) == oracle.output);
        }
    }
}

TEST_CASE("the simulated machine semantics is injective") {
    RTMachine m = parse_rtm(fixture("increment.rtm"));
    std::set<std::string> outputs;
    for (std::size_t n = 0; n <= 5; ++n) {
        RtmRunResult r = rtm_run(m, std::vector<std::size_t>(n, 1));
        REQUIRE(r.status == RtmRunResult::Status::Ok);
        CHECK(outputs.insert(show_tape(m, r.output)).second);
    }
}
