//! Shared test utilities: fixture loading, program parsing, evaluation
//! shorthands, and a deterministic RNG for property tests.

#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "reviso/eval.hpp"
#include "reviso/parser.hpp"
#include "reviso/pinj.hpp"
#include "reviso/pretty.hpp"
#include "reviso/program.hpp"
#include "reviso/typecheck.hpp"

namespace reviso::test {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline std::string fixture(const std::string& name) {
    return read_file(std::string(REVISO_FIXTURE_DIR) + "/" + name);
}

inline std::string example(const std::string& name) {
    return read_file(std::string(REVISO_EXAMPLE_DIR) + "/" + name);
}

inline LinkedProgram load_example(const std::string& name) {
    LinkedProgram lp = link_program(parse_program(example(name)));
    check_program(lp);
    return lp;
}

/// Evaluate `w v` and demand a value.
inline TermPtr eval_value(const IsoPtr& w, const TermPtr& v,
                          std::uint64_t fuel = kDefaultFuel) {
    EvalOutcome out = eval(m_app(w, v), fuel);
    if (out.kind != EvalOutcome::Kind::Value)
        throw std::runtime_error("expected a value, got " +
                                 (out.kind == EvalOutcome::Kind::Stuck
                                      ? "stuck: " + out.reason
                                      : std::string("out of fuel")) +
                                 " on " + print_term(out.term));
    return out.term;
}

inline std::mt19937_64 test_rng(std::uint64_t salt = 0) {
    std::uint64_t seed = 0xC0FFEE;
    if (const char* env = std::getenv("REVISO_SEED")) seed = std::strtoull(env, nullptr, 10);
    return std::mt19937_64(seed ^ salt);
}

/// Let-normalize a reduct so the algorithmic checker can re-check it:
/// contract `let p = v in e` when the bound side is a value (the declarative
/// system types the let exactly when it types the contraction) and
/// re-associate `let p = (let q = E in F) in G` into `let q = E in let p = F
/// in G` (the usual commuting conversion). Both are type-preserving, and
/// afterwards every remaining bound side is an application, which the
/// checker can synthesize.
inline TermPtr normalize_lets(const TermPtr& t) {
    switch (t->kind) {
        case Term::Kind::InL:
            return m_inl(normalize_lets(t->t1));
        case Term::Kind::InR:
            return m_inr(normalize_lets(t->t1));
        case Term::Kind::Fold:
            return m_fold(normalize_lets(t->t1));
        case Term::Kind::Pair:
            return m_pair(normalize_lets(t->t1), normalize_lets(t->t2));
        case Term::Kind::App:
            return m_app(t->iso, normalize_lets(t->t1));
        case Term::Kind::Let: {
            TermPtr bound = normalize_lets(t->t1);
            if (bound->kind == Term::Kind::Let)
                return normalize_lets(
                    m_let(bound->pat, bound->t1, m_let(t->pat, bound->t2, t->t2)));
            if (is_value(bound)) {
                if (auto s = match_pattern(t->pat, bound))
                    return normalize_lets(apply_subst(*s, t->t2));
            }
            return m_let(t->pat, bound, normalize_lets(t->t2));
        }
        default:
            return t;
    }
}

/// Uniform pick from a universe of values.
inline TermPtr pick_value(std::mt19937_64& rng, const UniversePtr& u) {
    std::uniform_int_distribution<std::size_t> d(0, u->values.size() - 1);
    return u->values[d(rng)];
}

}  // namespace reviso::test
