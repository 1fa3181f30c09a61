//! # Evaluator and inverter
//!
//! Deterministic small-step semantics:
//!
//! - call-by-value on term arguments (an iso fires only on a fully
//!   evaluated value), call-by-name on iso fixpoints and applications;
//! - redex selection is leftmost-innermost, pairs left before right;
//! - `nfix 0` steps to the empty iso, `nfix (n+1)` unfolds once;
//! - fuel bounds the number of steps; running out is distinct from being
//!   stuck (unmatched clause, ill-shaped let, free iso variable).
//!
//! Also hosts the syntactic inversion transform, which is involutive up to
//! alpha-equivalence and used by the round-trip tests.

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "reviso/ast.hpp"

namespace reviso {

/// match(v_pat, v) = the unique substitution sigma with sigma(v_pat) = v.
/// Pair matching requires disjoint supports (guaranteed by unique uids).
std::optional<Subst> match(const TermPtr& pattern_value, const TermPtr& v);

/// Match a let pattern (variables and pairs only) against a value.
std::optional<Subst> match_pattern(const PatternPtr& p, const TermPtr& v);

/// One iso-level step (fix/nfix unfolding, beta, application head).
std::optional<IsoPtr> iso_step(const IsoPtr& w);

/// One term step; nullopt when t is a value or stuck.
std::optional<TermPtr> step(const TermPtr& t);

struct EvalOutcome {
    enum class Kind { Value, Stuck, OutOfFuel };
    Kind kind;
    TermPtr term;        ///< the value, or the irreducible term
    std::string reason;  ///< Stuck only
    std::uint64_t steps = 0;
};

constexpr std::uint64_t kDefaultFuel = 1'000'000;

EvalOutcome eval(TermPtr t, std::uint64_t fuel = kDefaultFuel);

/// Syntactic inversion: clause let-chains reversed, sub-isos inverted,
/// annotations inverted. Involutive up to alpha-equivalence.
IsoPtr invert_iso(const IsoPtr& w);

}  // namespace reviso
