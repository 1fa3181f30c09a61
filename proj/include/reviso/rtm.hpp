//! # Reversible Turing machines
//!
//! Parsing and validation of RTM descriptions, a direct tape simulator used
//! as the reference oracle, the encoding of configurations as values, and the
//! compilation of a machine into isos: the per-rule transition iso, its
//! flagged variant, and the garbage-free end-to-end pipeline built from the
//! iterator, cleanup, and garbage-removal combinators.
//!
//! Machine text format (one directive per line, `#` starts a comment):
//!
//! ```text
//! symbols: b a c        -- first symbol is the blank
//! states: qs q1 qf      -- first is initial, last is final
//! rule qs b/a q1        -- symbol rewrite
//! rule q1 left qf       -- head move: left | right | stay
//! input: a a            -- optional sample input
//! ```

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reviso/ast.hpp"

namespace reviso {

/// Parse or validation failure; `line` is 1-based (0 when not line-specific).
struct RtmError : std::runtime_error {
    RtmError(std::string msg, int line_ = 0)
        : std::runtime_error(std::move(msg)), line(line_) {}
    int line;
};

struct RtmRule {
    enum class Act { Rewrite, Left, Stay, Right };
    std::size_t from;   ///< source state index
    Act act;
    std::size_t read;   ///< Rewrite only
    std::size_t write;  ///< Rewrite only
    std::size_t to;     ///< target state index
    int line = 0;       ///< source line for diagnostics
};

struct RTMachine {
    std::vector<std::string> symbols;  ///< index 0 is the blank
    std::vector<std::string> states;
    std::vector<RtmRule> rules;
    std::size_t initial = 0;
    std::size_t final = 0;
    std::optional<std::vector<std::size_t>> sample_input;

    std::size_t blank() const { return 0; }
    std::optional<std::size_t> symbol_index(const std::string& name) const;
    std::optional<std::size_t> state_index(const std::string& name) const;
};

/// Tape zipper; both tape lists are stored nearest-the-head-first.
struct Configuration {
    std::size_t state;
    std::vector<std::size_t> left;
    std::size_t scanned;
    std::vector<std::size_t> right;

    bool operator==(const Configuration&) const = default;
};

/// Parse and validate (forward/backward determinism, no rules out of the
/// final state or into the initial one). Throws RtmError.
RTMachine parse_rtm(const std::string& text);

/// Validate an already-built machine (used by parse_rtm and rtm_inverse).
void validate_rtm(const RTMachine& m);

/// Apply the unique applicable rule; nullopt = halt (no rule applies).
/// Reading past either tape end materializes one blank.
std::optional<Configuration> rtm_step(const RTMachine& m, const Configuration& c);

struct RtmRunResult {
    enum class Status { Ok, Stuck, NonStandardHalt, OutOfSteps };
    Status status;
    std::vector<std::size_t> output;  ///< Ok only; blank-free
    std::uint64_t steps = 0;
    Configuration halted;  ///< final configuration reached (Stuck/NonStandardHalt too)
};

/// Run from the standard configuration (q_s, (eps, b, input)). Succeeds only
/// when the final state is reached in a standard configuration, up to
/// trailing blanks materialized by the eps-extension convention.
RtmRunResult rtm_run(const RTMachine& m, const std::vector<std::size_t>& input,
                     std::uint64_t max_steps = 100000);

/// The inverse machine: rewrites flipped, left/right swapped, initial and
/// final exchanged (state and symbol numbering preserved).
RTMachine rtm_inverse(const RTMachine& m);

// ---- encoding ----------------------------------------------------------------

TypePtr rtm_state_type(const RTMachine& m);   ///< unit-sum over Q
TypePtr rtm_symbol_type(const RTMachine& m);  ///< unit-sum over Sigma
TypePtr rtm_config_type(const RTMachine& m);  ///< Q * ([S] * (S * [S]))

TermPtr encode_config(const RTMachine& m, const Configuration& c);
std::optional<Configuration> decode_config(const RTMachine& m, const TermPtr& v);

/// Parse a tape string like "a b a" or "aba" against the machine's symbols.
std::vector<std::size_t> parse_tape(const RTMachine& m, const std::string& text);
std::string show_tape(const RTMachine& m, const std::vector<std::size_t>& tape);

// ---- compilation -------------------------------------------------------------

/// One clause per rule, each prefixed by the growth let-binding: C^T <-> C^T.
IsoPtr compile_rtm(const RTMachine& m);

/// Flagged variant C^T <-> C^T*(1+1); the boolean is ff exactly on
/// transitions into the final state.
IsoPtr compile_rtm_flagged(const RTMachine& m);

/// The garbage-free simulation GarbRem(cleanUp . It(isosB(M)),
/// cleanUp . It(isosB(M^-1))) : C^T <-> C^T.
IsoPtr pipeline(const RTMachine& m);

/// Fuel for evaluating compiled machines (many micro-steps per macro-step).
constexpr std::uint64_t kRtmFuel = 10'000'000;

}  // namespace reviso
