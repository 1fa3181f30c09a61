//! # Type checker
//!
//! Linear typing of terms (a context entry is consumed exactly once),
//! iso typing with clause orthogonality, and context inversion.
//!
//! The term judgement is check-mode: every term is checked against an
//! expected closed type. Iso typing is check-mode against a declared or
//! annotated type, with a small synthesis fragment (variables, applications,
//! annotated abstractions) so iso applications inside expressions can be
//! inferred. A `TypeTable` collects the type assigned to every iso node; the
//! denotational backend consumes it.

#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "reviso/ast.hpp"

namespace reviso {

struct TypeError : std::runtime_error {
    enum class Kind { UnboundVar, Linearity, Mismatch, Overlap, NonClosedType, Arity, Annotation };
    Kind kind;
    SourceSpan span;
    TypeError(Kind k, SourceSpan s, const std::string& msg)
        : std::runtime_error(msg), kind(k), span(s) {}
};

/// Human-readable name for a TypeError kind (diagnostics).
std::string type_error_kind_name(TypeError::Kind k);

/// Linear context Delta: uid -> (name, type).
struct Binding {
    std::string name;
    TypePtr type;
};
using TermContext = std::map<std::uint64_t, Binding>;

/// Non-linear iso context Psi: binder uid -> iso type.
using IsoContext = std::map<std::uint64_t, IsoTypePtr>;

/// Types assigned to iso nodes during checking (keyed by node identity).
using TypeTable = std::map<const Iso*, IsoTypePtr>;

/// Check t against closed type a, consuming delta exactly. Throws TypeError.
void check_term(const IsoContext& psi, const TermContext& delta, const TermPtr& t,
                const TypePtr& a, TypeTable* table = nullptr);

/// The unique minimal context under which value v checks at type a.
TermContext pattern_context(const TermPtr& v, const TypePtr& a);

/// Syntactic orthogonality of two terms: their result values (after
/// stripping let prefixes) differ by an inl/inr clash at some common
/// position. Sound for matching-disjointness.
bool orthogonal(const TermPtr& t1, const TermPtr& t2);

/// Check (or, for variables/applications/annotated nodes, infer) the type of
/// an iso. `expected` may be null when the iso carries an annotation or is
/// synthesizable. Records every visited iso node in `table` when given.
IsoTypePtr check_iso(const IsoContext& psi, const IsoPtr& w,
                     const IsoTypePtr& expected = nullptr, TypeTable* table = nullptr);

/// Pointwise type inversion of an iso context.
IsoContext invert_ctx(const IsoContext& psi);

}  // namespace reviso
