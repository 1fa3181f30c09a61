//! # Program elaboration
//!
//! Resolves the declaration references left by the parser: each iso
//! declaration may mention earlier declarations by name, and linking inlines
//! the (annotated, uid-refreshed) definition at every such reference. The
//! result is a self-contained iso per declaration, ready for the checker,
//! the evaluator, and the denotational backend.

#pragma once

#include <string>

#include "reviso/parser.hpp"
#include "reviso/typecheck.hpp"

namespace reviso {

/// A linked declaration: the inlined iso and its declared type.
struct LinkedIso {
    std::string name;
    IsoTypePtr type;
    IsoPtr iso;
};

struct LinkedProgram {
    std::vector<LinkedIso> isos;
    const LinkedIso* find(const std::string& name) const;
};

/// Inline declaration references in order; throws TypeError on a reference
/// to an unknown name (reported at the reference's span).
LinkedProgram link_program(const Program& p);

/// Link, then type-check every declaration against its declared type.
/// Declarations are checked independently; the merged node-type table is
/// returned.
TypeTable check_program(const LinkedProgram& p);

}  // namespace reviso
