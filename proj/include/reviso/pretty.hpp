//! # Pretty-printer
//!
//! Surface-syntax rendering of types, iso types, patterns, values/terms and
//! isos. The output re-parses to an alpha-equivalent AST (round-trip law).
//! Nat/list literals are re-sugared whenever the value decodes fully; the
//! typed entry points additionally sugar booleans when the type says so.

#pragma once

#include <string>

#include "reviso/ast.hpp"

namespace reviso {

std::string print_type(const TypePtr& t);
std::string print_iso_type(const IsoTypePtr& t);
std::string print_pattern(const PatternPtr& p);

/// Untyped printer: sugars nat/list literals, never tt/ff.
std::string print_term(const TermPtr& t);

/// Type-directed value printer (CLI output): sugars nat, list, bool by type,
/// falling back to the untyped printer when the type does not match the value.
std::string print_value_typed(const TermPtr& v, const TypePtr& a);

std::string print_iso(const IsoPtr& w);

}  // namespace reviso
