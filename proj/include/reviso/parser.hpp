//! # Parser
//!
//! Lexer and recursive-descent parser for the surface language:
//!
//! ```text
//! program := { decl }
//! decl    := "type" UIDENT "=" type ";" | "iso" LIDENT ":" isotype "=" iso ";"
//! type    := t1 { "+" t1 }          (right-assoc)
//! t1      := t2 { "*" t2 }          (right-assoc, tighter)
//! t2      := "1" | "nat" | "bool" | "[" type "]" | UIDENT | "mu" UIDENT "." type | "(" type ")"
//! isotype := type "<->" type | isotype "->" isotype
//! iso     := "fix" LIDENT "." iso | "\" LIDENT "." iso | "nfix" NAT LIDENT "." iso | isoapp
//! isoapp  := isoatom { isoatom }
//! isoatom := LIDENT | "{" [ clause { "|" clause } ] "}" | "(" iso ")"
//! clause  := value "<->" expr
//! expr    := value | "let" pattern "=" isoapp pattern "in" expr
//! pattern := LIDENT | "(" pattern "," pattern ")"
//! value   := cv [ "::" value ] ; cv := ("inl"|"inr"|"fold") cv | atom
//! atom    := "()" | LIDENT | NAT | "tt" | "ff" | "[" [value {"," value}] "]"
//!          | "(" value ")" | "(" value "," value ")"
//! ```
//!
//! Comments run from `--` to end of line. Numeric, list and boolean literals
//! are expanded at parse time; the checker and evaluator never see sugar.
//! Every binder receives a globally fresh uid (Barendregt convention). Iso
//! names that are not bound by fix/lambda are left as unresolved declaration
//! references (uid 0), resolved by `link_program`.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "reviso/ast.hpp"

namespace reviso {

struct ParseError : std::runtime_error {
    SourceSpan span;
    ParseError(SourceSpan s, const std::string& msg) : std::runtime_error(msg), span(s) {}
};

struct Decl {
    enum class Kind { TypeAlias, Iso };
    Kind kind;
    std::string name;
    TypePtr type;         ///< TypeAlias target
    IsoTypePtr iso_type;  ///< Iso declared type
    IsoPtr iso;           ///< Iso body (declaration references unresolved)
    SourceSpan span;
};

struct Program {
    std::vector<Decl> decls;
    const Decl* find_iso(const std::string& name) const;
};

Program parse_program(const std::string& text);

/// Standalone fragments (CLI --arg / --type). Values must be closed.
TermPtr parse_value_text(const std::string& text);
TypePtr parse_type_text(const std::string& text);
IsoTypePtr parse_iso_type_text(const std::string& text);

}  // namespace reviso
