//! # Core AST
//!
//! Immutable, shared AST nodes for the reversible language:
//!
//! - base types        1 | A + B | A * B | mu X. A | X
//! - iso types         A <-> B | T1 -> T2
//! - terms             () | x | inl t | inr t | (t1,t2) | fold t | w t | let p = t1 in t2
//! - patterns          x | (p1,p2)
//! - isos              {v1<->e1 | ...} | fix f.w | \f.w | f | w1 w2 | nfix(n,f,w) | empty
//!
//! Values and expressions are sub-grammars of Term (see `is_value`).
//! All nodes are immutable after construction and freely shared; every
//! binder carries a globally fresh integer id (mechanized Barendregt
//! convention), assigned by the parser or by `fresh_uid()` in generators.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace reviso {

/// Globally fresh identifier for bound variables (term, iso and type vars).
std::uint64_t fresh_uid();

/// Source position for diagnostics (1-based; 0 = unknown).
struct SourceSpan {
    std::uint32_t line = 0;
    std::uint32_t col = 0;
};

// ============================================================================
// Base types
// ============================================================================

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
    enum class Kind { Unit, Sum, Prod, Mu, Var };
    Kind kind;
    TypePtr lhs, rhs;  ///< Sum / Prod components
    std::string name;  ///< Mu binder name or Var name
    TypePtr body;      ///< Mu body
};

TypePtr t_unit();
TypePtr t_sum(TypePtr a, TypePtr b);
TypePtr t_prod(TypePtr a, TypePtr b);
TypePtr t_mu(std::string name, TypePtr body);
TypePtr t_tvar(std::string name);

/// Builtin abbreviations.
TypePtr t_nat();                ///< mu X. 1 + X
TypePtr t_bool();               ///< 1 + 1
TypePtr t_list(TypePtr elem);   ///< mu X. 1 + elem * X

/// n-fold sum of units (alphabet/state-set encodings); n >= 1.
TypePtr t_unit_sum(std::size_t n);

/// Structural equality up to alpha-renaming of Mu binders.
bool type_equal(const TypePtr& a, const TypePtr& b);

/// Capture-avoiding substitution a[r/x] on the Mu-bound variable named x.
TypePtr subst_type(const TypePtr& a, const std::string& x, const TypePtr& r);

/// Free type variables (empty for types usable in judgements).
void free_tvars(const TypePtr& a, std::set<std::string>& out);
bool type_closed(const TypePtr& a);

/// Canonical key (alpha-normalized) usable for memoization maps.
std::string type_key(const TypePtr& a);

/// If t = t_list(e), return e.
std::optional<TypePtr> list_elem_type(const TypePtr& t);

// ============================================================================
// Iso types
// ============================================================================

struct IsoType;
using IsoTypePtr = std::shared_ptr<const IsoType>;

struct IsoType {
    bool arrow = false;
    TypePtr a, b;          ///< Ground: a <-> b
    IsoTypePtr from, to;   ///< Arrow: from -> to
};

IsoTypePtr it_ground(TypePtr a, TypePtr b);
IsoTypePtr it_arrow(IsoTypePtr from, IsoTypePtr to);
bool iso_type_equal(const IsoTypePtr& a, const IsoTypePtr& b);

/// (A<->B)^-1 = B<->A;  (T1->T2)^-1 = T1^-1 -> T2^-1.
IsoTypePtr invert_iso_type(const IsoTypePtr& t);

// ============================================================================
// Patterns, terms and isos
// ============================================================================

struct Term;
struct Iso;
struct Pattern;
using TermPtr = std::shared_ptr<const Term>;
using IsoPtr = std::shared_ptr<const Iso>;
using PatternPtr = std::shared_ptr<const Pattern>;

/// Product-of-variables pattern for let bindings.
struct Pattern {
    enum class Kind { Var, Pair };
    Kind kind;
    std::string name;       ///< Var
    std::uint64_t uid = 0;  ///< Var
    PatternPtr fst, snd;    ///< Pair
    SourceSpan span;
};

PatternPtr p_var(std::string name, std::uint64_t uid);
PatternPtr p_pair(PatternPtr a, PatternPtr b);

struct Term {
    enum class Kind { Unit, Var, InL, InR, Pair, Fold, App, Let };
    Kind kind;
    std::string name;       ///< Var
    std::uint64_t uid = 0;  ///< Var
    TermPtr t1, t2;         ///< InL/InR/Fold: t1; Pair: t1,t2; App arg: t1; Let: t1 bound, t2 body
    IsoPtr iso;             ///< App
    PatternPtr pat;         ///< Let
    SourceSpan span;
};

/// One clause `lhs <-> rhs` of an iso abstraction. Variables of `lhs` bind
/// in `rhs` (each used exactly once — linearity).
struct Clause {
    TermPtr lhs;
    TermPtr rhs;
};

struct Iso {
    enum class Kind { Clauses, Fix, NFix, Lam, Var, App, Empty };
    Kind kind;
    std::vector<Clause> clauses;  ///< Clauses
    std::string name;             ///< Fix/NFix/Lam binder; Var name
    std::uint64_t uid = 0;        ///< binder / Var id (0 = unresolved declaration reference)
    IsoPtr body;                  ///< Fix/NFix/Lam
    std::uint64_t bound = 0;      ///< NFix unfolding budget
    IsoPtr f, g;                  ///< App: f g
    IsoTypePtr ann;               ///< optional ascription (generators set it; Empty requires it for typing)
    SourceSpan span;
};

// Term constructors.
TermPtr m_unit();
TermPtr m_var(std::string name, std::uint64_t uid);
TermPtr m_inl(TermPtr t);
TermPtr m_inr(TermPtr t);
TermPtr m_pair(TermPtr a, TermPtr b);
TermPtr m_fold(TermPtr t);
TermPtr m_app(IsoPtr w, TermPtr t);
TermPtr m_let(PatternPtr p, TermPtr bound, TermPtr body);

// Iso constructors.
IsoPtr i_clauses(std::vector<Clause> cs, IsoTypePtr ann = nullptr);
IsoPtr i_fix(std::string name, std::uint64_t uid, IsoPtr body, IsoTypePtr ann = nullptr);
IsoPtr i_nfix(std::uint64_t n, std::string name, std::uint64_t uid, IsoPtr body, IsoTypePtr ann = nullptr);
IsoPtr i_lam(std::string name, std::uint64_t uid, IsoPtr body, IsoTypePtr ann = nullptr);
IsoPtr i_var(std::string name, std::uint64_t uid);
IsoPtr i_app(IsoPtr f, IsoPtr g);
IsoPtr i_empty(IsoTypePtr ann);

// Sugar builders (the checker/evaluator never see sugar; these expand it).
TermPtr m_nat(std::uint64_t n);                      ///< 0 = fold(inl()), S n = fold(inr n)
TermPtr m_list(const std::vector<TermPtr>& elems);   ///< [] / h::t encodings
TermPtr m_cons(TermPtr h, TermPtr t);
TermPtr m_tt();  ///< inl ()
TermPtr m_ff();  ///< inr ()

/// Decode a closed nat/list-shaped value; nullopt if not of that shape.
std::optional<std::uint64_t> as_nat(const TermPtr& v);
std::optional<std::vector<TermPtr>> as_list(const TermPtr& v);

/// i-th injection (0-based) into an n-fold unit sum.
TermPtr m_inj(std::size_t i, std::size_t n);
/// Decode an n-fold unit-sum injection.
std::optional<std::size_t> as_inj(const TermPtr& v, std::size_t n);

// ============================================================================
// Predicates and variable machinery
// ============================================================================

/// Value sub-grammar: unit, var, inl, inr, pair, fold (no App/Let).
bool is_value(const TermPtr& t);
/// Value with no free term variables.
bool is_closed_value(const TermPtr& t);

/// Free term variables of a term (uid -> name). Clause LHS vars bind in the RHS.
void free_vars(const TermPtr& t, std::map<std::uint64_t, std::string>& out);

/// Variables bound by a pattern, in left-to-right order.
void pattern_vars(const PatternPtr& p, std::vector<std::pair<std::uint64_t, std::string>>& out);

/// Maximum fold-nesting depth of a term (0 for fold-free).
std::size_t fold_depth(const TermPtr& t);

/// Number of AST nodes (diagnostics / budgets).
std::size_t term_size(const TermPtr& t);

/// Pattern <-> term conversion (vars and pairs only).
TermPtr pattern_to_term(const PatternPtr& p);
std::optional<PatternPtr> term_to_pattern(const TermPtr& t);

/// Structural equality of closed values (exact, not up to alpha).
bool value_equal(const TermPtr& a, const TermPtr& b);

// ============================================================================
// Alpha-equivalence
// ============================================================================

/// Free-variable policy for alpha comparison.
enum class FreeVarMode {
    Strict,     ///< free variables must agree by uid
    Bijection,  ///< free variables may be paired by a consistent bijection
};

bool alpha_equiv(const TermPtr& a, const TermPtr& b, FreeVarMode mode = FreeVarMode::Strict);
bool alpha_equiv(const IsoPtr& a, const IsoPtr& b, FreeVarMode mode = FreeVarMode::Strict);

// ============================================================================
// Substitution (structural; never descends into isos: sigma(w t) = w sigma(t))
// ============================================================================

using Subst = std::map<std::uint64_t, TermPtr>;

TermPtr apply_subst(const Subst& s, const TermPtr& t);

/// Substitute iso variable `uid` by `repl` inside an iso / term.
IsoPtr subst_iso_in_iso(const IsoPtr& w, std::uint64_t uid, const IsoPtr& repl);
TermPtr subst_iso_in_term(const TermPtr& t, std::uint64_t uid, const IsoPtr& repl);

/// Clone with fresh uids for every *bound* variable (used when one generated
/// template is instantiated several times in the same program).
IsoPtr refresh_iso(const IsoPtr& w);

}  // namespace reviso
