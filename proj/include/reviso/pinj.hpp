//! # Finite partial-injection semantics
//!
//! A concrete denotational backend: closed base types are truncated to the
//! finite universe of values of bounded fold-depth, isos denote finite
//! partial injections (or host-level functions between them at arrow type),
//! and general fixpoints are approximated by syntactic finitization into
//! bounded unfoldings. The backend cross-validates the evaluator: agreement
//! is checked pointwise (adequacy) and along individual reduction steps
//! (soundness).
//!
//! Truncation under-approximates: any produced value that escapes the depth
//! bound makes that point undefined, keeping denotations monotone in both
//! the depth and the unfold budget.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reviso/ast.hpp"
#include "reviso/typecheck.hpp"

namespace reviso {

/// All closed values of a type with fold-depth <= depth, interned to
/// ordinals in a deterministic order.
struct ValueUniverse {
    TypePtr type;
    int depth;
    std::vector<TermPtr> values;
    std::map<std::string, std::size_t> index;  ///< canonical print -> ordinal

    std::optional<std::size_t> ordinal(const TermPtr& v) const;
};

using UniversePtr = std::shared_ptr<const ValueUniverse>;

/// Enumerate (memoized per canonical type key and depth).
UniversePtr enumerate(const TypePtr& a, int depth);

/// Thrown when joining clause graphs that are not inverse-compatible; by
/// the orthogonality discipline this indicates a checker bug.
struct IncompatibleJoin : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A finite partial injection between two universes; the graph is kept
/// functional and injective by construction.
class PartialInjection {
  public:
    PartialInjection(UniversePtr dom, UniversePtr cod)
        : dom_(std::move(dom)), cod_(std::move(cod)) {}

    const UniversePtr& dom() const { return dom_; }
    const UniversePtr& cod() const { return cod_; }
    const std::map<std::size_t, std::size_t>& graph() const { return fwd_; }
    std::size_t size() const { return fwd_.size(); }

    std::optional<std::size_t> apply(std::size_t x) const;

    /// Insert a pair; throws IncompatibleJoin on a functional or injective
    /// conflict (identical pairs are idempotent).
    void insert(std::size_t x, std::size_t y);

    PartialInjection inverse() const;                          ///< f°
    PartialInjection restriction() const;                      ///< f-bar = f° . f
    PartialInjection compose(const PartialInjection& g) const; ///< this . g
    PartialInjection join(const PartialInjection& g) const;    ///< compatible union

    /// Graph inclusion (requires matching universes).
    bool subset_of(const PartialInjection& g) const;
    bool operator==(const PartialInjection& g) const;

    static PartialInjection zero(UniversePtr dom, UniversePtr cod);
    static PartialInjection identity(UniversePtr u);

  private:
    UniversePtr dom_, cod_;
    std::map<std::size_t, std::size_t> fwd_;
    std::map<std::size_t, std::size_t> bwd_;
};

struct IsoDenotation;
using DenPtr = std::shared_ptr<const IsoDenotation>;

/// A ground denotation (partial injection) or an arrow-type one (function).
struct IsoDenotation {
    std::optional<PartialInjection> ground;
    std::function<DenPtr(const DenPtr&)> fn;
    std::uint64_t id;  ///< unique, used for memoization signatures

    explicit IsoDenotation(PartialInjection p);
    explicit IsoDenotation(std::function<DenPtr(const DenPtr&)> f);
};

// ---- finitization ------------------------------------------------------------

/// Replace every `fix phi. w` by `nfix n phi. w` (recursively, including
/// isos embedded in clause bodies). Identity on fix-free isos. When `table`
/// is given, node types recorded for the original nodes are copied over to
/// the rebuilt ones so the semantics can still look them up.
IsoPtr finitize(const IsoPtr& w, std::uint64_t n, TypeTable* table = nullptr);
TermPtr finitize_term(const TermPtr& t, std::uint64_t n, TypeTable* table = nullptr);

// ---- semantics ---------------------------------------------------------------

/// Shared context: depth bound plus an optional node-type table from
/// check_iso (annotations on the nodes themselves are used as fallback).
struct SemContext {
    int depth;
    const TypeTable* types = nullptr;
};

using IsoEnv = std::map<std::uint64_t, DenPtr>;

/// Denotation of a finitized iso. Throws IncompatibleJoin on a clause-graph
/// conflict and std::runtime_error when a node's type cannot be determined.
DenPtr sem_iso(SemContext& ctx, const IsoEnv& env, const IsoPtr& w);

/// Denotation of a closed finitized term of type `a`: a value of the
/// universe, or nullopt (undefined / escapes the truncation).
std::optional<TermPtr> sem_term(SemContext& ctx, const TermPtr& t, const TypePtr& a);

/// Convenience: finitize at unfold budget n and take the ground graph.
PartialInjection sem_iso_ground(const IsoPtr& w, std::uint64_t n, int depth,
                                const TypeTable* types = nullptr);

// ---- cross-validation ---------------------------------------------------------

struct AdequacyResult {
    enum class Verdict { Agree, Disagree, Inconclusive };
    Verdict verdict;
    std::string report;
};

/// Compare eval (with fuel) against sem_term (finitized at unfold n,
/// truncated at depth d) for a closed term of type a. `types` supplies node
/// types for isos without annotations (copied across finitization).
AdequacyResult check_adequacy(const TermPtr& t, const TypePtr& a, std::uint64_t fuel,
                              std::uint64_t unfold, int depth,
                              const TypeTable* types = nullptr);

/// t steps to t2 (both already finitized): their denotations must coincide
/// (possibly both undefined).
bool check_soundness_step(const TermPtr& t, const TermPtr& t2, const TypePtr& a,
                          int depth);

}  // namespace reviso
