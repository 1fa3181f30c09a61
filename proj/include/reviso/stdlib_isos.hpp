//! # Standard iso generators
//!
//! Meta-level generators producing checked ASTs for the reusable iso
//! constructions: duplication, constant erasure, list plumbing (len, snoc,
//! cons, concat, rev), tape growth, the iterator, blank removal, the cleanup
//! and garbage-removal combinators, the Cantor pairing, map, and the
//! canonical flat encoder into lists of `Enc`.
//!
//! Generators are meta-functions over closed base types (the surface
//! language has no polymorphism); instantiations are memoized per type so
//! generated programs stay small. Every generated iso node carries a type
//! annotation and passes `check_iso` at it.

#pragma once

#include <cstddef>

#include "reviso/ast.hpp"

namespace reviso {
namespace stdlib_isos {

/// Dup_A : A <-> A*A (duplicates any closed value; recursive types via fix).
IsoPtr dup(const TypePtr& a);

/// erase_v : A*S <-> A, erases the second component when it equals v.
IsoPtr erase_const(const TermPtr& v, const TypePtr& a, const TypePtr& s);

/// cons : A*[A] <-> [A].
IsoPtr cons_iso(const TypePtr& a);

/// succ : nat <-> nat (the one-clause {n <-> S n}).
IsoPtr succ_iso();

struct SnocFamily {
    IsoPtr len;         ///< [A] <-> [A]*nat
    IsoPtr snoc_prime;  ///< [A]*(A*nat) <-> [A]*(A*nat)
    IsoPtr snoc;        ///< [A]*A <-> [A]*A, appends on the right
};
SnocFamily snoc_family(const TypePtr& a);

/// growth : [S]*[S] <-> [S]*[S], appends the blank to both lists.
IsoPtr growth(const TypePtr& sigma, const TermPtr& blank);

/// It : (A <-> A*(1+1)) -> (A <-> A*nat), iterate until ff, count steps.
IsoPtr iterator_iso(const TypePtr& a);

/// rmBlank : [S] <-> [S]*nat, strips leading blanks returning their count.
/// The alphabet is a unit-sum of `alphabet_size` letters; `blank_index` names
/// the blank injection.
IsoPtr rm_blank(std::size_t alphabet_size, std::size_t blank_index);

/// rev : [A] <-> [A]*[A], maps l to (l, reverse of l).
IsoPtr rev_iso(const TypePtr& a);

/// cleanUp : C*nat <-> C*(nat*(nat*(nat*[S]))) over C = Q*([S]*(S*[S])).
IsoPtr clean_up(std::size_t alphabet_size, std::size_t blank_index, const TypePtr& qtype);

/// GarbRem(w : A<->B*C, w2 : B<->A*C') : A <-> B  (Bennett's trick).
IsoPtr garbage_removal(const IsoPtr& w, const IsoTypePtr& wt, const IsoPtr& w2,
                       const IsoTypePtr& w2t);

/// CantorPairing : nat*nat <-> nat.
IsoPtr cantor_pairing();

/// map : (A<->B) -> ([A]<->[B]).
IsoPtr map_iso(const TypePtr& a, const TypePtr& b);

/// ++ : [A]*[A] <-> [A]*nat (concatenation, returns first-list length).
IsoPtr concat_iso(const TypePtr& a);

// Canonical flat encoding.
TypePtr enc_type();  ///< Enc = bool + 1 + 1 + 1 + 1 + nat
TermPtr enc_tt();
TermPtr enc_ff();
TermPtr enc_s();
TermPtr enc_dsum();
TermPtr enc_dprod();
TermPtr enc_dmu();
TermPtr enc_num(const TermPtr& n);  ///< the numeric tag wrapping a nat value

/// encoder_A : A <-> [Enc].
IsoPtr encoder(const TypePtr& a);

}  // namespace stdlib_isos
}  // namespace reviso
