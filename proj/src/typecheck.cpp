#include "reviso/typecheck.hpp"

#include <set>

#include "reviso/pretty.hpp"

namespace reviso {

std::string type_error_kind_name(TypeError::Kind k) {
    switch (k) {
        case TypeError::Kind::UnboundVar: return "unbound-variable";
        case TypeError::Kind::Linearity: return "linearity";
        case TypeError::Kind::Mismatch: return "type-mismatch";
        case TypeError::Kind::Overlap: return "overlap";
        case TypeError::Kind::NonClosedType: return "non-closed-type";
        case TypeError::Kind::Arity: return "arity";
        case TypeError::Kind::Annotation: return "annotation";
    }
    return "error";
}

namespace {

[[noreturn]] void err(TypeError::Kind k, SourceSpan sp, const std::string& msg) {
    throw TypeError(k, sp, msg);
}

void require_closed(const TypePtr& a, SourceSpan sp) {
    if (!type_closed(a))
        err(TypeError::Kind::NonClosedType, sp, "type is not closed: " + print_type(a));
}

void require_closed_iso_type(const IsoTypePtr& t, SourceSpan sp) {
    if (t->arrow) {
        require_closed_iso_type(t->from, sp);
        require_closed_iso_type(t->to, sp);
    } else {
        require_closed(t->a, sp);
        require_closed(t->b, sp);
    }
}

/// Split delta into (entries free in t, the rest).
std::pair<TermContext, TermContext> split_context(const TermContext& delta, const TermPtr& t) {
    std::map<std::uint64_t, std::string> fv;
    free_vars(t, fv);
    TermContext in, out;
    for (const auto& [uid, b] : delta) {
        if (fv.count(uid))
            in.emplace(uid, b);
        else
            out.emplace(uid, b);
    }
    return {in, out};
}

void check_rec(const IsoContext& psi, const TermContext& delta, const TermPtr& t,
               const TypePtr& a, TypeTable* table);

TypePtr synth_rec(const IsoContext& psi, const TermContext& delta, const TermPtr& t,
                  TypeTable* table);

TermContext bind_pattern(const PatternPtr& p, const TypePtr& a,
                         std::set<std::string>& names) {
    if (p->kind == Pattern::Kind::Var) {
        if (!names.insert(p->name).second)
            err(TypeError::Kind::Linearity, p->span,
                "non-linear pattern: variable '" + p->name + "' bound twice");
        return {{p->uid, Binding{p->name, a}}};
    }
    if (a->kind != Type::Kind::Prod)
        err(TypeError::Kind::Mismatch, p->span,
            "pair pattern requires a product type, got " + print_type(a));
    TermContext out = bind_pattern(p->fst, a->lhs, names);
    TermContext snd = bind_pattern(p->snd, a->rhs, names);
    out.insert(snd.begin(), snd.end());
    return out;
}

void check_leaf_delta_empty(const TermContext& delta, SourceSpan sp) {
    if (!delta.empty())
        err(TypeError::Kind::Linearity, sp,
            "unused variable '" + delta.begin()->second.name + "'");
}

void check_rec(const IsoContext& psi, const TermContext& delta, const TermPtr& t,
               const TypePtr& a, TypeTable* table) {
    switch (t->kind) {
        case Term::Kind::Unit:
            if (a->kind != Type::Kind::Unit)
                err(TypeError::Kind::Mismatch, t->span, "() checked against " + print_type(a));
            check_leaf_delta_empty(delta, t->span);
            return;
        case Term::Kind::Var: {
            auto it = delta.find(t->uid);
            if (it == delta.end())
                err(TypeError::Kind::Linearity, t->span,
                    "variable '" + t->name + "' is unbound here or violates linearity");
            if (!type_equal(it->second.type, a))
                err(TypeError::Kind::Mismatch, t->span,
                    "variable '" + t->name + "' has type " + print_type(it->second.type) +
                        ", expected " + print_type(a));
            if (delta.size() != 1)
                err(TypeError::Kind::Linearity, t->span,
                    "unused variable in context alongside '" + t->name + "'");
            return;
        }
        case Term::Kind::InL:
            if (a->kind != Type::Kind::Sum)
                err(TypeError::Kind::Mismatch, t->span, "inl checked against " + print_type(a));
            check_rec(psi, delta, t->t1, a->lhs, table);
            return;
        case Term::Kind::InR:
            if (a->kind != Type::Kind::Sum)
                err(TypeError::Kind::Mismatch, t->span, "inr checked against " + print_type(a));
            check_rec(psi, delta, t->t1, a->rhs, table);
            return;
        case Term::Kind::Fold:
            if (a->kind != Type::Kind::Mu)
                err(TypeError::Kind::Mismatch, t->span, "fold checked against " + print_type(a));
            check_rec(psi, delta, t->t1, subst_type(a->body, a->name, a), table);
            return;
        case Term::Kind::Pair: {
            if (a->kind != Type::Kind::Prod)
                err(TypeError::Kind::Mismatch, t->span, "pair checked against " + print_type(a));
            auto [d1, d2] = split_context(delta, t->t1);
            check_rec(psi, d1, t->t1, a->lhs, table);
            check_rec(psi, d2, t->t2, a->rhs, table);
            return;
        }
        case Term::Kind::App: {
            IsoTypePtr ty = check_iso(psi, t->iso, nullptr, table);
            if (ty->arrow)
                err(TypeError::Kind::Mismatch, t->span,
                    "iso applied to a term has arrow type " + print_iso_type(ty));
            if (!type_equal(ty->b, a))
                err(TypeError::Kind::Mismatch, t->span,
                    "application produces " + print_type(ty->b) + ", expected " + print_type(a));
            check_rec(psi, delta, t->t1, ty->a, table);
            return;
        }
        case Term::Kind::Let: {
            auto [d1, d2] = split_context(delta, t->t1);
            TypePtr b = synth_rec(psi, d1, t->t1, table);
            std::set<std::string> names;
            TermContext bound = bind_pattern(t->pat, b, names);
            for (const auto& [uid, bd] : bound) d2.emplace(uid, bd);
            check_rec(psi, d2, t->t2, a, table);
            return;
        }
    }
}

TypePtr synth_rec(const IsoContext& psi, const TermContext& delta, const TermPtr& t,
                  TypeTable* table) {
    switch (t->kind) {
        case Term::Kind::Unit:
            check_leaf_delta_empty(delta, t->span);
            return t_unit();
        case Term::Kind::Var: {
            auto it = delta.find(t->uid);
            if (it == delta.end())
                err(TypeError::Kind::Linearity, t->span,
                    "variable '" + t->name + "' is unbound here or violates linearity");
            if (delta.size() != 1)
                err(TypeError::Kind::Linearity, t->span,
                    "unused variable in context alongside '" + t->name + "'");
            return it->second.type;
        }
        case Term::Kind::Pair: {
            auto [d1, d2] = split_context(delta, t->t1);
            TypePtr l = synth_rec(psi, d1, t->t1, table);
            TypePtr r = synth_rec(psi, d2, t->t2, table);
            return t_prod(l, r);
        }
        case Term::Kind::App: {
            IsoTypePtr ty = check_iso(psi, t->iso, nullptr, table);
            if (ty->arrow)
                err(TypeError::Kind::Mismatch, t->span,
                    "iso applied to a term has arrow type " + print_iso_type(ty));
            check_rec(psi, delta, t->t1, ty->a, table);
            return ty->b;
        }
        case Term::Kind::Let: {
            auto [d1, d2] = split_context(delta, t->t1);
            TypePtr b = synth_rec(psi, d1, t->t1, table);
            std::set<std::string> names;
            TermContext bound = bind_pattern(t->pat, b, names);
            for (const auto& [uid, bd] : bound) d2.emplace(uid, bd);
            return synth_rec(psi, d2, t->t2, table);
        }
        default:
            err(TypeError::Kind::Mismatch, t->span,
                "cannot infer the type of an injection or fold; add surrounding context");
    }
}

void pattern_context_rec(const TermPtr& v, const TypePtr& a, std::set<std::string>& names,
                         TermContext& out) {
    switch (v->kind) {
        case Term::Kind::Var:
            if (!names.insert(v->name).second)
                err(TypeError::Kind::Linearity, v->span,
                    "non-linear pattern: variable '" + v->name + "' occurs twice");
            out.emplace(v->uid, Binding{v->name, a});
            return;
        case Term::Kind::Unit:
            if (a->kind != Type::Kind::Unit)
                err(TypeError::Kind::Mismatch, v->span, "() in pattern of type " + print_type(a));
            return;
        case Term::Kind::InL:
            if (a->kind != Type::Kind::Sum)
                err(TypeError::Kind::Mismatch, v->span, "inl in pattern of type " + print_type(a));
            pattern_context_rec(v->t1, a->lhs, names, out);
            return;
        case Term::Kind::InR:
            if (a->kind != Type::Kind::Sum)
                err(TypeError::Kind::Mismatch, v->span, "inr in pattern of type " + print_type(a));
            pattern_context_rec(v->t1, a->rhs, names, out);
            return;
        case Term::Kind::Pair:
            if (a->kind != Type::Kind::Prod)
                err(TypeError::Kind::Mismatch, v->span, "pair in pattern of type " + print_type(a));
            pattern_context_rec(v->t1, a->lhs, names, out);
            pattern_context_rec(v->t2, a->rhs, names, out);
            return;
        case Term::Kind::Fold:
            if (a->kind != Type::Kind::Mu)
                err(TypeError::Kind::Mismatch, v->span, "fold in pattern of type " + print_type(a));
            pattern_context_rec(v->t1, subst_type(a->body, a->name, a), names, out);
            return;
        default:
            err(TypeError::Kind::Mismatch, v->span, "clause pattern must be a value");
    }
}

/// Result value of an expression: strip let prefixes.
const TermPtr& strip_lets(const TermPtr& t) {
    const Term* cur = t.get();
    const TermPtr* out = &t;
    while (cur->kind == Term::Kind::Let) {
        out = &cur->t2;
        cur = out->get();
    }
    return *out;
}

bool vorth(const TermPtr& a, const TermPtr& b) {
    if ((a->kind == Term::Kind::InL && b->kind == Term::Kind::InR) ||
        (a->kind == Term::Kind::InR && b->kind == Term::Kind::InL))
        return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Term::Kind::InL:
        case Term::Kind::InR:
        case Term::Kind::Fold:
            return vorth(a->t1, b->t1);
        case Term::Kind::Pair:
            return vorth(a->t1, b->t1) || vorth(a->t2, b->t2);
        default:
            return false;
    }
}

}  // namespace

bool orthogonal(const TermPtr& t1, const TermPtr& t2) {
    return vorth(strip_lets(t1), strip_lets(t2));
}

void check_term(const IsoContext& psi, const TermContext& delta, const TermPtr& t,
                const TypePtr& a, TypeTable* table) {
    require_closed(a, t->span);
    check_rec(psi, delta, t, a, table);
}

TermContext pattern_context(const TermPtr& v, const TypePtr& a) {
    TermContext out;
    std::set<std::string> names;
    pattern_context_rec(v, a, names, out);
    return out;
}

IsoContext invert_ctx(const IsoContext& psi) {
    IsoContext out;
    for (const auto& [uid, t] : psi) out.emplace(uid, invert_iso_type(t));
    return out;
}

IsoTypePtr check_iso(const IsoContext& psi, const IsoPtr& w, const IsoTypePtr& expected,
                     TypeTable* table) {
    auto record = [&](const IsoTypePtr& t) {
        if (table) (*table)[w.get()] = t;
        return t;
    };
    // Reconcile the ascription with the expectation.
    IsoTypePtr goal = expected;
    if (w->ann) {
        require_closed_iso_type(w->ann, w->span);
        if (goal && !iso_type_equal(goal, w->ann))
            err(TypeError::Kind::Annotation, w->span,
                "annotation " + print_iso_type(w->ann) + " conflicts with expected type " +
                    print_iso_type(goal));
        goal = w->ann;
    }
    if (goal) require_closed_iso_type(goal, w->span);

    switch (w->kind) {
        case Iso::Kind::Var: {
            if (w->uid == 0)
                err(TypeError::Kind::UnboundVar, w->span, "unknown iso '" + w->name + "'");
            auto it = psi.find(w->uid);
            if (it == psi.end())
                err(TypeError::Kind::UnboundVar, w->span, "unbound iso variable '" + w->name + "'");
            if (goal && !iso_type_equal(it->second, goal))
                err(TypeError::Kind::Mismatch, w->span,
                    "iso variable '" + w->name + "' has type " + print_iso_type(it->second) +
                        ", expected " + print_iso_type(goal));
            return record(it->second);
        }
        case Iso::Kind::Empty: {
            if (!goal)
                err(TypeError::Kind::Annotation, w->span,
                    "the empty iso requires a type annotation");
            return record(goal);
        }
        case Iso::Kind::Clauses: {
            if (!goal) {
                if (w->clauses.empty())
                    err(TypeError::Kind::Annotation, w->span,
                        "an empty clause set requires a type annotation");
                err(TypeError::Kind::Annotation, w->span,
                    "cannot infer the type of a clause set; annotate or declare it");
            }
            if (goal->arrow)
                err(TypeError::Kind::Mismatch, w->span,
                    "a clause set cannot have arrow type " + print_iso_type(goal));
            for (const auto& c : w->clauses) {
                TermContext delta = pattern_context(c.lhs, goal->a);
                check_rec(psi, delta, c.rhs, goal->b, table);
            }
            for (std::size_t i = 0; i < w->clauses.size(); ++i) {
                for (std::size_t j = i + 1; j < w->clauses.size(); ++j) {
                    if (!orthogonal(w->clauses[i].lhs, w->clauses[j].lhs))
                        err(TypeError::Kind::Overlap, w->span,
                            "clauses " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                " overlap on the left-hand side");
                    if (!orthogonal(w->clauses[i].rhs, w->clauses[j].rhs))
                        err(TypeError::Kind::Overlap, w->span,
                            "clauses " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                " overlap on the right-hand side");
                }
            }
            return record(goal);
        }
        case Iso::Kind::Fix:
        case Iso::Kind::NFix: {
            if (!goal)
                err(TypeError::Kind::Annotation, w->span,
                    "cannot infer the type of a fixpoint; annotate or declare it");
            IsoContext psi2 = psi;
            psi2[w->uid] = goal;
            check_iso(psi2, w->body, goal, table);
            return record(goal);
        }
        case Iso::Kind::Lam: {
            if (!goal)
                err(TypeError::Kind::Annotation, w->span,
                    "cannot infer the type of an iso abstraction; annotate or declare it");
            if (!goal->arrow)
                err(TypeError::Kind::Mismatch, w->span,
                    "iso abstraction checked against ground type " + print_iso_type(goal));
            IsoContext psi2 = psi;
            psi2[w->uid] = goal->from;
            check_iso(psi2, w->body, goal->to, table);
            return record(goal);
        }
        case Iso::Kind::App: {
            IsoTypePtr tf = check_iso(psi, w->f, nullptr, table);
            if (!tf->arrow)
                err(TypeError::Kind::Mismatch, w->span,
                    "iso of ground type " + print_iso_type(tf) + " applied to an iso");
            check_iso(psi, w->g, tf->from, table);
            if (goal && !iso_type_equal(tf->to, goal))
                err(TypeError::Kind::Mismatch, w->span,
                    "iso application has type " + print_iso_type(tf->to) + ", expected " +
                        print_iso_type(goal));
            return record(tf->to);
        }
    }
    err(TypeError::Kind::Mismatch, w->span, "malformed iso");
}

}  // namespace reviso
