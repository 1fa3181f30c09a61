#include "reviso/eval.hpp"

#include <stdexcept>

#include "reviso/pretty.hpp"

namespace reviso {

// ============================================================================
// Matching
// ============================================================================

namespace {

bool match_rec(const TermPtr& pat, const TermPtr& v, Subst& out) {
    switch (pat->kind) {
        case Term::Kind::Var: {
            auto [it, inserted] = out.emplace(pat->uid, v);
            (void)it;
            return inserted;  // duplicate support would be a checker bug
        }
        case Term::Kind::Unit:
            return v->kind == Term::Kind::Unit;
        case Term::Kind::InL:
            return v->kind == Term::Kind::InL && match_rec(pat->t1, v->t1, out);
        case Term::Kind::InR:
            return v->kind == Term::Kind::InR && match_rec(pat->t1, v->t1, out);
        case Term::Kind::Fold:
            return v->kind == Term::Kind::Fold && match_rec(pat->t1, v->t1, out);
        case Term::Kind::Pair:
            return v->kind == Term::Kind::Pair && match_rec(pat->t1, v->t1, out) &&
                   match_rec(pat->t2, v->t2, out);
        default:
            return false;
    }
}

}  // namespace

std::optional<Subst> match(const TermPtr& pattern_value, const TermPtr& v) {
    Subst out;
    if (match_rec(pattern_value, v, out)) return out;
    return std::nullopt;
}

std::optional<Subst> match_pattern(const PatternPtr& p, const TermPtr& v) {
    if (p->kind == Pattern::Kind::Var) return Subst{{p->uid, v}};
    if (v->kind != Term::Kind::Pair) return std::nullopt;
    auto a = match_pattern(p->fst, v->t1);
    if (!a) return std::nullopt;
    auto b = match_pattern(p->snd, v->t2);
    if (!b) return std::nullopt;
    a->insert(b->begin(), b->end());
    return a;
}

// ============================================================================
// Stepping
// ============================================================================

namespace {

/// Carry the redex's annotation over to the contractum when it has none of
/// its own, so reducts stay checkable (subject reduction at the iso level).
IsoPtr keep_ann(const IsoPtr& w, const IsoTypePtr& ann) {
    if (!ann || w->ann) return w;
    auto copy = std::make_shared<Iso>(*w);
    copy->ann = ann;
    return copy;
}

}  // namespace

std::optional<IsoPtr> iso_step(const IsoPtr& w) {
    switch (w->kind) {
        case Iso::Kind::Fix:
            return keep_ann(subst_iso_in_iso(w->body, w->uid, w), w->ann);
        case Iso::Kind::NFix: {
            if (w->bound == 0) return i_empty(w->ann);
            IsoPtr smaller = i_nfix(w->bound - 1, w->name, w->uid, w->body, w->ann);
            return keep_ann(subst_iso_in_iso(w->body, w->uid, smaller), w->ann);
        }
        case Iso::Kind::App: {
            if (w->f->kind == Iso::Kind::Lam) {
                IsoTypePtr ann = w->ann;
                if (!ann && w->f->ann && w->f->ann->arrow) ann = w->f->ann->to;
                return keep_ann(subst_iso_in_iso(w->f->body, w->f->uid, w->g), ann);
            }
            if (w->f->kind == Iso::Kind::Empty)
                return i_empty(w->f->ann && w->f->ann->arrow ? w->f->ann->to : nullptr);
            if (auto f2 = iso_step(w->f)) return i_app(*f2, w->g);
            return std::nullopt;
        }
        default:
            return std::nullopt;
    }
}

std::optional<TermPtr> step(const TermPtr& t) {
    switch (t->kind) {
        case Term::Kind::Unit:
        case Term::Kind::Var:
            return std::nullopt;
        case Term::Kind::InL:
            if (auto s = step(t->t1)) return m_inl(*s);
            return std::nullopt;
        case Term::Kind::InR:
            if (auto s = step(t->t1)) return m_inr(*s);
            return std::nullopt;
        case Term::Kind::Fold:
            if (auto s = step(t->t1)) return m_fold(*s);
            return std::nullopt;
        case Term::Kind::Pair:
            if (auto s = step(t->t1)) return m_pair(*s, t->t2);
            if (auto s = step(t->t2)) return m_pair(t->t1, *s);
            return std::nullopt;
        case Term::Kind::App: {
            // Reduce the iso to a clause set before evaluating the argument.
            if (auto w2 = iso_step(t->iso)) return m_app(*w2, t->t1);
            if (t->iso->kind != Iso::Kind::Clauses) return std::nullopt;  // stuck or ill-formed
            if (!is_value(t->t1)) {
                if (auto s = step(t->t1)) return m_app(t->iso, *s);
                return std::nullopt;
            }
            for (const auto& c : t->iso->clauses) {
                if (auto sigma = match(c.lhs, t->t1)) return apply_subst(*sigma, c.rhs);
            }
            return std::nullopt;  // no clause matched
        }
        case Term::Kind::Let: {
            if (!is_value(t->t1)) {
                if (auto s = step(t->t1)) return m_let(t->pat, *s, t->t2);
                return std::nullopt;
            }
            if (auto sigma = match_pattern(t->pat, t->t1)) return apply_subst(*sigma, t->t2);
            return std::nullopt;  // shape mismatch (ill-typed input)
        }
    }
    return std::nullopt;
}

// ============================================================================
// Big-step driver
// ============================================================================

namespace {

/// Describe why a non-value term does not step.
std::string stuck_reason(const TermPtr& t) {
    switch (t->kind) {
        case Term::Kind::InL:
        case Term::Kind::InR:
        case Term::Kind::Fold:
            return stuck_reason(t->t1);
        case Term::Kind::Pair:
            return is_value(t->t1) ? stuck_reason(t->t2) : stuck_reason(t->t1);
        case Term::Kind::App:
            if (!is_value(t->t1) ) return stuck_reason(t->t1);
            switch (t->iso->kind) {
                case Iso::Kind::Clauses:
                    return "no-clause-matched";
                case Iso::Kind::Empty:
                    return "no-clause-matched";  // the empty iso matches nothing
                case Iso::Kind::Var:
                    return "applied-non-iso-value";
                default:
                    return "malformed";
            }
        case Term::Kind::Let:
            if (!is_value(t->t1)) return stuck_reason(t->t1);
            return "malformed";  // pattern shape mismatch
        default:
            return "malformed";
    }
}

}  // namespace

EvalOutcome eval(TermPtr t, std::uint64_t fuel) {
    std::uint64_t steps = 0;
    while (steps < fuel) {
        if (is_value(t)) return EvalOutcome{EvalOutcome::Kind::Value, t, "", steps};
        auto s = step(t);
        if (!s) return EvalOutcome{EvalOutcome::Kind::Stuck, t, stuck_reason(t), steps};
        t = std::move(*s);
        ++steps;
    }
    if (is_value(t)) return EvalOutcome{EvalOutcome::Kind::Value, t, "", steps};
    return EvalOutcome{EvalOutcome::Kind::OutOfFuel, t, "", steps};
}

// ============================================================================
// Inversion
// ============================================================================

namespace {

Clause invert_clause(const Clause& c) {
    // Decompose   v <-> let p1 = w1 a1 in ... let pn = wn an in v'
    struct Link {
        PatternPtr p;
        IsoPtr w;
        TermPtr arg;
    };
    std::vector<Link> chain;
    TermPtr body = c.rhs;
    while (body->kind == Term::Kind::Let) {
        if (body->t1->kind != Term::Kind::App)
            throw std::runtime_error("cannot invert a let whose bound term is not an application");
        chain.push_back(Link{body->pat, body->t1->iso, body->t1->t1});
        body = body->t2;
    }
    if (!is_value(body))
        throw std::runtime_error("cannot invert a clause whose body is not an expression");
    // Rebuild   v' <-> let an = wn^-1 pn in ... let a1 = w1^-1 p1 in v
    TermPtr rhs = c.lhs;
    for (const auto& link : chain) {
        auto pat = term_to_pattern(link.arg);
        if (!pat)
            throw std::runtime_error("cannot invert: applied argument is not a pattern");
        rhs = m_let(*pat, m_app(invert_iso(link.w), pattern_to_term(link.p)), rhs);
    }
    return Clause{body, rhs};
}

}  // namespace

IsoPtr invert_iso(const IsoPtr& w) {
    IsoTypePtr ann = w->ann ? invert_iso_type(w->ann) : nullptr;
    switch (w->kind) {
        case Iso::Kind::Var:
            return w;
        case Iso::Kind::Empty:
            return i_empty(ann);
        case Iso::Kind::Fix:
            return i_fix(w->name, w->uid, invert_iso(w->body), ann);
        case Iso::Kind::NFix:
            return i_nfix(w->bound, w->name, w->uid, invert_iso(w->body), ann);
        case Iso::Kind::Lam:
            return i_lam(w->name, w->uid, invert_iso(w->body), ann);
        case Iso::Kind::App:
            return i_app(invert_iso(w->f), invert_iso(w->g));
        case Iso::Kind::Clauses: {
            std::vector<Clause> cs;
            cs.reserve(w->clauses.size());
            for (const auto& c : w->clauses) cs.push_back(invert_clause(c));
            return i_clauses(std::move(cs), ann);
        }
    }
    return w;
}

}  // namespace reviso
