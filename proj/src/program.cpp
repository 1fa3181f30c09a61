#include "reviso/program.hpp"

namespace reviso {

const LinkedIso* LinkedProgram::find(const std::string& name) const {
    for (const auto& li : isos)
        if (li.name == name) return &li;
    return nullptr;
}

namespace {

TermPtr resolve_term(const LinkedProgram& env, const TermPtr& t);

IsoPtr resolve_iso(const LinkedProgram& env, const IsoPtr& w) {
    switch (w->kind) {
        case Iso::Kind::Var: {
            if (w->uid != 0) return w;  // bound by fix/lambda
            const LinkedIso* def = env.find(w->name);
            if (!def)
                throw TypeError(TypeError::Kind::UnboundVar, w->span,
                                "reference to undeclared iso '" + w->name + "'");
            return refresh_iso(def->iso);
        }
        case Iso::Kind::Empty:
            return w;
        case Iso::Kind::Fix:
            return i_fix(w->name, w->uid, resolve_iso(env, w->body), w->ann);
        case Iso::Kind::NFix:
            return i_nfix(w->bound, w->name, w->uid, resolve_iso(env, w->body), w->ann);
        case Iso::Kind::Lam:
            return i_lam(w->name, w->uid, resolve_iso(env, w->body), w->ann);
        case Iso::Kind::App:
            return i_app(resolve_iso(env, w->f), resolve_iso(env, w->g));
        case Iso::Kind::Clauses: {
            std::vector<Clause> cs;
            cs.reserve(w->clauses.size());
            for (const auto& c : w->clauses)
                cs.push_back(Clause{c.lhs, resolve_term(env, c.rhs)});
            return i_clauses(std::move(cs), w->ann);
        }
    }
    return w;
}

TermPtr resolve_term(const LinkedProgram& env, const TermPtr& t) {
    switch (t->kind) {
        case Term::Kind::Unit:
        case Term::Kind::Var:
            return t;
        case Term::Kind::InL:
            return m_inl(resolve_term(env, t->t1));
        case Term::Kind::InR:
            return m_inr(resolve_term(env, t->t1));
        case Term::Kind::Fold:
            return m_fold(resolve_term(env, t->t1));
        case Term::Kind::Pair:
            return m_pair(resolve_term(env, t->t1), resolve_term(env, t->t2));
        case Term::Kind::App:
            return m_app(resolve_iso(env, t->iso), resolve_term(env, t->t1));
        case Term::Kind::Let:
            return m_let(t->pat, resolve_term(env, t->t1), resolve_term(env, t->t2));
    }
    return t;
}

/// Attach the declared type as the root annotation when the body has none.
IsoPtr with_ann(IsoPtr w, const IsoTypePtr& ty) {
    if (w->ann) return w;
    auto* mut = const_cast<Iso*>(w.get());
    mut->ann = ty;
    return w;
}

}  // namespace

LinkedProgram link_program(const Program& p) {
    LinkedProgram out;
    for (const auto& d : p.decls) {
        if (d.kind != Decl::Kind::Iso) continue;
        IsoPtr body = resolve_iso(out, d.iso);
        // refresh_iso gives the inlined copy fresh binders; the declaration
        // body itself already has globally unique uids from the parser.
        body = with_ann(refresh_iso(body), d.iso_type);
        out.isos.push_back(LinkedIso{d.name, d.iso_type, body});
    }
    return out;
}

TypeTable check_program(const LinkedProgram& p) {
    TypeTable table;
    for (const auto& li : p.isos) check_iso({}, li.iso, li.type, &table);
    return table;
}

}  // namespace reviso
