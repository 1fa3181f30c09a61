#include "reviso/ast.hpp"

#include <atomic>
#include <cassert>
#include <sstream>

namespace reviso {

std::uint64_t fresh_uid() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1);
}

// ============================================================================
// Types
// ============================================================================

TypePtr t_unit() {
    static const TypePtr u = std::make_shared<Type>(Type{Type::Kind::Unit, nullptr, nullptr, "", nullptr});
    return u;
}

TypePtr t_sum(TypePtr a, TypePtr b) {
    return std::make_shared<Type>(Type{Type::Kind::Sum, std::move(a), std::move(b), "", nullptr});
}

TypePtr t_prod(TypePtr a, TypePtr b) {
    return std::make_shared<Type>(Type{Type::Kind::Prod, std::move(a), std::move(b), "", nullptr});
}

TypePtr t_mu(std::string name, TypePtr body) {
    return std::make_shared<Type>(Type{Type::Kind::Mu, nullptr, nullptr, std::move(name), std::move(body)});
}

TypePtr t_tvar(std::string name) {
    return std::make_shared<Type>(Type{Type::Kind::Var, nullptr, nullptr, std::move(name), nullptr});
}

TypePtr t_nat() {
    static const TypePtr n = t_mu("X", t_sum(t_unit(), t_tvar("X")));
    return n;
}

TypePtr t_bool() {
    static const TypePtr b = t_sum(t_unit(), t_unit());
    return b;
}

TypePtr t_list(TypePtr elem) {
    // Pick a binder name not free in elem; elem is closed in practice.
    return t_mu("L", t_sum(t_unit(), t_prod(std::move(elem), t_tvar("L"))));
}

TypePtr t_unit_sum(std::size_t n) {
    assert(n >= 1);
    TypePtr t = t_unit();
    for (std::size_t i = 1; i < n; ++i) t = t_sum(t_unit(), t);
    return t;
}

namespace {

/// Alpha-aware structural comparison; env maps lhs binder names to rhs ones.
bool type_equal_rec(const TypePtr& a, const TypePtr& b,
                    std::vector<std::pair<std::string, std::string>>& env) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Type::Kind::Unit:
            return true;
        case Type::Kind::Sum:
        case Type::Kind::Prod:
            return type_equal_rec(a->lhs, b->lhs, env) && type_equal_rec(a->rhs, b->rhs, env);
        case Type::Kind::Mu: {
            env.emplace_back(a->name, b->name);
            bool ok = type_equal_rec(a->body, b->body, env);
            env.pop_back();
            return ok;
        }
        case Type::Kind::Var: {
            // Innermost binding wins (shadowing).
            for (auto it = env.rbegin(); it != env.rend(); ++it) {
                if (it->first == a->name || it->second == b->name)
                    return it->first == a->name && it->second == b->name;
            }
            return a->name == b->name;  // both free
        }
    }
    return false;
}

void type_key_rec(const TypePtr& a, std::vector<std::string>& env, std::string& out) {
    switch (a->kind) {
        case Type::Kind::Unit:
            out += "1";
            return;
        case Type::Kind::Sum:
            out += "+(";
            type_key_rec(a->lhs, env, out);
            out += ",";
            type_key_rec(a->rhs, env, out);
            out += ")";
            return;
        case Type::Kind::Prod:
            out += "*(";
            type_key_rec(a->lhs, env, out);
            out += ",";
            type_key_rec(a->rhs, env, out);
            out += ")";
            return;
        case Type::Kind::Mu:
            out += "u.";
            env.push_back(a->name);
            type_key_rec(a->body, env, out);
            env.pop_back();
            return;
        case Type::Kind::Var: {
            for (std::size_t i = env.size(); i-- > 0;) {
                if (env[i] == a->name) {
                    out += "#" + std::to_string(env.size() - 1 - i);  // de Bruijn index
                    return;
                }
            }
            out += "?" + a->name;
            return;
        }
    }
}

}  // namespace

bool type_equal(const TypePtr& a, const TypePtr& b) {
    if (a.get() == b.get()) return true;
    std::vector<std::pair<std::string, std::string>> env;
    return type_equal_rec(a, b, env);
}

std::string type_key(const TypePtr& a) {
    std::string out;
    std::vector<std::string> env;
    type_key_rec(a, env, out);
    return out;
}

void free_tvars(const TypePtr& a, std::set<std::string>& out) {
    switch (a->kind) {
        case Type::Kind::Unit:
            return;
        case Type::Kind::Sum:
        case Type::Kind::Prod:
            free_tvars(a->lhs, out);
            free_tvars(a->rhs, out);
            return;
        case Type::Kind::Mu: {
            std::set<std::string> inner;
            free_tvars(a->body, inner);
            inner.erase(a->name);
            out.insert(inner.begin(), inner.end());
            return;
        }
        case Type::Kind::Var:
            out.insert(a->name);
            return;
    }
}

bool type_closed(const TypePtr& a) {
    std::set<std::string> fv;
    free_tvars(a, fv);
    return fv.empty();
}

TypePtr subst_type(const TypePtr& a, const std::string& x, const TypePtr& r) {
    switch (a->kind) {
        case Type::Kind::Unit:
            return a;
        case Type::Kind::Sum:
            return t_sum(subst_type(a->lhs, x, r), subst_type(a->rhs, x, r));
        case Type::Kind::Prod:
            return t_prod(subst_type(a->lhs, x, r), subst_type(a->rhs, x, r));
        case Type::Kind::Var:
            return a->name == x ? r : a;
        case Type::Kind::Mu: {
            if (a->name == x) return a;  // shadowed
            std::set<std::string> fvr;
            free_tvars(r, fvr);
            if (fvr.count(a->name)) {
                // Capture: alpha-rename the binder first.
                std::string fresh = a->name + "'" + std::to_string(fresh_uid());
                TypePtr body = subst_type(a->body, a->name, t_tvar(fresh));
                return t_mu(fresh, subst_type(body, x, r));
            }
            return t_mu(a->name, subst_type(a->body, x, r));
        }
    }
    return a;
}

std::optional<TypePtr> list_elem_type(const TypePtr& t) {
    // mu L. 1 + elem * L  with L not free in elem
    if (t->kind != Type::Kind::Mu) return std::nullopt;
    const TypePtr& b = t->body;
    if (b->kind != Type::Kind::Sum || b->lhs->kind != Type::Kind::Unit) return std::nullopt;
    const TypePtr& p = b->rhs;
    if (p->kind != Type::Kind::Prod) return std::nullopt;
    if (p->rhs->kind != Type::Kind::Var || p->rhs->name != t->name) return std::nullopt;
    std::set<std::string> fv;
    free_tvars(p->lhs, fv);
    if (fv.count(t->name)) return std::nullopt;
    return p->lhs;
}

// ============================================================================
// Iso types
// ============================================================================

IsoTypePtr it_ground(TypePtr a, TypePtr b) {
    auto t = std::make_shared<IsoType>();
    t->arrow = false;
    t->a = std::move(a);
    t->b = std::move(b);
    return t;
}

IsoTypePtr it_arrow(IsoTypePtr from, IsoTypePtr to) {
    auto t = std::make_shared<IsoType>();
    t->arrow = true;
    t->from = std::move(from);
    t->to = std::move(to);
    return t;
}

bool iso_type_equal(const IsoTypePtr& a, const IsoTypePtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b || a->arrow != b->arrow) return false;
    if (a->arrow) return iso_type_equal(a->from, b->from) && iso_type_equal(a->to, b->to);
    return type_equal(a->a, b->a) && type_equal(a->b, b->b);
}

IsoTypePtr invert_iso_type(const IsoTypePtr& t) {
    if (t->arrow) return it_arrow(invert_iso_type(t->from), invert_iso_type(t->to));
    return it_ground(t->b, t->a);
}

// ============================================================================
// Term / pattern / iso constructors
// ============================================================================

PatternPtr p_var(std::string name, std::uint64_t uid) {
    auto p = std::make_shared<Pattern>();
    p->kind = Pattern::Kind::Var;
    p->name = std::move(name);
    p->uid = uid;
    return p;
}

PatternPtr p_pair(PatternPtr a, PatternPtr b) {
    auto p = std::make_shared<Pattern>();
    p->kind = Pattern::Kind::Pair;
    p->fst = std::move(a);
    p->snd = std::move(b);
    return p;
}

namespace {
TermPtr mk(Term::Kind k) {
    auto t = std::make_shared<Term>();
    t->kind = k;
    return t;
}
}  // namespace

TermPtr m_unit() {
    static const TermPtr u = mk(Term::Kind::Unit);
    return u;
}

TermPtr m_var(std::string name, std::uint64_t uid) {
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::Var;
    t->name = std::move(name);
    t->uid = uid;
    return t;
}

TermPtr m_inl(TermPtr x) {
    auto t = mk(Term::Kind::InL);
    const_cast<Term*>(t.get())->t1 = std::move(x);
    return t;
}

TermPtr m_inr(TermPtr x) {
    auto t = mk(Term::Kind::InR);
    const_cast<Term*>(t.get())->t1 = std::move(x);
    return t;
}

TermPtr m_pair(TermPtr a, TermPtr b) {
    auto t = mk(Term::Kind::Pair);
    auto* m = const_cast<Term*>(t.get());
    m->t1 = std::move(a);
    m->t2 = std::move(b);
    return t;
}

TermPtr m_fold(TermPtr x) {
    auto t = mk(Term::Kind::Fold);
    const_cast<Term*>(t.get())->t1 = std::move(x);
    return t;
}

TermPtr m_app(IsoPtr w, TermPtr x) {
    auto t = mk(Term::Kind::App);
    auto* m = const_cast<Term*>(t.get());
    m->iso = std::move(w);
    m->t1 = std::move(x);
    return t;
}

TermPtr m_let(PatternPtr p, TermPtr bound, TermPtr body) {
    auto t = mk(Term::Kind::Let);
    auto* m = const_cast<Term*>(t.get());
    m->pat = std::move(p);
    m->t1 = std::move(bound);
    m->t2 = std::move(body);
    return t;
}

IsoPtr i_clauses(std::vector<Clause> cs, IsoTypePtr ann) {
    auto w = std::make_shared<Iso>();
    w->kind = Iso::Kind::Clauses;
    w->clauses = std::move(cs);
    w->ann = std::move(ann);
    return w;
}

IsoPtr i_fix(std::string name, std::uint64_t uid, IsoPtr body, IsoTypePtr ann) {
    auto w = std::make_shared<Iso>();
    w->kind = Iso::Kind::Fix;
    w->name = std::move(name);
    w->uid = uid;
    w->body = std::move(body);
    w->ann = std::move(ann);
    return w;
}

IsoPtr i_nfix(std::uint64_t n, std::string name, std::uint64_t uid, IsoPtr body, IsoTypePtr ann) {
    auto w = std::make_shared<Iso>();
    w->kind = Iso::Kind::NFix;
    w->bound = n;
    w->name = std::move(name);
    w->uid = uid;
    w->body = std::move(body);
    w->ann = std::move(ann);
    return w;
}

IsoPtr i_lam(std::string name, std::uint64_t uid, IsoPtr body, IsoTypePtr ann) {
    auto w = std::make_shared<Iso>();
    w->kind = Iso::Kind::Lam;
    w->name = std::move(name);
    w->uid = uid;
    w->body = std::move(body);
    w->ann = std::move(ann);
    return w;
}

IsoPtr i_var(std::string name, std::uint64_t uid) {
    auto w = std::make_shared<Iso>();
    w->kind = Iso::Kind::Var;
    w->name = std::move(name);
    w->uid = uid;
    return w;
}

IsoPtr i_app(IsoPtr f, IsoPtr g) {
    auto w = std::make_shared<Iso>();
    w->kind = Iso::Kind::App;
    w->f = std::move(f);
    w->g = std::move(g);
    return w;
}

IsoPtr i_empty(IsoTypePtr ann) {
    auto w = std::make_shared<Iso>();
    w->kind = Iso::Kind::Empty;
    w->ann = std::move(ann);
    return w;
}

// ============================================================================
// Sugar
// ============================================================================

TermPtr m_nat(std::uint64_t n) {
    TermPtr t = m_fold(m_inl(m_unit()));
    for (std::uint64_t i = 0; i < n; ++i) t = m_fold(m_inr(t));
    return t;
}

TermPtr m_cons(TermPtr h, TermPtr t) { return m_fold(m_inr(m_pair(std::move(h), std::move(t)))); }

TermPtr m_list(const std::vector<TermPtr>& elems) {
    TermPtr t = m_fold(m_inl(m_unit()));
    for (std::size_t i = elems.size(); i-- > 0;) t = m_cons(elems[i], t);
    return t;
}

TermPtr m_tt() { return m_inl(m_unit()); }
TermPtr m_ff() { return m_inr(m_unit()); }

std::optional<std::uint64_t> as_nat(const TermPtr& v) {
    std::uint64_t n = 0;
    TermPtr cur = v;
    for (;;) {
        if (cur->kind != Term::Kind::Fold) return std::nullopt;
        const TermPtr& in = cur->t1;
        if (in->kind == Term::Kind::InL) {
            return in->t1->kind == Term::Kind::Unit ? std::optional<std::uint64_t>(n) : std::nullopt;
        }
        if (in->kind != Term::Kind::InR) return std::nullopt;
        ++n;
        cur = in->t1;
    }
}

std::optional<std::vector<TermPtr>> as_list(const TermPtr& v) {
    std::vector<TermPtr> out;
    TermPtr cur = v;
    for (;;) {
        if (cur->kind != Term::Kind::Fold) return std::nullopt;
        const TermPtr& in = cur->t1;
        if (in->kind == Term::Kind::InL) {
            return in->t1->kind == Term::Kind::Unit ? std::optional<std::vector<TermPtr>>(out)
                                                    : std::nullopt;
        }
        if (in->kind != Term::Kind::InR || in->t1->kind != Term::Kind::Pair) return std::nullopt;
        out.push_back(in->t1->t1);
        cur = in->t1->t2;
    }
}

TermPtr m_inj(std::size_t i, std::size_t n) {
    assert(i < n);
    // t_unit_sum(n) = 1 + (1 + (... + 1)); injection i wraps i inr's then inl
    // (except the last component, which is a bare chain of inr's around ()).
    TermPtr t = m_unit();
    if (i + 1 < n) t = m_inl(t);
    for (std::size_t k = 0; k < i; ++k) t = m_inr(t);
    return t;
}

std::optional<std::size_t> as_inj(const TermPtr& v, std::size_t n) {
    TermPtr cur = v;
    std::size_t i = 0;
    while (cur->kind == Term::Kind::InR && i + 1 < n) {
        ++i;
        cur = cur->t1;
    }
    if (i + 1 < n) {
        if (cur->kind != Term::Kind::InL || cur->t1->kind != Term::Kind::Unit) return std::nullopt;
        return i;
    }
    return cur->kind == Term::Kind::Unit ? std::optional<std::size_t>(i) : std::nullopt;
}

// ============================================================================
// Predicates / variables
// ============================================================================

bool is_value(const TermPtr& t) {
    switch (t->kind) {
        case Term::Kind::Unit:
        case Term::Kind::Var:
            return true;
        case Term::Kind::InL:
        case Term::Kind::InR:
        case Term::Kind::Fold:
            return is_value(t->t1);
        case Term::Kind::Pair:
            return is_value(t->t1) && is_value(t->t2);
        case Term::Kind::App:
        case Term::Kind::Let:
            return false;
    }
    return false;
}

bool is_closed_value(const TermPtr& t) {
    if (!is_value(t)) return false;
    std::map<std::uint64_t, std::string> fv;
    free_vars(t, fv);
    return fv.empty();
}

namespace {
void free_vars_rec(const TermPtr& t, std::set<std::uint64_t>& bound,
                   std::map<std::uint64_t, std::string>& out) {
    switch (t->kind) {
        case Term::Kind::Unit:
            return;
        case Term::Kind::Var:
            if (!bound.count(t->uid)) out[t->uid] = t->name;
            return;
        case Term::Kind::InL:
        case Term::Kind::InR:
        case Term::Kind::Fold:
        case Term::Kind::App:
            free_vars_rec(t->t1, bound, out);
            return;
        case Term::Kind::Pair:
            free_vars_rec(t->t1, bound, out);
            free_vars_rec(t->t2, bound, out);
            return;
        case Term::Kind::Let: {
            free_vars_rec(t->t1, bound, out);
            std::vector<std::pair<std::uint64_t, std::string>> pv;
            pattern_vars(t->pat, pv);
            std::vector<std::uint64_t> added;
            for (auto& [uid, _] : pv)
                if (bound.insert(uid).second) added.push_back(uid);
            free_vars_rec(t->t2, bound, out);
            for (auto uid : added) bound.erase(uid);
            return;
        }
    }
}
}  // namespace

void free_vars(const TermPtr& t, std::map<std::uint64_t, std::string>& out) {
    std::set<std::uint64_t> bound;
    free_vars_rec(t, bound, out);
}

void pattern_vars(const PatternPtr& p, std::vector<std::pair<std::uint64_t, std::string>>& out) {
    if (p->kind == Pattern::Kind::Var) {
        out.emplace_back(p->uid, p->name);
    } else {
        pattern_vars(p->fst, out);
        pattern_vars(p->snd, out);
    }
}

std::size_t fold_depth(const TermPtr& t) {
    switch (t->kind) {
        case Term::Kind::Unit:
        case Term::Kind::Var:
            return 0;
        case Term::Kind::InL:
        case Term::Kind::InR:
        case Term::Kind::App:
            return fold_depth(t->t1);
        case Term::Kind::Fold:
            return 1 + fold_depth(t->t1);
        case Term::Kind::Pair:
            return std::max(fold_depth(t->t1), fold_depth(t->t2));
        case Term::Kind::Let:
            return std::max(fold_depth(t->t1), fold_depth(t->t2));
    }
    return 0;
}

std::size_t term_size(const TermPtr& t) {
    switch (t->kind) {
        case Term::Kind::Unit:
        case Term::Kind::Var:
            return 1;
        case Term::Kind::InL:
        case Term::Kind::InR:
        case Term::Kind::Fold:
        case Term::Kind::App:
            return 1 + term_size(t->t1);
        case Term::Kind::Pair:
        case Term::Kind::Let:
            return 1 + term_size(t->t1) + term_size(t->t2);
    }
    return 1;
}

TermPtr pattern_to_term(const PatternPtr& p) {
    if (p->kind == Pattern::Kind::Var) return m_var(p->name, p->uid);
    return m_pair(pattern_to_term(p->fst), pattern_to_term(p->snd));
}

std::optional<PatternPtr> term_to_pattern(const TermPtr& t) {
    if (t->kind == Term::Kind::Var) return p_var(t->name, t->uid);
    if (t->kind == Term::Kind::Pair) {
        auto a = term_to_pattern(t->t1);
        auto b = term_to_pattern(t->t2);
        if (a && b) return p_pair(*a, *b);
    }
    return std::nullopt;
}

bool value_equal(const TermPtr& a, const TermPtr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Term::Kind::Unit:
            return true;
        case Term::Kind::Var:
            return a->uid == b->uid;
        case Term::Kind::InL:
        case Term::Kind::InR:
        case Term::Kind::Fold:
            return value_equal(a->t1, b->t1);
        case Term::Kind::Pair:
            return value_equal(a->t1, b->t1) && value_equal(a->t2, b->t2);
        default:
            return false;
    }
}

// ============================================================================
// Alpha-equivalence
// ============================================================================

namespace {

struct AlphaEnv {
    FreeVarMode mode;
    std::map<std::uint64_t, std::uint64_t> term_fwd, term_bwd;  // bound-var correspondence
    std::map<std::uint64_t, std::uint64_t> iso_fwd, iso_bwd;
    std::map<std::uint64_t, std::uint64_t> free_fwd, free_bwd;  // Bijection mode pairing

    bool vars_match(std::uint64_t a, std::uint64_t b) {
        auto fa = term_fwd.find(a);
        auto fb = term_bwd.find(b);
        bool ba = fa != term_fwd.end(), bb = fb != term_bwd.end();
        if (ba || bb) return ba && bb && fa->second == b;
        // Both free.
        if (mode == FreeVarMode::Strict) return a == b;
        auto ga = free_fwd.find(a);
        auto gb = free_bwd.find(b);
        if (ga != free_fwd.end() || gb != free_bwd.end())
            return ga != free_fwd.end() && gb != free_bwd.end() && ga->second == b;
        free_fwd[a] = b;
        free_bwd[b] = a;
        return true;
    }

    bool iso_vars_match(std::uint64_t a, std::uint64_t b, const std::string& na, const std::string& nb) {
        auto fa = iso_fwd.find(a);
        auto fb = iso_bwd.find(b);
        bool ba = fa != iso_fwd.end(), bb = fb != iso_bwd.end();
        if (ba || bb) return ba && bb && fa->second == b;
        // Free iso variables: compare by uid, or by name for unresolved
        // declaration references (uid 0).
        if (a == 0 && b == 0) return na == nb;
        return a == b;
    }
};

bool alpha_term(const TermPtr& a, const TermPtr& b, AlphaEnv& env);
bool alpha_iso(const IsoPtr& a, const IsoPtr& b, AlphaEnv& env);

/// Bind corresponding pattern variables; false on shape mismatch.
bool alpha_bind_pattern(const PatternPtr& p, const PatternPtr& q, AlphaEnv& env) {
    if (p->kind != q->kind) return false;
    if (p->kind == Pattern::Kind::Var) {
        env.term_fwd[p->uid] = q->uid;
        env.term_bwd[q->uid] = p->uid;
        return true;
    }
    return alpha_bind_pattern(p->fst, q->fst, env) && alpha_bind_pattern(p->snd, q->snd, env);
}

/// Bind corresponding clause-LHS variables (values have identical shape first).
bool alpha_bind_value(const TermPtr& v, const TermPtr& w, AlphaEnv& env) {
    if (v->kind != w->kind) return false;
    switch (v->kind) {
        case Term::Kind::Unit:
            return true;
        case Term::Kind::Var:
            env.term_fwd[v->uid] = w->uid;
            env.term_bwd[w->uid] = v->uid;
            return true;
        case Term::Kind::InL:
        case Term::Kind::InR:
        case Term::Kind::Fold:
            return alpha_bind_value(v->t1, w->t1, env);
        case Term::Kind::Pair:
            return alpha_bind_value(v->t1, w->t1, env) && alpha_bind_value(v->t2, w->t2, env);
        default:
            return false;
    }
}

bool alpha_term(const TermPtr& a, const TermPtr& b, AlphaEnv& env) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Term::Kind::Unit:
            return true;
        case Term::Kind::Var:
            return env.vars_match(a->uid, b->uid);
        case Term::Kind::InL:
        case Term::Kind::InR:
        case Term::Kind::Fold:
            return alpha_term(a->t1, b->t1, env);
        case Term::Kind::Pair:
            return alpha_term(a->t1, b->t1, env) && alpha_term(a->t2, b->t2, env);
        case Term::Kind::App:
            return alpha_iso(a->iso, b->iso, env) && alpha_term(a->t1, b->t1, env);
        case Term::Kind::Let:
            if (!alpha_term(a->t1, b->t1, env)) return false;
            if (!alpha_bind_pattern(a->pat, b->pat, env)) return false;
            return alpha_term(a->t2, b->t2, env);
    }
    return false;
}

bool alpha_iso(const IsoPtr& a, const IsoPtr& b, AlphaEnv& env) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Iso::Kind::Var:
            return env.iso_vars_match(a->uid, b->uid, a->name, b->name);
        case Iso::Kind::Fix:
        case Iso::Kind::Lam:
        case Iso::Kind::NFix:
            if (a->kind == Iso::Kind::NFix && a->bound != b->bound) return false;
            env.iso_fwd[a->uid] = b->uid;
            env.iso_bwd[b->uid] = a->uid;
            return alpha_iso(a->body, b->body, env);
        case Iso::Kind::App:
            return alpha_iso(a->f, b->f, env) && alpha_iso(a->g, b->g, env);
        case Iso::Kind::Empty:
            return true;
        case Iso::Kind::Clauses: {
            if (a->clauses.size() != b->clauses.size()) return false;
            for (std::size_t i = 0; i < a->clauses.size(); ++i) {
                AlphaEnv clause_env = env;  // clause bindings are clause-local
                if (!alpha_bind_value(a->clauses[i].lhs, b->clauses[i].lhs, clause_env)) return false;
                if (!alpha_term(a->clauses[i].rhs, b->clauses[i].rhs, clause_env)) return false;
                env.free_fwd = clause_env.free_fwd;  // keep free pairing consistent
                env.free_bwd = clause_env.free_bwd;
            }
            return true;
        }
    }
    return false;
}

}  // namespace

bool alpha_equiv(const TermPtr& a, const TermPtr& b, FreeVarMode mode) {
    AlphaEnv env;
    env.mode = mode;
    return alpha_term(a, b, env);
}

bool alpha_equiv(const IsoPtr& a, const IsoPtr& b, FreeVarMode mode) {
    AlphaEnv env;
    env.mode = mode;
    return alpha_iso(a, b, env);
}

// ============================================================================
// Substitution
// ============================================================================

TermPtr apply_subst(const Subst& s, const TermPtr& t) {
    if (s.empty()) return t;
    switch (t->kind) {
        case Term::Kind::Unit:
            return t;
        case Term::Kind::Var: {
            auto it = s.find(t->uid);
            return it == s.end() ? t : it->second;
        }
        case Term::Kind::InL:
            return m_inl(apply_subst(s, t->t1));
        case Term::Kind::InR:
            return m_inr(apply_subst(s, t->t1));
        case Term::Kind::Fold:
            return m_fold(apply_subst(s, t->t1));
        case Term::Kind::Pair:
            return m_pair(apply_subst(s, t->t1), apply_subst(s, t->t2));
        case Term::Kind::App:
            // sigma(w t) = w sigma(t): isos are closed w.r.t. term variables.
            return m_app(t->iso, apply_subst(s, t->t1));
        case Term::Kind::Let:
            // Barendregt convention: binders never collide with supp(sigma).
            return m_let(t->pat, apply_subst(s, t->t1), apply_subst(s, t->t2));
    }
    return t;
}

IsoPtr subst_iso_in_iso(const IsoPtr& w, std::uint64_t uid, const IsoPtr& repl) {
    switch (w->kind) {
        case Iso::Kind::Var:
            return w->uid == uid ? repl : w;
        case Iso::Kind::Fix:
        case Iso::Kind::NFix:
        case Iso::Kind::Lam: {
            if (w->uid == uid) return w;  // shadowed
            IsoPtr body = subst_iso_in_iso(w->body, uid, repl);
            if (body.get() == w->body.get()) return w;
            auto out = std::make_shared<Iso>(*w);
            out->body = std::move(body);
            return out;
        }
        case Iso::Kind::App: {
            IsoPtr f = subst_iso_in_iso(w->f, uid, repl);
            IsoPtr g = subst_iso_in_iso(w->g, uid, repl);
            if (f.get() == w->f.get() && g.get() == w->g.get()) return w;
            auto out = std::make_shared<Iso>(*w);
            out->f = std::move(f);
            out->g = std::move(g);
            return out;
        }
        case Iso::Kind::Empty:
            return w;
        case Iso::Kind::Clauses: {
            bool changed = false;
            std::vector<Clause> cs;
            cs.reserve(w->clauses.size());
            for (const auto& c : w->clauses) {
                TermPtr rhs = subst_iso_in_term(c.rhs, uid, repl);
                changed = changed || rhs.get() != c.rhs.get();
                cs.push_back(Clause{c.lhs, rhs});
            }
            if (!changed) return w;
            auto out = std::make_shared<Iso>(*w);
            out->clauses = std::move(cs);
            return out;
        }
    }
    return w;
}

TermPtr subst_iso_in_term(const TermPtr& t, std::uint64_t uid, const IsoPtr& repl) {
    switch (t->kind) {
        case Term::Kind::Unit:
        case Term::Kind::Var:
            return t;
        case Term::Kind::InL: {
            TermPtr x = subst_iso_in_term(t->t1, uid, repl);
            return x.get() == t->t1.get() ? t : m_inl(std::move(x));
        }
        case Term::Kind::InR: {
            TermPtr x = subst_iso_in_term(t->t1, uid, repl);
            return x.get() == t->t1.get() ? t : m_inr(std::move(x));
        }
        case Term::Kind::Fold: {
            TermPtr x = subst_iso_in_term(t->t1, uid, repl);
            return x.get() == t->t1.get() ? t : m_fold(std::move(x));
        }
        case Term::Kind::Pair: {
            TermPtr a = subst_iso_in_term(t->t1, uid, repl);
            TermPtr b = subst_iso_in_term(t->t2, uid, repl);
            if (a.get() == t->t1.get() && b.get() == t->t2.get()) return t;
            return m_pair(std::move(a), std::move(b));
        }
        case Term::Kind::App: {
            IsoPtr w = subst_iso_in_iso(t->iso, uid, repl);
            TermPtr x = subst_iso_in_term(t->t1, uid, repl);
            if (w.get() == t->iso.get() && x.get() == t->t1.get()) return t;
            return m_app(std::move(w), std::move(x));
        }
        case Term::Kind::Let: {
            TermPtr a = subst_iso_in_term(t->t1, uid, repl);
            TermPtr b = subst_iso_in_term(t->t2, uid, repl);
            if (a.get() == t->t1.get() && b.get() == t->t2.get()) return t;
            return m_let(t->pat, std::move(a), std::move(b));
        }
    }
    return t;
}

// ============================================================================
// Refreshing
// ============================================================================

namespace {

struct RefreshEnv {
    std::map<std::uint64_t, std::uint64_t> term_map;
    std::map<std::uint64_t, std::uint64_t> iso_map;
};

PatternPtr refresh_pattern(const PatternPtr& p, RefreshEnv& env) {
    if (p->kind == Pattern::Kind::Var) {
        std::uint64_t nu = fresh_uid();
        env.term_map[p->uid] = nu;
        return p_var(p->name, nu);
    }
    PatternPtr a = refresh_pattern(p->fst, env);
    PatternPtr b = refresh_pattern(p->snd, env);
    return p_pair(std::move(a), std::move(b));
}

IsoPtr refresh_iso_rec(const IsoPtr& w, RefreshEnv& env);

TermPtr refresh_term_rec(const TermPtr& t, RefreshEnv& env, bool binding) {
    switch (t->kind) {
        case Term::Kind::Unit:
            return t;
        case Term::Kind::Var: {
            if (binding) {
                std::uint64_t nu = fresh_uid();
                env.term_map[t->uid] = nu;
                return m_var(t->name, nu);
            }
            auto it = env.term_map.find(t->uid);
            return it == env.term_map.end() ? t : m_var(t->name, it->second);
        }
        case Term::Kind::InL:
            return m_inl(refresh_term_rec(t->t1, env, binding));
        case Term::Kind::InR:
            return m_inr(refresh_term_rec(t->t1, env, binding));
        case Term::Kind::Fold:
            return m_fold(refresh_term_rec(t->t1, env, binding));
        case Term::Kind::Pair:
            return m_pair(refresh_term_rec(t->t1, env, binding),
                          refresh_term_rec(t->t2, env, binding));
        case Term::Kind::App:
            return m_app(refresh_iso_rec(t->iso, env), refresh_term_rec(t->t1, env, false));
        case Term::Kind::Let: {
            TermPtr bound = refresh_term_rec(t->t1, env, false);
            PatternPtr p = refresh_pattern(t->pat, env);
            TermPtr body = refresh_term_rec(t->t2, env, false);
            return m_let(std::move(p), std::move(bound), std::move(body));
        }
    }
    return t;
}

IsoPtr refresh_iso_rec(const IsoPtr& w, RefreshEnv& env) {
    switch (w->kind) {
        case Iso::Kind::Var: {
            auto it = env.iso_map.find(w->uid);
            if (it == env.iso_map.end()) return w;
            auto out = std::make_shared<Iso>(*w);
            out->uid = it->second;
            return out;
        }
        case Iso::Kind::Fix:
        case Iso::Kind::NFix:
        case Iso::Kind::Lam: {
            auto out = std::make_shared<Iso>(*w);
            out->uid = fresh_uid();
            env.iso_map[w->uid] = out->uid;
            out->body = refresh_iso_rec(w->body, env);
            return out;
        }
        case Iso::Kind::App: {
            auto out = std::make_shared<Iso>(*w);
            out->f = refresh_iso_rec(w->f, env);
            out->g = refresh_iso_rec(w->g, env);
            return out;
        }
        case Iso::Kind::Empty:
            return w;
        case Iso::Kind::Clauses: {
            auto out = std::make_shared<Iso>(*w);
            out->clauses.clear();
            for (const auto& c : w->clauses) {
                TermPtr lhs = refresh_term_rec(c.lhs, env, /*binding=*/true);
                TermPtr rhs = refresh_term_rec(c.rhs, env, /*binding=*/false);
                out->clauses.push_back(Clause{std::move(lhs), std::move(rhs)});
            }
            return out;
        }
    }
    return w;
}

}  // namespace

IsoPtr refresh_iso(const IsoPtr& w) {
    RefreshEnv env;
    return refresh_iso_rec(w, env);
}

}  // namespace reviso
