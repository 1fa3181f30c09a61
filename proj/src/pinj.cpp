#include "reviso/pinj.hpp"

#include <atomic>
#include <mutex>
#include <set>

#include "reviso/eval.hpp"
#include "reviso/pretty.hpp"

namespace reviso {

// ============================================================================
// Universes
// ============================================================================

std::optional<std::size_t> ValueUniverse::ordinal(const TermPtr& v) const {
    auto it = index.find(print_term(v));
    if (it == index.end()) return std::nullopt;
    return it->second;
}

namespace {

std::vector<TermPtr> enum_values(const TypePtr& a, int depth) {
    switch (a->kind) {
        case Type::Kind::Unit:
            return {m_unit()};
        case Type::Kind::Sum: {
            std::vector<TermPtr> out;
            for (const auto& v : enum_values(a->lhs, depth)) out.push_back(m_inl(v));
            for (const auto& v : enum_values(a->rhs, depth)) out.push_back(m_inr(v));
            return out;
        }
        case Type::Kind::Prod: {
            std::vector<TermPtr> out;
            auto ls = enum_values(a->lhs, depth);
            auto rs = enum_values(a->rhs, depth);
            for (const auto& l : ls)
                for (const auto& r : rs) out.push_back(m_pair(l, r));
            return out;
        }
        case Type::Kind::Mu: {
            if (depth <= 0) return {};
            TypePtr unfolded = subst_type(a->body, a->name, a);
            std::vector<TermPtr> out;
            for (const auto& v : enum_values(unfolded, depth - 1)) out.push_back(m_fold(v));
            return out;
        }
        case Type::Kind::Var:
            break;
    }
    throw std::runtime_error("cannot enumerate a non-closed type");
}

}  // namespace

UniversePtr enumerate(const TypePtr& a, int depth) {
    static std::mutex mu;
    static std::map<std::pair<std::string, int>, UniversePtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(type_key(a), depth);
    auto hit = cache.find(key);
    if (hit != cache.end()) return hit->second;
    auto u = std::make_shared<ValueUniverse>();
    u->type = a;
    u->depth = depth;
    u->values = enum_values(a, depth);
    for (std::size_t i = 0; i < u->values.size(); ++i)
        u->index.emplace(print_term(u->values[i]), i);
    cache.emplace(key, u);
    return u;
}

// ============================================================================
// Partial injections
// ============================================================================

std::optional<std::size_t> PartialInjection::apply(std::size_t x) const {
    auto it = fwd_.find(x);
    if (it == fwd_.end()) return std::nullopt;
    return it->second;
}

void PartialInjection::insert(std::size_t x, std::size_t y) {
    auto f = fwd_.find(x);
    if (f != fwd_.end()) {
        if (f->second == y) return;
        throw IncompatibleJoin("join conflict: one input mapped to two outputs");
    }
    auto b = bwd_.find(y);
    if (b != bwd_.end())
        throw IncompatibleJoin("join conflict: two inputs mapped to one output");
    fwd_.emplace(x, y);
    bwd_.emplace(y, x);
}

PartialInjection PartialInjection::inverse() const {
    PartialInjection out(cod_, dom_);
    for (const auto& [x, y] : fwd_) out.insert(y, x);
    return out;
}

PartialInjection PartialInjection::restriction() const {
    PartialInjection out(dom_, dom_);
    for (const auto& [x, y] : fwd_) {
        (void)y;
        out.insert(x, x);
    }
    return out;
}

PartialInjection PartialInjection::compose(const PartialInjection& g) const {
    PartialInjection out(g.dom_, cod_);
    for (const auto& [x, y] : g.fwd_) {
        auto z = apply(y);
        if (z) out.insert(x, *z);
    }
    return out;
}

PartialInjection PartialInjection::join(const PartialInjection& g) const {
    PartialInjection out = *this;
    for (const auto& [x, y] : g.fwd_) out.insert(x, y);
    return out;
}

bool PartialInjection::subset_of(const PartialInjection& g) const {
    for (const auto& [x, y] : fwd_) {
        auto z = g.apply(x);
        if (!z || *z != y) return false;
    }
    return true;
}

bool PartialInjection::operator==(const PartialInjection& g) const {
    return fwd_ == g.fwd_;
}

PartialInjection PartialInjection::zero(UniversePtr dom, UniversePtr cod) {
    return PartialInjection(std::move(dom), std::move(cod));
}

PartialInjection PartialInjection::identity(UniversePtr u) {
    PartialInjection out(u, u);
    for (std::size_t i = 0; i < u->values.size(); ++i) out.insert(i, i);
    return out;
}

namespace {
std::atomic<std::uint64_t> den_ids{1};
}

IsoDenotation::IsoDenotation(PartialInjection p)
    : ground(std::move(p)), id(den_ids.fetch_add(1)) {}
IsoDenotation::IsoDenotation(std::function<DenPtr(const DenPtr&)> f)
    : fn(std::move(f)), id(den_ids.fetch_add(1)) {}

// ============================================================================
// Finitization
// ============================================================================

namespace {

/// Carry a recorded node type over to the finitized copy.
IsoPtr keep_type(const IsoPtr& from, IsoPtr to, TypeTable* table) {
    if (table && to.get() != from.get()) {
        auto it = table->find(from.get());
        if (it != table->end()) table->emplace(to.get(), it->second);
    }
    return to;
}

}  // namespace

IsoPtr finitize(const IsoPtr& w, std::uint64_t n, TypeTable* table) {
    switch (w->kind) {
        case Iso::Kind::Var:
        case Iso::Kind::Empty:
            return w;
        case Iso::Kind::Fix:
            return keep_type(w, i_nfix(n, w->name, w->uid, finitize(w->body, n, table), w->ann),
                             table);
        case Iso::Kind::NFix:
            return keep_type(
                w, i_nfix(w->bound, w->name, w->uid, finitize(w->body, n, table), w->ann),
                table);
        case Iso::Kind::Lam:
            return keep_type(w, i_lam(w->name, w->uid, finitize(w->body, n, table), w->ann),
                             table);
        case Iso::Kind::App:
            return keep_type(w, i_app(finitize(w->f, n, table), finitize(w->g, n, table)),
                             table);
        case Iso::Kind::Clauses: {
            std::vector<Clause> cs;
            cs.reserve(w->clauses.size());
            for (const auto& c : w->clauses)
                cs.push_back(Clause{c.lhs, finitize_term(c.rhs, n, table)});
            return keep_type(w, i_clauses(std::move(cs), w->ann), table);
        }
    }
    return w;
}

TermPtr finitize_term(const TermPtr& t, std::uint64_t n, TypeTable* table) {
    switch (t->kind) {
        case Term::Kind::Unit:
        case Term::Kind::Var:
            return t;
        case Term::Kind::InL:
            return m_inl(finitize_term(t->t1, n, table));
        case Term::Kind::InR:
            return m_inr(finitize_term(t->t1, n, table));
        case Term::Kind::Fold:
            return m_fold(finitize_term(t->t1, n, table));
        case Term::Kind::Pair:
            return m_pair(finitize_term(t->t1, n, table), finitize_term(t->t2, n, table));
        case Term::Kind::App:
            return m_app(finitize(t->iso, n, table), finitize_term(t->t1, n, table));
        case Term::Kind::Let:
            return m_let(t->pat, finitize_term(t->t1, n, table),
                         finitize_term(t->t2, n, table));
    }
    return t;
}

// ============================================================================
// Interpretation
// ============================================================================

namespace {

void free_iso_vars_term(const TermPtr& t, std::set<std::uint64_t>& bound,
                        std::set<std::uint64_t>& free);

void free_iso_vars(const IsoPtr& w, std::set<std::uint64_t>& bound,
                   std::set<std::uint64_t>& free) {
    switch (w->kind) {
        case Iso::Kind::Var:
            if (!bound.count(w->uid)) free.insert(w->uid);
            return;
        case Iso::Kind::Empty:
            return;
        case Iso::Kind::Fix:
        case Iso::Kind::NFix:
        case Iso::Kind::Lam: {
            bool fresh = bound.insert(w->uid).second;
            free_iso_vars(w->body, bound, free);
            if (fresh) bound.erase(w->uid);
            return;
        }
        case Iso::Kind::App:
            free_iso_vars(w->f, bound, free);
            free_iso_vars(w->g, bound, free);
            return;
        case Iso::Kind::Clauses:
            for (const auto& c : w->clauses) free_iso_vars_term(c.rhs, bound, free);
            return;
    }
}

void free_iso_vars_term(const TermPtr& t, std::set<std::uint64_t>& bound,
                        std::set<std::uint64_t>& free) {
    switch (t->kind) {
        case Term::Kind::Unit:
        case Term::Kind::Var:
            return;
        case Term::Kind::InL:
        case Term::Kind::InR:
        case Term::Kind::Fold:
            free_iso_vars_term(t->t1, bound, free);
            return;
        case Term::Kind::Pair:
            free_iso_vars_term(t->t1, bound, free);
            free_iso_vars_term(t->t2, bound, free);
            return;
        case Term::Kind::App:
            free_iso_vars(t->iso, bound, free);
            free_iso_vars_term(t->t1, bound, free);
            return;
        case Term::Kind::Let:
            free_iso_vars_term(t->t1, bound, free);
            free_iso_vars_term(t->t2, bound, free);
            return;
    }
}

/// Substitution of closed values for term variables, used as the point
/// environment while interpreting clause bodies.
using Point = std::map<std::uint64_t, TermPtr>;

struct Interp {
    SemContext& ctx;
    std::map<const Iso*, DenPtr> closed_memo;
    std::map<const Iso*, bool> closed_flag;

    explicit Interp(SemContext& c) : ctx(c) {}

    bool is_closed(const IsoPtr& w) {
        auto hit = closed_flag.find(w.get());
        if (hit != closed_flag.end()) return hit->second;
        std::set<std::uint64_t> bound, free;
        free_iso_vars(w, bound, free);
        bool closed = free.empty();
        closed_flag.emplace(w.get(), closed);
        return closed;
    }

    IsoTypePtr type_of(const IsoPtr& w) {
        if (ctx.types) {
            auto it = ctx.types->find(w.get());
            if (it != ctx.types->end()) return it->second;
        }
        if (w->ann) return w->ann;
        throw std::runtime_error("semantics: iso node has no determinable type");
    }

    DenPtr zero_at(const IsoTypePtr& ty) {
        if (ty->arrow)
            throw std::runtime_error("semantics: fixpoint at arrow type unsupported");
        return std::make_shared<IsoDenotation>(PartialInjection::zero(
            enumerate(ty->a, ctx.depth), enumerate(ty->b, ctx.depth)));
    }

    DenPtr den_iso(const IsoEnv& env, const IsoPtr& w) {
        bool cacheable = w->kind != Iso::Kind::Var && is_closed(w);
        if (cacheable) {
            auto hit = closed_memo.find(w.get());
            if (hit != closed_memo.end()) return hit->second;
        }
        // Ground denotations of closed isos persist across calls: the
        // denotation of a checked closed iso is determined by its printed
        // form, its assigned type and the depth bound.
        std::string key;
        if (cacheable && w->kind != Iso::Kind::Lam) {
            if (IsoTypePtr ty = type_of_opt(w); ty && !ty->arrow) {
                key = print_iso(w) + "\x1f" + print_iso_type(ty) + "\x1f" +
                      std::to_string(ctx.depth);
                std::lock_guard<std::mutex> lock(global_memo_mutex());
                auto hit = global_memo().find(key);
                if (hit != global_memo().end()) {
                    closed_memo.emplace(w.get(), hit->second);
                    return hit->second;
                }
            }
        }
        DenPtr out = den_iso_raw(env, w);
        if (cacheable) {
            closed_memo.emplace(w.get(), out);
            if (!key.empty() && out->ground) {
                std::lock_guard<std::mutex> lock(global_memo_mutex());
                global_memo().emplace(std::move(key), out);
            }
        }
        return out;
    }

    IsoTypePtr type_of_opt(const IsoPtr& w) {
        if (ctx.types) {
            auto it = ctx.types->find(w.get());
            if (it != ctx.types->end()) return it->second;
        }
        return w->ann;
    }

    static std::map<std::string, DenPtr>& global_memo() {
        static std::map<std::string, DenPtr> memo;
        return memo;
    }
    static std::mutex& global_memo_mutex() {
        static std::mutex m;
        return m;
    }

    DenPtr den_iso_raw(const IsoEnv& env, const IsoPtr& w) {
        switch (w->kind) {
            case Iso::Kind::Var: {
                auto it = env.find(w->uid);
                if (it == env.end())
                    throw std::runtime_error("semantics: unbound iso variable " + w->name);
                return it->second;
            }
            case Iso::Kind::Empty:
                return zero_at(type_of(w));
            case Iso::Kind::Fix:
                throw std::logic_error("semantics: iso was not finitized");
            case Iso::Kind::NFix: {
                DenPtr cur = zero_at(type_of(w));
                for (std::uint64_t k = 0; k < w->bound; ++k) {
                    IsoEnv env2 = env;
                    env2[w->uid] = cur;
                    cur = den_iso(env2, w->body);
                }
                return cur;
            }
            case Iso::Kind::Lam: {
                IsoEnv captured = env;
                std::uint64_t uid = w->uid;
                IsoPtr body = w->body;
                return std::make_shared<IsoDenotation>(
                    [this, captured, uid, body](const DenPtr& arg) {
                        IsoEnv env2 = captured;
                        env2[uid] = arg;
                        return den_iso(env2, body);
                    });
            }
            case Iso::Kind::App: {
                DenPtr f = den_iso(env, w->f);
                DenPtr g = den_iso(env, w->g);
                if (!f->fn)
                    throw std::runtime_error("semantics: applying a ground denotation");
                return f->fn(g);
            }
            case Iso::Kind::Clauses: {
                IsoTypePtr ty = type_of(w);
                if (ty->arrow)
                    throw std::runtime_error("semantics: clause set at arrow type");
                UniversePtr dom = enumerate(ty->a, ctx.depth);
                UniversePtr cod = enumerate(ty->b, ctx.depth);
                PartialInjection acc = PartialInjection::zero(dom, cod);
                for (const auto& c : w->clauses) {
                    PartialInjection g = PartialInjection::zero(dom, cod);
                    for (std::size_t i = 0; i < dom->values.size(); ++i) {
                        auto sigma = match(c.lhs, dom->values[i]);
                        if (!sigma) continue;
                        auto r = den_term(env, *sigma, c.rhs);
                        if (!r) continue;
                        auto j = cod->ordinal(*r);
                        if (!j) continue;  // escapes the truncation: undefined
                        g.insert(i, *j);
                    }
                    acc = acc.join(g);
                }
                return std::make_shared<IsoDenotation>(std::move(acc));
            }
        }
        throw std::logic_error("semantics: unreachable iso kind");
    }

    std::optional<TermPtr> den_term(const IsoEnv& env, const Point& point,
                                    const TermPtr& t) {
        switch (t->kind) {
            case Term::Kind::Unit:
                return m_unit();
            case Term::Kind::Var: {
                auto it = point.find(t->uid);
                if (it == point.end())
                    throw std::runtime_error("semantics: unbound variable " + t->name);
                return it->second;
            }
            case Term::Kind::InL: {
                auto v = den_term(env, point, t->t1);
                if (!v) return std::nullopt;
                return m_inl(*v);
            }
            case Term::Kind::InR: {
                auto v = den_term(env, point, t->t1);
                if (!v) return std::nullopt;
                return m_inr(*v);
            }
            case Term::Kind::Fold: {
                auto v = den_term(env, point, t->t1);
                if (!v) return std::nullopt;
                return m_fold(*v);
            }
            case Term::Kind::Pair: {
                auto a = den_term(env, point, t->t1);
                if (!a) return std::nullopt;
                auto b = den_term(env, point, t->t2);
                if (!b) return std::nullopt;
                return m_pair(*a, *b);
            }
            case Term::Kind::App: {
                DenPtr w = den_iso(env, t->iso);
                if (!w->ground)
                    throw std::runtime_error("semantics: applying an arrow denotation to a term");
                auto arg = den_term(env, point, t->t1);
                if (!arg) return std::nullopt;
                auto i = w->ground->dom()->ordinal(*arg);
                if (!i) return std::nullopt;  // escapes the truncation
                auto j = w->ground->apply(*i);
                if (!j) return std::nullopt;
                return w->ground->cod()->values[*j];
            }
            case Term::Kind::Let: {
                auto v = den_term(env, point, t->t1);
                if (!v) return std::nullopt;
                auto extra = match_pattern(t->pat, *v);
                if (!extra) return std::nullopt;
                Point point2 = point;
                for (const auto& [uid, val] : *extra) point2[uid] = val;
                return den_term(env, point2, t->t2);
            }
        }
        throw std::logic_error("semantics: unreachable term kind");
    }
};

}  // namespace

DenPtr sem_iso(SemContext& ctx, const IsoEnv& env, const IsoPtr& w) {
    Interp in(ctx);
    return in.den_iso(env, w);
}

std::optional<TermPtr> sem_term(SemContext& ctx, const TermPtr& t, const TypePtr& a) {
    Interp in(ctx);
    auto v = in.den_term({}, {}, t);
    if (!v) return std::nullopt;
    if (!enumerate(a, ctx.depth)->ordinal(*v)) return std::nullopt;
    return v;
}

PartialInjection sem_iso_ground(const IsoPtr& w, std::uint64_t n, int depth,
                                const TypeTable* types) {
    TypeTable table = types ? *types : TypeTable{};
    IsoPtr fin = finitize(w, n, &table);
    SemContext ctx{depth, &table};
    DenPtr d = sem_iso(ctx, {}, fin);
    if (!d->ground)
        throw std::runtime_error("semantics: expected a ground iso");
    return *d->ground;
}

// ============================================================================
// Cross-validation against the evaluator
// ============================================================================

AdequacyResult check_adequacy(const TermPtr& t, const TypePtr& a, std::uint64_t fuel,
                              std::uint64_t unfold, int depth, const TypeTable* types) {
    EvalOutcome ev = eval(t, fuel);
    TypeTable table = types ? *types : TypeTable{};
    TermPtr fin = finitize_term(t, unfold, &table);
    SemContext ctx{depth, &table};
    std::optional<TermPtr> den;
    try {
        den = sem_term(ctx, fin, a);
    } catch (const IncompatibleJoin& e) {
        return {AdequacyResult::Verdict::Disagree, std::string("join failure: ") + e.what()};
    }
    switch (ev.kind) {
        case EvalOutcome::Kind::Value: {
            if (den && value_equal(*den, ev.term))
                return {AdequacyResult::Verdict::Agree, ""};
            if (!den) {
                // Depth or unfold budget may be binding; never a refutation.
                return {AdequacyResult::Verdict::Inconclusive,
                        "eval produced " + print_term(ev.term) +
                            " but the denotation is undefined at these budgets"};
            }
            return {AdequacyResult::Verdict::Disagree,
                    "eval produced " + print_term(ev.term) + " but the denotation is " +
                        print_term(*den)};
        }
        case EvalOutcome::Kind::Stuck:
            if (!den) return {AdequacyResult::Verdict::Agree, ""};
            return {AdequacyResult::Verdict::Disagree,
                    "eval is stuck (" + ev.reason + ") but the denotation is " +
                        print_term(*den)};
        case EvalOutcome::Kind::OutOfFuel:
            return {AdequacyResult::Verdict::Inconclusive, "out of fuel"};
    }
    return {AdequacyResult::Verdict::Inconclusive, ""};
}

bool check_soundness_step(const TermPtr& t, const TermPtr& t2, const TypePtr& a,
                          int depth) {
    SemContext ctx{depth, nullptr};
    auto d1 = sem_term(ctx, t, a);
    auto d2 = sem_term(ctx, t2, a);
    if (!d1 && !d2) return true;
    if (d1 && d2) return value_equal(*d1, *d2);
    return false;
}

}  // namespace reviso
