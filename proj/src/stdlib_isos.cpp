#include "reviso/stdlib_isos.hpp"

#include <cassert>
#include <map>
#include <mutex>
#include <string>

#include "reviso/eval.hpp"

namespace reviso {
namespace stdlib_isos {

namespace {

// ---- small construction helpers ---------------------------------------------

TermPtr V(const std::string& name) { return m_var(name, fresh_uid()); }

PatternPtr P(const TermPtr& v) { return p_var(v->name, v->uid); }
PatternPtr P(const TermPtr& a, const TermPtr& b) { return p_pair(P(a), P(b)); }
PatternPtr P(const TermPtr& a, const TermPtr& b, const TermPtr& c) {
    return p_pair(P(a), p_pair(P(b), P(c)));
}

TermPtr S(const TermPtr& n) { return m_fold(m_inr(n)); }
TermPtr Z() { return m_nat(0); }

/// let pat = w arg in body
TermPtr let_app(PatternPtr pat, IsoPtr w, TermPtr arg, TermPtr body) {
    return m_let(std::move(pat), m_app(std::move(w), std::move(arg)), std::move(body));
}

IsoTypePtr ground(TypePtr a, TypePtr b) { return it_ground(std::move(a), std::move(b)); }

/// Per-generator memo tables, keyed by the canonical type key.
class Memo {
  public:
    IsoPtr get_or(const std::string& key, IsoPtr (*gen)(const TypePtr&), const TypePtr& a) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = table_.find(key);
        if (it != table_.end()) return it->second;
        IsoPtr w = gen(a);
        table_.emplace(key, w);
        return w;
    }

  private:
    std::mutex mu_;
    std::map<std::string, IsoPtr> table_;
};

// ---- duplication --------------------------------------------------------------

using Env = std::map<std::string, IsoPtr>;  // type key -> bound iso variable

IsoPtr dup_gen(const TypePtr& a, const Env& env) {
    IsoTypePtr ann = ground(a, t_prod(a, a));
    switch (a->kind) {
        case Type::Kind::Unit:
            return i_clauses({Clause{m_unit(), m_pair(m_unit(), m_unit())}}, ann);
        case Type::Kind::Sum: {
            TermPtr x = V("x"), x1 = V("x1"), x2 = V("x2");
            TermPtr y = V("y"), y1 = V("y1"), y2 = V("y2");
            Clause cl{m_inl(x), let_app(P(x1, x2), dup_gen(a->lhs, env), x,
                                        m_pair(m_inl(x1), m_inl(x2)))};
            Clause cr{m_inr(y), let_app(P(y1, y2), dup_gen(a->rhs, env), y,
                                        m_pair(m_inr(y1), m_inr(y2)))};
            return i_clauses({cl, cr}, ann);
        }
        case Type::Kind::Prod: {
            TermPtr x = V("x"), y = V("y");
            TermPtr x1 = V("x1"), x2 = V("x2"), y1 = V("y1"), y2 = V("y2");
            TermPtr body = m_pair(m_pair(x1, y1), m_pair(x2, y2));
            body = let_app(P(y1, y2), dup_gen(a->rhs, env), y, body);
            body = let_app(P(x1, x2), dup_gen(a->lhs, env), x, body);
            return i_clauses({Clause{m_pair(x, y), body}}, ann);
        }
        case Type::Kind::Mu: {
            std::string key = type_key(a);
            auto hit = env.find(key);
            if (hit != env.end()) {
                TermPtr x = V("x"), x1 = V("x1"), x2 = V("x2");
                return i_clauses(
                    {Clause{x, let_app(P(x1, x2), hit->second, x, m_pair(x1, x2))}}, ann);
            }
            std::uint64_t uid = fresh_uid();
            Env env2 = env;
            env2[key] = i_var("phi", uid);
            TermPtr x = V("x"), x1 = V("x1"), x2 = V("x2");
            TypePtr unfolded = subst_type(a->body, a->name, a);
            TermPtr body = let_app(P(x1, x2), dup_gen(unfolded, env2), x,
                                   m_pair(m_fold(x1), m_fold(x2)));
            return i_fix("phi", uid, i_clauses({Clause{m_fold(x), body}}, ann), ann);
        }
        case Type::Kind::Var:
            break;
    }
    assert(false && "dup of a non-closed type");
    return nullptr;
}

IsoPtr dup_entry(const TypePtr& a) { return dup_gen(a, {}); }

// ---- list plumbing ----------------------------------------------------------------

IsoPtr len_gen(const TypePtr& a) {
    TypePtr la = t_list(a);
    IsoTypePtr ann = ground(la, t_prod(la, t_nat()));
    std::uint64_t uid = fresh_uid();
    TermPtr h = V("h"), t = V("t"), t2 = V("t2"), n = V("n");
    Clause nil{m_list({}), m_pair(m_list({}), Z())};
    Clause cons{m_cons(h, t),
                let_app(P(t2, n), i_var("phi", uid), t, m_pair(m_cons(h, t2), S(n)))};
    return i_fix("phi", uid, i_clauses({nil, cons}, ann), ann);
}

IsoPtr snoc_prime_gen(const TypePtr& a) {
    TypePtr la = t_list(a);
    TypePtr shape = t_prod(la, t_prod(a, t_nat()));
    IsoTypePtr ann = ground(shape, shape);
    std::uint64_t uid = fresh_uid();
    TermPtr x = V("x"), x1 = V("x1"), x2 = V("x2");
    Clause base{m_pair(m_list({}), m_pair(x, Z())),
                let_app(P(x1, x2), dup(a), x,
                        m_pair(m_list({x1}), m_pair(x2, Z())))};
    TermPtr h = V("h"), t = V("t"), y = V("y"), n = V("n");
    TermPtr t2 = V("t2"), y2 = V("y2"), n2 = V("n2");
    Clause step{m_pair(m_cons(h, t), m_pair(y, S(n))),
                let_app(P(t2, y2, n2), i_var("phi", uid), m_pair(t, m_pair(y, n)),
                        m_pair(m_cons(h, t2), m_pair(y2, S(n2))))};
    return i_fix("phi", uid, i_clauses({base, step}, ann), ann);
}

IsoPtr snoc_build(const TypePtr& a, const IsoPtr& len, const IsoPtr& snoc_prime) {
    TypePtr la = t_list(a);
    IsoTypePtr ann = ground(t_prod(la, a), t_prod(la, a));
    TermPtr x = V("x"), y = V("y");
    TermPtr x2 = V("x2"), n = V("n");
    TermPtr x3 = V("x3"), y2 = V("y2"), n2 = V("n2");
    TermPtr n3 = V("n3"), z = V("z");
    TermPtr body = m_pair(z, y2);
    body = let_app(P(z), invert_iso(len), m_pair(x3, n3), body);
    body = let_app(P(n3), succ_iso(), n2, body);
    body = let_app(P(x3, y2, n2), snoc_prime, m_pair(x2, m_pair(y, n)), body);
    body = let_app(P(x2, n), len, x, body);
    return i_clauses({Clause{m_pair(x, y), body}}, ann);
}

IsoPtr concat_gen(const TypePtr& a) {
    TypePtr la = t_list(a);
    IsoTypePtr ann = ground(t_prod(la, la), t_prod(la, t_nat()));
    std::uint64_t uid = fresh_uid();
    TermPtr x = V("x");
    Clause nil{m_pair(m_list({}), x), m_pair(x, Z())};
    TermPtr h = V("h"), t = V("t"), x2 = V("x2"), y = V("y"), n = V("n");
    Clause cons{m_pair(m_cons(h, t), x2),
                let_app(P(y, n), i_var("f", uid), m_pair(t, x2),
                        m_pair(m_cons(h, y), S(n)))};
    return i_fix("f", uid, i_clauses({nil, cons}, ann), ann);
}

IsoPtr cons_gen(const TypePtr& a) {
    TypePtr la = t_list(a);
    TermPtr h = V("h"), t = V("t");
    return i_clauses({Clause{m_pair(h, t), m_cons(h, t)}}, ground(t_prod(a, la), la));
}

IsoPtr rev_aux_gen(const TypePtr& a) {
    TypePtr la = t_list(a);
    TypePtr shape = t_prod(la, la);
    IsoTypePtr ann = ground(shape, shape);
    std::uint64_t uid = fresh_uid();
    TermPtr y = V("y");
    Clause nil{m_pair(m_list({}), y), m_pair(m_list({}), y)};
    TermPtr h = V("h"), t = V("t"), y2 = V("y2");
    TermPtr h1 = V("h1"), h2 = V("h2"), c = V("c"), t1 = V("t1"), t2 = V("t2");
    TermPtr body = m_pair(m_cons(h1, t1), t2);
    body = let_app(P(t1, t2), i_var("phi", uid), m_pair(t, c), body);
    body = let_app(P(c), cons_iso(a), m_pair(h2, y2), body);
    body = let_app(P(h1, h2), dup(a), h, body);
    Clause cons{m_pair(m_cons(h, t), y2), body};
    return i_fix("phi", uid, i_clauses({nil, cons}, ann), ann);
}

IsoPtr rev_gen(const TypePtr& a) {
    TypePtr la = t_list(a);
    IsoTypePtr ann = ground(la, t_prod(la, la));
    IsoPtr erase_nil = erase_const(m_list({}), la, la);
    TermPtr x = V("x"), x1 = V("x1"), x2 = V("x2"), t1 = V("t1"), t2 = V("t2");
    TermPtr body = m_pair(t1, t2);
    body = let_app(P(t1, t2), rev_aux_gen(a), m_pair(x1, x2), body);
    body = let_app(P(x1, x2), invert_iso(erase_nil), x, body);
    return i_clauses({Clause{x, body}}, ann);
}

// ---- alphabet helpers ------------------------------------------------------------

TermPtr letter(std::size_t i, std::size_t n) { return m_inj(i, n); }

}  // namespace

// ============================================================================
// Public generators
// ============================================================================

IsoPtr dup(const TypePtr& a) {
    static Memo memo;
    return memo.get_or(type_key(a), dup_entry, a);
}

IsoPtr erase_const(const TermPtr& v, const TypePtr& a, const TypePtr& s) {
    assert(is_closed_value(v));
    TermPtr x = V("x");
    return i_clauses({Clause{m_pair(x, v), x}}, ground(t_prod(a, s), a));
}

IsoPtr cons_iso(const TypePtr& a) {
    static Memo memo;
    return memo.get_or(type_key(a), cons_gen, a);
}

IsoPtr succ_iso() {
    static const IsoPtr w = [] {
        TermPtr n = V("n");
        return i_clauses({Clause{n, S(n)}}, ground(t_nat(), t_nat()));
    }();
    return w;
}

SnocFamily snoc_family(const TypePtr& a) {
    static std::mutex mu;
    static std::map<std::string, SnocFamily> table;
    std::lock_guard<std::mutex> lock(mu);
    std::string key = type_key(a);
    auto it = table.find(key);
    if (it != table.end()) return it->second;
    SnocFamily fam;
    fam.len = len_gen(a);
    fam.snoc_prime = snoc_prime_gen(a);
    fam.snoc = snoc_build(a, fam.len, fam.snoc_prime);
    table.emplace(key, fam);
    return fam;
}

IsoPtr growth(const TypePtr& sigma, const TermPtr& blank) {
    TypePtr ls = t_list(sigma);
    IsoTypePtr ann = ground(t_prod(ls, ls), t_prod(ls, ls));
    IsoPtr erase_b = erase_const(blank, ls, sigma);
    IsoPtr snoc = snoc_family(sigma).snoc;
    TermPtr l = V("l"), r = V("r");
    TermPtr l0 = V("l0"), bl = V("bl"), l1 = V("l1"), b1 = V("b1"), l2 = V("l2");
    TermPtr r0 = V("r0"), br = V("br"), r1 = V("r1"), b2 = V("b2"), r2 = V("r2");
    TermPtr body = m_pair(l2, r2);
    body = let_app(P(r2), erase_b, m_pair(r1, b2), body);
    body = let_app(P(r1, b2), snoc, m_pair(r0, br), body);
    body = let_app(P(r0, br), invert_iso(erase_b), r, body);
    body = let_app(P(l2), erase_b, m_pair(l1, b1), body);
    body = let_app(P(l1, b1), snoc, m_pair(l0, bl), body);
    body = let_app(P(l0, bl), invert_iso(erase_b), l, body);
    return i_clauses({Clause{m_pair(l, r), body}}, ann);
}

IsoPtr iterator_iso(const TypePtr& a) {
    TypePtr flagged = t_prod(a, t_bool());
    TypePtr counted = t_prod(a, t_nat());
    IsoTypePtr inner_ann = ground(a, counted);
    std::uint64_t psi = fresh_uid(), phi = fresh_uid();

    TermPtr y = V("y"), z = V("z"), n = V("n"), y2 = V("y2");
    Clause more{m_pair(y, m_tt()),
                let_app(P(z, n), i_var("phi", phi), y, m_pair(z, S(n)))};
    Clause done{m_pair(y2, m_ff()), m_pair(y2, Z())};
    IsoPtr aux = i_clauses({more, done}, ground(flagged, counted));

    TermPtr x = V("x"), y3 = V("y3"), z2 = V("z2");
    TermPtr body = z2;
    body = let_app(P(z2), aux, y3, body);
    body = let_app(P(y3), i_var("psi", psi), x, body);
    IsoPtr loop = i_fix("phi", phi, i_clauses({Clause{x, body}}, inner_ann), inner_ann);
    return i_lam("psi", psi, loop, it_arrow(ground(a, flagged), inner_ann));
}

IsoPtr rm_blank(std::size_t alphabet_size, std::size_t blank_index) {
    TypePtr sigma = t_unit_sum(alphabet_size);
    TypePtr ls = t_list(sigma);
    IsoTypePtr ann = ground(ls, t_prod(ls, t_nat()));
    std::uint64_t uid = fresh_uid();
    std::vector<Clause> cs;
    cs.push_back(Clause{m_list({}), m_pair(m_list({}), Z())});
    TermPtr t = V("t"), t2 = V("t2"), n = V("n");
    cs.push_back(Clause{m_cons(letter(blank_index, alphabet_size), t),
                        let_app(P(t2, n), i_var("phi", uid), t, m_pair(t2, S(n)))});
    for (std::size_t i = 0; i < alphabet_size; ++i) {
        if (i == blank_index) continue;
        TermPtr tl = V("t");
        cs.push_back(Clause{m_cons(letter(i, alphabet_size), tl),
                            m_pair(m_cons(letter(i, alphabet_size), tl), Z())});
    }
    return i_fix("phi", uid, i_clauses(std::move(cs), ann), ann);
}

IsoPtr rev_iso(const TypePtr& a) {
    static Memo memo;
    return memo.get_or(type_key(a), rev_gen, a);
}

IsoPtr clean_up(std::size_t alphabet_size, std::size_t blank_index, const TypePtr& qtype) {
    TypePtr sigma = t_unit_sum(alphabet_size);
    TypePtr ls = t_list(sigma);
    TypePtr conf = t_prod(qtype, t_prod(ls, t_prod(sigma, ls)));
    TypePtr garbage = t_prod(t_nat(), t_prod(t_nat(), t_prod(t_nat(), ls)));
    IsoTypePtr ann = ground(t_prod(conf, t_nat()), t_prod(conf, garbage));
    IsoPtr rmb = rm_blank(alphabet_size, blank_index);
    IsoPtr rv = rev_iso(sigma);

    TermPtr x = V("x"), l = V("l"), y = V("y"), r = V("r"), n = V("n");
    TermPtr l1 = V("l1"), n1 = V("n1"), ro = V("ro"), rr = V("rr"), r1 = V("r1"), n2 = V("n2");
    TermPtr lhs = m_pair(m_pair(x, m_pair(l, m_pair(y, r))), n);
    TermPtr result = m_pair(m_pair(x, m_pair(l1, m_pair(y, r1))),
                            m_pair(n, m_pair(n1, m_pair(n2, ro))));
    TermPtr body = result;
    body = let_app(P(r1, n2), rmb, rr, body);
    body = let_app(P(ro, rr), rv, r, body);
    body = let_app(P(l1, n1), rmb, l, body);
    return i_clauses({Clause{lhs, body}}, ann);
}

IsoPtr garbage_removal(const IsoPtr& w, const IsoTypePtr& wt, const IsoPtr& w2,
                       const IsoTypePtr& w2t) {
    assert(!wt->arrow && !w2t->arrow && wt->b->kind == Type::Kind::Prod);
    (void)w2t;
    TypePtr a = wt->a;
    TypePtr b = wt->b->lhs;
    IsoTypePtr ann = ground(a, b);

    TermPtr x1 = V("x1"), x2 = V("x2"), y = V("y");
    TermPtr x3 = V("x3"), z = V("z"), x4 = V("x4");
    TermPtr z2 = V("z2"), y2 = V("y2"), z3 = V("z3"), z4 = V("z4");
    TermPtr body = z4;
    body = let_app(P(z4), invert_iso(w2), m_pair(z3, y2), body);
    body = let_app(P(z3), invert_iso(dup(a)), m_pair(z2, x4), body);
    body = let_app(P(z2, y2), w2, z, body);
    body = let_app(P(x4), invert_iso(w), m_pair(x3, y), body);
    body = let_app(P(x3, z), dup(b), x2, body);
    body = let_app(P(x2, y), w, x1, body);
    return i_clauses({Clause{x1, body}}, ann);
}

IsoPtr cantor_pairing() {
    static const IsoPtr cached = [] {
        TypePtr nn = t_prod(t_nat(), t_nat());
        TypePtr mid = t_sum(nn, t_unit());
        std::uint64_t phi = fresh_uid();

        TermPtr i = V("i"), j = V("j"), j2 = V("j2");
        std::vector<Clause> w1c;
        w1c.push_back(Clause{m_pair(S(i), j), m_inl(m_pair(i, S(j)))});
        w1c.push_back(Clause{m_pair(Z(), S(S(j2))), m_inl(m_pair(S(j2), Z()))});
        w1c.push_back(Clause{m_pair(Z(), S(Z())), m_inl(m_pair(Z(), Z()))});
        w1c.push_back(Clause{m_pair(Z(), Z()), m_inr(m_unit())});
        IsoPtr w1 = i_clauses(std::move(w1c), ground(nn, mid));

        TermPtr x = V("x"), y = V("y");
        Clause rec{m_inl(x), let_app(P(y), i_var("phi", phi), x, S(y))};
        Clause stop{m_inr(m_unit()), Z()};
        IsoPtr w2 = i_clauses({rec, stop}, ground(mid, t_nat()));

        IsoTypePtr ann = ground(nn, t_nat());
        TermPtr x2 = V("x2"), y2 = V("y2"), z = V("z");
        TermPtr body = z;
        body = let_app(P(z), w2, y2, body);
        body = let_app(P(y2), w1, x2, body);
        return i_fix("phi", phi, i_clauses({Clause{x2, body}}, ann), ann);
    }();
    return cached;
}

IsoPtr map_iso(const TypePtr& a, const TypePtr& b) {
    IsoTypePtr inner = ground(t_list(a), t_list(b));
    std::uint64_t psi = fresh_uid(), phi = fresh_uid();
    TermPtr h = V("h"), t = V("t"), h2 = V("h2"), t2 = V("t2");
    Clause nil{m_list({}), m_list({})};
    TermPtr body = m_cons(h2, t2);
    body = let_app(P(t2), i_var("phi", phi), t, body);
    body = let_app(P(h2), i_var("psi", psi), h, body);
    Clause cons{m_cons(h, t), body};
    IsoPtr loop = i_fix("phi", phi, i_clauses({nil, cons}, inner), inner);
    return i_lam("psi", psi, loop, it_arrow(ground(a, b), inner));
}

IsoPtr concat_iso(const TypePtr& a) {
    static Memo memo;
    return memo.get_or(type_key(a), concat_gen, a);
}

// ============================================================================
// Canonical encoder
// ============================================================================

TypePtr enc_type() {
    static const TypePtr enc =
        t_sum(t_bool(),
              t_sum(t_unit(), t_sum(t_unit(), t_sum(t_unit(), t_sum(t_unit(), t_nat())))));
    return enc;
}

TermPtr enc_tt() { return m_inl(m_tt()); }
TermPtr enc_ff() { return m_inl(m_ff()); }
TermPtr enc_s() { return m_inr(m_inl(m_unit())); }
TermPtr enc_dsum() { return m_inr(m_inr(m_inl(m_unit()))); }
TermPtr enc_dprod() { return m_inr(m_inr(m_inr(m_inl(m_unit())))); }
TermPtr enc_dmu() { return m_inr(m_inr(m_inr(m_inr(m_inl(m_unit()))))); }
TermPtr enc_num(const TermPtr& n) {
    return m_inr(m_inr(m_inr(m_inr(m_inr(n)))));
}

namespace {

IsoPtr encoder_gen(const TypePtr& a, Env& env) {
    TypePtr lenc = t_list(enc_type());
    IsoTypePtr ann = ground(a, lenc);
    switch (a->kind) {
        case Type::Kind::Unit:
            return i_clauses({Clause{m_unit(), m_list({enc_s()})}}, ann);
        case Type::Kind::Sum: {
            TermPtr x = V("x"), y = V("y"), x2 = V("x2"), y2 = V("y2");
            Clause cl{m_inl(x),
                      let_app(P(y), encoder_gen(a->lhs, env), x,
                              m_cons(enc_dsum(), m_cons(enc_ff(), y)))};
            Clause cr{m_inr(x2),
                      let_app(P(y2), encoder_gen(a->rhs, env), x2,
                              m_cons(enc_dsum(), m_cons(enc_tt(), y2)))};
            return i_clauses({cl, cr}, ann);
        }
        case Type::Kind::Prod: {
            TermPtr x = V("x"), y = V("y");
            TermPtr x2 = V("x2"), y2 = V("y2"), z = V("z"), n = V("n");
            TermPtr body = m_cons(enc_dprod(), m_cons(enc_num(n), z));
            body = let_app(P(z, n), concat_iso(enc_type()), m_pair(x2, y2), body);
            body = let_app(P(y2), encoder_gen(a->rhs, env), y, body);
            body = let_app(P(x2), encoder_gen(a->lhs, env), x, body);
            return i_clauses({Clause{m_pair(x, y), body}}, ann);
        }
        case Type::Kind::Mu: {
            std::string key = type_key(a);
            auto hit = env.find(key);
            if (hit != env.end()) return hit->second;
            std::uint64_t uid = fresh_uid();
            env[key] = i_var("phi", uid);
            TermPtr x = V("x"), y = V("y");
            TypePtr unfolded = subst_type(a->body, a->name, a);
            TermPtr body = let_app(P(y), encoder_gen(unfolded, env), x,
                                   m_cons(enc_dmu(), y));
            IsoPtr out =
                i_fix("phi", uid, i_clauses({Clause{m_fold(x), body}}, ann), ann);
            env.erase(key);
            return out;
        }
        case Type::Kind::Var:
            break;
    }
    assert(false && "encoder of a non-closed type");
    return nullptr;
}

IsoPtr encoder_entry(const TypePtr& a) {
    Env env;
    return encoder_gen(a, env);
}

}  // namespace

IsoPtr encoder(const TypePtr& a) {
    static Memo memo;
    return memo.get_or(type_key(a), encoder_entry, a);
}

}  // namespace stdlib_isos
}  // namespace reviso
