#include "reviso/rtm.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "reviso/stdlib_isos.hpp"

namespace reviso {

// ============================================================================
// Parsing and validation
// ============================================================================

std::optional<std::size_t> RTMachine::symbol_index(const std::string& name) const {
    for (std::size_t i = 0; i < symbols.size(); ++i)
        if (symbols[i] == name) return i;
    return std::nullopt;
}

std::optional<std::size_t> RTMachine::state_index(const std::string& name) const {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == name) return i;
    return std::nullopt;
}

namespace {

std::vector<std::string> tokens_of(std::string line) {
    auto cut = line.find('#');
    if (cut != std::string::npos) line.erase(cut);
    cut = line.find("--");
    if (cut != std::string::npos) line.erase(cut);
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

std::string rule_text(const RTMachine& m, const RtmRule& r) {
    std::string act;
    switch (r.act) {
        case RtmRule::Act::Rewrite:
            act = m.symbols[r.read] + "/" + m.symbols[r.write];
            break;
        case RtmRule::Act::Left: act = "left"; break;
        case RtmRule::Act::Stay: act = "stay"; break;
        case RtmRule::Act::Right: act = "right"; break;
    }
    return "rule " + m.states[r.from] + " " + act + " " + m.states[r.to] +
           " (line " + std::to_string(r.line) + ")";
}

}  // namespace

void validate_rtm(const RTMachine& m) {
    if (m.symbols.empty()) throw RtmError("machine has no symbols");
    if (m.states.empty()) throw RtmError("machine has no states");
    for (const auto& r : m.rules) {
        if (r.from >= m.states.size() || r.to >= m.states.size() ||
            (r.act == RtmRule::Act::Rewrite &&
             (r.read >= m.symbols.size() || r.write >= m.symbols.size())))
            throw RtmError("rule references an unknown state or symbol", r.line);
        if (r.from == m.final)
            throw RtmError("transition out of the final state: " + rule_text(m, r), r.line);
        if (r.to == m.initial)
            throw RtmError("transition into the initial state: " + rule_text(m, r), r.line);
    }
    for (std::size_t i = 0; i < m.rules.size(); ++i) {
        for (std::size_t j = i + 1; j < m.rules.size(); ++j) {
            const RtmRule& a = m.rules[i];
            const RtmRule& b = m.rules[j];
            if (a.from == b.from &&
                !(a.act == RtmRule::Act::Rewrite && b.act == RtmRule::Act::Rewrite &&
                  a.read != b.read))
                throw RtmError("not forward deterministic: " + rule_text(m, a) +
                                   " clashes with " + rule_text(m, b),
                               b.line);
            if (a.to == b.to &&
                !(a.act == RtmRule::Act::Rewrite && b.act == RtmRule::Act::Rewrite &&
                  a.write != b.write))
                throw RtmError("not backward deterministic: " + rule_text(m, a) +
                                   " clashes with " + rule_text(m, b),
                               b.line);
        }
    }
}

RTMachine parse_rtm(const std::string& text) {
    RTMachine m;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::vector<std::string> pending_input;
    bool has_input = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokens_of(line);
        if (toks.empty()) continue;
        const std::string& head = toks[0];
        if (head == "symbols:") {
            if (!m.symbols.empty()) throw RtmError("duplicate symbols: line", lineno);
            m.symbols.assign(toks.begin() + 1, toks.end());
            if (m.symbols.empty()) throw RtmError("symbols: needs at least the blank", lineno);
        } else if (head == "states:") {
            if (!m.states.empty()) throw RtmError("duplicate states: line", lineno);
            m.states.assign(toks.begin() + 1, toks.end());
            if (m.states.empty()) throw RtmError("states: needs at least one state", lineno);
            m.initial = 0;
            m.final = m.states.size() - 1;
        } else if (head == "rule") {
            if (toks.size() != 4) throw RtmError("rule needs: rule FROM ACTION TO", lineno);
            RtmRule r;
            r.line = lineno;
            auto from = m.state_index(toks[1]);
            auto to = m.state_index(toks[3]);
            if (!from || !to)
                throw RtmError("unknown state in rule (declare states: first)", lineno);
            r.from = *from;
            r.to = *to;
            const std::string& act = toks[2];
            if (act == "left") {
                r.act = RtmRule::Act::Left;
            } else if (act == "right") {
                r.act = RtmRule::Act::Right;
            } else if (act == "stay") {
                r.act = RtmRule::Act::Stay;
            } else {
                auto slash = act.find('/');
                if (slash == std::string::npos)
                    throw RtmError("bad action '" + act + "' (s/s', left, right, stay)", lineno);
                auto rd = m.symbol_index(act.substr(0, slash));
                auto wr = m.symbol_index(act.substr(slash + 1));
                if (!rd || !wr) throw RtmError("unknown symbol in rewrite rule", lineno);
                r.act = RtmRule::Act::Rewrite;
                r.read = *rd;
                r.write = *wr;
            }
            m.rules.push_back(r);
        } else if (head == "input:") {
            has_input = true;
            pending_input.assign(toks.begin() + 1, toks.end());
        } else {
            throw RtmError("unknown directive '" + head + "'", lineno);
        }
    }
    if (has_input) {
        std::vector<std::size_t> tape;
        for (const auto& s : pending_input) {
            auto i = m.symbol_index(s);
            if (!i) throw RtmError("input: uses unknown symbol '" + s + "'");
            tape.push_back(*i);
        }
        m.sample_input = std::move(tape);
    }
    validate_rtm(m);
    return m;
}

// ============================================================================
// Oracle simulator
// ============================================================================

std::optional<Configuration> rtm_step(const RTMachine& m, const Configuration& c) {
    for (const auto& r : m.rules) {
        if (r.from != c.state) continue;
        if (r.act == RtmRule::Act::Rewrite && r.read != c.scanned) continue;
        Configuration n = c;
        n.state = r.to;
        switch (r.act) {
            case RtmRule::Act::Rewrite:
                n.scanned = r.write;
                break;
            case RtmRule::Act::Stay:
                break;
            case RtmRule::Act::Right:
                n.left.insert(n.left.begin(), c.scanned);
                if (n.right.empty()) {
                    n.scanned = m.blank();  // eps behaves as blanks
                } else {
                    n.scanned = n.right.front();
                    n.right.erase(n.right.begin());
                }
                break;
            case RtmRule::Act::Left:
                n.right.insert(n.right.begin(), c.scanned);
                if (n.left.empty()) {
                    n.scanned = m.blank();
                } else {
                    n.scanned = n.left.front();
                    n.left.erase(n.left.begin());
                }
                break;
        }
        return n;
    }
    return std::nullopt;
}

RtmRunResult rtm_run(const RTMachine& m, const std::vector<std::size_t>& input,
                     std::uint64_t max_steps) {
    Configuration c{m.initial, {}, m.blank(), input};
    std::uint64_t steps = 0;
    while (c.state != m.final) {
        if (steps >= max_steps)
            return {RtmRunResult::Status::OutOfSteps, {}, steps, c};
        auto n = rtm_step(m, c);
        if (!n) return {RtmRunResult::Status::Stuck, {}, steps, c};
        c = std::move(*n);
        ++steps;
    }
    // Standardness up to the blanks materialized by the eps-extension.
    auto all_blank = [&](const std::vector<std::size_t>& t) {
        return std::all_of(t.begin(), t.end(),
                           [&](std::size_t s) { return s == m.blank(); });
    };
    std::vector<std::size_t> out = c.right;
    while (!out.empty() && out.back() == m.blank()) out.pop_back();
    bool standard = all_blank(c.left) && c.scanned == m.blank() &&
                    std::find(out.begin(), out.end(), m.blank()) == out.end();
    if (!standard) return {RtmRunResult::Status::NonStandardHalt, {}, steps, c};
    return {RtmRunResult::Status::Ok, std::move(out), steps, c};
}

RTMachine rtm_inverse(const RTMachine& m) {
    RTMachine inv = m;
    inv.initial = m.final;
    inv.final = m.initial;
    inv.rules.clear();
    for (const auto& r : m.rules) {
        RtmRule q = r;
        q.from = r.to;
        q.to = r.from;
        switch (r.act) {
            case RtmRule::Act::Rewrite:
                q.read = r.write;
                q.write = r.read;
                break;
            case RtmRule::Act::Left:
                q.act = RtmRule::Act::Right;
                break;
            case RtmRule::Act::Right:
                q.act = RtmRule::Act::Left;
                break;
            case RtmRule::Act::Stay:
                break;
        }
        inv.rules.push_back(q);
    }
    validate_rtm(inv);
    return inv;
}

// ============================================================================
// Configuration encoding
// ============================================================================

TypePtr rtm_state_type(const RTMachine& m) { return t_unit_sum(m.states.size()); }
TypePtr rtm_symbol_type(const RTMachine& m) { return t_unit_sum(m.symbols.size()); }

TypePtr rtm_config_type(const RTMachine& m) {
    TypePtr sig = rtm_symbol_type(m);
    TypePtr ls = t_list(sig);
    return t_prod(rtm_state_type(m), t_prod(ls, t_prod(sig, ls)));
}

namespace {

TermPtr encode_tape(const RTMachine& m, const std::vector<std::size_t>& tape) {
    std::vector<TermPtr> elems;
    elems.reserve(tape.size());
    for (std::size_t s : tape) elems.push_back(m_inj(s, m.symbols.size()));
    return m_list(elems);
}

std::optional<std::vector<std::size_t>> decode_tape(const RTMachine& m, const TermPtr& v) {
    auto elems = as_list(v);
    if (!elems) return std::nullopt;
    std::vector<std::size_t> out;
    for (const auto& e : *elems) {
        auto i = as_inj(e, m.symbols.size());
        if (!i) return std::nullopt;
        out.push_back(*i);
    }
    return out;
}

}  // namespace

TermPtr encode_config(const RTMachine& m, const Configuration& c) {
    return m_pair(m_inj(c.state, m.states.size()),
                  m_pair(encode_tape(m, c.left),
                         m_pair(m_inj(c.scanned, m.symbols.size()),
                                encode_tape(m, c.right))));
}

std::optional<Configuration> decode_config(const RTMachine& m, const TermPtr& v) {
    if (v->kind != Term::Kind::Pair || v->t2->kind != Term::Kind::Pair ||
        v->t2->t2->kind != Term::Kind::Pair)
        return std::nullopt;
    auto q = as_inj(v->t1, m.states.size());
    auto l = decode_tape(m, v->t2->t1);
    auto s = as_inj(v->t2->t2->t1, m.symbols.size());
    auto r = decode_tape(m, v->t2->t2->t2);
    if (!q || !l || !s || !r) return std::nullopt;
    return Configuration{*q, std::move(*l), *s, std::move(*r)};
}

std::vector<std::size_t> parse_tape(const RTMachine& m, const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> toks;
    std::string w;
    while (in >> w) toks.push_back(w);
    std::vector<std::size_t> tape;
    if (toks.size() == 1 && !m.symbol_index(toks[0])) {
        // Single-token form: each character names a symbol.
        for (char ch : toks[0]) {
            auto i = m.symbol_index(std::string(1, ch));
            if (!i) throw RtmError("unknown tape symbol '" + std::string(1, ch) + "'");
            tape.push_back(*i);
        }
        return tape;
    }
    for (const auto& t : toks) {
        auto i = m.symbol_index(t);
        if (!i) throw RtmError("unknown tape symbol '" + t + "'");
        tape.push_back(*i);
    }
    return tape;
}

std::string show_tape(const RTMachine& m, const std::vector<std::size_t>& tape) {
    bool chars = std::all_of(m.symbols.begin(), m.symbols.end(),
                             [](const std::string& s) { return s.size() == 1; });
    std::string out;
    for (std::size_t i = 0; i < tape.size(); ++i) {
        if (!chars && i) out += ' ';
        out += m.symbols[tape[i]];
    }
    return out;
}

// ============================================================================
// Compilation
// ============================================================================

namespace {

TermPtr V(const std::string& name) { return m_var(name, fresh_uid()); }
PatternPtr P(const TermPtr& a, const TermPtr& b) {
    return p_pair(p_var(a->name, a->uid), p_var(b->name, b->uid));
}

IsoPtr compile(const RTMachine& m, bool flagged) {
    std::size_t nq = m.states.size();
    std::size_t ns = m.symbols.size();
    TypePtr sig = rtm_symbol_type(m);
    TypePtr conf = rtm_config_type(m);
    IsoTypePtr ann =
        it_ground(conf, flagged ? t_prod(conf, t_bool()) : conf);
    IsoPtr gr = stdlib_isos::growth(sig, m_inj(m.blank(), ns));

    std::vector<Clause> cs;
    for (const auto& rule : m.rules) {
        TermPtr xs = V("xs"), ys = V("ys"), l = V("l"), r = V("r");
        TermPtr q = m_inj(rule.from, nq);
        TermPtr q2 = m_inj(rule.to, nq);
        TermPtr lhs, core;
        switch (rule.act) {
            case RtmRule::Act::Rewrite:
                lhs = m_pair(q, m_pair(xs, m_pair(m_inj(rule.read, ns), ys)));
                core = m_pair(q2, m_pair(l, m_pair(m_inj(rule.write, ns), r)));
                break;
            case RtmRule::Act::Right: {
                TermPtr z = V("z"), y = V("y");
                lhs = m_pair(q, m_pair(xs, m_pair(z, m_cons(y, ys))));
                core = m_pair(q2, m_pair(m_cons(z, l), m_pair(y, r)));
                break;
            }
            case RtmRule::Act::Left: {
                TermPtr z = V("z"), x = V("x");
                lhs = m_pair(q, m_pair(m_cons(x, xs), m_pair(z, ys)));
                core = m_pair(q2, m_pair(l, m_pair(x, m_cons(z, r))));
                break;
            }
            case RtmRule::Act::Stay: {
                TermPtr z = V("z");
                lhs = m_pair(q, m_pair(xs, m_pair(z, ys)));
                core = m_pair(q2, m_pair(l, m_pair(z, r)));
                break;
            }
        }
        if (flagged)
            core = m_pair(core, rule.to == m.final ? m_ff() : m_tt());
        TermPtr rhs = m_let(P(l, r), m_app(gr, m_pair(xs, ys)), core);
        cs.push_back(Clause{lhs, rhs});
    }
    return i_clauses(std::move(cs), ann);
}

}  // namespace

IsoPtr compile_rtm(const RTMachine& m) { return compile(m, false); }
IsoPtr compile_rtm_flagged(const RTMachine& m) { return compile(m, true); }

IsoPtr pipeline(const RTMachine& m) {
    TypePtr conf = rtm_config_type(m);
    TypePtr sig = rtm_symbol_type(m);
    TypePtr garbage =
        t_prod(t_nat(), t_prod(t_nat(), t_prod(t_nat(), t_list(sig))));
    IsoPtr clean =
        stdlib_isos::clean_up(m.symbols.size(), m.blank(), rtm_state_type(m));

    auto half = [&](const RTMachine& mm) {
        IsoPtr looped = i_app(stdlib_isos::iterator_iso(conf), compile_rtm_flagged(mm));
        IsoTypePtr ann = it_ground(conf, t_prod(conf, garbage));
        TermPtr x = V("x"), y = V("y"), z = V("z");
        TermPtr body = m_let(p_var(z->name, z->uid), m_app(clean, y), z);
        body = m_let(p_var(y->name, y->uid), m_app(looped, x), body);
        return std::make_pair(i_clauses({Clause{x, body}}, ann), ann);
    };
    auto [fwd, fwd_t] = half(m);
    auto [bwd, bwd_t] = half(rtm_inverse(m));
    return stdlib_isos::garbage_removal(fwd, fwd_t, bwd, bwd_t);
}

}  // namespace reviso
