#include "reviso/pretty.hpp"

#include <sstream>

namespace reviso {

// ============================================================================
// Types
// ============================================================================

namespace {

// Precedence: 0 = sum/mu (lowest), 1 = prod, 2 = atom.
void print_type_rec(const TypePtr& t, int level, std::string& out) {
    // Builtin sugar first.
    if (type_equal(t, t_nat())) {
        out += "nat";
        return;
    }
    if (type_equal(t, t_bool())) {
        out += "bool";
        return;
    }
    if (auto elem = list_elem_type(t)) {
        out += "[";
        print_type_rec(*elem, 0, out);
        out += "]";
        return;
    }
    switch (t->kind) {
        case Type::Kind::Unit:
            out += "1";
            return;
        case Type::Kind::Var:
            out += t->name;
            return;
        case Type::Kind::Sum:
            if (level > 0) out += "(";
            print_type_rec(t->lhs, 1, out);
            out += " + ";
            print_type_rec(t->rhs, 0, out);
            if (level > 0) out += ")";
            return;
        case Type::Kind::Prod:
            if (level > 1) out += "(";
            print_type_rec(t->lhs, 2, out);
            out += " * ";
            print_type_rec(t->rhs, 1, out);
            if (level > 1) out += ")";
            return;
        case Type::Kind::Mu:
            if (level > 0) out += "(";
            out += "mu " + t->name + ". ";
            print_type_rec(t->body, 0, out);
            if (level > 0) out += ")";
            return;
    }
}

}  // namespace

std::string print_type(const TypePtr& t) {
    std::string out;
    print_type_rec(t, 0, out);
    return out;
}

std::string print_iso_type(const IsoTypePtr& t) {
    if (!t->arrow) return print_type(t->a) + " <-> " + print_type(t->b);
    std::string lhs = print_iso_type(t->from);
    if (t->from->arrow) lhs = "(" + lhs + ")";
    return lhs + " -> " + print_iso_type(t->to);
}

std::string print_pattern(const PatternPtr& p) {
    if (p->kind == Pattern::Kind::Var) return p->name;
    return "(" + print_pattern(p->fst) + ", " + print_pattern(p->snd) + ")";
}

// ============================================================================
// Terms
// ============================================================================

namespace {

// Precedence: 0 = let (lowest), 1 = cons, 2 = constructor application, 3 = atom.
void print_term_rec(const TermPtr& t, int level, std::string& out);
void print_iso_rec(const IsoPtr& w, bool atom, std::string& out);

/// Sugar attempts; return true when printed.
bool try_sugar(const TermPtr& t, std::string& out) {
    if (auto n = as_nat(t)) {
        out += std::to_string(*n);
        return true;
    }
    if (auto xs = as_list(t)) {
        out += "[";
        for (std::size_t i = 0; i < xs->size(); ++i) {
            if (i) out += ", ";
            print_term_rec((*xs)[i], 1, out);
        }
        out += "]";
        return true;
    }
    return false;
}

bool is_cons_cell(const TermPtr& t) {
    return t->kind == Term::Kind::Fold && t->t1->kind == Term::Kind::InR &&
           t->t1->t1->kind == Term::Kind::Pair;
}

/// A fold-spine that ends in a variable or nil and is built from cons cells.
bool is_open_list(const TermPtr& t) {
    TermPtr cur = t;
    bool saw_cons = false;
    while (is_cons_cell(cur)) {
        saw_cons = true;
        cur = cur->t1->t1->t2;
    }
    return saw_cons && cur->kind == Term::Kind::Var;
}

void print_term_rec(const TermPtr& t, int level, std::string& out) {
    if (try_sugar(t, out)) return;
    if (is_open_list(t)) {  // h :: t with variable tail
        if (level > 1) out += "(";
        print_term_rec(t->t1->t1->t1, 2, out);
        out += " :: ";
        print_term_rec(t->t1->t1->t2, 1, out);
        if (level > 1) out += ")";
        return;
    }
    switch (t->kind) {
        case Term::Kind::Unit:
            out += "()";
            return;
        case Term::Kind::Var:
            out += t->name;
            return;
        case Term::Kind::InL:
        case Term::Kind::InR:
        case Term::Kind::Fold: {
            if (level > 2) out += "(";
            out += t->kind == Term::Kind::InL   ? "inl "
                   : t->kind == Term::Kind::InR ? "inr "
                                                : "fold ";
            print_term_rec(t->t1, 2, out);
            if (level > 2) out += ")";
            return;
        }
        case Term::Kind::Pair:
            out += "(";
            print_term_rec(t->t1, 0, out);
            out += ", ";
            print_term_rec(t->t2, 0, out);
            out += ")";
            return;
        case Term::Kind::App: {
            if (level > 0) out += "(";
            print_iso_rec(t->iso, /*atom=*/true, out);
            out += " ";
            print_term_rec(t->t1, 3, out);
            if (level > 0) out += ")";
            return;
        }
        case Term::Kind::Let: {
            if (level > 0) out += "(";
            // The grammar form is `let p = isoapp pattern in e`: the bound
            // application must not be wrapped in parentheses.
            out += "let " + print_pattern(t->pat) + " = ";
            print_term_rec(t->t1, 0, out);
            out += " in ";
            print_term_rec(t->t2, 0, out);
            if (level > 0) out += ")";
            return;
        }
    }
}

void print_clauses(const std::vector<Clause>& cs, std::string& out) {
    out += "{ ";
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (i) out += " | ";
        print_term_rec(cs[i].lhs, 1, out);
        out += " <-> ";
        print_term_rec(cs[i].rhs, 0, out);
    }
    out += cs.empty() ? "}" : " }";
}

void print_iso_rec(const IsoPtr& w, bool atom, std::string& out) {
    switch (w->kind) {
        case Iso::Kind::Var:
            out += w->name;
            return;
        case Iso::Kind::Clauses:
            print_clauses(w->clauses, out);
            return;
        case Iso::Kind::Empty:
            out += "{ }";
            return;
        case Iso::Kind::Fix:
            if (atom) out += "(";
            out += "fix " + w->name + ". ";
            print_iso_rec(w->body, false, out);
            if (atom) out += ")";
            return;
        case Iso::Kind::Lam:
            if (atom) out += "(";
            out += "\\" + w->name + ". ";
            print_iso_rec(w->body, false, out);
            if (atom) out += ")";
            return;
        case Iso::Kind::NFix:
            if (atom) out += "(";
            out += "nfix " + std::to_string(w->bound) + " " + w->name + ". ";
            print_iso_rec(w->body, false, out);
            if (atom) out += ")";
            return;
        case Iso::Kind::App: {
            if (atom) out += "(";
            // Application is left-associative: f's left spine needs no parens.
            if (w->f->kind == Iso::Kind::App) {
                print_iso_rec(w->f, false, out);
            } else {
                print_iso_rec(w->f, true, out);
            }
            out += " ";
            print_iso_rec(w->g, true, out);
            if (atom) out += ")";
            return;
        }
    }
}

}  // namespace

std::string print_term(const TermPtr& t) {
    std::string out;
    print_term_rec(t, 0, out);
    return out;
}

std::string print_iso(const IsoPtr& w) {
    std::string out;
    print_iso_rec(w, false, out);
    return out;
}

// ============================================================================
// Type-directed printing
// ============================================================================

std::string print_value_typed(const TermPtr& v, const TypePtr& a) {
    if (type_equal(a, t_bool())) {
        if (v->kind == Term::Kind::InL && v->t1->kind == Term::Kind::Unit) return "tt";
        if (v->kind == Term::Kind::InR && v->t1->kind == Term::Kind::Unit) return "ff";
    }
    if (type_equal(a, t_nat())) {
        if (auto n = as_nat(v)) return std::to_string(*n);
    }
    if (auto elem = list_elem_type(a)) {
        if (auto xs = as_list(v)) {
            std::string out = "[";
            for (std::size_t i = 0; i < xs->size(); ++i) {
                if (i) out += ", ";
                out += print_value_typed((*xs)[i], *elem);
            }
            return out + "]";
        }
    }
    switch (a->kind) {
        case Type::Kind::Prod:
            if (v->kind == Term::Kind::Pair)
                return "(" + print_value_typed(v->t1, a->lhs) + ", " +
                       print_value_typed(v->t2, a->rhs) + ")";
            break;
        case Type::Kind::Sum:
            if (v->kind == Term::Kind::InL) {
                std::string inner = print_value_typed(v->t1, a->lhs);
                if (inner.find(' ') != std::string::npos) inner = "(" + inner + ")";
                return "inl " + inner;
            }
            if (v->kind == Term::Kind::InR) {
                std::string inner = print_value_typed(v->t1, a->rhs);
                if (inner.find(' ') != std::string::npos) inner = "(" + inner + ")";
                return "inr " + inner;
            }
            break;
        case Type::Kind::Mu:
            if (v->kind == Term::Kind::Fold) {
                std::string inner =
                    print_value_typed(v->t1, subst_type(a->body, a->name, a));
                if (inner.find(' ') != std::string::npos) inner = "(" + inner + ")";
                return "fold " + inner;
            }
            break;
        default:
            break;
    }
    return print_term(v);
}

}  // namespace reviso
