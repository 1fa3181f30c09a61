//! # reviso — command-line front end
//!
//! Subcommands: check, run, invert, stdlib, rtm (check|run|compile), sem,
//! adequacy. Exit codes: 0 success/Agree, 1 static error, 2 stuck,
//! 3 out-of-fuel/inconclusive, 4 internal-consistency failure, 64 usage.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "reviso/eval.hpp"
#include "reviso/pinj.hpp"
#include "reviso/pretty.hpp"
#include "reviso/program.hpp"
#include "reviso/rtm.hpp"
#include "reviso/stdlib_isos.hpp"

using namespace reviso;

namespace {

constexpr int kOk = 0;
constexpr int kStatic = 1;
constexpr int kStuck = 2;
constexpr int kFuel = 3;
constexpr int kConsistency = 4;
constexpr int kUsage = 64;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void diagnose(const std::string& file, const SourceSpan& span, const std::string& kind,
              const std::string& msg) {
    std::cerr << file << ":" << span.line << ":" << span.col << ": " << kind << ": "
              << msg << "\n";
}

/// Parse + link + check; prints a diagnostic and returns nullopt on failure.
std::optional<std::pair<LinkedProgram, TypeTable>> load_checked(const std::string& file) {
    try {
        Program p = parse_program(read_file(file));
        LinkedProgram lp = link_program(p);
        TypeTable table = check_program(lp);
        return std::make_pair(std::move(lp), std::move(table));
    } catch (const ParseError& e) {
        diagnose(file, e.span, "parse", e.what());
    } catch (const TypeError& e) {
        diagnose(file, e.span, type_error_kind_name(e.kind), e.what());
    } catch (const std::exception& e) {
        diagnose(file, {}, "error", e.what());
    }
    return std::nullopt;
}

const LinkedIso* pick_iso(const LinkedProgram& lp, const std::string& file,
                          const std::string& name) {
    const LinkedIso* li = lp.find(name);
    if (!li) diagnose(file, {}, "error", "no iso named '" + name + "'");
    return li;
}

void emit(const std::string& format, const std::string& result, std::uint64_t steps) {
    if (format == "json") {
        nlohmann::json j{{"result", result}, {"steps", steps}};
        std::cout << j.dump() << "\n";
    } else {
        std::cout << result << "\n";
    }
}

std::string decl_source(const std::string& name, const IsoTypePtr& ty, const IsoPtr& w) {
    return "iso " + name + " : " + print_iso_type(ty) + " = " + print_iso(w) + ";\n";
}

int cmd_check(const std::string& file) {
    return load_checked(file) ? kOk : kStatic;
}

int cmd_run(const std::string& file, const std::string& name, const std::string& arg,
            std::uint64_t fuel, const std::string& format) {
    auto loaded = load_checked(file);
    if (!loaded) return kStatic;
    const LinkedIso* li = pick_iso(loaded->first, file, name);
    if (!li) return kUsage;
    if (li->type->arrow) {
        diagnose(file, {}, "error", "iso '" + name + "' has an arrow type; give a ground iso");
        return kStatic;
    }
    TermPtr v;
    try {
        v = parse_value_text(arg);
        check_term({}, {}, v, li->type->a);
    } catch (const ParseError& e) {
        diagnose("<arg>", e.span, "parse", e.what());
        return kStatic;
    } catch (const TypeError& e) {
        diagnose("<arg>", e.span, type_error_kind_name(e.kind), e.what());
        return kStatic;
    }
    EvalOutcome out = eval(m_app(li->iso, v), fuel);
    switch (out.kind) {
        case EvalOutcome::Kind::Value:
            emit(format, print_value_typed(out.term, li->type->b), out.steps);
            return kOk;
        case EvalOutcome::Kind::Stuck:
            std::cerr << "stuck after " << out.steps << " steps: " << out.reason << "\n";
            return kStuck;
        case EvalOutcome::Kind::OutOfFuel:
            std::cerr << "out of fuel after " << out.steps << " steps\n";
            return kFuel;
    }
    return kStatic;
}

TermPtr rename_refs_term(const TermPtr& t);

/// Rename declaration references (uid 0) to their inverted counterparts.
IsoPtr rename_refs(const IsoPtr& w) {
    switch (w->kind) {
        case Iso::Kind::Var:
            if (w->uid == 0) return i_var(w->name + "_inv", 0);
            return w;
        case Iso::Kind::Empty:
            return w;
        case Iso::Kind::Fix:
            return i_fix(w->name, w->uid, rename_refs(w->body), w->ann);
        case Iso::Kind::NFix:
            return i_nfix(w->bound, w->name, w->uid, rename_refs(w->body), w->ann);
        case Iso::Kind::Lam:
            return i_lam(w->name, w->uid, rename_refs(w->body), w->ann);
        case Iso::Kind::App:
            return i_app(rename_refs(w->f), rename_refs(w->g));
        case Iso::Kind::Clauses: {
            std::vector<Clause> cs;
            for (const auto& c : w->clauses)
                cs.push_back(Clause{c.lhs, rename_refs_term(c.rhs)});
            return i_clauses(std::move(cs), w->ann);
        }
    }
    return w;
}

TermPtr rename_refs_term(const TermPtr& t) {
    switch (t->kind) {
        case Term::Kind::Unit:
        case Term::Kind::Var:
            return t;
        case Term::Kind::InL:
            return m_inl(rename_refs_term(t->t1));
        case Term::Kind::InR:
            return m_inr(rename_refs_term(t->t1));
        case Term::Kind::Fold:
            return m_fold(rename_refs_term(t->t1));
        case Term::Kind::Pair:
            return m_pair(rename_refs_term(t->t1), rename_refs_term(t->t2));
        case Term::Kind::App:
            return m_app(rename_refs(t->iso), rename_refs_term(t->t1));
        case Term::Kind::Let:
            return m_let(t->pat, rename_refs_term(t->t1), rename_refs_term(t->t2));
    }
    return t;
}

int cmd_invert(const std::string& file, const std::string& name) {
    auto loaded = load_checked(file);  // the source program itself must check
    if (!loaded) return kStatic;
    if (!pick_iso(loaded->first, file, name)) return kUsage;
    // Invert at the declaration level (references renamed to the inverted
    // declarations) so the printed program is self-contained and carries
    // every needed type in its headers.
    std::string src;
    try {
        Program p = parse_program(read_file(file));
        for (const auto& d : p.decls) {
            if (d.kind != Decl::Kind::Iso) continue;
            src += decl_source(d.name + "_inv", invert_iso_type(d.iso_type),
                               rename_refs(invert_iso(d.iso)));
        }
    } catch (const std::exception& e) {
        diagnose(file, {}, "error", e.what());
        return kStatic;
    }
    // The printed source must re-parse and re-check at the inverted types.
    try {
        LinkedProgram lp = link_program(parse_program(src));
        check_program(lp);
    } catch (const std::exception& e) {
        diagnose(file, {}, "error",
                 std::string("inverted program failed to re-check: ") + e.what());
        return kConsistency;
    }
    std::cout << src;
    return kOk;
}

int cmd_stdlib(const std::string& name, const std::string& type_text,
               const std::string& type2_text) {
    try {
        TypePtr a = parse_type_text(type_text);
        IsoPtr w;
        std::string label = name;
        if (name == "dup") {
            w = stdlib_isos::dup(a);
        } else if (name == "cons") {
            w = stdlib_isos::cons_iso(a);
        } else if (name == "succ") {
            w = stdlib_isos::succ_iso();
        } else if (name == "len") {
            w = stdlib_isos::snoc_family(a).len;
        } else if (name == "snocp") {
            w = stdlib_isos::snoc_family(a).snoc_prime;
        } else if (name == "snoc") {
            w = stdlib_isos::snoc_family(a).snoc;
        } else if (name == "rev") {
            w = stdlib_isos::rev_iso(a);
        } else if (name == "concat") {
            w = stdlib_isos::concat_iso(a);
        } else if (name == "cantor") {
            w = stdlib_isos::cantor_pairing();
        } else if (name == "map") {
            TypePtr b = parse_type_text(type2_text.empty() ? type_text : type2_text);
            w = stdlib_isos::map_iso(a, b);
        } else if (name == "encoder") {
            w = stdlib_isos::encoder(a);
        } else {
            std::cerr << "unknown generator '" << name
                      << "' (dup cons succ len snocp snoc rev concat cantor map encoder)\n";
            return kUsage;
        }
        IsoTypePtr ty = check_iso({}, w);
        std::cout << decl_source(label, ty, w);
        return kOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kStatic;
    }
}

int cmd_rtm_check(const std::string& file) {
    try {
        RTMachine m = parse_rtm(read_file(file));
        std::cout << "ok: " << m.states.size() << " states, " << m.symbols.size()
                  << " symbols, " << m.rules.size() << " rules\n";
        return kOk;
    } catch (const RtmError& e) {
        diagnose(file, SourceSpan{static_cast<std::uint32_t>(e.line), 1}, "rtm", e.what());
        return kStatic;
    } catch (const std::exception& e) {
        diagnose(file, {}, "error", e.what());
        return kStatic;
    }
}

int cmd_rtm_run(const std::string& file, const std::string& input, bool use_oracle,
                bool use_compiled, const std::string& format) {
    try {
        RTMachine m = parse_rtm(read_file(file));
        std::vector<std::size_t> tape =
            input.empty() && m.sample_input ? *m.sample_input : parse_tape(m, input);
        if (!use_oracle && !use_compiled) use_oracle = true;

        std::optional<std::string> oracle_out;
        std::uint64_t oracle_steps = 0;
        if (use_oracle) {
            RtmRunResult r = rtm_run(m, tape);
            switch (r.status) {
                case RtmRunResult::Status::Ok:
                    oracle_out = show_tape(m, r.output);
                    oracle_steps = r.steps;
                    break;
                case RtmRunResult::Status::Stuck:
                    std::cerr << "oracle: stuck after " << r.steps << " steps\n";
                    return kStuck;
                case RtmRunResult::Status::NonStandardHalt:
                    std::cerr << "oracle: halted in a non-standard configuration\n";
                    return kStuck;
                case RtmRunResult::Status::OutOfSteps:
                    std::cerr << "oracle: step budget exhausted\n";
                    return kFuel;
            }
        }

        std::optional<std::string> compiled_out;
        std::uint64_t compiled_steps = 0;
        if (use_compiled) {
            Configuration start{m.initial, {}, m.blank(), tape};
            EvalOutcome out = eval(m_app(pipeline(m), encode_config(m, start)), kRtmFuel);
            if (out.kind == EvalOutcome::Kind::Stuck) {
                std::cerr << "compiled: stuck after " << out.steps << " steps: "
                          << out.reason << "\n";
                return kStuck;
            }
            if (out.kind == EvalOutcome::Kind::OutOfFuel) {
                std::cerr << "compiled: out of fuel after " << out.steps << " steps\n";
                return kFuel;
            }
            auto conf = decode_config(m, out.term);
            if (!conf) {
                std::cerr << "compiled: result does not decode as a configuration\n";
                return kConsistency;
            }
            std::vector<std::size_t> tape_out = conf->right;
            while (!tape_out.empty() && tape_out.back() == m.blank()) tape_out.pop_back();
            compiled_out = show_tape(m, tape_out);
            compiled_steps = out.steps;
        }

        if (use_oracle && use_compiled && *oracle_out != *compiled_out) {
            std::cerr << "mismatch: oracle '" << *oracle_out << "' vs compiled '"
                      << *compiled_out << "'\n";
            return kConsistency;
        }
        std::string result = use_oracle ? *oracle_out : *compiled_out;
        emit(format, result, use_compiled ? compiled_steps : oracle_steps);
        return kOk;
    } catch (const RtmError& e) {
        diagnose(file, SourceSpan{static_cast<std::uint32_t>(e.line), 1}, "rtm", e.what());
        return kStatic;
    } catch (const std::exception& e) {
        diagnose(file, {}, "error", e.what());
        return kStatic;
    }
}

int cmd_rtm_compile(const std::string& file, const std::string& out_path) {
    try {
        RTMachine m = parse_rtm(read_file(file));
        IsoPtr w = pipeline(m);
        IsoTypePtr ty = check_iso({}, w);
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << "-- garbage-free simulation of " << file << "\n";
        out << decl_source("machine", ty, w);
        return kOk;
    } catch (const RtmError& e) {
        diagnose(file, SourceSpan{static_cast<std::uint32_t>(e.line), 1}, "rtm", e.what());
        return kStatic;
    } catch (const std::exception& e) {
        diagnose(file, {}, "error", e.what());
        return kStatic;
    }
}

int cmd_sem(const std::string& file, const std::string& name, int depth,
            std::uint64_t unfold, const std::string& dump, const std::string& format) {
    auto loaded = load_checked(file);
    if (!loaded) return kStatic;
    const LinkedIso* li = pick_iso(loaded->first, file, name);
    if (!li) return kUsage;
    if (li->type->arrow) {
        diagnose(file, {}, "error", "iso '" + name + "' has an arrow type");
        return kStatic;
    }
    try {
        PartialInjection g = sem_iso_ground(li->iso, unfold, depth, &loaded->second);
        if (!dump.empty()) {
            std::ofstream out(dump);
            if (!out) throw std::runtime_error("cannot write " + dump);
            for (const auto& [i, j] : g.graph())
                out << print_value_typed(g.dom()->values[i], li->type->a) << "\t"
                    << print_value_typed(g.cod()->values[j], li->type->b) << "\n";
        }
        emit(format,
             "graph: " + std::to_string(g.size()) + " of " +
                 std::to_string(g.dom()->values.size()) + " points defined",
             g.size());
        return kOk;
    } catch (const IncompatibleJoin& e) {
        diagnose(file, {}, "join", e.what());
        return kConsistency;
    } catch (const std::exception& e) {
        diagnose(file, {}, "error", e.what());
        return kStatic;
    }
}

int cmd_adequacy(const std::string& file, std::uint64_t fuel, int depth,
                 std::uint64_t unfold, std::uint64_t seed) {
    auto loaded = load_checked(file);
    if (!loaded) return kStatic;
    std::mt19937_64 rng(seed);
    std::size_t agree = 0, inconclusive = 0, disagree = 0;
    for (const auto& li : loaded->first.isos) {
        if (li.type->arrow) continue;
        UniversePtr dom = enumerate(li.type->a, depth);
        std::vector<std::size_t> picks(dom->values.size());
        for (std::size_t i = 0; i < picks.size(); ++i) picks[i] = i;
        constexpr std::size_t kMaxPerIso = 200;
        if (picks.size() > kMaxPerIso) {
            std::shuffle(picks.begin(), picks.end(), rng);
            picks.resize(kMaxPerIso);
        }
        for (std::size_t i : picks) {
            TermPtr t = m_app(li.iso, dom->values[i]);
            AdequacyResult r =
                check_adequacy(t, li.type->b, fuel, unfold, depth, &loaded->second);
            switch (r.verdict) {
                case AdequacyResult::Verdict::Agree: ++agree; break;
                case AdequacyResult::Verdict::Inconclusive: ++inconclusive; break;
                case AdequacyResult::Verdict::Disagree:
                    ++disagree;
                    std::cerr << "disagree on " << li.name << " "
                              << print_term(dom->values[i]) << ": " << r.report << "\n";
                    break;
            }
        }
    }
    std::cout << "agree: " << agree << "  inconclusive: " << inconclusive
              << "  disagree: " << disagree << "\n";
    return disagree ? kConsistency : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reviso — a reversible higher-order language toolchain"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    if (const char* env = std::getenv("REVISO_SEED")) seed = std::strtoull(env, nullptr, 10);
    app.add_option("--seed", seed, "randomness seed (env REVISO_SEED)");

    std::string file, iso_name, arg_text, format = "plain";
    std::uint64_t fuel = kDefaultFuel, unfold = 16;
    int depth = 6;

    auto* check = app.add_subcommand("check", "type-check a program");
    check->add_option("file", file)->required();

    auto* run = app.add_subcommand("run", "apply an iso to a value");
    run->add_option("file", file)->required();
    run->add_option("--iso", iso_name)->required();
    run->add_option("--arg", arg_text)->required();
    run->add_option("--fuel", fuel);
    run->add_option("--format", format)->check(CLI::IsMember({"plain", "json"}));

    auto* invert = app.add_subcommand("invert", "print the inverse of an iso");
    invert->add_option("file", file)->required();
    invert->add_option("--iso", iso_name)->required();

    std::string gen_name, type_text = "1", type2_text;
    auto* stdlib = app.add_subcommand("stdlib", "print a generated stdlib iso");
    stdlib->add_option("name", gen_name)->required();
    stdlib->add_option("--type", type_text);
    stdlib->add_option("--type2", type2_text);

    auto* rtm = app.add_subcommand("rtm", "reversible Turing machine tools");
    rtm->require_subcommand(1);
    auto* rtm_check = rtm->add_subcommand("check", "parse and validate a machine");
    rtm_check->add_option("file", file)->required();
    std::string input_text;
    bool use_oracle = false, use_compiled = false, use_both = false;
    auto* rtm_run_cmd = rtm->add_subcommand("run", "run a machine on an input tape");
    rtm_run_cmd->add_option("file", file)->required();
    rtm_run_cmd->add_option("--input", input_text);
    rtm_run_cmd->add_flag("--oracle", use_oracle);
    rtm_run_cmd->add_flag("--compiled", use_compiled);
    rtm_run_cmd->add_flag("--both", use_both);
    rtm_run_cmd->add_option("--format", format)->check(CLI::IsMember({"plain", "json"}));
    std::string out_path;
    auto* rtm_compile = rtm->add_subcommand("compile", "compile to a garbage-free iso");
    rtm_compile->add_option("file", file)->required();
    rtm_compile->add_option("-o,--output", out_path)->required();

    std::string dump_path;
    auto* sem = app.add_subcommand("sem", "denotational graph of an iso");
    sem->add_option("file", file)->required();
    sem->add_option("--iso", iso_name)->required();
    sem->add_option("--depth", depth);
    sem->add_option("--unfold", unfold);
    sem->add_option("--dump-graph", dump_path);
    sem->add_option("--format", format)->check(CLI::IsMember({"plain", "json"}));

    auto* adequacy = app.add_subcommand("adequacy", "cross-check eval against semantics");
    adequacy->add_option("file", file)->required();
    adequacy->add_option("--fuel", fuel);
    adequacy->add_option("--depth", depth);
    adequacy->add_option("--unfold", unfold);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 64;
    }

    if (check->parsed()) return cmd_check(file);
    if (run->parsed()) return cmd_run(file, iso_name, arg_text, fuel, format);
    if (invert->parsed()) return cmd_invert(file, iso_name);
    if (stdlib->parsed()) return cmd_stdlib(gen_name, type_text, type2_text);
    if (rtm_check->parsed()) return cmd_rtm_check(file);
    if (rtm_run_cmd->parsed())
        return cmd_rtm_run(file, input_text, use_oracle || use_both,
                           use_compiled || use_both, format);
    if (rtm_compile->parsed()) return cmd_rtm_compile(file, out_path);
    if (sem->parsed()) return cmd_sem(file, iso_name, depth, unfold, dump_path, format);
    if (adequacy->parsed()) return cmd_adequacy(file, fuel, depth, unfold, seed);
    return 64;
}
