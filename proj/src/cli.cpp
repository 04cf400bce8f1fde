// cli.cpp -- subcommands, file loading and verdict printing
#include "rsakit/cli.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rsakit/algebra.hpp"
#include "rsakit/decide.hpp"
#include "rsakit/determinise.hpp"
#include "rsakit/format.hpp"
#include "rsakit/reduction.hpp"
#include "rsakit/regex.hpp"
#include "rsakit/tpn.hpp"

namespace rsakit {

Limits parse_caps(const std::string& spec) {
    Limits limits;
    std::vector<std::string> fields;
    std::stringstream ss(spec);
    std::string field;
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    if (fields.size() > 3) {
        throw InputError("RSAKIT_CAPS takes at most three fields: macrostates,basis,forwarddepth");
    }
    std::size_t* slots[] = {&limits.macrostates, &limits.basis, &limits.forward_depth};
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string& f = fields[i];
        if (f.empty()) {
            continue;
        }
        if (!std::all_of(f.begin(), f.end(), ::isdigit) || f.size() > 12) {
            throw InputError("RSAKIT_CAPS field '" + f + "' is not a natural number");
        }
        *slots[i] = std::stoull(f);
    }
    return limits;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot read '" + path + "'");
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

AnyAutomaton load_automaton(const std::string& path) {
    try {
        return parse_automaton(read_file(path));
    } catch (const ParseError& e) {
        throw InputError(path + ": " + e.what());
    }
}

/// Plain RsA view of any automaton: NRAs are embedded, emptiness guards are
/// compiled away.
Rsa as_rsa(const AnyAutomaton& a) {
    if (const auto* n = std::get_if<Nra>(&a)) {
        return embed_nra_to_rsa(*n);
    }
    if (const auto* e = std::get_if<RsaWithEmptyTest>(&a)) {
        return eliminate_emptiness_guards(*e);
    }
    return std::get<Rsa>(a);
}

const std::vector<std::string>& letters_of(const AnyAutomaton& a) {
    return std::visit(
        [](const auto& x) -> const std::vector<std::string>& {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, RsaWithEmptyTest>) {
                return x.base.letters;
            } else {
                return x.letters;
            }
        },
        a);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

/// First word of a file, skipping blank space and `//` comments.
std::string leading_keyword(const std::string& text) {
    std::size_t i = 0;
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i])) != 0) {
            ++i;
        } else if (text.compare(i, 2, "//") == 0) {
            i = text.find('\n', i);
            if (i == std::string::npos) {
                return "";
            }
        } else {
            break;
        }
    }
    std::size_t j = i;
    while (j < text.size() && std::isalpha(static_cast<unsigned char>(text[j])) != 0) {
        ++j;
    }
    return text.substr(i, j - i);
}

std::shared_ptr<const IncExpr> parse_expr(const std::string& text) {
    const std::string s = trim(text);
    auto call = [&](const std::string& fn) -> std::optional<std::vector<std::string>> {
        if (s.rfind(fn + "(", 0) != 0 || s.back() != ')') {
            return std::nullopt;
        }
        std::vector<std::string> args;
        int depth = 0;
        std::string cur;
        for (std::size_t i = fn.size() + 1; i + 1 < s.size(); ++i) {
            const char c = s[i];
            if (c == '(') {
                ++depth;
            } else if (c == ')') {
                if (--depth < 0) {
                    throw InputError("unbalanced parentheses in expression '" + s + "'");
                }
            } else if (c == ',' && depth == 0) {
                args.push_back(cur);
                cur.clear();
                continue;
            }
            cur += c;
        }
        if (depth != 0) {
            throw InputError("unbalanced parentheses in expression '" + s + "'");
        }
        args.push_back(cur);
        return args;
    };
    if (auto args = call("not")) {
        if (args->size() != 1) {
            throw InputError("not(...) takes one argument");
        }
        return IncExpr::make_complement(parse_expr((*args)[0]));
    }
    for (const char* fn : {"inter", "union"}) {
        if (auto args = call(fn)) {
            if (args->size() < 2) {
                throw InputError(std::string(fn) + "(...) takes at least two arguments");
            }
            auto acc = parse_expr((*args)[0]);
            for (std::size_t i = 1; i < args->size(); ++i) {
                auto rhs = parse_expr((*args)[i]);
                acc = std::string(fn) == "inter" ? IncExpr::make_intersection(acc, rhs)
                                                 : IncExpr::make_union(acc, rhs);
            }
            return acc;
        }
    }
    if (s.empty()) {
        throw InputError("empty expression");
    }
    AnyAutomaton a = load_automaton(s);
    if (!std::holds_alternative<Nra>(a)) {
        throw InputError(s + ": expression leaves must be 'nra' automata");
    }
    return IncExpr::make_leaf(std::get<Nra>(std::move(a)));
}

struct Session {
    std::ostream& out;
    std::ostream& err;
    const CancelToken* cancel;
    Limits limits;
    bool fail_on_no = false;
    int code = exit_ok;

    void verdict(const std::string& line, bool positive) {
        out << line << "\n";
        if (!positive && fail_on_no) {
            code = exit_negative;
        }
    }

    void emit(const std::string& text, const std::string& path) {
        if (path.empty() || path == "-") {
            out << text;
            return;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f || !(f << text)) {
            throw InputError("cannot write '" + path + "'");
        }
    }

    DeterminiseOptions det_options() const {
        DeterminiseOptions o;
        o.max_macrostates = limits.macrostates;
        o.cancel = cancel;
        return o;
    }

    DecideOptions decide_options(bool witness) const {
        DecideOptions o;
        o.want_witness = witness;
        o.max_basis = limits.basis;
        o.forward_depth = limits.forward_depth;
        o.max_macrostates = limits.macrostates;
        o.cancel = cancel;
        return o;
    }

    void report_bot(const Nra& a, const BotInfo& bot) {
        err << "determinisation failed at macrostate " << describe(a, bot.macrostate) << " on letter '"
            << a.letters[bot.letter] << "' with minterm {";
        bool first = true;
        for (RegId r : regs_of(bot.minterm)) {
            err << (first ? "" : ",") << a.registers[r];
            first = false;
        }
        err << "}: " << bot.detail << "\n";
        verdict(std::string("BOT ") + to_string(bot.reason), false);
    }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const CancelToken* cancel) {
    Session s{out, err, cancel, Limits{}};
    CLI::App app{"Register automata and register set automata toolkit", "rsakit"};
    app.require_subcommand(1);
    app.add_flag("--fail-on-no", s.fail_on_no, "Exit with status 1 on a negative verdict");

    std::string file;
    std::string file2;
    std::string word;
    std::string output;
    std::string expr;
    std::string marking;
    std::string target;
    std::string transition;
    std::string pattern;
    std::string text;
    bool witness = false;
    bool deterministic = false;
    bool nra_only = false;
    bool no_preprocess = false;
    bool anchored = false;

    auto* validate_cmd = app.add_subcommand("validate", "Check an automaton or net file");
    validate_cmd->add_option("file", file, "Automaton or net")->required();

    auto* member = app.add_subcommand("member", "Membership of a data word");
    member->add_option("file", file, "Automaton")->required();
    member->add_option("--word,-w", word, "Word as letter:datum tokens")->required();

    auto* ura = app.add_subcommand("ura-member", "Membership under universal acceptance");
    ura->add_option("file", file, "NRA read as a universal automaton")->required();
    ura->add_option("--word,-w", word, "Word as letter:datum tokens")->required();

    auto* det = app.add_subcommand("determinise", "Determinise an NRA into a deterministic RsA");
    det->add_option("file", file, "NRA")->required();
    det->add_option("-o,--output", output, "Output file");
    det->add_flag("--no-preprocess", no_preprocess, "Input is already register-local; skip normal forms");

    auto* comp = app.add_subcommand("complement", "Complement a deterministic RsA (or swap an NRA)");
    comp->add_option("file", file, "Automaton")->required();
    comp->add_option("-o,--output", output, "Output file");

    auto* uni = app.add_subcommand("union", "Union of two automata");
    uni->add_option("left", file, "Automaton")->required();
    uni->add_option("right", file2, "Automaton")->required();
    uni->add_option("-o,--output", output, "Output file");
    uni->add_flag("--deterministic", deterministic, "Keep determinism (product with disjunctive finals)");

    auto* prod = app.add_subcommand("product", "Intersection (synchronous product) of two automata");
    prod->add_option("left", file, "Automaton")->required();
    prod->add_option("right", file2, "Automaton")->required();
    prod->add_option("-o,--output", output, "Output file");

    auto* empty = app.add_subcommand("empty", "Emptiness via transfer-net coverability");
    empty->add_option("file", file, "Automaton")->required();
    empty->add_flag("--witness", witness, "Print a member when nonempty");

    auto* include = app.add_subcommand("include", "Inclusion in a Boolean combination of NRAs");
    include->add_option("file", file, "Automaton")->required();
    include->add_option("expr", expr, "Expression: FILE | not(E) | inter(E, E) | union(E, E)")->required();
    include->add_flag("--witness", witness, "Print a counterexample when not included");

    auto* tfire = app.add_subcommand("tpn-fire", "Fire one transition of a net");
    tfire->add_option("file", file, "Net")->required();
    tfire->add_option("--transition,-t", transition, "Transition name")->required();
    tfire->add_option("--marking,-m", marking, "Marking (default: the initial marking)");

    auto* tcover = app.add_subcommand("tpn-cover", "Coverability of a marking");
    tcover->add_option("file", file, "Net")->required();
    tcover->add_option("--target", target, "Target marking (default: the file's target)");
    tcover->add_flag("--witness", witness, "Print a firing sequence when coverable");

    auto* to_tpn = app.add_subcommand("to-tpn", "Region net of an RsA");
    to_tpn->add_option("file", file, "Automaton")->required();
    to_tpn->add_option("-o,--output", output, "Output file");

    auto* from_tpn = app.add_subcommand("from-tpn", "Gadget RsA of a net and target marking");
    from_tpn->add_option("file", file, "Net")->required();
    from_tpn->add_option("--target", target, "Target marking (default: the file's target)");
    from_tpn->add_option("-o,--output", output, "Output file");

    auto* rcompile = app.add_subcommand("regex-compile", "Compile a back-reference regex");
    rcompile->add_option("pattern", pattern, "Pattern")->required();
    rcompile->add_flag("--nra", nra_only, "Print the register automaton instead of the deterministic matcher");
    rcompile->add_flag("--anchored", anchored, "Whole-text semantics instead of search");
    rcompile->add_option("-o,--output", output, "Output file");

    auto* rmatch = app.add_subcommand("regex-match", "Search for a regex in text");
    rmatch->add_option("pattern", pattern, "Pattern")->required();
    rmatch->add_option("--text", text, "Text (default: each line of standard input)");

    std::vector<std::string> argv_store{"rsakit"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) {
        argv.push_back(a.data());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? exit_ok : exit_input;
    }

    try {
        if (const char* caps = std::getenv("RSAKIT_CAPS")) {
            s.limits = parse_caps(caps);
        }

        if (*validate_cmd) {
            std::string content = read_file(file);
            std::vector<std::string> issues;
            try {
                if (leading_keyword(content) == "tpn") {
                    parse_tpn(content);
                } else {
                    parse_automaton(content);
                }
            } catch (const InputError& e) {
                issues.push_back(e.what());
            }
            for (const auto& i : issues) {
                err << file << ": " << i << "\n";
            }
            s.verdict(issues.empty() ? "ACCEPT" : "REJECT", issues.empty());
        } else if (*member) {
            AnyAutomaton a = load_automaton(file);
            DataTable table;
            DataWord w = parse_word(word, letters_of(a), table);
            bool ok = false;
            if (const auto* n = std::get_if<Nra>(&a)) {
                ok = nra_membership(*n, w);
            } else if (const auto* r = std::get_if<Rsa>(&a)) {
                ok = rsa_membership(*r, w);
            } else {
                ok = rsae_membership(std::get<RsaWithEmptyTest>(a), w);
            }
            s.verdict(ok ? "ACCEPT" : "REJECT", ok);
        } else if (*ura) {
            AnyAutomaton a = load_automaton(file);
            const auto* n = std::get_if<Nra>(&a);
            if (n == nullptr) {
                throw InputError("ura-member needs an 'nra' automaton");
            }
            DataTable table;
            bool ok = ura_membership(*n, parse_word(word, n->letters, table));
            s.verdict(ok ? "ACCEPT" : "REJECT", ok);
        } else if (*det) {
            AnyAutomaton a = load_automaton(file);
            const auto* n = std::get_if<Nra>(&a);
            if (n == nullptr) {
                throw InputError("determinise needs an 'nra' automaton");
            }
            DeterminisationOutcome result = no_preprocess ? determinise(*n, s.det_options())
                                                          : determinise_pipeline(*n, s.det_options());
            if (result.ok()) {
                err << "deterministic automaton with " << result.automaton->num_states() << " states ("
                    << result.route << " route)\n";
                s.emit(print_automaton(*result.automaton), output);
            } else {
                s.report_bot(*n, *result.bot);
            }
        } else if (*comp) {
            AnyAutomaton a = load_automaton(file);
            if (const auto* n = std::get_if<Nra>(&a)) {
                err << "complemented by completion and final-state swap; read the result as a universal "
                       "automaton unless the input is deterministic\n";
                s.emit(print_automaton(complement_swap(*n)), output);
            } else {
                s.emit(print_automaton(complement_drsa(as_rsa(a))), output);
            }
        } else if (*uni) {
            Rsa l = as_rsa(load_automaton(file));
            Rsa r = as_rsa(load_automaton(file2));
            s.emit(print_automaton(deterministic ? union_drsa(l, r) : union_rsa(l, r)), output);
        } else if (*prod) {
            Rsa l = as_rsa(load_automaton(file));
            Rsa r = as_rsa(load_automaton(file2));
            s.emit(print_automaton(intersect_rsa(l, r)), output);
        } else if (*empty) {
            Rsa a = as_rsa(load_automaton(file));
            Verdict v = is_empty(a, s.decide_options(witness));
            if (v.answer) {
                s.verdict("EMPTY", true);
            } else {
                std::string line = "NONEMPTY";
                if (witness && v.witness) {
                    line += " " + print_word(*v.witness, a.letters);
                } else if (witness) {
                    err << "no witness found within the forward search depth\n";
                }
                s.verdict(line, false);
            }
        } else if (*include) {
            Rsa a = as_rsa(load_automaton(file));
            auto e = parse_expr(expr);
            Verdict v = check_inclusion(a, *e, s.decide_options(witness));
            if (v.answer) {
                s.verdict("INCLUDED", true);
            } else {
                std::string line = "NOT-INCLUDED";
                if (witness && v.witness) {
                    line += " " + print_word(*v.witness, a.letters);
                }
                s.verdict(line, false);
            }
        } else if (*tfire) {
            TpnFile f = parse_tpn(read_file(file));
            Marking m = marking.empty() ? f.net.initial : parse_marking(f.net, marking);
            auto it = std::find_if(f.net.transitions.begin(), f.net.transitions.end(),
                                   [&](const TpnTransition& t) { return t.name == transition; });
            if (it == f.net.transitions.end()) {
                throw InputError("unknown transition '" + transition + "'");
            }
            auto next = fire(f.net, m, *it);
            if (!next) {
                err << "transition '" << transition << "' is not enabled\n";
                return exit_negative;
            }
            std::string line;
            for (std::size_t p = 0; p < next->size(); ++p) {
                line += (p ? " " : "") + quote_name(f.net.places[p]) + ":" + std::to_string((*next)[p]);
            }
            out << line << "\n";
        } else if (*tcover) {
            TpnFile f = parse_tpn(read_file(file));
            if (target.empty() && !f.target) {
                throw InputError("no target marking given");
            }
            Marking goal = target.empty() ? *f.target : parse_marking(f.net, target);
            CoverOptions opts;
            opts.max_basis = s.limits.basis;
            opts.cancel = cancel;
            const bool ok = is_coverable(f.net, goal, opts);
            s.verdict(ok ? "COVERABLE" : "UNCOVERABLE", ok);
            if (ok && witness) {
                auto path = forward_cover_search(f.net, goal, s.limits.forward_depth, 8, cancel);
                if (path) {
                    err << "firing sequence:";
                    for (std::size_t k : *path) {
                        err << " " << f.net.transitions[k].name;
                    }
                    err << "\n";
                } else {
                    err << "no firing sequence found within the forward search depth\n";
                }
            }
        } else if (*to_tpn) {
            Rsa a = as_rsa(load_automaton(file));
            RsaTpn red = rsa_to_tpn(a, ReductionOptions{false, 16});
            s.emit(print_tpn(red.net, red.target), output);
        } else if (*from_tpn) {
            TpnFile f = parse_tpn(read_file(file));
            if (target.empty() && !f.target) {
                throw InputError("no target marking given");
            }
            Marking goal = target.empty() ? *f.target : parse_marking(f.net, target);
            s.emit(print_automaton(tpn_to_rsa(f.net, goal)), output);
        } else if (*rcompile) {
            RegexAst ast = parse_regex(pattern);
            RegexAst form = anchored ? ast : search_form(ast);
            RegexAlphabet alphabet = RegexAlphabet::of(form);
            Nra nra = compile_regex(form, alphabet);
            if (nra_only) {
                s.emit(print_automaton(nra), output);
            } else {
                DeterminisationOutcome result = determinise_pipeline(nra, s.det_options());
                if (result.ok()) {
                    s.emit(print_automaton(complete_rsa(*result.automaton)), output);
                } else {
                    s.report_bot(nra, *result.bot);
                }
            }
        } else if (*rmatch) {
            Matcher m(pattern, s.det_options());
            err << m.diagnostic() << "\n";
            auto run = [&](const std::string& t) {
                MatchResult r = m.match(t);
                if (m.deterministic()) {
                    err << "steps: " << r.steps << "\n";
                }
                s.verdict(r.matched ? "ACCEPT" : "REJECT", r.matched);
            };
            if (rmatch->count("--text") > 0) {
                run(text);
            } else {
                std::string line;
                while (std::getline(std::cin, line)) {
                    poll(cancel);
                    run(line);
                }
            }
        }
    } catch (const Cancelled&) {
        err << "cancelled\n";
        return exit_cancelled;
    } catch (const ResourceError& e) {
        err << "resource limit: " << e.what() << "\n";
        return exit_resource;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return exit_input;
    }
    return s.code;
}

}  // namespace rsakit
