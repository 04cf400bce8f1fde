// format.cpp -- tokenizer, parsers and canonical printers
#include "rsakit/format.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace rsakit {

ParseError::ParseError(const std::string& what, std::size_t l, std::size_t c)
    : InputError("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + what),
      line(l),
      column(c) {}

namespace {

bool bare_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '.' || c == '#' || c == '\'';
}

struct Token {
    enum class Kind { name, punct, end };
    Kind kind = Kind::end;
    std::string text;
    bool quoted = false;
    std::size_t line = 1;
    std::size_t column = 1;

    bool is(const char* p) const { return kind == Kind::punct && text == p; }
    bool keyword(const char* k) const { return kind == Kind::name && !quoted && text == k; }
};

std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    std::size_t line = 1;
    std::size_t col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c)) != 0) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < s.size() && s[i + 1] == '/') {
            while (i < s.size() && s[i] != '\n') {
                advance(1);
            }
            continue;
        }
        Token t;
        t.line = line;
        t.column = col;
        if (bare_char(c)) {
            std::size_t j = i;
            while (j < s.size() && bare_char(s[j])) {
                ++j;
            }
            t.kind = Token::Kind::name;
            t.text = s.substr(i, j - i);
            advance(j - i);
        } else if (c == '"') {
            t.kind = Token::Kind::name;
            t.quoted = true;
            advance(1);
            while (true) {
                if (i >= s.size()) {
                    throw ParseError("unterminated string", t.line, t.column);
                }
                if (s[i] == '"') {
                    advance(1);
                    break;
                }
                if (s[i] == '\\' && i + 1 < s.size()) {
                    advance(1);
                }
                t.text += s[i];
                advance(1);
            }
        } else {
            static const char* const puncts[] = {":=", "->", "{", "}", "[", "]", ";", ",", "|", ":", "+", "-"};
            bool found = false;
            for (const char* p : puncts) {
                const std::size_t n = std::char_traits<char>::length(p);
                if (s.compare(i, n, p) == 0) {
                    t.kind = Token::Kind::punct;
                    t.text = p;
                    advance(n);
                    found = true;
                    break;
                }
            }
            if (!found) {
                throw ParseError(std::string("unexpected character '") + c + "'", line, col);
            }
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.line = line;
    end.column = col;
    out.push_back(end);
    return out;
}

class Cursor {
public:
    explicit Cursor(const std::string& text) : toks_(tokenize(text)) {}

    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    const Token& next() {
        const Token& t = peek();
        if (pos_ < toks_.size() - 1) {
            ++pos_;
        }
        return t;
    }
    bool accept(const char* p) {
        if (peek().is(p)) {
            next();
            return true;
        }
        return false;
    }
    void expect(const char* p) {
        if (!accept(p)) {
            fail(std::string("expected '") + p + "'");
        }
    }
    std::string name(const char* what = "a name") {
        if (peek().kind != Token::Kind::name) {
            fail(std::string("expected ") + what);
        }
        return next().text;
    }
    [[noreturn]] void fail(const std::string& what) const {
        const Token& t = peek();
        std::string found = t.kind == Token::Kind::end ? "end of input" : "'" + t.text + "'";
        throw ParseError(what + ", found " + found, t.line, t.column);
    }
    bool at_end() const { return peek().kind == Token::Kind::end; }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

// Raw automaton syntax, resolved into ids once everything is read.

struct RawTerm {
    enum class Kind { reg, in, bot, empty_set };
    Kind kind = Kind::reg;
    std::string name;
};

struct RawTransition {
    std::string src;
    std::string letter;
    std::string dst;
    std::vector<std::pair<std::string, std::vector<std::string>>> guards;
    std::vector<std::pair<std::string, std::vector<RawTerm>>> updates;
    std::size_t line = 0;
    std::size_t column = 0;
};

struct RawAutomaton {
    std::string kind;
    std::string name;
    std::optional<std::vector<std::string>> alphabet;
    std::optional<std::vector<std::string>> registers;
    std::optional<std::vector<std::string>> states;
    std::vector<std::string> init;
    std::vector<std::string> final;
    std::vector<RawTransition> delta;
};

std::vector<std::string> name_list(Cursor& c) {
    std::vector<std::string> out;
    while (!c.peek().is(";")) {
        out.push_back(c.name());
    }
    c.expect(";");
    return out;
}

RawAutomaton read_automaton(Cursor& c) {
    RawAutomaton raw;
    const Token& kind = c.peek();
    if (!kind.keyword("nra") && !kind.keyword("rsa")) {
        c.fail("expected 'nra' or 'rsa'");
    }
    raw.kind = c.next().text;
    const bool nra = raw.kind == "nra";
    raw.name = c.name("an automaton name");
    c.expect("{");
    while (!c.accept("}")) {
        const Token& head = c.peek();
        const bool decl = head.kind == Token::Kind::name && !head.quoted && !c.peek(1).is("-");
        if (decl && head.text == "alphabet") {
            c.next();
            raw.alphabet = name_list(c);
        } else if (decl && head.text == "registers") {
            c.next();
            raw.registers = name_list(c);
        } else if (decl && head.text == "states") {
            c.next();
            raw.states = name_list(c);
        } else if (decl && head.text == "init") {
            c.next();
            auto names = name_list(c);
            raw.init.insert(raw.init.end(), names.begin(), names.end());
        } else if (decl && head.text == "final") {
            c.next();
            auto names = name_list(c);
            raw.final.insert(raw.final.end(), names.begin(), names.end());
        } else {
            RawTransition t;
            t.line = head.line;
            t.column = head.column;
            t.src = c.name("a state or declaration");
            c.expect("-");
            t.letter = c.name("a letter");
            c.expect("->");
            t.dst = c.name("a target state");
            if (c.accept("[")) {
                while (!c.peek().is("|") && !c.peek().is("]")) {
                    const Token& g = c.peek();
                    const bool known = nra ? (g.keyword("eq") || g.keyword("neq"))
                                           : (g.keyword("in") || g.keyword("notin") || g.keyword("empty"));
                    if (!known) {
                        c.fail(nra ? "expected 'eq' or 'neq'" : "expected 'in', 'notin' or 'empty'");
                    }
                    std::string kw = c.next().text;
                    std::vector<std::string> regs;
                    while (c.peek().kind == Token::Kind::name) {
                        regs.push_back(c.next().text);
                    }
                    if (regs.empty()) {
                        c.fail("expected a register");
                    }
                    t.guards.emplace_back(std::move(kw), std::move(regs));
                    if (!c.accept(",")) {
                        break;
                    }
                }
                if (c.accept("|")) {
                    while (!c.peek().is("]")) {
                        std::string reg = c.name("a register");
                        c.expect(":=");
                        std::vector<RawTerm> rhs;
                        if (c.accept("{")) {
                            c.expect("}");
                            rhs.push_back({RawTerm::Kind::empty_set, ""});
                        } else {
                            do {
                                const Token& term = c.peek();
                                if (term.keyword("in")) {
                                    rhs.push_back({RawTerm::Kind::in, ""});
                                } else if (term.keyword("bot") && nra) {
                                    rhs.push_back({RawTerm::Kind::bot, ""});
                                } else {
                                    rhs.push_back({RawTerm::Kind::reg, c.name("a register, 'in' or 'bot'")});
                                    continue;
                                }
                                c.next();
                            } while (!nra && c.accept("+"));
                        }
                        t.updates.emplace_back(std::move(reg), std::move(rhs));
                        if (!c.accept(",")) {
                            break;
                        }
                    }
                }
                c.expect("]");
            }
            c.expect(";");
            raw.delta.push_back(std::move(t));
        }
    }
    if (!c.at_end()) {
        c.fail("expected end of input");
    }
    return raw;
}

class Names {
public:
    Names(std::optional<std::vector<std::string>> declared, const char* what)
        : open_(!declared.has_value()), what_(what) {
        if (declared) {
            for (const auto& n : *declared) {
                if (std::find(list.begin(), list.end(), n) != list.end()) {
                    throw InputError(std::string("duplicate ") + what + " '" + n + "'");
                }
                list.push_back(n);
            }
        }
    }

    std::uint32_t id(const std::string& n, std::size_t line, std::size_t col) {
        auto it = std::find(list.begin(), list.end(), n);
        if (it != list.end()) {
            return static_cast<std::uint32_t>(it - list.begin());
        }
        if (!open_) {
            throw ParseError(std::string("undeclared ") + what_ + " '" + n + "'", line, col);
        }
        list.push_back(n);
        return static_cast<std::uint32_t>(list.size() - 1);
    }

    std::vector<std::string> list;

private:
    bool open_;
    const char* what_;
};

template <typename A>
void resolve_common(const RawAutomaton& raw, A& a, Names& states, Names& letters, Names& regs) {
    a.name = raw.name;
    for (const auto& q : raw.init) {
        a.initial.push_back(states.id(q, 0, 0));
    }
    for (const auto& q : raw.final) {
        a.final.push_back(states.id(q, 0, 0));
    }
    normalize_ids(a.initial);
    normalize_ids(a.final);
    (void)letters;
    (void)regs;
}

RegSet reg_set(Names& regs, const std::vector<std::string>& names, const RawTransition& t) {
    RegSet s = 0;
    for (const auto& n : names) {
        s |= reg_bit(regs.id(n, t.line, t.column));
    }
    return s;
}

std::string where(const RawTransition& t) {
    return "transition " + t.src + " -" + t.letter + "-> " + t.dst;
}

Nra build_nra(const RawAutomaton& raw) {
    Names states(raw.states, "state");
    Names letters(raw.alphabet, "letter");
    Names regs(raw.registers ? raw.registers : std::optional<std::vector<std::string>>{std::vector<std::string>{}},
               "register");
    Nra a;
    resolve_common(raw, a, states, letters, regs);
    const std::size_t nr = regs.list.size();
    if (nr > kMaxRegisters) {
        throw InputError("more than 64 registers");
    }
    for (const RawTransition& t : raw.delta) {
        StateId src = states.id(t.src, t.line, t.column);
        LetterId l = letters.id(t.letter, t.line, t.column);
        StateId dst = states.id(t.dst, t.line, t.column);
        RegSet eq = 0;
        RegSet neq = 0;
        for (const auto& [kw, names] : t.guards) {
            (kw == "eq" ? eq : neq) |= reg_set(regs, names, t);
        }
        std::vector<std::pair<RegId, NraSource>> up;
        for (const auto& [reg, rhs] : t.updates) {
            RegId r = regs.id(reg, t.line, t.column);
            const RawTerm& term = rhs.front();
            NraSource src_val = term.kind == RawTerm::Kind::in    ? NraSource::input()
                                : term.kind == RawTerm::Kind::bot ? NraSource::bot()
                                : term.kind == RawTerm::Kind::reg ? NraSource::copy(regs.id(term.name, t.line, t.column))
                                                                  : throw ParseError("'{}' is not an NRA update", t.line, t.column);
            up.emplace_back(r, src_val);
        }
        try {
            a.delta.push_back(make_nra_transition(src, l, eq, neq, std::move(up), dst, nr));
        } catch (const InputError& e) {
            throw ParseError(where(t) + ": " + e.what(), t.line, t.column);
        }
    }
    a.states = states.list;
    a.letters = letters.list;
    a.registers = regs.list;
    return a;
}

RsaWithEmptyTest build_rsa(const RawAutomaton& raw) {
    Names states(raw.states, "state");
    Names letters(raw.alphabet, "letter");
    Names regs(raw.registers ? raw.registers : std::optional<std::vector<std::string>>{std::vector<std::string>{}},
               "register");
    RsaWithEmptyTest out;
    Rsa& a = out.base;
    resolve_common(raw, a, states, letters, regs);
    const std::size_t nr = regs.list.size();
    if (nr > kMaxRegisters) {
        throw InputError("more than 64 registers");
    }
    for (const RawTransition& t : raw.delta) {
        StateId src = states.id(t.src, t.line, t.column);
        LetterId l = letters.id(t.letter, t.line, t.column);
        StateId dst = states.id(t.dst, t.line, t.column);
        RegSet in = 0;
        RegSet notin = 0;
        RegSet empty = 0;
        for (const auto& [kw, names] : t.guards) {
            (kw == "in" ? in : kw == "notin" ? notin : empty) |= reg_set(regs, names, t);
        }
        std::vector<std::pair<RegId, RsaUpdate>> up;
        for (const auto& [reg, rhs] : t.updates) {
            RsaUpdate u;
            for (const RawTerm& term : rhs) {
                if (term.kind == RawTerm::Kind::in) {
                    u.in = true;
                } else if (term.kind == RawTerm::Kind::reg) {
                    u.regs |= reg_bit(regs.id(term.name, t.line, t.column));
                }
            }
            up.emplace_back(regs.id(reg, t.line, t.column), u);
        }
        try {
            a.delta.push_back(make_rsa_transition(src, l, in, notin, std::move(up), dst, nr));
        } catch (const InputError& e) {
            throw ParseError(where(t) + ": " + e.what(), t.line, t.column);
        }
        out.empty_guard.push_back(empty);
    }
    a.states = states.list;
    a.letters = letters.list;
    a.registers = regs.list;
    return out;
}

template <typename A>
void check_valid(const A& a) {
    auto issues = validate(a);
    if (!issues.empty()) {
        throw InputError(issues.front());
    }
}

// Printing -----------------------------------------------------------------

std::string names(const std::vector<std::string>& all, const std::vector<std::uint32_t>& ids) {
    std::string out;
    for (auto id : ids) {
        out += " " + quote_name(all[id]);
    }
    return out;
}

std::string reg_list(const std::vector<std::string>& regs, RegSet s) {
    std::string out;
    for (RegId r : regs_of(s)) {
        out += " " + quote_name(regs[r]);
    }
    return out;
}

template <typename A>
void print_header(std::ostringstream& os, const char* kind, const A& a) {
    os << kind << " " << quote_name(a.name) << " {\n";
    auto decl = [&](const char* what, const std::vector<std::string>& list) {
        os << "  " << what;
        for (const auto& n : list) {
            os << " " << quote_name(n);
        }
        os << " ;\n";
    };
    decl("alphabet", a.letters);
    decl("registers", a.registers);
    decl("states", a.states);
    os << "  init" << names(a.states, a.initial) << " ;\n";
    os << "  final" << names(a.states, a.final) << " ;\n";
}

void print_guard_and_updates(std::ostringstream& os, const std::vector<std::string>& guards,
                             const std::vector<std::string>& updates) {
    if (guards.empty() && updates.empty()) {
        return;
    }
    os << " [";
    for (std::size_t i = 0; i < guards.size(); ++i) {
        os << (i ? ", " : " ") << guards[i];
    }
    if (!updates.empty()) {
        os << " |";
        for (std::size_t i = 0; i < updates.size(); ++i) {
            os << (i ? ", " : " ") << updates[i];
        }
    }
    os << " ]";
}

std::string print_rsa_impl(const Rsa& a, const std::vector<RegSet>* empty_guard) {
    if (!a.is_canonical()) {
        throw InputError("cannot print an automaton with epsilon edges");
    }
    std::ostringstream os;
    print_header(os, "rsa", a);
    for (std::size_t i = 0; i < a.delta.size(); ++i) {
        const RsaTransition& t = a.delta[i];
        os << "  " << quote_name(a.states[t.src]) << " -" << quote_name(a.letters[t.letter]) << "-> "
           << quote_name(a.states[t.dst]);
        std::vector<std::string> guards;
        if (t.in_guard) {
            guards.push_back("in" + reg_list(a.registers, t.in_guard));
        }
        if (t.notin_guard) {
            guards.push_back("notin" + reg_list(a.registers, t.notin_guard));
        }
        if (empty_guard != nullptr && (*empty_guard)[i]) {
            guards.push_back("empty" + reg_list(a.registers, (*empty_guard)[i]));
        }
        std::vector<std::string> updates;
        for (std::size_t r = 0; r < t.up.size(); ++r) {
            const RsaUpdate& u = t.up[r];
            if (!u.in && u.regs == reg_bit(static_cast<RegId>(r))) {
                continue;
            }
            std::string rhs;
            for (RegId s : regs_of(u.regs)) {
                rhs += (rhs.empty() ? "" : " + ") + quote_name(a.registers[s]);
            }
            if (u.in) {
                rhs += rhs.empty() ? "in" : " + in";
            }
            updates.push_back(quote_name(a.registers[r]) + " := " + (rhs.empty() ? "{}" : rhs));
        }
        print_guard_and_updates(os, guards, updates);
        os << " ;\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace

AnyAutomaton parse_automaton(const std::string& text) {
    Cursor c(text);
    RawAutomaton raw = read_automaton(c);
    if (raw.kind == "nra") {
        Nra a = build_nra(raw);
        check_valid(a);
        return a;
    }
    RsaWithEmptyTest a = build_rsa(raw);
    check_valid(a);
    bool any_empty = std::any_of(a.empty_guard.begin(), a.empty_guard.end(), [](RegSet s) { return s != 0; });
    if (any_empty) {
        return a;
    }
    return std::move(a.base);
}

Nra parse_nra(const std::string& text) {
    AnyAutomaton a = parse_automaton(text);
    if (auto* n = std::get_if<Nra>(&a)) {
        return std::move(*n);
    }
    throw InputError("expected an 'nra' automaton");
}

Rsa parse_rsa(const std::string& text) {
    AnyAutomaton a = parse_automaton(text);
    if (auto* r = std::get_if<Rsa>(&a)) {
        return std::move(*r);
    }
    if (std::holds_alternative<Nra>(a)) {
        return embed_nra_to_rsa(std::get<Nra>(a));
    }
    throw InputError("emptiness guards are not allowed here; eliminate them first");
}

std::string print_automaton(const Nra& a) {
    std::ostringstream os;
    print_header(os, "nra", a);
    for (const NraTransition& t : a.delta) {
        os << "  " << quote_name(a.states[t.src]) << " -" << quote_name(a.letters[t.letter]) << "-> "
           << quote_name(a.states[t.dst]);
        std::vector<std::string> guards;
        if (t.eq) {
            guards.push_back("eq" + reg_list(a.registers, t.eq));
        }
        if (t.neq) {
            guards.push_back("neq" + reg_list(a.registers, t.neq));
        }
        std::vector<std::string> updates;
        for (std::size_t r = 0; r < t.up.size(); ++r) {
            const NraSource& s = t.up[r];
            if (s.is_reg() && s.reg == r) {
                continue;
            }
            const std::string rhs = s.is_in() ? "in" : s.is_bot() ? "bot" : quote_name(a.registers[s.reg]);
            updates.push_back(quote_name(a.registers[r]) + " := " + rhs);
        }
        print_guard_and_updates(os, guards, updates);
        os << " ;\n";
    }
    os << "}\n";
    return os.str();
}

std::string print_automaton(const Rsa& a) { return print_rsa_impl(a, nullptr); }

std::string print_automaton(const RsaWithEmptyTest& a) { return print_rsa_impl(a.base, &a.empty_guard); }

std::string print_automaton(const AnyAutomaton& a) {
    return std::visit([](const auto& x) { return print_automaton(x); }, a);
}

// ---------------------------------------------------------------------------
// Transfer nets

namespace {

std::vector<std::pair<std::string, Count>> count_list(Cursor& c) {
    std::vector<std::pair<std::string, Count>> out;
    while (!c.peek().is(";")) {
        std::string p = c.name("a place");
        c.expect(":");
        const Token& n = c.peek();
        std::string digits = c.name("a count");
        if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit) || digits.size() > 9) {
            throw ParseError("expected a count, found '" + digits + "'", n.line, n.column);
        }
        out.emplace_back(std::move(p), static_cast<Count>(std::stoul(digits)));
    }
    c.expect(";");
    return out;
}

PlaceId place_id(const Tpn& net, const std::string& p) {
    auto it = std::find(net.places.begin(), net.places.end(), p);
    if (it == net.places.end()) {
        throw InputError("unknown place '" + p + "'");
    }
    return static_cast<PlaceId>(it - net.places.begin());
}

std::string counts_text(const Tpn& net, const Marking& m) {
    std::string out;
    for (std::size_t p = 0; p < m.size(); ++p) {
        if (m[p] != 0) {
            out += " " + quote_name(net.places[p]) + ":" + std::to_string(m[p]);
        }
    }
    return out;
}

}  // namespace

TpnFile parse_tpn(const std::string& text) {
    Cursor c(text);
    if (!c.peek().keyword("tpn")) {
        c.fail("expected 'tpn'");
    }
    c.next();
    TpnFile file;
    Tpn& net = file.net;
    net.name = c.name("a net name");
    c.expect("{");
    struct RawT {
        std::string name;
        std::vector<std::pair<std::string, Count>> in, out;
        std::vector<std::pair<std::string, std::string>> transfer;
    };
    std::vector<RawT> raw;
    std::optional<std::vector<std::pair<std::string, Count>>> init;
    std::optional<std::vector<std::pair<std::string, Count>>> target;
    bool have_places = false;
    auto is_clause = [&](const char* kw) { return c.peek().keyword(kw) && !c.peek(1).is(":"); };
    while (!c.accept("}")) {
        if (is_clause("places")) {
            c.next();
            for (auto& p : name_list(c)) {
                if (std::find(net.places.begin(), net.places.end(), p) != net.places.end()) {
                    throw InputError("duplicate place '" + p + "'");
                }
                net.places.push_back(std::move(p));
            }
            have_places = true;
        } else if (is_clause("init")) {
            c.next();
            init = count_list(c);
        } else if (is_clause("target")) {
            c.next();
            target = count_list(c);
        } else {
            RawT t;
            t.name = c.name("a transition or declaration");
            c.expect(":");
            c.accept(";");
            while (true) {
                if (is_clause("in")) {
                    c.next();
                    auto l = count_list(c);
                    t.in.insert(t.in.end(), l.begin(), l.end());
                } else if (is_clause("out")) {
                    c.next();
                    auto l = count_list(c);
                    t.out.insert(t.out.end(), l.begin(), l.end());
                } else if (is_clause("transfer")) {
                    c.next();
                    while (!c.peek().is(";")) {
                        std::string from = c.name("a place");
                        c.expect("->");
                        t.transfer.emplace_back(std::move(from), c.name("a place"));
                    }
                    c.expect(";");
                } else {
                    break;
                }
            }
            raw.push_back(std::move(t));
        }
    }
    if (!c.at_end()) {
        c.fail("expected end of input");
    }
    if (!have_places) {
        throw InputError("net declares no places");
    }
    net.initial = zero_marking(net);
    if (init) {
        for (const auto& [p, n] : *init) {
            net.initial[place_id(net, p)] += n;
        }
    }
    for (const RawT& r : raw) {
        TpnTransition t = make_tpn_transition(net, r.name);
        for (const auto& [p, n] : r.in) {
            t.in[place_id(net, p)] += n;
        }
        for (const auto& [p, n] : r.out) {
            t.out[place_id(net, p)] += n;
        }
        std::vector<bool> set(net.num_places(), false);
        for (const auto& [from, to] : r.transfer) {
            PlaceId f = place_id(net, from);
            if (set[f]) {
                throw InputError("transition '" + r.name + "' transfers place '" + from + "' twice");
            }
            set[f] = true;
            t.transfer[f] = place_id(net, to);
        }
        net.transitions.push_back(std::move(t));
    }
    for (std::size_t i = 0; i < net.transitions.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (net.transitions[i].name == net.transitions[j].name) {
                throw InputError("duplicate transition '" + net.transitions[i].name + "'");
            }
        }
    }
    if (target) {
        Marking m = zero_marking(net);
        for (const auto& [p, n] : *target) {
            m[place_id(net, p)] += n;
        }
        file.target = std::move(m);
    }
    auto issues = validate(net);
    if (!issues.empty()) {
        throw InputError(issues.front());
    }
    return file;
}

std::string print_tpn(const Tpn& net, const std::optional<Marking>& target) {
    std::ostringstream os;
    os << "tpn " << quote_name(net.name) << " {\n  places";
    for (const auto& p : net.places) {
        os << " " << quote_name(p);
    }
    os << " ;\n  init" << counts_text(net, net.initial) << " ;\n";
    for (const TpnTransition& t : net.transitions) {
        os << "  " << quote_name(t.name) << " :";
        bool any = false;
        if (std::any_of(t.in.begin(), t.in.end(), [](Count n) { return n != 0; })) {
            os << " in" << counts_text(net, t.in) << " ;";
            any = true;
        }
        if (std::any_of(t.out.begin(), t.out.end(), [](Count n) { return n != 0; })) {
            os << " out" << counts_text(net, t.out) << " ;";
            any = true;
        }
        std::string moves;
        for (std::size_t p = 0; p < t.transfer.size(); ++p) {
            if (t.transfer[p] != p) {
                moves += " " + quote_name(net.places[p]) + "->" + quote_name(net.places[t.transfer[p]]);
            }
        }
        if (!moves.empty()) {
            os << " transfer" << moves << " ;";
            any = true;
        }
        if (!any) {
            os << " ;";
        }
        os << "\n";
    }
    if (target) {
        os << "  target" << counts_text(net, *target) << " ;\n";
    }
    os << "}\n";
    return os.str();
}

Marking parse_marking(const Tpn& net, const std::string& text) {
    Cursor c(text + " ;");
    auto list = count_list(c);
    if (!c.at_end()) {
        c.fail("expected end of marking");
    }
    Marking m = zero_marking(net);
    for (const auto& [p, n] : list) {
        m[place_id(net, p)] += n;
    }
    return m;
}

// ---------------------------------------------------------------------------
// Data words

Datum DataTable::intern(const std::string& s) {
    auto it = ids_.find(s);
    if (it != ids_.end()) {
        return it->second;
    }
    const Datum d = (Datum{1} << 63) + ids_.size();
    ids_.emplace(s, d);
    names_.emplace(d, s);
    return d;
}

std::optional<std::string> DataTable::name_of(Datum d) const {
    auto it = names_.find(d);
    if (it == names_.end()) {
        return std::nullopt;
    }
    return it->second;
}

DataWord parse_word(const std::string& text, const std::vector<std::string>& letters, DataTable& table) {
    Cursor c(text);
    DataWord w;
    while (!c.at_end()) {
        const Token& at = c.peek();
        std::string letter = c.name("a letter");
        auto it = std::find(letters.begin(), letters.end(), letter);
        if (it == letters.end()) {
            throw ParseError("letter '" + letter + "' is not in the alphabet", at.line, at.column);
        }
        c.expect(":");
        const Token& d = c.peek();
        if (d.kind != Token::Kind::name) {
            c.fail("expected a datum");
        }
        const bool numeric = !d.quoted && !d.text.empty() && d.text.size() <= 18 &&
                             std::all_of(d.text.begin(), d.text.end(), ::isdigit);
        Datum value = numeric ? std::stoull(d.text) : table.intern(d.text);
        c.next();
        w.push_back(Symbol{static_cast<LetterId>(it - letters.begin()), value});
    }
    return w;
}

std::string print_word(const DataWord& w, const std::vector<std::string>& letters, const DataTable* table) {
    std::string out;
    for (const Symbol& s : w) {
        if (!out.empty()) {
            out += " ";
        }
        out += quote_name(letters.at(s.letter)) + ":";
        std::optional<std::string> name = table != nullptr ? table->name_of(s.datum) : std::nullopt;
        if (name) {
            std::string q = "\"";
            for (char ch : *name) {
                if (ch == '"' || ch == '\\') {
                    q += '\\';
                }
                q += ch;
            }
            out += q + "\"";
        } else {
            out += std::to_string(s.datum);
        }
    }
    return out;
}

std::string quote_name(const std::string& name) {
    const bool bare = !name.empty() && name != "in" && name != "bot" &&
                      std::all_of(name.begin(), name.end(), bare_char);
    if (bare) {
        return name;
    }
    std::string out = "\"";
    for (char c : name) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out + "\"";
}

}  // namespace rsakit
