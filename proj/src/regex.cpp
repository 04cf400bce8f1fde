// regex.cpp -- parser, position-automaton compiler, matchers
#include "rsakit/regex.hpp"

#include <algorithm>
#include <cstdio>

#include "rsakit/algebra.hpp"

namespace rsakit {

RegexError::RegexError(const std::string& what, std::size_t pos)
    : InputError("regex: " + what + " at position " + std::to_string(pos)), position(pos) {}

namespace {

CharClass single(unsigned char c) { return CharClass{{c}, false}; }
CharClass dot() { return CharClass{{static_cast<unsigned char>(';')}, true}; }
CharClass anything() { return CharClass{{}, true}; }

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    RegexAst parse() {
        RegexAst ast;
        while (pos_ < s_.size()) {
            const std::size_t at = pos_;
            const char c = s_[pos_];
            if (c == '(') {
                ++pos_;
                if (pos_ < s_.size() && s_[pos_] == '(') {
                    throw RegexError("unsupported nested group", pos_);
                }
                CharClass cls = atom("capture");
                if (pos_ >= s_.size()) {
                    throw RegexError("unterminated group", at);
                }
                if (s_[pos_] != ')') {
                    throw RegexError("unsupported multi-character capture", at);
                }
                ++pos_;
                ast.nodes.push_back(RegexNode{RegexNode::Kind::capture, std::move(cls), ++ast.captures});
                no_star_after("capture");
            } else if (c == '\\' && pos_ + 1 < s_.size() && s_[pos_ + 1] >= '1' && s_[pos_ + 1] <= '9') {
                pos_ += 1;
                int k = 0;
                while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') {
                    k = k * 10 + (s_[pos_] - '0');
                    ++pos_;
                }
                if (k > ast.captures) {
                    throw RegexError("back-reference \\" + std::to_string(k) + " precedes its group", at);
                }
                ast.nodes.push_back(RegexNode{RegexNode::Kind::backref, {}, k});
                no_star_after("back-reference");
            } else {
                CharClass cls = atom("expression");
                const bool is_literal = !cls.negated && cls.chars.size() == 1 && s_[at] != '[';
                if (pos_ < s_.size() && s_[pos_] == '*') {
                    ++pos_;
                    ast.nodes.push_back(RegexNode{RegexNode::Kind::star, std::move(cls), 0});
                } else {
                    ast.nodes.push_back(RegexNode{
                        is_literal ? RegexNode::Kind::literal : RegexNode::Kind::cls, std::move(cls), 0});
                }
            }
        }
        return ast;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    void no_star_after(const char* what) {
        if (pos_ < s_.size() && s_[pos_] == '*') {
            throw RegexError(std::string("unsupported repetition of a ") + what, pos_);
        }
    }

    /// One-character matcher: '.', a bracket class, an escape or a literal.
    CharClass atom(const char* context) {
        if (pos_ >= s_.size()) {
            throw RegexError(std::string("unexpected end of ") + context, pos_);
        }
        const std::size_t at = pos_;
        const char c = s_[pos_++];
        switch (c) {
        case '.':
            return dot();
        case '[':
            return bracket(at);
        case '\\':
            if (pos_ >= s_.size()) {
                throw RegexError("dangling escape", at);
            }
            return single(static_cast<unsigned char>(s_[pos_++]));
        case '|':
            throw RegexError("unsupported alternation", at);
        case '+':
        case '?':
        case '{':
            throw RegexError(std::string("unsupported quantifier '") + c + "'", at);
        case '*':
            throw RegexError("repetition without operand", at);
        case ')':
            throw RegexError("unmatched ')'", at);
        case '(':
            throw RegexError("unsupported nested group", at);
        case '^':
        case '$':
            throw RegexError("unsupported anchor", at);
        default:
            return single(static_cast<unsigned char>(c));
        }
    }

    CharClass bracket(std::size_t at) {
        CharClass cls;
        if (pos_ < s_.size() && s_[pos_] == '^') {
            cls.negated = true;
            ++pos_;
        }
        bool first = true;
        while (true) {
            if (pos_ >= s_.size()) {
                throw RegexError("unterminated character class", at);
            }
            char c = s_[pos_];
            if (c == ']' && !first) {
                ++pos_;
                break;
            }
            first = false;
            ++pos_;
            if (c == '\\') {
                if (pos_ >= s_.size()) {
                    throw RegexError("dangling escape", pos_ - 1);
                }
                c = s_[pos_++];
            }
            auto lo = static_cast<unsigned char>(c);
            if (pos_ + 1 < s_.size() && s_[pos_] == '-' && s_[pos_ + 1] != ']') {
                auto hi = static_cast<unsigned char>(s_[pos_ + 1]);
                if (hi < lo) {
                    throw RegexError("reversed range", pos_);
                }
                pos_ += 2;
                for (unsigned v = lo; v <= hi; ++v) {
                    cls.chars.insert(static_cast<unsigned char>(v));
                }
            } else {
                cls.chars.insert(lo);
            }
        }
        return cls;
    }
};

std::string escape_char(unsigned char c) {
    static const std::string special = "\\.[]()*|+?{}^$";
    std::string out;
    if (special.find(static_cast<char>(c)) != std::string::npos) {
        out += '\\';
    }
    out += static_cast<char>(c);
    return out;
}

std::string class_text(const CharClass& cls) {
    if (cls.negated && cls.chars.size() == 1 && *cls.chars.begin() == ';') {
        return ".";
    }
    if (!cls.negated && cls.chars.size() == 1) {
        return escape_char(*cls.chars.begin());
    }
    std::string out = cls.negated ? "[^" : "[";
    for (unsigned char c : cls.chars) {
        out += (c == ']' || c == '\\' || c == '^' || c == '-') ? std::string("\\") + static_cast<char>(c)
                                                              : std::string(1, static_cast<char>(c));
    }
    return out + "]";
}

std::string letter_name(unsigned char c) {
    if (c > ' ' && c < 127 && c != '#') {
        return std::string(1, static_cast<char>(c));
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x", static_cast<unsigned>(c));
    return buf;
}

}  // namespace

RegexAst parse_regex(const std::string& s) { return Parser(s).parse(); }

std::string to_string(const RegexAst& ast) {
    std::string out;
    for (const RegexNode& n : ast.nodes) {
        switch (n.kind) {
        case RegexNode::Kind::literal:
        case RegexNode::Kind::cls:
            out += class_text(n.cls);
            break;
        case RegexNode::Kind::star:
            out += class_text(n.cls) + "*";
            break;
        case RegexNode::Kind::capture:
            out += "(" + class_text(n.cls) + ")";
            break;
        case RegexNode::Kind::backref:
            out += "\\" + std::to_string(n.index);
            break;
        }
    }
    return out;
}

RegexAst search_form(const RegexAst& ast) {
    RegexAst out;
    out.captures = ast.captures;
    out.nodes.push_back(RegexNode{RegexNode::Kind::star, anything(), 0});
    out.nodes.insert(out.nodes.end(), ast.nodes.begin(), ast.nodes.end());
    out.nodes.push_back(RegexNode{RegexNode::Kind::star, anything(), 0});
    return out;
}

RegexAlphabet RegexAlphabet::of(const RegexAst& ast) {
    std::set<unsigned char> mentioned;
    for (const RegexNode& n : ast.nodes) {
        mentioned.insert(n.cls.chars.begin(), n.cls.chars.end());
    }
    RegexAlphabet a;
    for (unsigned char c : mentioned) {
        a.letters.push_back(letter_name(c));
    }
    a.other = static_cast<LetterId>(a.letters.size());
    a.letters.push_back("#other");
    a.letter_of.assign(256, a.other);
    LetterId id = 0;
    for (unsigned char c : mentioned) {
        a.letter_of[c] = id++;
    }
    return a;
}

DataWord RegexAlphabet::encode(const std::string& text) const {
    DataWord w;
    w.reserve(text.size());
    for (char c : text) {
        w.push_back(encode(static_cast<unsigned char>(c)));
    }
    return w;
}

std::string RegexAlphabet::decode(const DataWord& w) {
    std::string out;
    for (const Symbol& s : w) {
        out += static_cast<char>(static_cast<unsigned char>(s.datum));
    }
    return out;
}

Nra compile_regex(const RegexAst& ast, const RegexAlphabet& alphabet) {
    const std::size_t n = ast.nodes.size();
    Nra a;
    a.name = "regex";
    a.letters = alphabet.letters;
    for (int k = 1; k <= ast.captures; ++k) {
        a.registers.push_back("r" + std::to_string(k));
    }
    for (std::size_t i = 0; i <= n; ++i) {
        a.states.push_back("p" + std::to_string(i));
    }
    // Representative character of each letter, to evaluate class membership.
    std::vector<int> rep(a.letters.size(), -1);
    for (int c = 0; c < 256; ++c) {
        LetterId l = alphabet.letter_of[static_cast<std::size_t>(c)];
        if (rep[l] < 0 || l != alphabet.other) {
            rep[l] = c;
        }
    }
    auto letter_matches = [&](const CharClass& cls, LetterId l) {
        if (l == alphabet.other) {
            return cls.negated;  // unmentioned characters lie outside every listed set
        }
        return cls.contains(static_cast<unsigned char>(rep[l]));
    };
    auto enter = [&](StateId from, std::size_t j) {
        const RegexNode& node = ast.nodes[j - 1];
        for (LetterId l = 0; l < a.letters.size(); ++l) {
            RegSet eq = 0;
            std::vector<std::pair<RegId, NraSource>> up;
            switch (node.kind) {
            case RegexNode::Kind::backref:
                eq = reg_bit(static_cast<RegId>(node.index - 1));
                break;
            case RegexNode::Kind::capture:
                if (!letter_matches(node.cls, l)) {
                    continue;
                }
                up.emplace_back(static_cast<RegId>(node.index - 1), NraSource::input());
                break;
            default:
                if (!letter_matches(node.cls, l)) {
                    continue;
                }
            }
            a.delta.push_back(make_nra_transition(from, l, eq, 0, std::move(up), static_cast<StateId>(j),
                                                  a.num_registers()));
        }
    };
    for (std::size_t i = 0; i <= n; ++i) {
        if (i > 0 && ast.nodes[i - 1].kind == RegexNode::Kind::star) {
            enter(static_cast<StateId>(i), i);
        }
        for (std::size_t j = i + 1; j <= n; ++j) {
            enter(static_cast<StateId>(i), j);
            if (ast.nodes[j - 1].kind != RegexNode::Kind::star) {
                break;
            }
        }
        bool tail_nullable = true;
        for (std::size_t j = i; j < n; ++j) {
            tail_nullable = tail_nullable && ast.nodes[j].kind == RegexNode::Kind::star;
        }
        if (tail_nullable) {
            a.final.push_back(static_cast<StateId>(i));
        }
    }
    a.initial = {0};
    return a;
}

namespace {

bool backtrack(const RegexAst& ast, std::size_t i, const std::string& text, std::size_t pos,
               std::vector<int>& caps) {
    if (i == ast.nodes.size()) {
        return pos == text.size();
    }
    const RegexNode& n = ast.nodes[i];
    switch (n.kind) {
    case RegexNode::Kind::star: {
        std::size_t end = pos;
        while (end < text.size() && n.cls.contains(static_cast<unsigned char>(text[end]))) {
            ++end;
        }
        for (std::size_t k = end + 1; k-- > pos;) {
            if (backtrack(ast, i + 1, text, k, caps)) {
                return true;
            }
        }
        return false;
    }
    case RegexNode::Kind::backref: {
        const int v = caps[static_cast<std::size_t>(n.index)];
        return v >= 0 && pos < text.size() && static_cast<unsigned char>(text[pos]) == v &&
               backtrack(ast, i + 1, text, pos + 1, caps);
    }
    case RegexNode::Kind::capture: {
        if (pos >= text.size() || !n.cls.contains(static_cast<unsigned char>(text[pos]))) {
            return false;
        }
        const int saved = caps[static_cast<std::size_t>(n.index)];
        caps[static_cast<std::size_t>(n.index)] = static_cast<unsigned char>(text[pos]);
        if (backtrack(ast, i + 1, text, pos + 1, caps)) {
            return true;
        }
        caps[static_cast<std::size_t>(n.index)] = saved;
        return false;
    }
    default:
        return pos < text.size() && n.cls.contains(static_cast<unsigned char>(text[pos])) &&
               backtrack(ast, i + 1, text, pos + 1, caps);
    }
}

}  // namespace

bool backtrack_match(const RegexAst& ast, const std::string& text, bool search) {
    const RegexAst form = search ? search_form(ast) : ast;
    std::vector<int> caps(static_cast<std::size_t>(form.captures) + 1, -1);
    return backtrack(form, 0, text, 0, caps);
}

MatchResult match_stream(const Rsa& d, const RegexAlphabet& alphabet, const std::string& text) {
    if (d.initial.size() != 1) {
        throw InputError("match_stream needs exactly one initial state");
    }
    const auto out = outgoing(d);
    RsaConfig cfg{d.initial.front(), std::vector<std::vector<Datum>>(d.num_registers())};
    MatchResult result;
    for (char c : text) {
        const Symbol sym = alphabet.encode(static_cast<unsigned char>(c));
        std::optional<RsaConfig> next;
        for (std::size_t i : out[cfg.state]) {
            if (auto n = rsa_step(cfg, d.delta[i], sym)) {
                if (next) {
                    throw std::logic_error("matcher automaton is not deterministic");
                }
                next = std::move(n);
            }
        }
        if (!next) {
            throw std::logic_error("matcher automaton is not complete");
        }
        cfg = std::move(*next);
        ++result.steps;
    }
    result.matched = d.is_final(cfg.state);
    return result;
}

Matcher::Matcher(const std::string& pattern, const DeterminiseOptions& opts)
    : ast_(parse_regex(pattern)) {
    const RegexAst wrapped = search_form(ast_);
    alphabet_ = RegexAlphabet::of(wrapped);
    const Nra nra = compile_regex(wrapped, alphabet_);
    try {
        DeterminisationOutcome out = determinise_pipeline(nra, opts);
        if (out.ok()) {
            automaton_ = complete_rsa(*out.automaton);
            diagnostic_ = "deterministic matcher with " + std::to_string(automaton_->num_states()) +
                          " states (" + out.route + " route)";
        } else {
            diagnostic_ = std::string("determinisation returned BOT ") + to_string(out.bot->reason) +
                          "; falling back to backtracking";
        }
    } catch (const ResourceError& e) {
        diagnostic_ = std::string("determinisation hit a resource cap (") + e.what() +
                      "); falling back to backtracking";
    }
}

MatchResult Matcher::match(const std::string& text) const {
    if (automaton_) {
        return match_stream(*automaton_, alphabet_, text);
    }
    return MatchResult{backtrack_match(ast_, text, true), 0};
}

GrepResult grep_pipeline(const std::string& pattern, const std::string& text) {
    Matcher m(pattern);
    MatchResult r = m.match(text);
    return GrepResult{r.matched, m.deterministic(), r.steps, m.diagnostic()};
}

}  // namespace rsakit
