// regex.hpp -- single-character back-reference regexes compiled to register
// automata and matched with a deterministic register set automaton
#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rsakit/core.hpp"
#include "rsakit/determinise.hpp"

namespace rsakit {

/// Syntax or unsupported-feature error with the offending position.
class RegexError : public InputError {
public:
    RegexError(const std::string& what, std::size_t position);
    std::size_t position;
};

/// Character class: `chars` when positive, everything else when negated.
struct CharClass {
    std::set<unsigned char> chars;
    bool negated = false;

    bool contains(unsigned char c) const { return (chars.count(c) != 0) != negated; }
};

struct RegexNode {
    enum class Kind { literal, cls, star, capture, backref };
    Kind kind = Kind::literal;
    CharClass cls;  // literal: a one-char class; star/capture: the repeated/captured class
    int index = 0;  // capture and backref number, 1-based
};

struct RegexAst {
    std::vector<RegexNode> nodes;
    int captures = 0;
};

/// `(c)` capture of a one-character class, `.` (anything but ';'), `[...]` and
/// `[^...]` classes, `*` after a class, `\k` back-references, `\c` escapes.
RegexAst parse_regex(const std::string& s);

std::string to_string(const RegexAst& ast);

/// Wraps the expression in leading and trailing any-character stars.
RegexAst search_form(const RegexAst& ast);

/// Letters of the compiled automaton: one per character mentioned by the
/// expression plus a shared letter for all other characters.
struct RegexAlphabet {
    std::vector<std::string> letters;
    std::vector<LetterId> letter_of;  // indexed by character
    LetterId other = 0;

    static RegexAlphabet of(const RegexAst& ast);
    Symbol encode(unsigned char c) const { return Symbol{letter_of[c], c}; }
    DataWord encode(const std::string& text) const;
    static std::string decode(const DataWord& w);
};

/// Anchored NRA; registers r1..rk hold the captured characters.
Nra compile_regex(const RegexAst& ast, const RegexAlphabet& alphabet);

/// Reference semantics by backtracking.  Anchored unless `search`.
bool backtrack_match(const RegexAst& ast, const std::string& text, bool search = false);

struct MatchResult {
    bool matched = false;
    std::size_t steps = 0;
};

/// Runs a complete deterministic RsA over the text, one transition per character.
MatchResult match_stream(const Rsa& d, const RegexAlphabet& alphabet, const std::string& text);

/// Search matcher: deterministic when the construction succeeds, otherwise a
/// backtracking fallback.
class Matcher {
public:
    explicit Matcher(const std::string& pattern, const DeterminiseOptions& opts = {});

    MatchResult match(const std::string& text) const;
    bool deterministic() const { return automaton_.has_value(); }
    const std::string& diagnostic() const { return diagnostic_; }
    const std::optional<Rsa>& automaton() const { return automaton_; }
    const RegexAlphabet& alphabet() const { return alphabet_; }
    const RegexAst& ast() const { return ast_; }

private:
    RegexAst ast_;
    RegexAlphabet alphabet_;
    std::optional<Rsa> automaton_;
    std::string diagnostic_;
};

struct GrepResult {
    bool matched = false;
    bool deterministic = false;
    std::size_t steps = 0;
    std::string diagnostic;
};

GrepResult grep_pipeline(const std::string& pattern, const std::string& text);

}  // namespace rsakit
