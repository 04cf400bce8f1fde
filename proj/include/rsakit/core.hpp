// core.hpp -- data words, register automata (NRA) and register set automata (RsA)
//
// Names of letters, states and registers are interned to dense ids; every
// algorithm works on the ids.  Register sets are 64-bit masks, so an automaton
// carries at most 64 registers.
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rsakit/errors.hpp"

namespace rsakit {

using StateId = std::uint32_t;
using RegId = std::uint32_t;
using LetterId = std::uint32_t;
using Datum = std::uint64_t;
using RegSet = std::uint64_t;

constexpr std::size_t kMaxRegisters = 64;

constexpr RegSet reg_bit(RegId r) { return RegSet{1} << r; }
constexpr bool has_reg(RegSet s, RegId r) { return (s >> r) & 1U; }
constexpr RegSet all_regs(std::size_t n) { return n >= 64 ? ~RegSet{0} : (RegSet{1} << n) - 1; }
std::vector<RegId> regs_of(RegSet s);

struct Symbol {
    LetterId letter = 0;
    Datum datum = 0;
    auto operator<=>(const Symbol&) const = default;
};

using DataWord = std::vector<Symbol>;

// ---------------------------------------------------------------------------
// NRA

/// Right-hand side of a single-datum register update.
struct NraSource {
    enum class Kind : std::uint8_t { reg, in, bot };
    Kind kind = Kind::bot;
    RegId reg = 0;

    static NraSource copy(RegId r) { return {Kind::reg, r}; }
    static NraSource input() { return {Kind::in, 0}; }
    static NraSource bot() { return {Kind::bot, 0}; }
    bool is_reg() const { return kind == Kind::reg; }
    bool is_in() const { return kind == Kind::in; }
    bool is_bot() const { return kind == Kind::bot; }
    auto operator<=>(const NraSource&) const = default;
};

struct NraTransition {
    StateId src = 0;
    LetterId letter = 0;
    RegSet eq = 0;
    RegSet neq = 0;
    std::vector<NraSource> up;  // one entry per register
    StateId dst = 0;

    auto operator<=>(const NraTransition&) const = default;
};

/// Builds a transition; rejects overlapping guards. Registers missing from
/// `up` keep their value.
NraTransition make_nra_transition(StateId src, LetterId letter, RegSet eq, RegSet neq,
                                  std::vector<std::pair<RegId, NraSource>> up,
                                  StateId dst, std::size_t num_registers);

/// Identity update for n registers.
std::vector<NraSource> keep_all(std::size_t n);

struct Nra {
    std::string name = "A";
    std::vector<std::string> letters;
    std::vector<std::string> states;
    std::vector<std::string> registers;
    std::vector<NraTransition> delta;
    std::vector<StateId> initial;  // sorted, unique
    std::vector<StateId> final;    // sorted, unique

    std::size_t num_states() const { return states.size(); }
    std::size_t num_registers() const { return registers.size(); }
    bool is_final(StateId q) const;
    bool is_initial(StateId q) const;
};

struct NraConfig {
    StateId state = 0;
    std::vector<std::optional<Datum>> regs;
    auto operator<=>(const NraConfig&) const = default;
};

using NraConfigSet = std::set<NraConfig>;

std::optional<NraConfig> nra_step(const NraConfig& cfg, const NraTransition& t, Symbol sym);
NraConfigSet nra_initial(const Nra& a);
NraConfigSet nra_advance(const Nra& a, const NraConfigSet& current, Symbol sym);
bool nra_membership(const Nra& a, const DataWord& w);
bool ura_membership(const Nra& a, const DataWord& w);

// ---------------------------------------------------------------------------
// RsA

/// Right-hand side of a set-register update: union of registers, plus IN.
struct RsaUpdate {
    RegSet regs = 0;
    bool in = false;
    auto operator<=>(const RsaUpdate&) const = default;
};

struct RsaTransition {
    StateId src = 0;
    LetterId letter = 0;
    RegSet in_guard = 0;
    RegSet notin_guard = 0;
    std::vector<RsaUpdate> up;  // one entry per register
    StateId dst = 0;

    auto operator<=>(const RsaTransition&) const = default;
};

RsaTransition make_rsa_transition(StateId src, LetterId letter, RegSet in_guard, RegSet notin_guard,
                                  std::vector<std::pair<RegId, RsaUpdate>> up, StateId dst,
                                  std::size_t num_registers);

std::vector<RsaUpdate> keep_all_sets(std::size_t n);

struct Rsa {
    std::string name = "A";
    std::vector<std::string> letters;
    std::vector<std::string> states;
    std::vector<std::string> registers;
    std::vector<RsaTransition> delta;
    std::vector<StateId> initial;
    std::vector<StateId> final;
    /// Guard-free, identity-update edges; only the gadget builder creates them.
    std::vector<std::pair<StateId, StateId>> epsilon;
    /// Original name -> renamed name, filled by constructions that rename apart.
    std::vector<std::pair<std::string, std::string>> renames;

    std::size_t num_states() const { return states.size(); }
    std::size_t num_registers() const { return registers.size(); }
    bool is_final(StateId q) const;
    bool is_initial(StateId q) const;
    bool is_canonical() const { return epsilon.empty(); }
};

struct RsaConfig {
    StateId state = 0;
    std::vector<std::vector<Datum>> regs;  // each sorted, unique
    auto operator<=>(const RsaConfig&) const = default;
};

using RsaConfigSet = std::set<RsaConfig>;

bool rsa_enabled(const RsaConfig& cfg, const RsaTransition& t, Symbol sym);
std::optional<RsaConfig> rsa_step(const RsaConfig& cfg, const RsaTransition& t, Symbol sym);
RsaConfigSet rsa_initial(const Rsa& a);
RsaConfigSet rsa_advance(const Rsa& a, const RsaConfigSet& current, Symbol sym);
bool rsa_membership(const Rsa& a, const DataWord& w);

// ---------------------------------------------------------------------------
// Structural queries

std::vector<std::string> validate(const Nra& a);
std::vector<std::string> validate(const Rsa& a);

bool is_deterministic(const Nra& a);
bool is_deterministic(const Rsa& a);
bool is_complete(const Nra& a);

/// Outgoing transition indices per state.
std::vector<std::vector<std::size_t>> outgoing(const Nra& a);
std::vector<std::vector<std::size_t>> outgoing(const Rsa& a);

/// Helpers for building automata by name.
StateId add_state(std::vector<std::string>& states, const std::string& name);
std::size_t index_of(const std::vector<std::string>& names, const std::string& name);
void normalize_ids(std::vector<StateId>& ids);

std::string describe(const Nra& a, const NraTransition& t);
std::string describe(const Rsa& a, const RsaTransition& t);

}  // namespace rsakit
