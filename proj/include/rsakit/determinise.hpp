// determinise.hpp -- macrostate construction turning a register-local NRA
// into a deterministic register set automaton, or reporting why it cannot.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rsakit/core.hpp"

namespace rsakit {

/// Abstract register cardinality: 0, 1, or "two or more".
enum class Card : std::uint8_t { zero = 0, one = 1, omega = 2 };

Card card_add(Card a, Card b);
const char* to_string(Card c);

struct Macrostate {
    std::vector<StateId> states;  // sorted
    std::vector<Card> counters;   // one per register
    /// For each register with a nonzero counter, the lowest register known to
    /// hold exactly the same set; registers with counter 0 map to themselves.
    std::vector<RegId> classes;
    /// Registers with a nonzero counter whose owning runs may still hold BOT.
    RegSet maybe_unset = 0;

    auto operator<=>(const Macrostate&) const = default;
};

enum class BotReason { cardinality, cartesian };
const char* to_string(BotReason r);

struct BotInfo {
    BotReason reason = BotReason::cardinality;
    Macrostate macrostate;
    LetterId letter = 0;
    RegSet minterm = 0;
    std::string detail;
};

struct Successor {
    RsaTransition transition;  // src and dst are left at 0
    Macrostate target;
};

struct DeterminiseOptions {
    std::size_t max_macrostates = 100000;
    const CancelToken* cancel = nullptr;
};

struct DeterminisationOutcome {
    std::optional<Rsa> automaton;
    std::vector<Macrostate> macrostates;  // state i of the automaton is macrostates[i]
    std::optional<BotInfo> bot;
    std::string route;  // preprocessing route that produced the outcome

    bool ok() const { return automaton.has_value(); }
};

Macrostate initial_macrostate(const Nra& a);

/// Registers whose membership of the input datum can influence the step from
/// `m` on `letter`; minterms range over their equality classes.
RegSet relevant_registers(const Nra& a, const Macrostate& m, LetterId letter);

/// One step of the construction for the minterm `g` (a set of registers
/// containing the input datum; closed under the equality classes of `m`).
/// The emitted guard is (g, relevant \ g).
std::variant<Successor, BotInfo> successor(const Nra& a, const Macrostate& m, LetterId letter,
                                           RegSet g, RegSet relevant);

/// Pre: `a` is register-local.
DeterminisationOutcome determinise(const Nra& a, const DeterminiseOptions& opts = {});

/// register_local, single_valued, register_local again, then determinise.  If
/// that reports BOT the register-local form is tried directly; the first BOT
/// is returned when both fail.
DeterminisationOutcome determinise_pipeline(const Nra& a, const DeterminiseOptions& opts = {});

std::string describe(const Nra& a, const Macrostate& m);

}  // namespace rsakit
