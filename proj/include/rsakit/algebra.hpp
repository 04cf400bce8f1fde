// algebra.hpp -- normal forms and Boolean closure constructions
#pragma once

#include <vector>

#include "rsakit/core.hpp"

namespace rsakit {

/// RsA whose transitions may additionally require some registers to be empty.
/// `empty_guard[i]` belongs to `base.delta[i]`.
struct RsaWithEmptyTest {
    Rsa base;
    std::vector<RegSet> empty_guard;
};

bool rsae_enabled(const RsaConfig& cfg, const RsaTransition& t, RegSet empty_guard, Symbol sym);
bool rsae_membership(const RsaWithEmptyTest& a, const DataWord& w);
std::vector<std::string> validate(const RsaWithEmptyTest& a);

/// Blocks of registers known to hold the same value; the representative of a
/// block is its lowest register.
struct Partition {
    std::vector<RegSet> blocks;  // sorted by lowest register, covering all registers

    static Partition discrete(std::size_t n);
    RegSet block_of(RegId r) const;
    RegId representative(RegId r) const;
    bool is_discrete() const;
    auto operator<=>(const Partition&) const = default;
};

// Conversions and completion -------------------------------------------------

Rsa embed_nra_to_rsa(const Nra& a);

/// Re-expresses `a` over `letters`, which must contain all of its letters.
Rsa with_alphabet(const Rsa& a, const std::vector<std::string>& letters);

/// Adds a non-final sink and transitions for every uncovered (state, letter,
/// guard set) case.
Nra complete(const Nra& a);
Nra complement_swap(const Nra& a);

/// RsA completion over (letter, guard-region) cases of the registers tested
/// at each state; preserves determinism.
Rsa complete_rsa(const Rsa& a);
Rsa complement_drsa(const Rsa& a);

Rsa union_rsa(const Rsa& a, const Rsa& b);
Rsa intersect_rsa(const Rsa& a, const Rsa& b);
/// Product with disjunctive acceptance of the completed operands; keeps
/// determinism when both inputs are deterministic.
Rsa union_drsa(const Rsa& a, const Rsa& b);

// Register normal forms ------------------------------------------------------

/// rgs(q): registers written (non-BOT) on an edge into q or tested on an edge
/// leaving q.
std::vector<RegSet> active_registers(const Nra& a);
bool is_register_local(const Nra& a);
/// Owner state of each register in a register-local automaton, or -1.
std::vector<long> register_owner(const Nra& a);

Nra register_local(const Nra& a);
Nra single_valued(const Nra& a);

Rsa eliminate_emptiness_guards(const RsaWithEmptyTest& a);
Rsa eliminate_epsilon(const Rsa& a);

/// Membership for automata that still carry epsilon edges.
bool rsa_membership_with_epsilon(const Rsa& a, const DataWord& w);

}  // namespace rsakit
