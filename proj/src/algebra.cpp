// algebra.cpp -- normal forms and closure constructions
#include "rsakit/algebra.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>

namespace rsakit {

namespace {

constexpr std::size_t kMaxMintermRegisters = 20;

std::string fresh_name(const std::vector<std::string>& taken, std::string base) {
    while (std::find(taken.begin(), taken.end(), base) != taken.end()) {
        base += "'";
    }
    return base;
}

RegId lowest(RegSet s) { return static_cast<RegId>(std::countr_zero(s)); }

/// Maps the letters of `names` into `merged`, extending it as needed.
std::vector<LetterId> merge_letters(std::vector<std::string>& merged,
                                    const std::vector<std::string>& names) {
    std::vector<LetterId> map(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        auto it = std::find(merged.begin(), merged.end(), names[i]);
        if (it == merged.end()) {
            merged.push_back(names[i]);
            map[i] = static_cast<LetterId>(merged.size() - 1);
        } else {
            map[i] = static_cast<LetterId>(it - merged.begin());
        }
    }
    return map;
}

void check_register_budget(std::size_t n) {
    if (n > kMaxRegisters) {
        throw ResourceError("construction needs more than 64 registers");
    }
}

}  // namespace

Rsa with_alphabet(const Rsa& a, const std::vector<std::string>& letters) {
    std::vector<std::string> merged = letters;
    std::vector<LetterId> map = merge_letters(merged, a.letters);
    if (merged.size() != letters.size()) {
        throw InputError("alphabet extension must be a superset");
    }
    Rsa out = a;
    out.letters = letters;
    for (RsaTransition& t : out.delta) {
        t.letter = map[t.letter];
    }
    return out;
}


// ---------------------------------------------------------------------------
// RsA with emptiness tests

bool rsae_enabled(const RsaConfig& cfg, const RsaTransition& t, RegSet empty_guard, Symbol sym) {
    if (!rsa_enabled(cfg, t, sym)) {
        return false;
    }
    for (RegId r : regs_of(empty_guard)) {
        if (!cfg.regs[r].empty()) {
            return false;
        }
    }
    return true;
}

bool rsae_membership(const RsaWithEmptyTest& a, const DataWord& w) {
    RsaConfigSet current = rsa_initial(a.base);
    for (const Symbol& sym : w) {
        RsaConfigSet next;
        for (const RsaConfig& cfg : current) {
            for (std::size_t i = 0; i < a.base.delta.size(); ++i) {
                if (rsae_enabled(cfg, a.base.delta[i], a.empty_guard[i], sym)) {
                    next.insert(*rsa_step(cfg, a.base.delta[i], sym));
                }
            }
        }
        current = std::move(next);
    }
    return std::any_of(current.begin(), current.end(),
                       [&](const RsaConfig& c) { return a.base.is_final(c.state); });
}

std::vector<std::string> validate(const RsaWithEmptyTest& a) {
    std::vector<std::string> out = validate(a.base);
    if (a.empty_guard.size() != a.base.delta.size()) {
        out.push_back("emptiness guards do not match the transition list");
        return out;
    }
    const RegSet known = all_regs(a.base.num_registers());
    for (std::size_t i = 0; i < a.empty_guard.size(); ++i) {
        if ((a.empty_guard[i] & ~known) != 0) {
            out.push_back("transition #" + std::to_string(i) + ": unknown register in empty guard");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Partition

Partition Partition::discrete(std::size_t n) {
    Partition p;
    for (std::size_t r = 0; r < n; ++r) {
        p.blocks.push_back(reg_bit(static_cast<RegId>(r)));
    }
    return p;
}

RegSet Partition::block_of(RegId r) const {
    for (RegSet b : blocks) {
        if (has_reg(b, r)) {
            return b;
        }
    }
    return reg_bit(r);
}

RegId Partition::representative(RegId r) const { return lowest(block_of(r)); }

bool Partition::is_discrete() const {
    return std::all_of(blocks.begin(), blocks.end(), [](RegSet b) { return std::popcount(b) == 1; });
}

// ---------------------------------------------------------------------------
// Embedding, completion, complement

Rsa embed_nra_to_rsa(const Nra& a) {
    Rsa out;
    out.name = a.name;
    out.letters = a.letters;
    out.states = a.states;
    out.registers = a.registers;
    out.initial = a.initial;
    out.final = a.final;
    for (const NraTransition& t : a.delta) {
        RsaTransition u{t.src, t.letter, t.eq, t.neq, std::vector<RsaUpdate>(a.num_registers()), t.dst};
        for (std::size_t r = 0; r < a.num_registers(); ++r) {
            const NraSource& s = t.up[r];
            if (s.is_reg()) {
                u.up[r].regs = reg_bit(s.reg);
            } else if (s.is_in()) {
                u.up[r].in = true;
            }
        }
        out.delta.push_back(std::move(u));
    }
    return out;
}

Nra complete(const Nra& a) {
    const std::size_t n = a.num_registers();
    if (n > kMaxMintermRegisters) {
        throw ResourceError("completion enumerates 2^|R| guard sets; too many registers");
    }
    Nra out = a;
    const StateId sink = add_state(out.states, fresh_name(a.states, "sink"));
    const std::vector<NraSource> clear(n, NraSource::bot());
    const RegSet everything = all_regs(n);
    const auto out_edges = outgoing(a);
    for (StateId q = 0; q < a.num_states(); ++q) {
        for (LetterId l = 0; l < a.letters.size(); ++l) {
            std::vector<const NraTransition*> here;
            for (std::size_t i : out_edges[q]) {
                if (a.delta[i].letter == l) {
                    here.push_back(&a.delta[i]);
                }
            }
            if (here.empty()) {
                out.delta.push_back(NraTransition{q, l, 0, 0, clear, sink});
                continue;
            }
            for (RegSet g = 0; g <= everything; ++g) {
                bool covered = std::any_of(here.begin(), here.end(), [&](const NraTransition* t) {
                    return (t->eq & ~g) == 0 && (t->neq & g) == 0;
                });
                if (!covered) {
                    out.delta.push_back(NraTransition{q, l, g, everything & ~g, clear, sink});
                }
                if (g == everything) {
                    break;
                }
            }
        }
    }
    for (LetterId l = 0; l < a.letters.size(); ++l) {
        out.delta.push_back(NraTransition{sink, l, 0, 0, clear, sink});
    }
    return out;
}

Nra complement_swap(const Nra& a) {
    Nra out = complete(a);
    std::vector<StateId> finals;
    for (StateId q = 0; q < out.num_states(); ++q) {
        if (!a.is_final(q) || q >= a.num_states()) {
            finals.push_back(q);
        }
    }
    out.final = std::move(finals);
    return out;
}

namespace {

struct GuardCube {
    RegSet in = 0;
    RegSet notin = 0;
};

bool cubes_meet(const GuardCube& c, const RsaTransition& t) {
    return (c.in & t.notin_guard) == 0 && (c.notin & t.in_guard) == 0;
}

bool cube_inside(const GuardCube& c, const RsaTransition& t) {
    return (t.in_guard & ~c.in) == 0 && (t.notin_guard & ~c.notin) == 0;
}

/// Appends disjoint cubes covering the part of `c` no transition in `here`
/// accepts, splitting on one register at a time.
void uncovered(const std::vector<const RsaTransition*>& here, GuardCube c, std::vector<GuardCube>& out,
               std::size_t& budget) {
    const RsaTransition* split = nullptr;
    for (const RsaTransition* t : here) {
        if (!cubes_meet(c, *t)) {
            continue;
        }
        if (cube_inside(c, *t)) {
            return;
        }
        if (!split) {
            split = t;
        }
    }
    if (!split) {
        if (budget == 0) {
            throw ResourceError("completion: too many uncovered guard cubes at one state");
        }
        --budget;
        out.push_back(c);
        return;
    }
    const RegSet open = (split->in_guard | split->notin_guard) & ~(c.in | c.notin);
    const RegSet r = open & (~open + 1);
    uncovered(here, GuardCube{c.in | r, c.notin}, out, budget);
    uncovered(here, GuardCube{c.in, c.notin | r}, out, budget);
}

}  // namespace

Rsa complete_rsa(const Rsa& a) {
    if (!a.is_canonical()) {
        throw InputError("completion needs an epsilon-free automaton");
    }
    const std::size_t n = a.num_registers();
    Rsa out = a;
    const StateId sink = add_state(out.states, fresh_name(a.states, "sink"));
    const std::vector<RsaUpdate> clear(n);
    const auto out_edges = outgoing(a);
    for (StateId q = 0; q < a.num_states(); ++q) {
        for (LetterId l = 0; l < a.letters.size(); ++l) {
            std::vector<const RsaTransition*> here;
            for (std::size_t i : out_edges[q]) {
                if (a.delta[i].letter == l) {
                    here.push_back(&a.delta[i]);
                }
            }
            std::vector<GuardCube> gaps;
            std::size_t budget = std::size_t{1} << kMaxMintermRegisters;
            uncovered(here, GuardCube{}, gaps, budget);
            for (const GuardCube& c : gaps) {
                out.delta.push_back(RsaTransition{q, l, c.in, c.notin, clear, sink});
            }
        }
    }
    for (LetterId l = 0; l < a.letters.size(); ++l) {
        out.delta.push_back(RsaTransition{sink, l, 0, 0, clear, sink});
    }
    return out;
}

Rsa complement_drsa(const Rsa& a) {
    if (!is_deterministic(a)) {
        throw InputError("complement_drsa needs a deterministic automaton");
    }
    Rsa out = complete_rsa(a);
    std::vector<StateId> finals;
    for (StateId q = 0; q < out.num_states(); ++q) {
        if (q >= a.num_states() || !a.is_final(q)) {
            finals.push_back(q);
        }
    }
    out.final = std::move(finals);
    return out;
}

// ---------------------------------------------------------------------------
// Union and product

namespace {

std::string tagged(const std::string& name, int side) { return name + "#" + std::to_string(side); }

void record_renames(Rsa& out, const Rsa& src, int side) {
    for (const auto& s : src.states) {
        out.renames.emplace_back(s, tagged(s, side));
    }
    for (const auto& r : src.registers) {
        out.renames.emplace_back(r, tagged(r, side));
    }
}

RsaTransition shifted(const RsaTransition& t, const std::vector<LetterId>& letter_map,
                      StateId state_offset, std::size_t reg_offset, std::size_t total_regs) {
    RsaTransition u{t.src + state_offset, letter_map[t.letter], t.in_guard << reg_offset,
                    t.notin_guard << reg_offset, std::vector<RsaUpdate>(total_regs),
                    t.dst + state_offset};
    for (std::size_t r = 0; r < t.up.size(); ++r) {
        u.up[r + reg_offset] = RsaUpdate{t.up[r].regs << reg_offset, t.up[r].in};
    }
    return u;
}

enum class Acceptance { both, either };

Rsa product(const Rsa& a, const Rsa& b, Acceptance mode) {
    if (!a.is_canonical() || !b.is_canonical()) {
        throw InputError("product needs epsilon-free automata");
    }
    const std::size_t na = a.num_registers();
    const std::size_t total = na + b.num_registers();
    check_register_budget(total);
    Rsa out;
    out.name = a.name + "_x_" + b.name;
    std::vector<LetterId> la = merge_letters(out.letters, a.letters);
    std::vector<LetterId> lb = merge_letters(out.letters, b.letters);
    for (const auto& r : a.registers) {
        out.registers.push_back(tagged(r, 1));
    }
    for (const auto& r : b.registers) {
        out.registers.push_back(tagged(r, 2));
    }
    record_renames(out, a, 1);
    record_renames(out, b, 2);
    const StateId nb = static_cast<StateId>(b.num_states());
    auto pair_id = [nb](StateId p, StateId q) { return p * nb + q; };
    for (StateId p = 0; p < a.num_states(); ++p) {
        for (StateId q = 0; q < nb; ++q) {
            out.states.push_back("(" + a.states[p] + "," + b.states[q] + ")");
            bool fa = a.is_final(p);
            bool fb = b.is_final(q);
            if (mode == Acceptance::both ? (fa && fb) : (fa || fb)) {
                out.final.push_back(pair_id(p, q));
            }
        }
    }
    for (StateId p : a.initial) {
        for (StateId q : b.initial) {
            out.initial.push_back(pair_id(p, q));
        }
    }
    normalize_ids(out.initial);
    normalize_ids(out.final);
    for (const RsaTransition& s : a.delta) {
        for (const RsaTransition& t : b.delta) {
            if (la[s.letter] != lb[t.letter]) {
                continue;
            }
            RsaTransition u{pair_id(s.src, t.src), la[s.letter], s.in_guard | (t.in_guard << na),
                            s.notin_guard | (t.notin_guard << na), std::vector<RsaUpdate>(total),
                            pair_id(s.dst, t.dst)};
            if ((u.in_guard & u.notin_guard) != 0) {
                continue;  // cannot happen: register sets are disjoint
            }
            for (std::size_t r = 0; r < na; ++r) {
                u.up[r] = s.up[r];
            }
            for (std::size_t r = 0; r < b.num_registers(); ++r) {
                u.up[r + na] = RsaUpdate{t.up[r].regs << na, t.up[r].in};
            }
            out.delta.push_back(std::move(u));
        }
    }
    return out;
}

}  // namespace

Rsa union_rsa(const Rsa& a, const Rsa& b) {
    if (!a.is_canonical() || !b.is_canonical()) {
        throw InputError("union needs epsilon-free automata");
    }
    const std::size_t total = a.num_registers() + b.num_registers();
    check_register_budget(total);
    Rsa out;
    out.name = a.name + "_or_" + b.name;
    std::vector<LetterId> la = merge_letters(out.letters, a.letters);
    std::vector<LetterId> lb = merge_letters(out.letters, b.letters);
    for (const auto& s : a.states) {
        out.states.push_back(tagged(s, 1));
    }
    for (const auto& s : b.states) {
        out.states.push_back(tagged(s, 2));
    }
    for (const auto& r : a.registers) {
        out.registers.push_back(tagged(r, 1));
    }
    for (const auto& r : b.registers) {
        out.registers.push_back(tagged(r, 2));
    }
    record_renames(out, a, 1);
    record_renames(out, b, 2);
    const StateId off = static_cast<StateId>(a.num_states());
    for (const RsaTransition& t : a.delta) {
        out.delta.push_back(shifted(t, la, 0, 0, total));
    }
    for (const RsaTransition& t : b.delta) {
        out.delta.push_back(shifted(t, lb, off, a.num_registers(), total));
    }
    out.initial = a.initial;
    out.final = a.final;
    for (StateId q : b.initial) {
        out.initial.push_back(q + off);
    }
    for (StateId q : b.final) {
        out.final.push_back(q + off);
    }
    normalize_ids(out.initial);
    normalize_ids(out.final);
    return out;
}

Rsa intersect_rsa(const Rsa& a, const Rsa& b) { return product(a, b, Acceptance::both); }

Rsa union_drsa(const Rsa& a, const Rsa& b) {
    std::vector<std::string> letters;
    merge_letters(letters, a.letters);
    merge_letters(letters, b.letters);
    Rsa ca = complete_rsa(with_alphabet(a, letters));
    Rsa cb = complete_rsa(with_alphabet(b, letters));
    return product(ca, cb, Acceptance::either);
}

// ---------------------------------------------------------------------------
// Register-locality

std::vector<RegSet> active_registers(const Nra& a) {
    std::vector<RegSet> rgs(a.num_states(), 0);
    for (const NraTransition& t : a.delta) {
        rgs[t.src] |= t.eq | t.neq;
        for (std::size_t r = 0; r < t.up.size(); ++r) {
            if (!t.up[r].is_bot()) {
                rgs[t.dst] |= reg_bit(static_cast<RegId>(r));
            }
        }
    }
    return rgs;
}

bool is_register_local(const Nra& a) {
    RegSet seen = 0;
    for (RegSet s : active_registers(a)) {
        if ((seen & s) != 0) {
            return false;
        }
        seen |= s;
    }
    return true;
}

std::vector<long> register_owner(const Nra& a) {
    std::vector<long> owner(a.num_registers(), -1);
    const auto rgs = active_registers(a);
    for (StateId q = 0; q < a.num_states(); ++q) {
        for (RegId r : regs_of(rgs[q])) {
            if (owner[r] != -1) {
                throw InputError("automaton is not register-local: register '" + a.registers[r] +
                                 "' is active in several states");
            }
            owner[r] = static_cast<long>(q);
        }
    }
    return owner;
}

Nra register_local(const Nra& a) {
    const std::size_t nq = a.num_states();
    const std::size_t nr = a.num_registers();
    // Registers that may be read (tested or copied into a live register)
    // before being overwritten.
    std::vector<RegSet> live(nq, 0);
    for (bool changed = true; changed;) {
        changed = false;
        for (const NraTransition& t : a.delta) {
            RegSet need = live[t.src] | t.eq | t.neq;
            for (RegId r : regs_of(live[t.dst])) {
                if (t.up[r].is_reg()) {
                    need |= reg_bit(t.up[r].reg);
                }
            }
            if (need != live[t.src]) {
                live[t.src] = need;
                changed = true;
            }
        }
    }
    // Registers that may hold a datum (not BOT).
    std::vector<RegSet> defined(nq, 0);
    for (bool changed = true; changed;) {
        changed = false;
        for (const NraTransition& t : a.delta) {
            RegSet got = defined[t.dst];
            for (std::size_t r = 0; r < nr; ++r) {
                const NraSource& s = t.up[r];
                if (s.is_in() || (s.is_reg() && has_reg(defined[t.src], s.reg))) {
                    got |= reg_bit(static_cast<RegId>(r));
                }
            }
            if (got != defined[t.dst]) {
                defined[t.dst] = got;
                changed = true;
            }
        }
    }

    Nra out;
    out.name = a.name;
    out.letters = a.letters;
    out.states = a.states;
    out.initial = a.initial;
    out.final = a.final;
    std::vector<std::vector<RegId>> copy(nq, std::vector<RegId>(nr, 0));
    for (StateId q = 0; q < nq; ++q) {
        for (RegId r : regs_of(live[q] & defined[q])) {
            copy[q][r] = static_cast<RegId>(out.registers.size());
            out.registers.push_back(fresh_name(out.registers, a.registers[r] + "_" + a.states[q]));
        }
    }
    check_register_budget(out.registers.size());
    const std::size_t n_out = out.registers.size();
    for (const NraTransition& t : a.delta) {
        const RegSet kept_src = live[t.src] & defined[t.src];
        const RegSet kept_dst = live[t.dst] & defined[t.dst];
        if ((t.eq & ~defined[t.src]) != 0) {
            continue;  // an equality test against an unset register never holds
        }
        NraTransition u{t.src, t.letter, 0, 0, std::vector<NraSource>(n_out, NraSource::bot()), t.dst};
        for (RegId r : regs_of(t.eq)) {
            u.eq |= reg_bit(copy[t.src][r]);
        }
        for (RegId r : regs_of(t.neq & defined[t.src])) {
            u.neq |= reg_bit(copy[t.src][r]);
        }
        for (RegId r : regs_of(kept_dst)) {
            const NraSource& s = t.up[r];
            NraSource& target = u.up[copy[t.dst][r]];
            if (s.is_in()) {
                target = NraSource::input();
            } else if (s.is_reg() && has_reg(kept_src, s.reg)) {
                target = NraSource::copy(copy[t.src][s.reg]);
            }
        }
        out.delta.push_back(std::move(u));
    }
    std::sort(out.delta.begin(), out.delta.end());
    out.delta.erase(std::unique(out.delta.begin(), out.delta.end()), out.delta.end());
    return out;
}

// ---------------------------------------------------------------------------
// Single-valued form

namespace {

struct SvKey {
    StateId q;
    Partition p;
    auto operator<=>(const SvKey&) const = default;
};

std::string partition_suffix(const Nra& a, const Partition& p) {
    std::string out;
    for (RegSet b : p.blocks) {
        if (std::popcount(b) < 2) {
            continue;
        }
        out += out.empty() ? "{" : "|";
        bool first = true;
        for (RegId r : regs_of(b)) {
            out += (first ? "" : " ") + a.registers[r];
            first = false;
        }
    }
    return out.empty() ? out : out + "}";
}

}  // namespace

Nra single_valued(const Nra& a) {
    const std::size_t nr = a.num_registers();
    const auto rgs = active_registers(a);
    const auto out_edges = outgoing(a);

    Nra out;
    out.name = a.name;
    out.letters = a.letters;
    out.registers = a.registers;
    std::map<SvKey, StateId> ids;
    std::deque<SvKey> work;
    auto intern = [&](const SvKey& k) {
        auto [it, fresh] = ids.emplace(k, static_cast<StateId>(out.states.size()));
        if (fresh) {
            out.states.push_back(a.states[k.q] + partition_suffix(a, k.p));
            if (a.is_final(k.q)) {
                out.final.push_back(it->second);
            }
            work.push_back(k);
        }
        return it->second;
    };
    for (StateId q : a.initial) {
        out.initial.push_back(intern(SvKey{q, Partition::discrete(nr)}));
    }

    // Source of a register value after a transition: an old block (by its
    // representative), the input datum, or nothing.
    constexpr long kIn = -1;
    constexpr long kNone = -2;

    while (!work.empty()) {
        SvKey key = work.front();
        work.pop_front();
        const StateId here = ids.at(key);
        const Partition& part = key.p;
        for (std::size_t i : out_edges[key.q]) {
            const NraTransition& t = a.delta[i];
            RegSet eq = 0;
            RegSet neq = 0;
            for (RegId r : regs_of(t.eq)) {
                eq |= reg_bit(part.representative(r));
            }
            for (RegId r : regs_of(t.neq)) {
                neq |= reg_bit(part.representative(r));
            }
            if (std::popcount(eq) > 1 || (eq & neq) != 0) {
                continue;  // distinct blocks hold distinct values: guard unsatisfiable
            }
            std::vector<long> source(nr, kNone);
            RegSet stored = 0;
            bool stores_input = false;
            for (std::size_t r = 0; r < nr; ++r) {
                const NraSource& s = t.up[r];
                if (s.is_in()) {
                    source[r] = kIn;
                    stores_input = true;
                } else if (s.is_reg() && has_reg(rgs[key.q], s.reg)) {
                    RegId rep = part.representative(s.reg);
                    source[r] = rep;
                    stored |= reg_bit(rep);
                }
            }
            // Each case fixes which old block (if any) the input datum equals.
            struct Case {
                RegSet extra_eq, extra_neq;
                long input_block;
            };
            std::vector<Case> cases;
            if (!stores_input) {
                cases.push_back({0, 0, kIn});
            } else if (eq != 0) {
                cases.push_back({0, 0, static_cast<long>(lowest(eq))});
            } else {
                RegSet ambiguous = stored & ~neq;
                for (RegId b : regs_of(ambiguous)) {
                    cases.push_back({reg_bit(b), 0, static_cast<long>(b)});
                }
                cases.push_back({0, ambiguous, kIn});
            }
            for (const Case& c : cases) {
                std::map<long, RegSet> groups;
                Partition next;
                for (std::size_t r = 0; r < nr; ++r) {
                    long k = source[r] == kIn ? c.input_block : source[r];
                    if (k == kNone) {
                        next.blocks.push_back(reg_bit(static_cast<RegId>(r)));
                    } else {
                        groups[k] |= reg_bit(static_cast<RegId>(r));
                    }
                }
                NraTransition u{here, t.letter, eq | c.extra_eq, neq | c.extra_neq,
                                std::vector<NraSource>(nr, NraSource::bot()), 0};
                for (auto [k, members] : groups) {
                    next.blocks.push_back(members);
                    RegId rep = lowest(members);
                    u.up[rep] = k == kIn ? NraSource::input() : NraSource::copy(static_cast<RegId>(k));
                }
                std::sort(next.blocks.begin(), next.blocks.end(),
                          [](RegSet x, RegSet y) { return lowest(x) < lowest(y); });
                u.dst = intern(SvKey{t.dst, next});
                out.delta.push_back(std::move(u));
            }
        }
    }
    normalize_ids(out.initial);
    normalize_ids(out.final);
    return out;
}

// ---------------------------------------------------------------------------
// Emptiness guards

Rsa eliminate_emptiness_guards(const RsaWithEmptyTest& a) {
    const Rsa& base = a.base;
    if (a.empty_guard.size() != base.delta.size()) {
        throw InputError("emptiness guards do not match the transition list");
    }
    const std::size_t nr = base.num_registers();
    const auto out_edges = outgoing(base);
    Rsa out;
    out.name = base.name;
    out.letters = base.letters;
    out.registers = base.registers;
    std::map<std::pair<StateId, RegSet>, StateId> ids;
    std::deque<std::pair<StateId, RegSet>> work;
    auto intern = [&](StateId q, RegSet nonempty) {
        auto [it, fresh] = ids.emplace(std::pair{q, nonempty}, static_cast<StateId>(out.states.size()));
        if (fresh) {
            std::string bits;
            for (std::size_t r = 0; r < nr; ++r) {
                bits += has_reg(nonempty, static_cast<RegId>(r)) ? '1' : '0';
            }
            out.states.push_back(base.states[q] + "[" + bits + "]");
            if (base.is_final(q)) {
                out.final.push_back(it->second);
            }
            work.emplace_back(q, nonempty);
        }
        return it->second;
    };
    for (StateId q : base.initial) {
        out.initial.push_back(intern(q, 0));
    }
    while (!work.empty()) {
        auto [q, nonempty] = work.front();
        work.pop_front();
        const StateId here = ids.at({q, nonempty});
        for (std::size_t i : out_edges[q]) {
            const RsaTransition& t = base.delta[i];
            if ((a.empty_guard[i] & nonempty) != 0) {
                continue;
            }
            if ((t.in_guard & ~nonempty) != 0) {
                continue;  // membership in an empty register never holds
            }
            RegSet next = 0;
            for (std::size_t r = 0; r < nr; ++r) {
                if (t.up[r].in || (t.up[r].regs & nonempty) != 0) {
                    next |= reg_bit(static_cast<RegId>(r));
                }
            }
            RsaTransition u = t;
            u.src = here;
            u.dst = intern(t.dst, next);
            out.delta.push_back(std::move(u));
        }
    }
    normalize_ids(out.initial);
    normalize_ids(out.final);
    return out;
}

// ---------------------------------------------------------------------------
// Epsilon elimination

Rsa eliminate_epsilon(const Rsa& a) {
    if (a.epsilon.empty()) {
        return a;
    }
    const std::size_t nq = a.num_states();
    std::vector<std::vector<StateId>> succ(nq);
    for (auto [p, q] : a.epsilon) {
        succ[p].push_back(q);
    }
    std::vector<std::vector<StateId>> closure(nq);
    for (StateId p = 0; p < nq; ++p) {
        std::vector<bool> seen(nq, false);
        std::vector<StateId> stack{p};
        seen[p] = true;
        while (!stack.empty()) {
            StateId x = stack.back();
            stack.pop_back();
            closure[p].push_back(x);
            for (StateId y : succ[x]) {
                if (!seen[y]) {
                    seen[y] = true;
                    stack.push_back(y);
                }
            }
        }
    }
    const auto out_edges = outgoing(a);
    // Keep only states reachable from the initial states after folding.
    std::vector<long> new_id(nq, -1);
    std::vector<StateId> order;
    std::deque<StateId> work;
    auto visit = [&](StateId q) {
        if (new_id[q] == -1) {
            new_id[q] = static_cast<long>(order.size());
            order.push_back(q);
            work.push_back(q);
        }
    };
    for (StateId q : a.initial) {
        visit(q);
    }
    std::vector<std::vector<RsaTransition>> folded(nq);
    while (!work.empty()) {
        StateId p = work.front();
        work.pop_front();
        for (StateId x : closure[p]) {
            for (std::size_t i : out_edges[x]) {
                RsaTransition t = a.delta[i];
                t.src = p;
                folded[p].push_back(t);
                visit(t.dst);
            }
        }
    }
    Rsa out;
    out.name = a.name;
    out.letters = a.letters;
    out.registers = a.registers;
    out.renames = a.renames;
    for (StateId q : order) {
        out.states.push_back(a.states[q]);
        bool accepting = std::any_of(closure[q].begin(), closure[q].end(),
                                     [&](StateId x) { return a.is_final(x); });
        if (accepting) {
            out.final.push_back(static_cast<StateId>(new_id[q]));
        }
        if (a.is_initial(q)) {
            out.initial.push_back(static_cast<StateId>(new_id[q]));
        }
    }
    for (StateId q : order) {
        std::vector<RsaTransition>& ts = folded[q];
        for (RsaTransition& t : ts) {
            t.src = static_cast<StateId>(new_id[t.src]);
            t.dst = static_cast<StateId>(new_id[t.dst]);
        }
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        out.delta.insert(out.delta.end(), ts.begin(), ts.end());
    }
    normalize_ids(out.initial);
    normalize_ids(out.final);
    return out;
}

bool rsa_membership_with_epsilon(const Rsa& a, const DataWord& w) {
    std::vector<std::vector<StateId>> succ(a.num_states());
    for (auto [p, q] : a.epsilon) {
        succ[p].push_back(q);
    }
    auto close = [&](RsaConfigSet set) {
        std::vector<RsaConfig> stack(set.begin(), set.end());
        while (!stack.empty()) {
            RsaConfig c = stack.back();
            stack.pop_back();
            for (StateId q : succ[c.state]) {
                RsaConfig d{q, c.regs};
                if (set.insert(d).second) {
                    stack.push_back(std::move(d));
                }
            }
        }
        return set;
    };
    RsaConfigSet current = close(rsa_initial(a));
    for (const Symbol& sym : w) {
        current = close(rsa_advance(a, current, sym));
    }
    return std::any_of(current.begin(), current.end(),
                       [&](const RsaConfig& c) { return a.is_final(c.state); });
}

}  // namespace rsakit
