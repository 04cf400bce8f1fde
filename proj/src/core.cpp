// core.cpp -- simulation and structural queries for NRA and RsA
#include "rsakit/core.hpp"

#include <algorithm>
#include <map>
#include <bit>
#include <sstream>

namespace rsakit {

std::vector<RegId> regs_of(RegSet s) {
    std::vector<RegId> out;
    while (s != 0) {
        out.push_back(static_cast<RegId>(std::countr_zero(s)));
        s &= s - 1;
    }
    return out;
}

std::vector<NraSource> keep_all(std::size_t n) {
    std::vector<NraSource> up(n);
    for (std::size_t r = 0; r < n; ++r) {
        up[r] = NraSource::copy(static_cast<RegId>(r));
    }
    return up;
}

std::vector<RsaUpdate> keep_all_sets(std::size_t n) {
    std::vector<RsaUpdate> up(n);
    for (std::size_t r = 0; r < n; ++r) {
        up[r].regs = reg_bit(static_cast<RegId>(r));
    }
    return up;
}

NraTransition make_nra_transition(StateId src, LetterId letter, RegSet eq, RegSet neq,
                                  std::vector<std::pair<RegId, NraSource>> up, StateId dst,
                                  std::size_t num_registers) {
    if ((eq & neq) != 0) {
        throw InputError("overlapping guards: a register is both = and != tested");
    }
    NraTransition t{src, letter, eq, neq, keep_all(num_registers), dst};
    for (auto& [r, source] : up) {
        if (r >= num_registers) {
            throw InputError("update of an unknown register");
        }
        t.up[r] = source;
    }
    return t;
}

RsaTransition make_rsa_transition(StateId src, LetterId letter, RegSet in_guard, RegSet notin_guard,
                                  std::vector<std::pair<RegId, RsaUpdate>> up, StateId dst,
                                  std::size_t num_registers) {
    if ((in_guard & notin_guard) != 0) {
        throw InputError("overlapping guards: a register is both in and notin tested");
    }
    RsaTransition t{src, letter, in_guard, notin_guard, keep_all_sets(num_registers), dst};
    for (auto& [r, rhs] : up) {
        if (r >= num_registers) {
            throw InputError("update of an unknown register");
        }
        t.up[r] = rhs;
    }
    return t;
}

namespace {

bool contains_sorted(const std::vector<StateId>& v, StateId q) {
    return std::binary_search(v.begin(), v.end(), q);
}

}  // namespace

bool Nra::is_final(StateId q) const { return contains_sorted(final, q); }
bool Nra::is_initial(StateId q) const { return contains_sorted(initial, q); }
bool Rsa::is_final(StateId q) const { return contains_sorted(final, q); }
bool Rsa::is_initial(StateId q) const { return contains_sorted(initial, q); }

// ---------------------------------------------------------------------------
// NRA simulation

std::optional<NraConfig> nra_step(const NraConfig& cfg, const NraTransition& t, Symbol sym) {
    if (cfg.state != t.src || sym.letter != t.letter) {
        return std::nullopt;
    }
    for (RegId r : regs_of(t.eq)) {
        if (!cfg.regs[r] || *cfg.regs[r] != sym.datum) {
            return std::nullopt;
        }
    }
    for (RegId r : regs_of(t.neq)) {
        if (cfg.regs[r] && *cfg.regs[r] == sym.datum) {
            return std::nullopt;
        }
    }
    NraConfig next{t.dst, std::vector<std::optional<Datum>>(cfg.regs.size())};
    for (std::size_t r = 0; r < cfg.regs.size(); ++r) {
        const NraSource& s = t.up[r];
        if (s.is_reg()) {
            next.regs[r] = cfg.regs[s.reg];
        } else if (s.is_in()) {
            next.regs[r] = sym.datum;
        }
    }
    return next;
}

NraConfigSet nra_initial(const Nra& a) {
    NraConfigSet out;
    for (StateId q : a.initial) {
        out.insert(NraConfig{q, std::vector<std::optional<Datum>>(a.num_registers())});
    }
    return out;
}

NraConfigSet nra_advance(const Nra& a, const NraConfigSet& current, Symbol sym) {
    NraConfigSet next;
    for (const NraConfig& cfg : current) {
        for (const NraTransition& t : a.delta) {
            if (auto n = nra_step(cfg, t, sym)) {
                next.insert(std::move(*n));
            }
        }
    }
    return next;
}

bool nra_membership(const Nra& a, const DataWord& w) {
    NraConfigSet current = nra_initial(a);
    for (const Symbol& sym : w) {
        if (current.empty()) {
            return false;
        }
        current = nra_advance(a, current, sym);
    }
    return std::any_of(current.begin(), current.end(),
                       [&](const NraConfig& c) { return a.is_final(c.state); });
}

bool ura_membership(const Nra& a, const DataWord& w) {
    NraConfigSet current = nra_initial(a);
    for (const Symbol& sym : w) {
        NraConfigSet next;
        for (const NraConfig& cfg : current) {
            bool moved = false;
            for (const NraTransition& t : a.delta) {
                if (auto n = nra_step(cfg, t, sym)) {
                    next.insert(std::move(*n));
                    moved = true;
                }
            }
            if (!moved) {
                return false;  // a maximal run stops before the end of w
            }
        }
        current = std::move(next);
    }
    return std::all_of(current.begin(), current.end(),
                       [&](const NraConfig& c) { return a.is_final(c.state); });
}

// ---------------------------------------------------------------------------
// RsA simulation

bool rsa_enabled(const RsaConfig& cfg, const RsaTransition& t, Symbol sym) {
    if (cfg.state != t.src || sym.letter != t.letter) {
        return false;
    }
    for (RegId r : regs_of(t.in_guard | t.notin_guard)) {
        const auto& set = cfg.regs[r];
        bool member = std::binary_search(set.begin(), set.end(), sym.datum);
        if (member != has_reg(t.in_guard, r)) {
            return false;
        }
    }
    return true;
}

std::optional<RsaConfig> rsa_step(const RsaConfig& cfg, const RsaTransition& t, Symbol sym) {
    if (!rsa_enabled(cfg, t, sym)) {
        return std::nullopt;
    }
    RsaConfig next{t.dst, std::vector<std::vector<Datum>>(cfg.regs.size())};
    for (std::size_t r = 0; r < cfg.regs.size(); ++r) {
        std::vector<Datum>& out = next.regs[r];
        for (RegId x : regs_of(t.up[r].regs)) {
            out.insert(out.end(), cfg.regs[x].begin(), cfg.regs[x].end());
        }
        if (t.up[r].in) {
            out.push_back(sym.datum);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    return next;
}

RsaConfigSet rsa_initial(const Rsa& a) {
    RsaConfigSet out;
    for (StateId q : a.initial) {
        out.insert(RsaConfig{q, std::vector<std::vector<Datum>>(a.num_registers())});
    }
    return out;
}

RsaConfigSet rsa_advance(const Rsa& a, const RsaConfigSet& current, Symbol sym) {
    RsaConfigSet next;
    for (const RsaConfig& cfg : current) {
        for (const RsaTransition& t : a.delta) {
            if (auto n = rsa_step(cfg, t, sym)) {
                next.insert(std::move(*n));
            }
        }
    }
    return next;
}

bool rsa_membership(const Rsa& a, const DataWord& w) {
    if (!a.is_canonical()) {
        throw InputError("automaton has epsilon edges; eliminate them first");
    }
    RsaConfigSet current = rsa_initial(a);
    for (const Symbol& sym : w) {
        if (current.empty()) {
            return false;
        }
        current = rsa_advance(a, current, sym);
    }
    return std::any_of(current.begin(), current.end(),
                       [&](const RsaConfig& c) { return a.is_final(c.state); });
}

// ---------------------------------------------------------------------------
// Validation

namespace {

template <typename Aut>
void validate_common(const Aut& a, std::vector<std::string>& out) {
    if (a.num_registers() > kMaxRegisters) {
        out.push_back("too many registers (at most 64 are supported)");
    }
    if (a.letters.empty()) {
        out.push_back("empty alphabet");
    }
    for (StateId q : a.initial) {
        if (q >= a.num_states()) {
            out.push_back("unknown state in initial set: #" + std::to_string(q));
        }
    }
    for (StateId q : a.final) {
        if (q >= a.num_states()) {
            out.push_back("unknown state in final set: #" + std::to_string(q));
        }
    }
}

std::string transition_label(std::size_t i) { return "transition #" + std::to_string(i); }

}  // namespace

std::vector<std::string> validate(const Nra& a) {
    std::vector<std::string> out;
    validate_common(a, out);
    const RegSet known = all_regs(a.num_registers());
    for (std::size_t i = 0; i < a.delta.size(); ++i) {
        const NraTransition& t = a.delta[i];
        if (t.src >= a.num_states() || t.dst >= a.num_states()) {
            out.push_back(transition_label(i) + ": unknown state");
            continue;
        }
        std::string label = transition_label(i) + " (" + describe(a, t) + ")";
        if (t.letter >= a.letters.size()) {
            out.push_back(label + ": unknown letter");
        }
        if ((t.eq & t.neq) != 0) {
            out.push_back(label + ": overlapping guards");
        }
        if (((t.eq | t.neq) & ~known) != 0) {
            out.push_back(label + ": unknown register in guard");
        }
        if (t.up.size() != a.num_registers()) {
            out.push_back(label + ": update is not total over the registers");
        } else {
            for (const NraSource& s : t.up) {
                if (s.is_reg() && s.reg >= a.num_registers()) {
                    out.push_back(label + ": unknown register in update");
                }
            }
        }
    }
    return out;
}

std::vector<std::string> validate(const Rsa& a) {
    std::vector<std::string> out;
    validate_common(a, out);
    const RegSet known = all_regs(a.num_registers());
    for (std::size_t i = 0; i < a.delta.size(); ++i) {
        const RsaTransition& t = a.delta[i];
        if (t.src >= a.num_states() || t.dst >= a.num_states()) {
            out.push_back(transition_label(i) + ": unknown state");
            continue;
        }
        std::string label = transition_label(i) + " (" + describe(a, t) + ")";
        if (t.letter >= a.letters.size()) {
            out.push_back(label + ": unknown letter");
        }
        if ((t.in_guard & t.notin_guard) != 0) {
            out.push_back(label + ": overlapping guards");
        }
        if (((t.in_guard | t.notin_guard) & ~known) != 0) {
            out.push_back(label + ": unknown register in guard");
        }
        if (t.up.size() != a.num_registers()) {
            out.push_back(label + ": update is not total over the registers");
        } else {
            for (const RsaUpdate& u : t.up) {
                if ((u.regs & ~known) != 0) {
                    out.push_back(label + ": unknown register in update");
                }
            }
        }
    }
    for (auto [p, q] : a.epsilon) {
        if (p >= a.num_states() || q >= a.num_states()) {
            out.push_back("epsilon edge with unknown state");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Determinism and completeness

namespace {

/// True when no two distinct transitions with the same source and letter can
/// fire on the same input; `disjoint` decides the guard test for a pair.
template <class T, class Disjoint>
bool pairwise_disjoint(const std::vector<T>& delta, Disjoint disjoint) {
    std::map<std::pair<StateId, LetterId>, std::vector<const T*>> groups;
    for (const T& t : delta) {
        groups[{t.src, t.letter}].push_back(&t);
    }
    for (const auto& [key, group] : groups) {
        for (std::size_t i = 0; i < group.size(); ++i) {
            for (std::size_t j = i + 1; j < group.size(); ++j) {
                if (*group[i] != *group[j] && !disjoint(*group[i], *group[j])) {
                    return false;
                }
            }
        }
    }
    return true;
}

}  // namespace

bool is_deterministic(const Nra& a) {
    return pairwise_disjoint(a.delta, [](const NraTransition& s, const NraTransition& t) {
        return (s.eq & t.neq) != 0 || (t.eq & s.neq) != 0;
    });
}

bool is_deterministic(const Rsa& a) {
    if (!a.epsilon.empty()) {
        return false;
    }
    return pairwise_disjoint(a.delta, [](const RsaTransition& s, const RsaTransition& t) {
        return (s.in_guard & t.notin_guard) != 0 || (t.in_guard & s.notin_guard) != 0;
    });
}

bool is_complete(const Nra& a) {
    if (a.num_registers() > 20) {
        throw ResourceError("completeness check enumerates 2^|R| guard sets; too many registers");
    }
    const auto out = outgoing(a);
    const RegSet limit = RegSet{1} << a.num_registers();
    for (StateId q = 0; q < a.num_states(); ++q) {
        for (LetterId l = 0; l < a.letters.size(); ++l) {
            for (RegSet g = 0; g < limit; ++g) {
                bool covered = false;
                for (std::size_t i : out[q]) {
                    const NraTransition& t = a.delta[i];
                    if (t.letter == l && (t.eq & ~g) == 0 && (t.neq & g) == 0) {
                        covered = true;
                        break;
                    }
                }
                if (!covered) {
                    return false;
                }
            }
        }
    }
    return true;
}

std::vector<std::vector<std::size_t>> outgoing(const Nra& a) {
    std::vector<std::vector<std::size_t>> out(a.num_states());
    for (std::size_t i = 0; i < a.delta.size(); ++i) {
        out[a.delta[i].src].push_back(i);
    }
    return out;
}

std::vector<std::vector<std::size_t>> outgoing(const Rsa& a) {
    std::vector<std::vector<std::size_t>> out(a.num_states());
    for (std::size_t i = 0; i < a.delta.size(); ++i) {
        out[a.delta[i].src].push_back(i);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Naming helpers

StateId add_state(std::vector<std::string>& states, const std::string& name) {
    states.push_back(name);
    return static_cast<StateId>(states.size() - 1);
}

std::size_t index_of(const std::vector<std::string>& names, const std::string& name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
        throw InputError("unknown name '" + name + "'");
    }
    return static_cast<std::size_t>(it - names.begin());
}

void normalize_ids(std::vector<StateId>& ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

namespace {

std::string name_or_index(const std::vector<std::string>& names, std::size_t i) {
    return i < names.size() ? names[i] : "#" + std::to_string(i);
}

std::string reg_list(const std::vector<std::string>& regs, RegSet s, const char* prefix) {
    std::string out;
    for (RegId r : regs_of(s)) {
        if (!out.empty()) {
            out += ", ";
        }
        out += prefix + name_or_index(regs, r);
    }
    return out;
}

}  // namespace

std::string describe(const Nra& a, const NraTransition& t) {
    std::ostringstream os;
    os << name_or_index(a.states, t.src) << " -" << name_or_index(a.letters, t.letter) << "-> "
       << name_or_index(a.states, t.dst);
    std::string guards = reg_list(a.registers, t.eq, "eq ");
    std::string neq = reg_list(a.registers, t.neq, "neq ");
    if (!neq.empty()) {
        guards += (guards.empty() ? "" : ", ") + neq;
    }
    if (!guards.empty()) {
        os << " [" << guards << "]";
    }
    return os.str();
}

std::string describe(const Rsa& a, const RsaTransition& t) {
    std::ostringstream os;
    os << name_or_index(a.states, t.src) << " -" << name_or_index(a.letters, t.letter) << "-> "
       << name_or_index(a.states, t.dst);
    std::string guards = reg_list(a.registers, t.in_guard, "in ");
    std::string notin = reg_list(a.registers, t.notin_guard, "notin ");
    if (!notin.empty()) {
        guards += (guards.empty() ? "" : ", ") + notin;
    }
    if (!guards.empty()) {
        os << " [" << guards << "]";
    }
    return os.str();
}

}  // namespace rsakit
