// determinise.cpp -- macrostate construction (NRA -> DRsA)
#include "rsakit/determinise.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "rsakit/algebra.hpp"

namespace rsakit {

Card card_add(Card a, Card b) {
    int sum = static_cast<int>(a) + static_cast<int>(b);
    return sum >= 2 ? Card::omega : static_cast<Card>(sum);
}

const char* to_string(Card c) {
    switch (c) {
    case Card::zero: return "0";
    case Card::one: return "1";
    case Card::omega: return "w";
    }
    return "?";
}

const char* to_string(BotReason r) {
    return r == BotReason::cardinality ? "CARDINALITY" : "CARTESIAN";
}

namespace {

// Where a register value comes from after a step: an equality class of the
// old macrostate (named by its lowest register), the input datum, or BOT.
using Key = std::uint32_t;
constexpr Key kBot = 0xFFFFFFFFu;
constexpr Key kIn = 0xFFFFFFFEu;

bool is_class(Key k) { return k < kIn; }

bool multi_valued(const Macrostate& m, RegId x) {
    return m.counters[x] == Card::omega ||
           (m.counters[x] == Card::one && has_reg(m.maybe_unset, x));
}

struct Context {
    const Nra& a;
    std::vector<std::vector<std::size_t>> out;
    std::vector<RegSet> rgs;

    explicit Context(const Nra& aut) : a(aut), out(outgoing(aut)), rgs(active_registers(aut)) {
        register_owner(aut);  // throws unless register-local
    }

    template <typename F>
    void for_each_transition(const Macrostate& m, LetterId l, F&& f) const {
        for (StateId q : m.states) {
            for (std::size_t i : out[q]) {
                if (a.delta[i].letter == l) {
                    f(a.delta[i]);
                }
            }
        }
    }
};

RegSet nonzero_registers(const Macrostate& m) {
    RegSet s = 0;
    for (std::size_t r = 0; r < m.counters.size(); ++r) {
        if (m.counters[r] != Card::zero) {
            s |= reg_bit(static_cast<RegId>(r));
        }
    }
    return s;
}

Key key_of(const Macrostate& m, const NraTransition& t, RegId r) {
    const NraSource& s = t.up[r];
    if (s.is_bot()) {
        return kBot;
    }
    if (s.is_in() || has_reg(t.eq, s.reg)) {
        return kIn;
    }
    if (m.counters[s.reg] == Card::zero) {
        return kBot;
    }
    return m.classes[s.reg];
}

std::string reg_names(const Nra& a, RegSet s) {
    std::string out = "{";
    bool first = true;
    for (RegId r : regs_of(s)) {
        out += (first ? "" : ",") + a.registers[r];
        first = false;
    }
    return out + "}";
}

std::optional<BotInfo> cardinality_check(const Context& ctx, const Macrostate& m, LetterId l) {
    const RegSet zero = ~nonzero_registers(m);
    std::optional<BotInfo> found;
    ctx.for_each_transition(m, l, [&](const NraTransition& t) {
        if (found || (t.eq & zero) != 0) {
            return;  // equality with an empty register: never enabled
        }
        for (RegId r : regs_of(t.neq)) {
            if (multi_valued(m, r)) {
                found = BotInfo{BotReason::cardinality, m, l, t.eq,
                                "disequality on register '" + ctx.a.registers[r] +
                                    "' which may hold several values (" + describe(ctx.a, t) + ")"};
                return;
            }
        }
    });
    return found;
}

RegSet relevant_impl(const Context& ctx, const Macrostate& m, LetterId l) {
    const std::size_t nr = ctx.a.num_registers();
    const RegSet nonzero = nonzero_registers(m);
    RegSet tested = 0;
    std::vector<bool> input_possible(nr, false);
    std::vector<RegSet> reg_sources(nr, 0);
    ctx.for_each_transition(m, l, [&](const NraTransition& t) {
        tested |= t.eq | t.neq;
        for (RegId r : regs_of(ctx.rgs[t.dst])) {
            const NraSource& s = t.up[r];
            if (s.is_in() || (s.is_reg() && has_reg(t.eq, s.reg))) {
                input_possible[r] = true;
            } else if (s.is_reg() && has_reg(nonzero, s.reg)) {
                reg_sources[r] |= reg_bit(s.reg);
            }
        }
    });
    RegSet rel = tested;
    for (std::size_t r = 0; r < nr; ++r) {
        if (input_possible[r]) {
            rel |= reg_sources[r];
        }
    }
    rel &= nonzero;
    RegSet classes_hit = 0;
    for (RegId r : regs_of(rel)) {
        classes_hit |= reg_bit(m.classes[r]);
    }
    for (RegId r : regs_of(nonzero)) {
        if (has_reg(classes_hit, m.classes[r])) {
            rel |= reg_bit(r);
        }
    }
    return rel;
}

std::variant<Successor, BotInfo> step(const Context& ctx, const Macrostate& m, LetterId l, RegSet g,
                                      RegSet rel) {
    const Nra& a = ctx.a;
    const std::size_t nr = a.num_registers();
    std::vector<const NraTransition*> taken;
    ctx.for_each_transition(m, l, [&](const NraTransition& t) {
        if ((t.eq & ~g) == 0 && (t.neq & g) == 0) {
            taken.push_back(&t);
        }
    });
    auto bot = [&](BotReason why, std::string detail) {
        return BotInfo{why, m, l, g, std::move(detail)};
    };
    for (const NraTransition* t : taken) {
        for (RegId r : regs_of(t->neq)) {
            if (multi_valued(m, r)) {
                return bot(BotReason::cardinality,
                           "disequality on register '" + a.registers[r] + "' which may hold several values");
            }
        }
    }

    Macrostate next;
    for (const NraTransition* t : taken) {
        next.states.push_back(t->dst);
    }
    std::sort(next.states.begin(), next.states.end());
    next.states.erase(std::unique(next.states.begin(), next.states.end()), next.states.end());

    // Aggregate the sources of every register over the transitions into its owner.
    std::vector<std::vector<Key>> op(nr);
    std::vector<RegSet> sources(nr, 0);
    for (const NraTransition* t : taken) {
        for (RegId r : regs_of(ctx.rgs[t->dst])) {
            Key k = key_of(m, *t, r);
            op[r].push_back(k);
            if (is_class(k)) {
                sources[r] |= reg_bit(t->up[r].reg);
            }
        }
    }
    for (std::size_t r = 0; r < nr; ++r) {
        auto& keys = op[r];
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        bool holds_input = std::any_of(keys.begin(), keys.end(),
                                       [&](Key k) { return is_class(k) && has_reg(g, k); });
        if (holds_input) {
            keys.erase(std::remove(keys.begin(), keys.end(), kIn), keys.end());
        }
    }

    // A register holding several values copied into two registers of the same
    // state correlates them; the set abstraction cannot express that.
    for (const NraTransition* t : taken) {
        RegSet copied = 0;
        for (RegId r : regs_of(ctx.rgs[t->dst])) {
            const NraSource& s = t->up[r];
            if (!s.is_reg() || has_reg(t->eq, s.reg) || !multi_valued(m, s.reg)) {
                continue;
            }
            if (has_reg(copied, s.reg)) {
                return bot(BotReason::cartesian, "register '" + a.registers[s.reg] +
                                                     "' is copied into two registers of state '" +
                                                     a.states[t->dst] + "'");
            }
            copied |= reg_bit(s.reg);
        }
    }

    // Every combination of per-register sources must come from one transition.
    for (StateId q : next.states) {
        std::vector<RegId> regs = regs_of(ctx.rgs[q]);
        if (regs.size() < 2) {
            continue;
        }
        std::set<std::vector<Key>> realised;
        for (const NraTransition* t : taken) {
            if (t->dst != q) {
                continue;
            }
            std::vector<Key> tuple;
            for (RegId r : regs) {
                tuple.push_back(key_of(m, *t, r));
            }
            realised.insert(std::move(tuple));
        }
        std::size_t combos = 1;
        for (RegId r : regs) {
            combos *= op[r].size();
            if (combos > 1000000) {
                throw ResourceError("Cartesian check too large");
            }
        }
        std::vector<std::size_t> pos(regs.size(), 0);
        std::vector<Key> tuple(regs.size());
        for (std::size_t n = 0; n < combos; ++n) {
            for (std::size_t j = 0; j < regs.size(); ++j) {
                tuple[j] = op[regs[j]][pos[j]];
            }
            if (realised.count(tuple) == 0) {
                return bot(BotReason::cartesian, "state '" + a.states[q] + "' over registers " +
                                                     reg_names(a, ctx.rgs[q]) +
                                                     ": a source combination matches no single transition");
            }
            for (std::size_t j = 0; j < regs.size(); ++j) {
                if (++pos[j] < op[regs[j]].size()) {
                    break;
                }
                pos[j] = 0;
            }
        }
    }

    next.counters.assign(nr, Card::zero);
    next.classes.resize(nr);
    std::map<std::vector<Key>, RegId> class_of;
    RsaTransition tr{0, l, g & rel, rel & ~g, std::vector<RsaUpdate>(nr), 0};
    for (std::size_t r = 0; r < nr; ++r) {
        const RegId reg = static_cast<RegId>(r);
        Card c = Card::zero;
        bool unset = false;
        for (Key k : op[r]) {
            if (k == kBot) {
                unset = true;
            } else if (k == kIn) {
                c = card_add(c, Card::one);
                tr.up[r].in = true;
            } else {
                c = card_add(c, m.counters[k]);
                unset = unset || has_reg(m.maybe_unset, k);
            }
        }
        next.counters[r] = c;
        next.classes[r] = reg;
        if (c != Card::zero) {
            tr.up[r].regs = sources[r];
            if (unset) {
                next.maybe_unset |= reg_bit(reg);
            }
            next.classes[r] = class_of.emplace(op[r], reg).first->second;
        }
    }
    return Successor{std::move(tr), std::move(next)};
}

/// Registers of `rel` grouped by class, ordered by representative.
std::vector<RegSet> relevant_classes(const Macrostate& m, RegSet rel) {
    std::vector<RegSet> classes;
    std::map<RegId, std::size_t> index;
    for (RegId r : regs_of(rel)) {
        auto [it, fresh] = index.emplace(m.classes[r], classes.size());
        if (fresh) {
            classes.push_back(0);
        }
        classes[it->second] |= reg_bit(r);
    }
    if (classes.size() > 20) {
        throw ResourceError("too many relevant register classes for minterm enumeration");
    }
    return classes;
}

/// A guard over classes: bit j of `care` says class j is tested, bit j of
/// `value` says the input must belong to it.
struct Cube {
    std::uint32_t care = 0;
    std::uint32_t value = 0;
    std::size_t outcome = 0;
};

/// Merges sibling cubes with the same outcome, one class at a time. The
/// input is the full set of minterms, so the result still partitions the
/// guard space.
std::vector<Cube> merge_cubes(std::vector<Cube> cubes, std::size_t num_classes) {
    for (std::size_t j = 0; j < num_classes; ++j) {
        const std::uint32_t bit = std::uint32_t{1} << j;
        std::map<std::tuple<std::uint32_t, std::uint32_t, std::size_t>, std::size_t> partner;
        std::vector<bool> dead(cubes.size(), false);
        for (std::size_t i = 0; i < cubes.size(); ++i) {
            const Cube& c = cubes[i];
            if (!(c.care & bit)) {
                continue;
            }
            const auto key = std::make_tuple(c.care, c.value & ~bit, c.outcome);
            auto [it, fresh] = partner.emplace(key, i);
            if (!fresh) {
                Cube& other = cubes[it->second];
                other.care &= ~bit;
                other.value &= ~bit;
                dead[i] = true;
                partner.erase(it);
            }
        }
        std::vector<Cube> kept;
        kept.reserve(cubes.size());
        for (std::size_t i = 0; i < cubes.size(); ++i) {
            if (!dead[i]) {
                kept.push_back(cubes[i]);
            }
        }
        cubes = std::move(kept);
    }
    return cubes;
}

}  // namespace

Macrostate initial_macrostate(const Nra& a) {
    Macrostate m;
    m.states = a.initial;
    m.counters.assign(a.num_registers(), Card::zero);
    for (std::size_t r = 0; r < a.num_registers(); ++r) {
        m.classes.push_back(static_cast<RegId>(r));
    }
    return m;
}

RegSet relevant_registers(const Nra& a, const Macrostate& m, LetterId letter) {
    Context ctx(a);
    return relevant_impl(ctx, m, letter);
}

std::variant<Successor, BotInfo> successor(const Nra& a, const Macrostate& m, LetterId letter,
                                           RegSet g, RegSet relevant) {
    Context ctx(a);
    return step(ctx, m, letter, g, relevant);
}

DeterminisationOutcome determinise(const Nra& a, const DeterminiseOptions& opts) {
    if (!validate(a).empty()) {
        throw InputError("determinise: invalid automaton: " + validate(a).front());
    }
    Context ctx(a);
    DeterminisationOutcome outcome;
    outcome.route = "direct";
    Rsa out;
    out.name = a.name + "_det";
    out.letters = a.letters;
    out.registers = a.registers;
    std::map<Macrostate, StateId> ids;
    std::deque<StateId> work;
    auto intern = [&](const Macrostate& m) {
        auto [it, fresh] = ids.emplace(m, static_cast<StateId>(outcome.macrostates.size()));
        if (fresh) {
            if (outcome.macrostates.size() >= opts.max_macrostates) {
                throw ResourceError("macrostate cap of " + std::to_string(opts.max_macrostates) + " exceeded");
            }
            outcome.macrostates.push_back(m);
            out.states.push_back("m" + std::to_string(it->second));
            work.push_back(it->second);
        }
        return it->second;
    };
    out.initial.push_back(intern(initial_macrostate(a)));

    while (!work.empty()) {
        poll(opts.cancel);
        const StateId id = work.front();
        work.pop_front();
        const Macrostate m = outcome.macrostates[id];
        for (LetterId l = 0; l < a.letters.size(); ++l) {
            if (auto bot = cardinality_check(ctx, m, l)) {
                outcome.bot = std::move(bot);
                return outcome;
            }
            const RegSet rel = relevant_impl(ctx, m, l);
            const std::vector<RegSet> classes = relevant_classes(m, rel);
            const std::uint32_t full = (std::uint32_t{1} << classes.size()) - 1;
            std::vector<std::pair<std::vector<RsaUpdate>, StateId>> outcomes;
            std::map<std::pair<std::vector<RsaUpdate>, StateId>, std::size_t> outcome_ids;
            std::vector<Cube> cubes;
            for (std::uint32_t mask = 0; mask <= full; ++mask) {
                RegSet g = 0;
                for (std::size_t j = 0; j < classes.size(); ++j) {
                    if ((mask >> j) & 1U) {
                        g |= classes[j];
                    }
                }
                auto result = step(ctx, m, l, g, rel);
                if (auto* bot = std::get_if<BotInfo>(&result)) {
                    outcome.bot = std::move(*bot);
                    return outcome;
                }
                auto& succ = std::get<Successor>(result);
                std::pair<std::vector<RsaUpdate>, StateId> key{std::move(succ.transition.up), intern(succ.target)};
                auto [it, fresh] = outcome_ids.emplace(key, outcomes.size());
                if (fresh) {
                    outcomes.push_back(std::move(key));
                }
                cubes.push_back(Cube{full, mask, it->second});
            }
            for (const Cube& c : merge_cubes(std::move(cubes), classes.size())) {
                RsaTransition tr{id, l, 0, 0, outcomes[c.outcome].first, outcomes[c.outcome].second};
                for (std::size_t j = 0; j < classes.size(); ++j) {
                    if ((c.care >> j) & 1U) {
                        ((c.value >> j) & 1U ? tr.in_guard : tr.notin_guard) |= classes[j];
                    }
                }
                out.delta.push_back(std::move(tr));
            }
        }
    }
    for (StateId i = 0; i < outcome.macrostates.size(); ++i) {
        const auto& s = outcome.macrostates[i].states;
        if (std::any_of(s.begin(), s.end(), [&](StateId q) { return a.is_final(q); })) {
            out.final.push_back(i);
        }
    }
    outcome.automaton = std::move(out);
    return outcome;
}

DeterminisationOutcome determinise_pipeline(const Nra& a, const DeterminiseOptions& opts) {
    Nra local = register_local(a);
    Nra prepared = register_local(single_valued(local));
    DeterminisationOutcome first = determinise(prepared, opts);
    first.route = "single-valued";
    if (first.ok()) {
        return first;
    }
    DeterminisationOutcome second = determinise(local, opts);
    second.route = "register-local";
    if (second.ok()) {
        return second;
    }
    return first;
}

std::string describe(const Nra& a, const Macrostate& m) {
    std::ostringstream os;
    os << "({";
    for (std::size_t i = 0; i < m.states.size(); ++i) {
        os << (i ? "," : "") << a.states[m.states[i]];
    }
    os << "}, {";
    bool first = true;
    for (std::size_t r = 0; r < m.counters.size(); ++r) {
        if (m.counters[r] == Card::zero) {
            continue;
        }
        os << (first ? "" : ",") << a.registers[r] << ":" << to_string(m.counters[r]);
        first = false;
    }
    os << "})";
    return os.str();
}

}  // namespace rsakit
