// oracles.cpp -- reference semantics written directly from the definitions,
// deliberately sharing no code with the library beyond the data structures.
#include "oracles.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace oracle {

using rsakit::NraSource;
using rsakit::NraTransition;
using rsakit::RegSet;
using rsakit::RsaTransition;
using rsakit::RsaUpdate;
using rsakit::StateId;
using rsakit::Symbol;

namespace {

std::map<Datum, int> occurrences(const DataWord& w) {
    std::map<Datum, int> n;
    for (const Symbol& s : w) {
        ++n[s.datum];
    }
    return n;
}

bool bit(RegSet s, std::size_t r) { return ((s >> r) & 1U) != 0; }

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::vector<std::string> names(const char* prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(prefix + std::to_string(i));
    }
    return out;
}

std::vector<std::string> letter_names(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(std::string(1, static_cast<char>('a' + i)));
    }
    return out;
}

std::vector<StateId> random_subset(Rng& rng, std::size_t n, double p) {
    std::vector<StateId> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (coin(rng, p)) {
            out.push_back(static_cast<StateId>(i));
        }
    }
    return out;
}

using Regs = std::vector<std::optional<Datum>>;

bool nra_guard_ok(const NraTransition& t, const Regs& regs, Datum d) {
    for (std::size_t r = 0; r < regs.size(); ++r) {
        if (bit(t.eq, r) && !(regs[r] && *regs[r] == d)) {
            return false;
        }
        if (bit(t.neq, r) && regs[r] && *regs[r] == d) {
            return false;
        }
    }
    return true;
}

Regs nra_update(const NraTransition& t, const Regs& regs, Datum d) {
    Regs out(regs.size());
    for (std::size_t r = 0; r < regs.size(); ++r) {
        switch (t.up[r].kind) {
        case NraSource::Kind::reg:
            out[r] = regs[t.up[r].reg];
            break;
        case NraSource::Kind::in:
            out[r] = d;
            break;
        case NraSource::Kind::bot:
            break;
        }
    }
    return out;
}

bool nra_run(const Nra& a, const DataWord& w, std::size_t i, StateId q, const Regs& regs) {
    if (i == w.size()) {
        return a.is_final(q);
    }
    for (const NraTransition& t : a.delta) {
        if (t.src == q && t.letter == w[i].letter && nra_guard_ok(t, regs, w[i].datum)) {
            if (nra_run(a, w, i + 1, t.dst, nra_update(t, regs, w[i].datum))) {
                return true;
            }
        }
    }
    return false;
}

bool ura_run(const Nra& a, const DataWord& w, std::size_t i, StateId q, const Regs& regs) {
    if (i == w.size()) {
        return a.is_final(q);
    }
    bool any = false;
    for (const NraTransition& t : a.delta) {
        if (t.src == q && t.letter == w[i].letter && nra_guard_ok(t, regs, w[i].datum)) {
            any = true;
            if (!ura_run(a, w, i + 1, t.dst, nra_update(t, regs, w[i].datum))) {
                return false;
            }
        }
    }
    return any;
}

using Sets = std::vector<std::set<Datum>>;

bool rsa_guard_ok(const RsaTransition& t, RegSet empty_guard, const Sets& regs, Datum d) {
    for (std::size_t r = 0; r < regs.size(); ++r) {
        const bool member = regs[r].count(d) != 0;
        if (bit(t.in_guard, r) && !member) {
            return false;
        }
        if (bit(t.notin_guard, r) && member) {
            return false;
        }
        if (bit(empty_guard, r) && !regs[r].empty()) {
            return false;
        }
    }
    return true;
}

Sets rsa_update(const RsaTransition& t, const Sets& regs, Datum d) {
    Sets out(regs.size());
    for (std::size_t r = 0; r < regs.size(); ++r) {
        for (std::size_t x = 0; x < regs.size(); ++x) {
            if (bit(t.up[r].regs, x)) {
                out[r].insert(regs[x].begin(), regs[x].end());
            }
        }
        if (t.up[r].in) {
            out[r].insert(d);
        }
    }
    return out;
}

bool rsa_run(const Rsa& a, const std::vector<RegSet>& empty_guard, const DataWord& w, std::size_t i,
             StateId q, const Sets& regs) {
    if (i == w.size()) {
        return a.is_final(q);
    }
    for (std::size_t k = 0; k < a.delta.size(); ++k) {
        const RsaTransition& t = a.delta[k];
        const RegSet eg = empty_guard.empty() ? 0 : empty_guard[k];
        if (t.src == q && t.letter == w[i].letter && rsa_guard_ok(t, eg, regs, w[i].datum)) {
            if (rsa_run(a, empty_guard, w, i + 1, t.dst, rsa_update(t, regs, w[i].datum))) {
                return true;
            }
        }
    }
    return false;
}

}  // namespace

bool exists_repeat(const DataWord& w) {
    for (auto& [d, n] : occurrences(w)) {
        if (n >= 2) {
            return true;
        }
    }
    return false;
}

bool no_repeat(const DataWord& w) { return !exists_repeat(w); }

bool not_all_repeat(const DataWord& w) {
    for (auto& [d, n] : occurrences(w)) {
        if (n == 1) {
            return true;
        }
    }
    return false;
}

bool nra_accepts(const Nra& a, const DataWord& w) {
    for (StateId q : a.initial) {
        if (nra_run(a, w, 0, q, Regs(a.num_registers()))) {
            return true;
        }
    }
    return false;
}

bool ura_accepts(const Nra& a, const DataWord& w) {
    for (StateId q : a.initial) {
        if (!ura_run(a, w, 0, q, Regs(a.num_registers()))) {
            return false;
        }
    }
    return true;
}

bool rsa_accepts(const Rsa& a, const DataWord& w) {
    for (StateId q : a.initial) {
        if (rsa_run(a, {}, w, 0, q, Sets(a.num_registers()))) {
            return true;
        }
    }
    return false;
}

bool rsae_accepts(const RsaWithEmptyTest& a, const DataWord& w) {
    for (StateId q : a.base.initial) {
        if (rsa_run(a.base, a.empty_guard, w, 0, q, Sets(a.base.num_registers()))) {
            return true;
        }
    }
    return false;
}

bool is_single_valued(const Nra& a) {
    // Data are renamed to 1..k in register order, so the explored space is finite.
    using Cfg = std::pair<StateId, Regs>;
    auto canon = [](Regs regs) {
        std::map<Datum, Datum> rename;
        for (auto& v : regs) {
            if (v) {
                auto it = rename.emplace(*v, rename.size() + 1).first;
                v = it->second;
            }
        }
        return regs;
    };
    std::set<Cfg> seen;
    std::deque<Cfg> todo;
    for (StateId q : a.initial) {
        Cfg c{q, Regs(a.num_registers())};
        if (seen.insert(c).second) {
            todo.push_back(c);
        }
    }
    while (!todo.empty()) {
        Cfg c = todo.front();
        todo.pop_front();
        std::set<Datum> values;
        for (const auto& v : c.second) {
            if (v) {
                if (!values.insert(*v).second) {
                    return false;
                }
            }
        }
        std::vector<Datum> inputs(values.begin(), values.end());
        inputs.push_back(values.size() + 1000);  // a fresh value
        for (const NraTransition& t : a.delta) {
            if (t.src != c.first) {
                continue;
            }
            for (Datum d : inputs) {
                if (nra_guard_ok(t, c.second, d)) {
                    Cfg n{t.dst, canon(nra_update(t, c.second, d))};
                    if (seen.insert(n).second) {
                        todo.push_back(n);
                    }
                }
            }
        }
    }
    return true;
}

void for_each_word(std::size_t num_letters, Datum num_data, std::size_t max_len,
                   const std::function<bool(const DataWord&)>& f) {
    bool stop = false;
    for_each_word_tree(num_letters, num_data, max_len, [&](const DataWord& w) {
        if (stop) {
            return false;
        }
        if (!f(w)) {
            stop = true;
            return false;
        }
        return true;
    });
}

void for_each_word_tree(std::size_t num_letters, Datum num_data, std::size_t max_len,
                        const std::function<bool(const DataWord&)>& visit) {
    DataWord w;
    std::function<void()> rec = [&]() {
        if (!visit(w) || w.size() == max_len) {
            return;
        }
        for (std::size_t a = 0; a < num_letters; ++a) {
            for (Datum d = 1; d <= num_data; ++d) {
                w.push_back(Symbol{static_cast<rsakit::LetterId>(a), d});
                rec();
                w.pop_back();
            }
        }
    };
    rec();
}

// ---------------------------------------------------------------------------
// Generators

Nra random_nra(Rng& rng, const NraShape& shape) {
    Nra a;
    a.name = "R";
    const std::size_t n = pick(rng, 1, shape.max_states);
    const std::size_t m = pick(rng, 1, shape.max_registers);
    a.letters = letter_names(pick(rng, 1, shape.max_letters));
    a.states = names("q", n);
    a.registers = names("r", m);
    a.initial = {0};
    a.final = random_subset(rng, n, 0.4);
    const std::size_t count = pick(rng, 1, shape.max_transitions);
    for (std::size_t k = 0; k < count; ++k) {
        NraTransition t;
        t.src = static_cast<StateId>(pick(rng, 0, n - 1));
        t.dst = static_cast<StateId>(pick(rng, 0, n - 1));
        t.letter = static_cast<rsakit::LetterId>(pick(rng, 0, a.letters.size() - 1));
        t.up = rsakit::keep_all(m);
        for (std::size_t r = 0; r < m; ++r) {
            const std::size_t g = pick(rng, 0, shape.allow_neq ? 3 : 2);
            if (g == 1) {
                t.eq |= rsakit::reg_bit(static_cast<rsakit::RegId>(r));
            } else if (g == 2 && shape.allow_neq) {
                t.neq |= rsakit::reg_bit(static_cast<rsakit::RegId>(r));
            }
            switch (pick(rng, 0, 4)) {
            case 0:
                t.up[r] = NraSource::input();
                break;
            case 1:
                t.up[r] = NraSource::bot();
                break;
            case 2:
                t.up[r] = NraSource::copy(static_cast<rsakit::RegId>(pick(rng, 0, m - 1)));
                break;
            default:
                break;
            }
        }
        a.delta.push_back(t);
    }
    return a;
}

Nra random_register_local_nra(Rng& rng, const NraShape& shape) {
    Nra a;
    a.name = "L";
    const std::size_t n = pick(rng, 1, shape.max_states);
    const std::size_t m = pick(rng, 1, shape.max_registers);
    a.letters = letter_names(pick(rng, 1, shape.max_letters));
    a.states = names("q", n);
    a.registers = names("r", m);
    a.initial = {0};
    a.final = random_subset(rng, n, 0.4);
    std::vector<StateId> owner(m);
    for (auto& o : owner) {
        o = static_cast<StateId>(pick(rng, 0, n - 1));
    }
    const std::size_t count = pick(rng, 1, shape.max_transitions);
    for (std::size_t k = 0; k < count; ++k) {
        NraTransition t;
        t.src = static_cast<StateId>(pick(rng, 0, n - 1));
        t.dst = static_cast<StateId>(pick(rng, 0, n - 1));
        t.letter = static_cast<rsakit::LetterId>(pick(rng, 0, a.letters.size() - 1));
        t.up.assign(m, NraSource::bot());
        for (std::size_t r = 0; r < m; ++r) {
            const auto rid = static_cast<rsakit::RegId>(r);
            if (owner[r] == t.src) {
                const std::size_t g = pick(rng, 0, shape.allow_neq ? 3 : 2);
                if (g == 1) {
                    t.eq |= rsakit::reg_bit(rid);
                } else if (g == 2 && shape.allow_neq) {
                    t.neq |= rsakit::reg_bit(rid);
                }
            }
            if (owner[r] != t.dst) {
                continue;
            }
            std::vector<NraSource> choices{NraSource::input(), NraSource::bot()};
            for (std::size_t x = 0; x < m; ++x) {
                if (owner[x] == t.src) {
                    choices.push_back(NraSource::copy(static_cast<rsakit::RegId>(x)));
                }
            }
            t.up[r] = choices[pick(rng, 0, choices.size() - 1)];
        }
        a.delta.push_back(t);
    }
    return a;
}

Nra random_nra_eq1(Rng& rng, std::size_t max_states, std::size_t max_letters) {
    Nra a;
    a.name = "E";
    const std::size_t n = pick(rng, 1, max_states);
    a.letters = letter_names(pick(rng, 1, max_letters));
    a.states = names("q", n);
    a.registers = {"r"};
    a.initial = random_subset(rng, n, 0.3);
    if (a.initial.empty()) {
        a.initial = {0};
    }
    a.final = random_subset(rng, n, 0.4);
    const std::size_t count = pick(rng, 1, 3 * n);
    for (std::size_t k = 0; k < count; ++k) {
        NraTransition t;
        t.src = static_cast<StateId>(pick(rng, 0, n - 1));
        t.dst = static_cast<StateId>(pick(rng, 0, n - 1));
        t.letter = static_cast<rsakit::LetterId>(pick(rng, 0, a.letters.size() - 1));
        t.eq = coin(rng, 0.4) ? 1 : 0;
        const std::size_t u = pick(rng, 0, 2);
        t.up = {u == 0 ? NraSource::input() : u == 1 ? NraSource::bot() : NraSource::copy(0)};
        a.delta.push_back(t);
    }
    return a;
}

namespace {

RsaUpdate random_rsa_update(Rng& rng, std::size_t m, std::size_t r) {
    RsaUpdate u;
    if (coin(rng, 0.5)) {
        u.regs = rsakit::reg_bit(static_cast<rsakit::RegId>(r));
        u.in = coin(rng, 0.4);
        return u;
    }
    for (std::size_t x = 0; x < m; ++x) {
        if (coin(rng, 0.4)) {
            u.regs |= rsakit::reg_bit(static_cast<rsakit::RegId>(x));
        }
    }
    u.in = coin(rng, 0.5);
    return u;
}

Rsa rsa_skeleton(Rng& rng, const RsaShape& shape, const char* name) {
    Rsa a;
    a.name = name;
    const std::size_t n = pick(rng, 1, shape.max_states);
    a.letters = letter_names(pick(rng, 1, shape.max_letters));
    a.states = names("q", n);
    a.registers = names("r", pick(rng, 1, shape.max_registers));
    a.initial = {0};
    a.final = random_subset(rng, n, 0.4);
    return a;
}

}  // namespace

Rsa random_rsa(Rng& rng, const RsaShape& shape) {
    Rsa a = rsa_skeleton(rng, shape, "S");
    const std::size_t n = a.states.size();
    const std::size_t m = a.registers.size();
    const std::size_t count = pick(rng, 1, shape.max_transitions);
    for (std::size_t k = 0; k < count; ++k) {
        RsaTransition t;
        t.src = static_cast<StateId>(pick(rng, 0, n - 1));
        t.dst = static_cast<StateId>(pick(rng, 0, n - 1));
        t.letter = static_cast<rsakit::LetterId>(pick(rng, 0, a.letters.size() - 1));
        t.up.resize(m);
        for (std::size_t r = 0; r < m; ++r) {
            const std::size_t g = pick(rng, 0, 2);
            if (g == 1) {
                t.in_guard |= rsakit::reg_bit(static_cast<rsakit::RegId>(r));
            } else if (g == 2) {
                t.notin_guard |= rsakit::reg_bit(static_cast<rsakit::RegId>(r));
            }
            t.up[r] = random_rsa_update(rng, m, r);
        }
        a.delta.push_back(t);
    }
    return a;
}

Rsa random_drsa(Rng& rng, const RsaShape& shape) {
    Rsa a = rsa_skeleton(rng, shape, "D");
    const std::size_t n = a.states.size();
    const std::size_t m = a.registers.size();
    for (std::size_t q = 0; q < n; ++q) {
        for (std::size_t l = 0; l < a.letters.size(); ++l) {
            RegSet tested = 0;
            for (std::size_t r = 0; r < m; ++r) {
                if (coin(rng, 0.5)) {
                    tested |= rsakit::reg_bit(static_cast<rsakit::RegId>(r));
                }
            }
            // every subset g of `tested`
            for (RegSet g = tested;; g = (g - 1) & tested) {
                if (coin(rng, 0.75)) {
                    RsaTransition t;
                    t.src = static_cast<StateId>(q);
                    t.letter = static_cast<rsakit::LetterId>(l);
                    t.dst = static_cast<StateId>(pick(rng, 0, n - 1));
                    t.in_guard = g;
                    t.notin_guard = tested & ~g;
                    t.up.resize(m);
                    for (std::size_t r = 0; r < m; ++r) {
                        t.up[r] = random_rsa_update(rng, m, r);
                    }
                    a.delta.push_back(t);
                }
                if (g == 0) {
                    break;
                }
            }
        }
    }
    return a;
}

RsaWithEmptyTest random_rsae(Rng& rng, const RsaShape& shape) {
    RsaWithEmptyTest e;
    e.base = random_rsa(rng, shape);
    e.base.name = "E";
    const std::size_t m = e.base.registers.size();
    for (const RsaTransition& t : e.base.delta) {
        RegSet eg = 0;
        for (std::size_t r = 0; r < m; ++r) {
            if (!bit(t.in_guard, r) && coin(rng, 0.3)) {
                eg |= rsakit::reg_bit(static_cast<rsakit::RegId>(r));
            }
        }
        e.empty_guard.push_back(eg);
    }
    return e;
}

Tpn random_tpn(Rng& rng, std::size_t max_places, std::size_t max_transitions, rsakit::Count max_weight) {
    Tpn net;
    const std::size_t p = pick(rng, 2, max_places);
    net.places = names("p", p);
    net.initial.assign(p, 0);
    for (auto& c : net.initial) {
        c = static_cast<rsakit::Count>(pick(rng, 0, 1));
    }
    net.initial[0] = std::max<rsakit::Count>(net.initial[0], 1);
    const std::size_t count = pick(rng, 1, max_transitions);
    for (std::size_t k = 0; k < count; ++k) {
        rsakit::TpnTransition t;
        t.name = "t" + std::to_string(k);
        t.in.assign(p, 0);
        t.out.assign(p, 0);
        t.transfer.resize(p);
        for (std::size_t i = 0; i < p; ++i) {
            t.in[i] = coin(rng, 0.4) ? static_cast<rsakit::Count>(pick(rng, 1, max_weight)) : 0;
            t.out[i] = coin(rng, 0.4) ? static_cast<rsakit::Count>(pick(rng, 1, max_weight)) : 0;
            t.transfer[i] = coin(rng, 0.75) ? static_cast<rsakit::PlaceId>(i)
                                            : static_cast<rsakit::PlaceId>(pick(rng, 0, p - 1));
        }
        net.transitions.push_back(t);
    }
    return net;
}

Marking random_marking(Rng& rng, const Tpn& net, rsakit::Count max_count) {
    Marking m(net.places.size());
    for (auto& c : m) {
        c = static_cast<rsakit::Count>(pick(rng, 0, max_count));
    }
    return m;
}

std::optional<bool> explicit_coverable(const Tpn& net, const Marking& target, std::size_t max_states) {
    auto covers = [&](const Marking& m) {
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] < target[i]) {
                return false;
            }
        }
        return true;
    };
    std::set<Marking> seen{net.initial};
    std::deque<Marking> todo{net.initial};
    while (!todo.empty()) {
        Marking m = todo.front();
        todo.pop_front();
        if (covers(m)) {
            return true;
        }
        for (const auto& t : net.transitions) {
            Marking rest = m;
            bool ok = true;
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (rest[i] < t.in[i]) {
                    ok = false;
                    break;
                }
                rest[i] -= t.in[i];
            }
            if (!ok) {
                continue;
            }
            Marking next(m.size(), 0);
            for (std::size_t i = 0; i < m.size(); ++i) {
                next[t.transfer[i]] += rest[i];
            }
            for (std::size_t i = 0; i < m.size(); ++i) {
                next[i] += t.out[i];
            }
            if (seen.insert(next).second) {
                if (seen.size() > max_states) {
                    return std::nullopt;
                }
                todo.push_back(next);
            }
        }
    }
    return false;
}

std::string random_regex(Rng& rng, const std::string& chars) {
    std::string out;
    int captures = 0;
    const std::size_t items = pick(rng, 1, 6);
    auto one_char = [&]() -> std::string {
        switch (pick(rng, 0, 5)) {
        case 0:
            return ".";
        case 1: {
            std::string cls = coin(rng, 0.3) ? "[^" : "[";
            const std::size_t k = pick(rng, 1, 2);
            for (std::size_t i = 0; i < k; ++i) {
                cls += chars[pick(rng, 0, chars.size() - 1)];
            }
            return cls + "]";
        }
        default:
            return std::string(1, chars[pick(rng, 0, chars.size() - 1)]);
        }
    };
    for (std::size_t i = 0; i < items; ++i) {
        const std::size_t kind = pick(rng, 0, 9);
        if (kind <= 2) {
            out += one_char() + "*";
        } else if (kind <= 4 && captures < 3) {
            out += "(" + one_char() + ")";
            ++captures;
        } else if (kind <= 6 && captures > 0) {
            out += "\\" + std::to_string(pick(rng, 1, static_cast<std::size_t>(captures)));
        } else {
            out += one_char();
        }
    }
    return out;
}

std::string random_text(Rng& rng, const std::string& chars, std::size_t max_len) {
    std::string out;
    const std::size_t n = pick(rng, 0, max_len);
    for (std::size_t i = 0; i < n; ++i) {
        out += chars[pick(rng, 0, chars.size() - 1)];
    }
    return out;
}

}  // namespace oracle
