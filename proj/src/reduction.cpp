// reduction.cpp -- region net of an RsA, and the gadget RsA of a TPN
#include "rsakit/reduction.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#include "rsakit/algebra.hpp"

namespace rsakit {

namespace {

RegSet registers_only(const RsaUpdate& u) { return u.regs; }

bool is_subset(RegSet a, RegSet b) { return (a & ~b) == 0; }

/// Enumerates the subsets of `universe`.
template <typename F>
void for_each_subset(RegSet universe, F&& f) {
    RegSet s = 0;
    while (true) {
        f(s);
        if (s == universe) {
            break;
        }
        s = (s - universe) & universe;
    }
}

std::string fresh_name(const std::vector<std::string>& taken, std::string base) {
    while (std::find(taken.begin(), taken.end(), base) != taken.end()) {
        base += "'";
    }
    return base;
}

}  // namespace

std::vector<RegSet> posit_product(const std::vector<RsaUpdate>& up, Region rho) {
    std::vector<RegSet> out;
    for (RegId r : regs_of(rho)) {
        RegSet s = registers_only(up[r]);
        if (std::find(out.begin(), out.end(), s) == out.end()) {
            out.push_back(s);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

RegSet negat(const std::vector<RsaUpdate>& up, Region rho) {
    RegSet out = 0;
    for (std::size_t r = 0; r < up.size(); ++r) {
        if (!has_reg(rho, static_cast<RegId>(r))) {
            out |= registers_only(up[r]);
        }
    }
    return out;
}

std::vector<RegSet> unordered_product(const std::vector<RegSet>& sets) {
    std::set<RegSet> acc{0};
    for (RegSet s : sets) {
        std::set<RegSet> next;
        for (RegSet partial : acc) {
            for (RegId r : regs_of(s)) {
                next.insert(partial | reg_bit(r));
            }
        }
        acc = std::move(next);
    }
    return {acc.begin(), acc.end()};
}

std::vector<Region> posit_sop(const std::vector<RsaUpdate>& up, Region rho) {
    return unordered_product(posit_product(up, rho));
}

std::vector<Region> posit_sop_prime(const std::vector<RsaUpdate>& up, Region rho) {
    const std::vector<RegSet> minimal = posit_sop(up, rho);
    const RegSet allowed = all_regs(up.size()) & ~negat(up, rho);
    std::vector<Region> out;
    for_each_subset(allowed, [&](RegSet cand) {
        bool hits = std::any_of(minimal.begin(), minimal.end(),
                                [&](RegSet m) { return is_subset(m, cand); });
        if (hits) {
            out.push_back(cand);
        }
    });
    std::sort(out.begin(), out.end());
    return out;
}

Region transfer_region(const std::vector<RsaUpdate>& up, Region rho) {
    Region out = 0;
    for (std::size_t r = 0; r < up.size(); ++r) {
        if ((up[r].regs & rho) != 0) {
            out |= reg_bit(static_cast<RegId>(r));
        }
    }
    return out;
}

std::vector<Region> compute_transfer(const std::vector<RsaUpdate>& up) {
    if (up.size() > 20) {
        throw ResourceError("transfer table over more than 20 registers");
    }
    const std::size_t n = std::size_t{1} << up.size();
    std::vector<Region> table(n, 0);
    std::vector<bool> assigned(n, false);
    for (Region out = 0; out < n; ++out) {
        for (Region in : posit_sop_prime(up, out)) {
            if (assigned[in]) {
                throw std::logic_error("transfer assigns a region twice");
            }
            table[in] = out;
            assigned[in] = true;
        }
    }
    return table;
}

std::string region_name(const std::vector<std::string>& registers, Region rho) {
    std::string out = "{";
    bool first = true;
    for (RegId r : regs_of(rho)) {
        out += (first ? "" : ",") + registers[r];
        first = false;
    }
    return out + "}";
}

// ---------------------------------------------------------------------------
// RsA -> TPN

namespace {

bool guard_admits(const RsaTransition& t, Region rho) {
    return is_subset(t.in_guard, rho) && (t.notin_guard & rho) == 0;
}

/// Possibly nonempty regions per state (sound over-approximation).  The
/// outside region is not tracked.
std::vector<std::set<Region>> live_regions(const Rsa& a, std::vector<bool>& reached) {
    const auto out = outgoing(a);
    std::vector<std::set<Region>> live(a.num_states());
    reached.assign(a.num_states(), false);
    std::deque<StateId> work;
    for (StateId q : a.initial) {
        reached[q] = true;
        work.push_back(q);
    }
    while (!work.empty()) {
        const StateId q = work.front();
        work.pop_front();
        for (std::size_t i : out[q]) {
            const RsaTransition& t = a.delta[i];
            std::set<Region> adds;
            bool enabled = false;
            auto consider_input = [&](Region rho) {
                if (!guard_admits(t, rho)) {
                    return;
                }
                enabled = true;
                Region dst = transfer_region(t.up, rho);
                for (std::size_t r = 0; r < t.up.size(); ++r) {
                    if (t.up[r].in) {
                        dst |= reg_bit(static_cast<RegId>(r));
                    }
                }
                if (dst != 0) {
                    adds.insert(dst);
                }
            };
            consider_input(0);
            for (Region rho : live[q]) {
                consider_input(rho);
            }
            if (!enabled) {
                continue;
            }
            for (Region rho : live[q]) {
                Region moved = transfer_region(t.up, rho);
                if (moved != 0) {
                    adds.insert(moved);
                }
            }
            bool changed = !reached[t.dst];
            reached[t.dst] = true;
            for (Region rho : adds) {
                changed = live[t.dst].insert(rho).second || changed;
            }
            if (changed) {
                work.push_back(t.dst);
            }
        }
    }
    return live;
}

}  // namespace

RsaTpn rsa_to_tpn(const Rsa& a, const ReductionOptions& opts) {
    if (!a.is_canonical()) {
        throw InputError("rsa_to_tpn needs an automaton without epsilon edges");
    }
    if (!validate(a).empty()) {
        throw InputError("invalid automaton: " + validate(a).front());
    }
    const std::size_t nr = a.num_registers();
    std::vector<bool> reached(a.num_states(), true);
    std::vector<std::set<Region>> live;
    std::set<Region> regions{0};
    if (opts.prune_regions) {
        live = live_regions(a, reached);
        for (const auto& s : live) {
            regions.insert(s.begin(), s.end());
        }
    } else {
        if (nr > opts.max_region_registers) {
            throw ResourceError("region net over " + std::to_string(nr) + " registers exceeds the cap of " +
                                std::to_string(opts.max_region_registers));
        }
        for_each_subset(all_regs(nr), [&](RegSet s) { regions.insert(s); });
    }

    RsaTpn red;
    Tpn& net = red.net;
    net.name = a.name + "_tpn";
    RsaTpnMap& map = red.map;
    for (StateId q = 0; q < a.num_states(); ++q) {
        map.state_place.push_back(static_cast<PlaceId>(net.places.size()));
        net.places.push_back(a.states[q]);
    }
    map.init = static_cast<PlaceId>(net.places.size());
    net.places.push_back(fresh_name(net.places, "init"));
    map.fin = static_cast<PlaceId>(net.places.size());
    net.places.push_back(fresh_name(net.places, "fin"));
    for (Region rho : regions) {
        map.region_place[rho] = static_cast<PlaceId>(net.places.size());
        net.places.push_back(fresh_name(net.places, region_name(a.registers, rho)));
    }
    net.initial = zero_marking(net);
    net.initial[map.init] = 1;
    std::vector<PlaceId> control = map.state_place;
    control.push_back(map.init);
    control.push_back(map.fin);
    net.bounded_groups.push_back(std::move(control));

    const PlaceId outside = map.region_place.at(0);
    auto place_of_region = [&](Region rho) {
        auto it = map.region_place.find(rho);
        return it == map.region_place.end() ? outside : it->second;
    };
    auto add = [&](TpnTransition t, TpnStep step) {
        t.name = "t" + std::to_string(net.transitions.size());
        net.transitions.push_back(std::move(t));
        map.transition_of.push_back(step);
    };

    for (StateId q : a.initial) {
        TpnTransition t = make_tpn_transition(net, "");
        t.in[map.init] = 1;
        t.out[map.state_place[q]] = 1;
        add(std::move(t), {TpnStep::Kind::start, q, 0, 0, false});
    }
    for (std::size_t i = 0; i < a.delta.size(); ++i) {
        const RsaTransition& rt = a.delta[i];
        if (!reached[rt.src]) {
            continue;
        }
        TpnTransition base = make_tpn_transition(net, "");
        for (const auto& [rho, place] : map.region_place) {
            base.transfer[place] = place_of_region(transfer_region(rt.up, rho));
        }
        Region written = 0;
        for (std::size_t r = 0; r < nr; ++r) {
            if (rt.up[r].in) {
                written |= reg_bit(static_cast<RegId>(r));
            }
        }
        auto emit = [&](Region rho, bool fresh) {
            if (!guard_admits(rt, rho)) {
                return;
            }
            TpnTransition t = base;
            t.in[map.state_place[rt.src]] += 1;
            if (!fresh) {
                t.in[map.region_place.at(rho)] += 1;
            }
            t.out[map.state_place[rt.dst]] += 1;
            t.out[place_of_region(written | transfer_region(rt.up, rho))] += 1;
            add(std::move(t), {TpnStep::Kind::step, rt.src, i, rho, fresh});
        };
        emit(0, true);
        for (const auto& entry : map.region_place) {
            const Region rho = entry.first;
            if (rho == 0) {
                continue;
            }
            if (opts.prune_regions && live[rt.src].count(rho) == 0) {
                continue;
            }
            emit(rho, false);
        }
    }
    for (StateId q : a.final) {
        if (!reached[q]) {
            continue;
        }
        TpnTransition t = make_tpn_transition(net, "");
        t.in[map.state_place[q]] = 1;
        t.out[map.fin] = 1;
        add(std::move(t), {TpnStep::Kind::accept, q, 0, 0, false});
    }
    red.target = zero_marking(net);
    red.target[map.fin] = 1;
    return red;
}

Marking config_marking(const Rsa& a, const RsaTpn& red, const RsaConfig& cfg) {
    Marking m = zero_marking(red.net);
    m[red.map.state_place[cfg.state]] = 1;
    std::map<Datum, Region> where;
    for (std::size_t r = 0; r < a.num_registers(); ++r) {
        for (Datum d : cfg.regs[r]) {
            where[d] |= reg_bit(static_cast<RegId>(r));
        }
    }
    for (const auto& [d, rho] : where) {
        auto it = red.map.region_place.find(rho);
        if (it == red.map.region_place.end()) {
            throw std::logic_error("configuration occupies a region without a place");
        }
        m[it->second] += 1;
    }
    return m;
}

// ---------------------------------------------------------------------------
// TPN -> RsA

namespace {

class GadgetBuilder {
public:
    Rsa rsa;
    RegId r_in = 0;
    RegId r_tmp = 0;
    std::vector<RegId> place_reg;
    std::vector<RegId> primed_reg;

    explicit GadgetBuilder(const Tpn& net) {
        rsa.name = net.name + "_rsa";
        rsa.letters = {"a"};
        for (const std::string& p : net.places) {
            place_reg.push_back(add_register("r_" + p));
            primed_reg.push_back(add_register("r_" + p + "'"));
        }
        r_in = add_register("r_in");
        r_tmp = add_register("r_tmp");
        if (rsa.num_registers() > kMaxRegisters) {
            throw ResourceError("net has too many places for the gadget construction");
        }
    }

    StateId state(const std::string& label) {
        return add_state(rsa.states, fresh_name(rsa.states, label));
    }

    /// A gadget fragment with a single entry and a single exit state.
    struct Piece {
        StateId entry;
        StateId exit;
    };

    Piece empty(const std::string& label) {
        StateId q = state(label);
        return {q, q};
    }

    Piece then(Piece a, Piece b) {
        rsa.epsilon.emplace_back(a.exit, b.entry);
        return {a.entry, b.exit};
    }

    Piece lossy_remove(PlaceId p, const std::string& label) {
        StateId q1 = state(label + ".rem1");
        StateId q2 = state(label + ".rem2");
        StateId q3 = state(label + ".rem3");
        const RegId rp = place_reg[p];
        edge(q1, reg_bit(rp), 0, {{r_in, {0, true}}, {r_tmp, {0, false}}}, q2);
        edge(q2, reg_bit(rp), reg_bit(r_in), {{r_tmp, {reg_bit(r_tmp), true}}}, q2);
        edge(q2, 0, 0, {{rp, {reg_bit(r_tmp), false}}}, q3);
        return {q1, q3};
    }

    Piece move(RegId from, RegId to, const std::string& label) {
        StateId q1 = state(label + ".mv1");
        StateId q2 = state(label + ".mv2");
        edge(q1, 0, 0, {{from, {0, false}}, {to, {reg_bit(from) | reg_bit(to), false}}}, q2);
        return {q1, q2};
    }

    Piece new_token(PlaceId p, const std::string& label) {
        StateId q1 = state(label + ".new1");
        StateId q2 = state(label + ".new2");
        const RegId rp = place_reg[p];
        edge(q1, 0, all_regs(rsa.num_registers()), {{rp, {reg_bit(rp), true}}}, q2);
        return {q1, q2};
    }

    Piece removals(const Marking& m, const std::string& label) {
        Piece acc = empty(label);
        for (PlaceId p = 0; p < m.size(); ++p) {
            for (Count k = 0; k < m[p]; ++k) {
                acc = then(acc, lossy_remove(p, label));
            }
        }
        return acc;
    }

private:
    RegId add_register(const std::string& name) {
        rsa.registers.push_back(fresh_name(rsa.registers, name));
        return static_cast<RegId>(rsa.registers.size() - 1);
    }

    void edge(StateId src, RegSet in, RegSet notin, std::vector<std::pair<RegId, RsaUpdate>> up,
              StateId dst) {
        rsa.delta.push_back(make_rsa_transition(src, 0, in, notin, std::move(up), dst, rsa.num_registers()));
    }
};

}  // namespace

Rsa tpn_to_rsa(const Tpn& input, const Marking& input_target) {
    if (!validate(input).empty()) {
        throw InputError("invalid net: " + validate(input).front());
    }
    if (input_target.size() != input.num_places()) {
        throw InputError("target marking does not match the places of the net");
    }
    // Normalise so that the initial marking is a single token.
    Tpn net = input;
    Marking target = input_target;
    PlaceId start = 0;
    const Count total = std::accumulate(net.initial.begin(), net.initial.end(), Count{0});
    auto single = std::find(net.initial.begin(), net.initial.end(), Count{1});
    if (total == 1 && single != net.initial.end()) {
        start = static_cast<PlaceId>(single - net.initial.begin());
    } else {
        start = static_cast<PlaceId>(net.places.size());
        net.places.push_back(fresh_name(net.places, "start"));
        for (TpnTransition& t : net.transitions) {
            t.in.push_back(0);
            t.out.push_back(0);
            t.transfer.push_back(start);
        }
        TpnTransition producer = make_tpn_transition(net, fresh_name(net.places, "produce"));
        producer.in[start] = 1;
        std::copy(input.initial.begin(), input.initial.end(), producer.out.begin());
        net.transitions.push_back(std::move(producer));
        net.initial.assign(net.places.size(), 0);
        net.initial[start] = 1;
        target.push_back(0);
    }

    GadgetBuilder b(net);
    const StateId main = b.state("main");
    const StateId init = b.state("init");
    auto seed = b.new_token(start, "m0");
    b.rsa.epsilon.emplace_back(init, seed.entry);
    b.rsa.epsilon.emplace_back(seed.exit, main);

    for (std::size_t k = 0; k < net.transitions.size(); ++k) {
        const TpnTransition& t = net.transitions[k];
        const std::string label = "g" + std::to_string(k);
        auto piece = b.removals(t.in, label);
        for (PlaceId p = 0; p < net.num_places(); ++p) {
            piece = b.then(piece, b.move(b.place_reg[p], b.primed_reg[t.transfer[p]], label));
        }
        for (PlaceId p = 0; p < net.num_places(); ++p) {
            piece = b.then(piece, b.move(b.primed_reg[p], b.place_reg[p], label));
        }
        for (PlaceId p = 0; p < net.num_places(); ++p) {
            for (Count c = 0; c < t.out[p]; ++c) {
                piece = b.then(piece, b.new_token(p, label));
            }
        }
        b.rsa.epsilon.emplace_back(main, piece.entry);
        b.rsa.epsilon.emplace_back(piece.exit, main);
    }
    auto check = b.removals(target, "cover");
    const StateId fin = b.state("fin");
    b.rsa.epsilon.emplace_back(main, check.entry);
    b.rsa.epsilon.emplace_back(check.exit, fin);
    b.rsa.initial = {init};
    b.rsa.final = {fin};
    return eliminate_epsilon(b.rsa);
}

}  // namespace rsakit
