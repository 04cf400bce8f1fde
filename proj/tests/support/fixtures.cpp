#include "fixtures.hpp"

#include <algorithm>
#include <map>

namespace fixtures {

using rsakit::NraSource;
using rsakit::reg_bit;
using rsakit::RsaUpdate;

const char* const kRex = "(.).*;.*(.).*;.*(.).*\\3\\2\\1";
const char* const kRexText = "ah;jk2367ash;la5akv45lwkjb9f.dj5fqkbxsfyrf";

rsakit::DataWord word(std::initializer_list<rsakit::Datum> data) {
    rsakit::DataWord w;
    for (auto d : data) {
        w.push_back(rsakit::Symbol{0, d});
    }
    return w;
}

namespace {

Rsa one_register_rsa(const std::string& name, std::vector<std::string> states, std::vector<rsakit::StateId> final) {
    Rsa a;
    a.name = name;
    a.letters = {"a"};
    a.registers = {"r"};
    a.states = std::move(states);
    a.initial = {0};
    a.final = std::move(final);
    return a;
}

RsaUpdate keep_plus_in() { return RsaUpdate{reg_bit(0), true}; }
RsaUpdate just_in() { return RsaUpdate{0, true}; }

/// Builder for NRAs whose registers are cleared unless stated otherwise.
struct NraBuilder {
    Nra a;

    rsakit::StateId s(const std::string& n) {
        auto it = std::find(a.states.begin(), a.states.end(), n);
        if (it != a.states.end()) {
            return static_cast<rsakit::StateId>(it - a.states.begin());
        }
        return rsakit::add_state(a.states, n);
    }
    rsakit::RegId r(const std::string& n) { return static_cast<rsakit::RegId>(rsakit::index_of(a.registers, n)); }

    void edge(const std::string& from, const std::string& letter, const std::string& to,
              std::vector<std::string> eq, std::vector<std::pair<std::string, NraSource>> up) {
        rsakit::NraTransition t;
        t.src = s(from);
        t.dst = s(to);
        t.letter = static_cast<rsakit::LetterId>(rsakit::index_of(a.letters, letter));
        for (const auto& e : eq) {
            t.eq |= reg_bit(r(e));
        }
        t.up.assign(a.registers.size(), NraSource::bot());
        for (auto& [reg, src] : up) {
            t.up[r(reg)] = src;
        }
        a.delta.push_back(t);
    }
};

}  // namespace

Rsa fig1() {
    Rsa a = one_register_rsa("fig1", {"q", "s"}, {1});
    a.delta.push_back(rsakit::make_rsa_transition(0, 0, 0, reg_bit(0), {{0, keep_plus_in()}}, 0, 1));
    a.delta.push_back(rsakit::make_rsa_transition(0, 0, reg_bit(0), 0, {}, 1, 1));
    a.delta.push_back(rsakit::make_rsa_transition(1, 0, 0, 0, {}, 1, 1));
    return a;
}

Rsa fig2() {
    Rsa a = one_register_rsa("fig2", {"q"}, {0});
    a.delta.push_back(rsakit::make_rsa_transition(0, 0, 0, reg_bit(0), {{0, keep_plus_in()}}, 0, 1));
    return a;
}

Rsa fig3() {
    Rsa a = one_register_rsa("fig3", {"q", "s"}, {1});
    a.delta.push_back(rsakit::make_rsa_transition(0, 0, 0, 0, {{0, keep_plus_in()}}, 0, 1));
    a.delta.push_back(rsakit::make_rsa_transition(0, 0, 0, reg_bit(0), {{0, just_in()}}, 1, 1));
    a.delta.push_back(rsakit::make_rsa_transition(1, 0, 0, reg_bit(0), {}, 1, 1));
    return a;
}

Nra ex2_nra() {
    Nra a;
    a.name = "ex2";
    a.letters = {"a"};
    a.registers = {"r"};
    a.states = {"q", "s", "t"};
    a.initial = {0};
    a.final = {2};
    a.delta.push_back(rsakit::make_nra_transition(0, 0, 0, 0, {}, 0, 1));
    a.delta.push_back(rsakit::make_nra_transition(0, 0, 0, 0, {{0, NraSource::input()}}, 1, 1));
    a.delta.push_back(rsakit::make_nra_transition(1, 0, 0, reg_bit(0), {}, 1, 1));
    a.delta.push_back(rsakit::make_nra_transition(1, 0, reg_bit(0), 0, {}, 2, 1));
    a.delta.push_back(rsakit::make_nra_transition(2, 0, 0, 0, {}, 2, 1));
    return a;
}

Nra ex2_ura() {
    Nra a = ex2_nra();
    a.name = "ex2u";
    a.final = {0, 1};
    return a;
}

Nra cardinality_failure_nra() { return ex2_nra(); }

Nra cartesian_failure_nra() {
    NraBuilder b;
    b.a.name = "uvwvz";
    b.a.letters = {"a"};
    b.a.registers = {"r1", "r2", "r3", "r4"};
    for (const char* n : {"q", "s", "t", "u", "f"}) {
        b.s(n);
    }
    b.a.initial = {0};
    b.a.final = {4};
    b.edge("q", "a", "q", {}, {});
    b.edge("q", "a", "s", {}, {{"r1", NraSource::input()}});
    b.edge("s", "a", "t", {}, {{"r2", NraSource::copy(b.r("r1"))}, {"r3", NraSource::input()}});
    b.edge("t", "a", "t", {}, {{"r2", NraSource::copy(b.r("r2"))}, {"r3", NraSource::copy(b.r("r3"))}});
    b.edge("t", "a", "u", {"r2"}, {{"r4", NraSource::copy(b.r("r3"))}});
    b.edge("u", "a", "f", {"r4"}, {});
    b.edge("f", "a", "f", {}, {});
    return b.a;
}

Nra collapse_nra() {
    NraBuilder b;
    b.a.name = "collapse";
    b.a.letters = {"a", "b"};
    b.a.registers = {"r_q", "r_s"};
    for (const char* n : {"q", "s", "f"}) {
        b.s(n);
    }
    b.a.initial = {0};
    b.a.final = {2};
    b.edge("q", "a", "q", {}, {{"r_q", NraSource::input()}});
    b.edge("q", "a", "q", {}, {{"r_q", NraSource::copy(b.r("r_q"))}});
    b.edge("q", "b", "s", {"r_q"}, {{"r_s", NraSource::copy(b.r("r_q"))}});
    b.edge("s", "b", "f", {"r_s"}, {});
    return b.a;
}

std::vector<RsaUpdate> transfer_example_update() {
    return {RsaUpdate{reg_bit(0), true}, RsaUpdate{reg_bit(0) | reg_bit(1), false}};
}

namespace {

struct NetBuilder {
    rsakit::Tpn net;
    std::map<std::string, rsakit::PlaceId> ids;

    explicit NetBuilder(std::vector<std::string> places) {
        net.places = std::move(places);
        for (std::size_t i = 0; i < net.places.size(); ++i) {
            ids[net.places[i]] = static_cast<rsakit::PlaceId>(i);
        }
        net.initial.assign(net.places.size(), 0);
    }

    rsakit::Marking marking(std::initializer_list<std::pair<const char*, rsakit::Count>> counts) {
        rsakit::Marking m(net.places.size(), 0);
        for (auto& [p, n] : counts) {
            m[ids.at(p)] = n;
        }
        return m;
    }

    void transition(const std::string& name, std::initializer_list<std::pair<const char*, rsakit::Count>> in,
                    std::initializer_list<std::pair<const char*, rsakit::Count>> out,
                    std::initializer_list<std::pair<const char*, const char*>> moves = {}) {
        rsakit::TpnTransition t = rsakit::make_tpn_transition(net, name);
        t.in = marking(in);
        t.out = marking(out);
        for (auto& [from, to] : moves) {
            t.transfer[ids.at(from)] = ids.at(to);
        }
        net.transitions.push_back(t);
    }
};

}  // namespace

std::vector<NetCase> handcrafted_nets() {
    std::vector<NetCase> cases;
    {
        NetBuilder b({"p0", "p1"});
        b.net.initial = b.marking({{"p0", 1}});
        b.transition("t", {{"p0", 1}}, {{"p1", 1}});
        cases.push_back({"single move", b.net, b.marking({{"p1", 1}}), true});
        cases.push_back({"token count", b.net, b.marking({{"p1", 2}}), false});
    }
    {
        NetBuilder b({"c", "p1", "p2", "lost"});
        b.net.initial = b.marking({{"c", 1}});
        b.transition("gen", {{"c", 1}}, {{"c", 1}, {"p1", 1}});
        b.transition("reset", {{"c", 1}}, {{"p2", 1}}, {{"p1", "lost"}});
        cases.push_back({"reset", b.net, b.marking({{"p1", 1}, {"p2", 1}}), false});
    }
    {
        NetBuilder b({"p0", "p1", "p2"});
        b.net.initial = b.marking({{"p0", 1}});
        b.transition("gen", {{"p0", 1}}, {{"p0", 1}, {"p1", 1}});
        b.transition("flush", {{"p0", 1}}, {{"p2", 1}}, {{"p1", "p2"}});
        cases.push_back({"transfer", b.net, b.marking({{"p2", 3}}), true});
    }
    {
        NetBuilder b({"a", "b"});
        b.net.initial = b.marking({{"a", 1}});
        b.transition("ab", {{"a", 1}}, {{"b", 1}});
        b.transition("ba", {{"b", 1}}, {{"a", 1}});
        cases.push_back({"mutex", b.net, b.marking({{"a", 1}, {"b", 1}}), false});
    }
    return cases;
}

}  // namespace fixtures
