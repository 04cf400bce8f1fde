// fixtures.hpp -- hand-built automata and nets shared by the tests
#pragma once

#include <string>
#include <vector>

#include "rsakit/core.hpp"
#include "rsakit/tpn.hpp"

namespace fixtures {

using rsakit::Nra;
using rsakit::Rsa;

/// One-register RsA: some datum occurs twice (deterministic).
Rsa fig1();
/// All data distinct (deterministic).
Rsa fig2();
/// Some datum occurs exactly once (nondeterministic).
Rsa fig3();

/// Guess-and-check NRA for "some datum occurs twice"; final state t.
Nra ex2_nra();
/// The same transition structure read universally with final states q and s.
Nra ex2_ura();

/// Determinisation fails on a disequality test of a multi-valued register.
Nra cardinality_failure_nra();
/// Language {u v w v z : |v| = 2}; the register pair holding v cannot be
/// represented by independent set registers.
Nra cartesian_failure_nra();
/// Two b-letters must repeat one stored a-datum; needs the positive-test
/// collapse to stay precise.
Nra collapse_nra();

/// up(r1) = {r1, in}, up(r2) = {r1, r2} over registers r1, r2.
std::vector<rsakit::RsaUpdate> transfer_example_update();

struct NetCase {
    std::string label;
    rsakit::Tpn net;
    rsakit::Marking target;
    bool coverable = false;
};

/// Small nets with known coverability verdicts.
std::vector<NetCase> handcrafted_nets();

/// The three-capture search pattern and the 42-character text it rejects.
extern const char* const kRex;
extern const char* const kRexText;

/// Builds a word over letter 0 from data values.
rsakit::DataWord word(std::initializer_list<rsakit::Datum> data);

}  // namespace fixtures
