#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "rsakit/algebra.hpp"
#include "rsakit/decide.hpp"
#include "rsakit/reduction.hpp"

using namespace rsakit;

namespace {

std::set<RegSet> as_set(const std::vector<RegSet>& v) { return {v.begin(), v.end()}; }

std::vector<RsaUpdate> random_update(oracle::Rng& rng, std::size_t n) {
    std::vector<RsaUpdate> up(n);
    for (auto& u : up) {
        u.regs = rng() & all_regs(n);
        u.in = (rng() & 1U) != 0;
    }
    return up;
}

}  // namespace

TEST_CASE("transfer of the two-register example update") {
    const auto up = fixtures::transfer_example_update();
    CHECK(compute_transfer(up) == std::vector<Region>{0, 3, 2, 3});
    CHECK(as_set(posit_product(up, 3)) == std::set<RegSet>{1, 3});
    CHECK(as_set(posit_product(up, 2)) == std::set<RegSet>{3});
    CHECK(negat(up, 1) == 3);
    CHECK(negat(up, 2) == 1);
    CHECK(negat(up, 0) == 3);
    CHECK(negat(up, 3) == 0);
    CHECK(as_set(posit_sop_prime(up, 3)) == std::set<RegSet>{1, 3});
    CHECK(posit_sop_prime(up, 1).empty());
    CHECK(as_set(posit_sop_prime(up, 2)) == std::set<RegSet>{2});
    CHECK(as_set(posit_sop_prime(up, 0)) == std::set<RegSet>{0});
}

TEST_CASE("unordered product") {
    CHECK(unordered_product({}) == std::vector<RegSet>{0});
    CHECK(as_set(unordered_product({0b011, 0b100})) == std::set<RegSet>{0b101, 0b110});
    CHECK(unordered_product({0b1, 0}).empty());
}

TEST_CASE("posit_sop_prime is the preimage of the region map") {
    oracle::Rng rng(21);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 1 + rng() % 4;
        const auto up = random_update(rng, n);
        for (Region out = 0; out < (Region{1} << n); ++out) {
            std::set<RegSet> expect;
            for (Region in = 0; in < (Region{1} << n); ++in) {
                if (transfer_region(up, in) == out) expect.insert(in);
            }
            CHECK(as_set(posit_sop_prime(up, out)) == expect);
        }
        const auto table = compute_transfer(up);
        for (Region in = 0; in < table.size(); ++in) {
            CHECK(table[in] == transfer_region(up, in));
        }
    }
}

TEST_CASE("region names") {
    CHECK(region_name({"r1", "r2"}, 3) == "{r1,r2}");
    CHECK(region_name({"r1", "r2"}, 0) == "{}");
}

TEST_CASE("region net of the repetition automaton") {
    const Rsa a = fixtures::fig1();
    const RsaTpn red = rsa_to_tpn(a);
    CHECK(validate(red.net).empty());
    CHECK(red.map.region_place.size() == 2);
    CHECK(red.net.places.size() == 2 + 2 + 2);  // states, init/fin, regions
    CHECK(red.target[red.map.fin] == 1);
    CHECK(is_coverable(red.net, red.target));
    CHECK(red.map.transition_of.size() == red.net.transitions.size());

    const RsaConfig start = *rsa_initial(a).begin();
    const Marking m = config_marking(a, red, start);
    CHECK(m[red.map.state_place[0]] == 1);
    auto c1 = rsa_step(start, a.delta[0], Symbol{0, 4});
    auto c2 = rsa_step(*c1, a.delta[0], Symbol{0, 5});
    const Marking m2 = config_marking(a, red, *c2);
    CHECK(m2[red.map.region_place.at(1)] == 2);
}

TEST_CASE("region pruning keeps the verdict") {
    oracle::Rng rng(9);
    for (int i = 0; i < 40; ++i) {
        const Rsa a = oracle::random_rsa(rng, {3, 2, 2, 5});
        ReductionOptions prune;
        prune.prune_regions = true;
        const RsaTpn full = rsa_to_tpn(a);
        const RsaTpn small = rsa_to_tpn(a, prune);
        CHECK(small.net.places.size() <= full.net.places.size());
        CHECK(is_coverable(full.net, full.target) == is_coverable(small.net, small.target));
    }
}

TEST_CASE("too many registers for the region net") {
    Rsa a = fixtures::fig1();
    ReductionOptions opts;
    opts.max_region_registers = 0;
    CHECK_THROWS_AS(rsa_to_tpn(a, opts), ResourceError);
}

TEST_CASE("gadget automaton is nonempty exactly when the target is coverable") {
    for (const auto& c : fixtures::handcrafted_nets()) {
        CAPTURE(c.label);
        const Rsa g = tpn_to_rsa(c.net, c.target);
        CHECK(g.is_canonical());
        CHECK(g.letters == std::vector<std::string>{"a"});
        CHECK(is_empty(g).answer == !c.coverable);
    }
}
