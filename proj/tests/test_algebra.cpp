#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "rsakit/algebra.hpp"

using namespace rsakit;

namespace {

void check_same_nra_language(const Nra& a, const Nra& b, std::size_t len = 4) {
    oracle::for_each_word(a.letters.size(), 3, len, [&](const DataWord& w) {
        const bool x = oracle::nra_accepts(a, w);
        const bool y = oracle::nra_accepts(b, w);
        CHECK_MESSAGE(x == y, "word of length " << w.size());
        return x == y;
    });
}

}  // namespace

TEST_CASE("partitions") {
    Partition p = Partition::discrete(3);
    CHECK(p.is_discrete());
    CHECK(p.block_of(1) == reg_bit(1));
    p.blocks = {reg_bit(0) | reg_bit(2), reg_bit(1)};
    CHECK_FALSE(p.is_discrete());
    CHECK(p.representative(2) == 0);
    CHECK(p.block_of(2) == (reg_bit(0) | reg_bit(2)));
}

TEST_CASE("embedding an NRA keeps its language") {
    const Nra a = fixtures::ex2_nra();
    const Rsa e = embed_nra_to_rsa(a);
    oracle::for_each_word(1, 3, 4, [&](const DataWord& w) {
        CHECK(oracle::rsa_accepts(e, w) == oracle::nra_accepts(a, w));
        return true;
    });
}

TEST_CASE("with_alphabet renumbers letters") {
    const Rsa f = fixtures::fig1();
    const Rsa g = with_alphabet(f, {"z", "a"});
    CHECK(g.letters == std::vector<std::string>{"z", "a"});
    CHECK(g.delta[0].letter == 1);
    CHECK(rsa_membership(g, {{1, 1}, {1, 1}}));
    CHECK_FALSE(rsa_membership(g, {{0, 1}, {0, 1}}));
    CHECK_THROWS_AS(with_alphabet(f, {"b"}), InputError);
}

TEST_CASE("register-local form of the guess-and-check NRA keeps one register copy") {
    const Nra a = fixtures::ex2_nra();
    CHECK_FALSE(is_register_local(a));
    const Nra l = register_local(a);
    CHECK(is_register_local(l));
    CHECK(l.num_registers() == 1);
    const auto owner = register_owner(l);
    REQUIRE(owner.size() == 1);
    CHECK(l.states[static_cast<std::size_t>(owner[0])] == "s");
    check_same_nra_language(a, l, 5);
}

TEST_CASE("register_local and single_valued preserve languages of random NRAs") {
    oracle::Rng rng(11);
    for (int i = 0; i < 150; ++i) {
        const Nra a = oracle::random_nra(rng, {3, 2, 2, 6, true});
        const Nra l = register_local(a);
        CHECK(is_register_local(l));
        check_same_nra_language(a, l, 4);
        const Nra s = single_valued(a);
        CHECK(oracle::is_single_valued(s));
        check_same_nra_language(a, s, 4);
    }
}

TEST_CASE("active registers") {
    const auto act = active_registers(fixtures::cartesian_failure_nra());
    CHECK(act[0] == 0);
    CHECK(act[1] == reg_bit(0));
    CHECK(act[2] == (reg_bit(1) | reg_bit(2)));
    CHECK(act[3] == reg_bit(3));
}

TEST_CASE("completion and complement of a deterministic NRA") {
    Nra d;
    d.letters = {"a"};
    d.registers = {"r"};
    d.states = {"p", "q"};
    d.initial = {0};
    d.final = {1};
    d.delta.push_back(make_nra_transition(0, 0, 0, 0, {{0, NraSource::input()}}, 1, 1));
    d.delta.push_back(make_nra_transition(1, 0, reg_bit(0), 0, {}, 1, 1));
    const Nra c = complete(d);
    CHECK(is_complete(c));
    check_same_nra_language(d, c, 4);
    const Nra n = complement_swap(d);
    oracle::for_each_word(1, 3, 4, [&](const DataWord& w) {
        CHECK(oracle::nra_accepts(n, w) != oracle::nra_accepts(d, w));
        return true;
    });
}

TEST_CASE("complement of the repetition automata") {
    const Rsa c1 = complement_drsa(fixtures::fig1());
    const Rsa c2 = complement_drsa(fixtures::fig2());
    CHECK(is_deterministic(c1));
    oracle::for_each_word(1, 3, 4, [&](const DataWord& w) {
        CHECK(rsa_membership(c1, w) == oracle::no_repeat(w));
        CHECK(rsa_membership(c2, w) == oracle::exists_repeat(w));
        return true;
    });
    CHECK_THROWS_AS(complement_drsa(fixtures::fig3()), InputError);
}

TEST_CASE("union and product over different alphabets") {
    Rsa b = fixtures::fig2();
    b.letters = {"b"};
    const Rsa u = union_rsa(fixtures::fig1(), b);
    const Rsa p = intersect_rsa(fixtures::fig1(), fixtures::fig3());
    const Rsa du = union_drsa(fixtures::fig1(), fixtures::fig2());
    CHECK(u.letters.size() == 2);
    CHECK(is_deterministic(du));
    oracle::for_each_word(1, 3, 4, [&](const DataWord& w) {
        CHECK(rsa_membership(p, w) == (oracle::exists_repeat(w) && oracle::not_all_repeat(w)));
        CHECK(rsa_membership(du, w));  // some repeat or none
        return true;
    });
    const LetterId la = static_cast<LetterId>(index_of(u.letters, "a"));
    const LetterId lb = static_cast<LetterId>(index_of(u.letters, "b"));
    CHECK(rsa_membership(u, {{la, 1}, {la, 1}}));
    CHECK(rsa_membership(u, {{lb, 1}, {lb, 2}}));
    CHECK_FALSE(rsa_membership(u, {{lb, 1}, {lb, 1}}));
    CHECK(rsa_membership(u, {}));
}

TEST_CASE("emptiness guards are eliminated without changing the language") {
    oracle::Rng rng(3);
    for (int i = 0; i < 60; ++i) {
        const RsaWithEmptyTest a = oracle::random_rsae(rng, {});
        const Rsa e = eliminate_emptiness_guards(a);
        oracle::for_each_word(a.base.letters.size(), 3, 3, [&](const DataWord& w) {
            CHECK(rsae_membership(a, w) == oracle::rsae_accepts(a, w));
            CHECK(rsa_membership(e, w) == oracle::rsae_accepts(a, w));
            return true;
        });
    }
}

TEST_CASE("epsilon elimination") {
    Rsa a = fixtures::fig1();
    const StateId mid = add_state(a.states, "mid");
    a.delta[1].dst = mid;  // q -a-> mid, then mid ~> s
    a.epsilon.push_back({mid, 1});
    CHECK_FALSE(a.is_canonical());
    CHECK_THROWS_AS(rsa_membership(a, fixtures::word({1, 1})), InputError);
    CHECK(rsa_membership_with_epsilon(a, fixtures::word({1, 1})));
    const Rsa b = eliminate_epsilon(a);
    CHECK(b.is_canonical());
    oracle::for_each_word(1, 3, 4, [&](const DataWord& w) {
        CHECK(rsa_membership(b, w) == oracle::exists_repeat(w));
        return true;
    });
}
