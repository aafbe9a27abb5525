#include <catch2/catch_amalgamated.hpp>

#include "chainlat/chain.hpp"
#include "chainlat/rng.hpp"
#include "chainlat/subset.hpp"
#include "chainlat/symmetric.hpp"
#include "test_helpers.hpp"

using namespace chainlat;

TEST_CASE("subset comparability") {
    CHECK(is_comparable(Subset{0b01, 2}, Subset{0b11, 2}));
    CHECK_FALSE(is_comparable(Subset{0b01, 2}, Subset{0b10, 2}));
    CHECK(is_comparable(Subset{0b101, 3}, Subset{0b101, 3})); // reflexive
    CHECK_THROWS_AS(is_comparable(Subset{1, 2}, Subset{1, 3}), DomainError);
}

TEST_CASE("level enumeration and ranks") {
    for (int n : {1, 4, 7}) {
        for (int l = 0; l <= n; ++l) {
            auto lv = level_masks(n, l);
            REQUIRE(lv.size() == binomial(n, l));
            CHECK(std::is_sorted(lv.begin(), lv.end()));
            for (std::size_t i = 0; i < lv.size(); ++i) CHECK(level_rank(lv[i]) == i);
        }
    }
}

TEST_CASE("lubell mass") {
    SECTION("one full level normalizes to 1") {
        for (int n : {3, 6}) {
            for (int l = 0; l <= n; ++l)
                CHECK(lubell_mass(Family(n, level_masks(n, l)), n) == Catch::Approx(1.0));
        }
    }
    SECTION("whole lattice has mass n+1") {
        const int n = 5;
        std::vector<Mask> all(1 << n);
        std::iota(all.begin(), all.end(), Mask{0});
        CHECK(lubell_mass(Family(n, all), n) == Catch::Approx(n + 1.0));
    }
    SECTION("two-element example") {
        CHECK(lubell_mass(Family(2, {0b00, 0b01}), 2) == Catch::Approx(1.5));
    }
    SECTION("antichain mass is at most 1: exhaustive n <= 5") {
        for (int n : {2, 3, 4, 5}) {
            testutil::for_each_antichain(n, [&](const std::vector<Mask>& a) {
                REQUIRE(lubell_mass(a, n) <= 1.0 + 1e-12);
            });
        }
    }
    SECTION("antichain mass is at most 1: random antichains up to n = 16") {
        auto rng = child_rng(2024, 7);
        for (int trial = 0; trial < 200; ++trial) {
            const int n = 6 + static_cast<int>(bounded_draw(rng, 11));
            std::vector<Mask> pool(1 << n);
            std::iota(pool.begin(), pool.end(), Mask{0});
            deterministic_shuffle(pool, rng);
            pool.resize(200);
            std::vector<Mask> antichain;
            for (Mask x : pool) {
                bool ok = true;
                for (Mask y : antichain)
                    if (comparable(x, y)) { ok = false; break; }
                if (ok) antichain.push_back(x);
            }
            REQUIRE(lubell_mass(antichain, n) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("comparability edge count") {
    CHECK(comparability_edge_count(1) == 1);
    CHECK(comparability_edge_count(3) == 19);
    CHECK(comparability_edge_count(10) == 58025);
    for (int n = 1; n <= 12; ++n) {
        std::uint64_t pow3 = 1;
        for (int i = 0; i < n; ++i) pow3 *= 3;
        CHECK(comparability_edge_count(n) == pow3 - (std::uint64_t{1} << n));
    }
    CHECK_THROWS_AS(comparability_edge_count(21), CapabilityError);
}

TEST_CASE("decomposition verifier") {
    SECTION("symmetric decomposition of 2^[4] passes with 6 chains") {
        auto d = symmetric_decomposition(4);
        auto rep = verify_chain_decomposition(d);
        CHECK(rep.pass());
        CHECK(rep.chain_count == 6);
    }
    SECTION("shared element fails disjointness") {
        ChainDecomposition d;
        d.n = 2;
        d.ground = Ground::full();
        d.chains = {Chain({0b00, 0b01, 0b11}), Chain({0b01, 0b10})};
        auto rep = verify_chain_decomposition(d);
        CHECK_FALSE(rep.pass());
        CHECK_FALSE(rep.disjoint);
        CHECK_FALSE(rep.chains_ok); // {01,10} is not even a chain
    }
    SECTION("missing empty set fails coverage") {
        ChainDecomposition d;
        d.n = 2;
        d.ground = Ground::full();
        d.chains = {Chain({0b01, 0b11}), Chain({0b10})};
        auto rep = verify_chain_decomposition(d);
        CHECK_FALSE(rep.pass());
        CHECK(rep.chains_ok);
        CHECK(rep.disjoint);
        CHECK_FALSE(rep.covers_ground);
    }
    SECTION("non-chain part is flagged") {
        ChainDecomposition d;
        d.n = 2;
        d.ground = Ground::full();
        d.chains = {Chain({0b00, 0b11}), Chain({0b01, 0b10})};
        auto rep = verify_chain_decomposition(d);
        CHECK_FALSE(rep.chains_ok);
        CHECK(rep.first_bad_chain == 1);
    }
}

TEST_CASE("dominance check") {
    const SizeProfile ref({5, 3, 3, 3, 1, 1});
    CHECK(dominance_check(ref, ref));
    CHECK(dominance_check(SizeProfile({4, 4, 3, 2, 2, 1}), ref));
    CHECK_FALSE(dominance_check(SizeProfile({6, 3, 3, 2, 1, 1}), ref));
    CHECK_THROWS_AS(dominance_check(SizeProfile({2, 2}), ref), DomainError);
}

TEST_CASE("uniformity stats") {
    SECTION("symmetric n = 4 at eps = 0.1 has no near-uniform chain") {
        auto d = symmetric_decomposition(4);
        auto st = uniformity_stats(d, 0.1);
        CHECK(st.mean_chain_size == Catch::Approx(16.0 / 6.0));
        CHECK(st.near_uniform_fraction == 0.0);
        CHECK(st.coverage_fraction == 0.0);
        // profile histogram: sizes {1,3,5} with counts {2,3,1}
        REQUIRE(st.histogram.size() == 3);
        CHECK(st.histogram[0] == std::pair<std::uint64_t, std::uint64_t>{1, 2});
        CHECK(st.histogram[1] == std::pair<std::uint64_t, std::uint64_t>{3, 3});
        CHECK(st.histogram[2] == std::pair<std::uint64_t, std::uint64_t>{5, 1});
    }
    SECTION("a single chain of size round(s) is fully near-uniform") {
        ChainDecomposition d;
        d.n = 2; // s = 2
        d.chains = {Chain({0b00, 0b01})};
        d.ground = Ground::explicit_family(Family(2, {0b00, 0b01}));
        auto st = uniformity_stats(d, 0.25);
        CHECK(st.near_uniform_fraction == 1.0);
        CHECK(st.coverage_fraction == 1.0);
    }
    CHECK_THROWS_AS(uniformity_stats(symmetric_decomposition(3), 0.0), DomainError);
}
