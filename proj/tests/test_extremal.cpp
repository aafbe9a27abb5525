#include <catch2/catch_amalgamated.hpp>

#include <unordered_map>

#include "chainlat/grid.hpp"
#include "chainlat/numerics.hpp"

using namespace chainlat;

namespace {

// The three order-isomorphism equivalences between a cell and its grid, over
// every pair of cell elements.
void check_cell_isomorphism(const GridPartition& gp, std::uint64_t cell) {
    const Grid g = gp.cell_grid(cell);
    const auto masks = gp.cell_masks(cell);
    std::unordered_map<Mask, Grid::Point> point_of;
    for (Grid::Point p = 0; p < masks.size(); ++p) point_of.emplace(masks[p], p);
    for (Grid::Point a = 0; a < masks.size(); ++a) {
        for (Grid::Point b = 0; b < masks.size(); ++b) {
            REQUIRE(subset_of(masks[a], masks[b]) == g.leq(a, b));
            // joins and meets stay inside the cell (factors are chains), and
            // they commute with the mask operations
            const auto ji = point_of.find(masks[a] | masks[b]);
            REQUIRE(ji != point_of.end());
            REQUIRE(ji->second == g.join(a, b));
            const auto mi = point_of.find(masks[a] & masks[b]);
            REQUIRE(mi != point_of.end());
            REQUIRE(mi->second == g.meet(a, b));
        }
    }
}

} // namespace

TEST_CASE("containment search") {
    BooleanLatticeAmbient amb(4);
    SECTION("comparable pair on comparable sets") {
        std::vector<Mask> h = {0b0001, 0b0011};
        std::vector<Mask> witness;
        CHECK(contains_configuration(h, comparable_pair_configuration(), amb, &witness));
        REQUIRE(witness.size() == 2);
        CHECK(subset_of(witness[0], witness[1]));
    }
    SECTION("comparable pair needs distinct sets") {
        std::vector<Mask> h = {0b0101};
        CHECK_FALSE(contains_configuration(h, comparable_pair_configuration(), amb));
    }
    SECTION("corner over the [2]x[2] grid") {
        Grid g({2, 2});
        // points (1,2),(2,1),(2,2) in 1-based coordinates: indices 2, 1, 3
        std::vector<Grid::Point> h = {2, 1, 3};
        std::vector<Grid::Point> witness;
        REQUIRE(contains_configuration(h, corner_configuration(), g, &witness));
        CHECK(witness[2] == 3); // z = x u y is the top corner
        std::vector<Grid::Point> no = {0, 1, 3};
        CHECK_FALSE(contains_configuration(no, corner_configuration(), g));
    }
    SECTION("a chain never contains a two-dimensional algebra") {
        std::vector<Mask> h = {0b0000, 0b0001, 0b0011, 0b0111, 0b1111};
        CHECK_FALSE(contains_configuration(h, boolean_algebra_configuration(2), amb));
        // while an incomparable pair with its meet and join does
        std::vector<Mask> yes = {0b0011, 0b0101, 0b0001, 0b0111};
        CHECK(contains_configuration(yes, boolean_algebra_configuration(2), amb));
    }
    SECTION("variable guard") {
        AffineConfiguration big;
        big.num_vars = 7;
        big.statements.push_back({AffineFormula::var(0), AffineFormula::var(6), false});
        big.body = BoolExpr::leaf(0);
        std::vector<Mask> h = {0, 1};
        CHECK_THROWS_AS(contains_configuration(h, big, amb), CapabilityError);
    }
}

TEST_CASE("exact avoiding-family oracle") {
    const auto corner = corner_configuration();
    const auto comp = comparable_pair_configuration();

    SECTION("one-dimensional grids admit a single comparable-free point") {
        for (int k = 1; k <= 10; ++k) CHECK(ex_oracle(Grid({k}), comp) == 1);
    }
    SECTION("ex(2,2,corner) = 3, cross-checked by full enumeration") {
        Grid g({2, 2});
        CHECK(ex_oracle(g, corner) == 3);
        std::size_t best = 0;
        for (unsigned sub = 0; sub < 16; ++sub) {
            std::vector<Grid::Point> h;
            for (unsigned i = 0; i < 4; ++i)
                if (sub & (1u << i)) h.push_back(i);
            if (!contains_configuration(h, corner, g)) best = std::max(best, h.size());
        }
        CHECK(best == 3);
    }
    SECTION("corner values for k = 2..5 stay under the deletion bound 2k") {
        const std::uint64_t expected[] = {3, 5, 7, 9};
        for (int k = 2; k <= 5; ++k) {
            Grid g({k, k});
            const auto v = ex_oracle(g, corner);
            CHECK(v == expected[k - 2]);
            CHECK(v <= corner_deletion_bound(g));
            CHECK(corner_deletion_bound(g) == 2 * static_cast<std::uint64_t>(k));
        }
    }
    SECTION("the witness avoids the configuration and matches the size") {
        Grid g({4, 4});
        auto [size, witness] = ex_oracle_with_witness(g, corner);
        CHECK(witness.size() == size);
        CHECK_FALSE(contains_configuration(witness, corner, g));
    }
    SECTION("the middle binomial is recovered over 2^[5]") {
        CHECK(ex_oracle(BooleanLatticeAmbient(5), comp) == binomial(5, 2));
    }
    SECTION("ambient size guard") {
        CHECK_THROWS_AS(ex_oracle(Grid({6, 7}), corner), CapabilityError);
    }
}

TEST_CASE("subgrid sampling inequality") {
    const auto corner = corner_configuration();
    SECTION("[3]^2 against k = 2, with the Monte Carlo mean check") {
        auto rep = subgrid_sampling_check(Grid({3, 3}), corner, 2, 4000, 11);
        CHECK(rep.ex_full == 5);
        CHECK(rep.ex_small == 3);
        CHECK(rep.ratio_holds); // 5/9 <= 3/4
        CHECK(rep.mean_within_3se);
        CHECK(rep.expected_hits == Catch::Approx(5.0 * 4.0 / 9.0));
    }
    SECTION("k equal to the axes makes the subgrid the full grid") {
        auto rep = subgrid_sampling_check(Grid({3, 3}), corner, 3, 50, 1);
        CHECK(rep.mean_hits == Catch::Approx(rep.expected_hits));
        CHECK(rep.standard_error == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("ratio inequality exactly on a spread of grids, both configurations") {
        const auto comp = comparable_pair_configuration();
        const std::vector<std::vector<int>> grids = {
            {2, 8}, {3, 5}, {4, 6}, {2, 2, 5}, {3, 3, 3}};
        for (const auto& dims : grids) {
            Grid g(dims);
            const int kmax = *std::min_element(dims.begin(), dims.end());
            for (int k = 1; k <= kmax; ++k) {
                for (const auto& cfg : {corner, comp}) {
                    auto rep = subgrid_sampling_check(g, cfg, k, 10, 2);
                    REQUIRE(rep.ratio_holds);
                }
            }
        }
    }
}

TEST_CASE("grid partitions of the lattice") {
    SECTION("n = 8, d = 2 symmetric factors: 36 cells partitioning 2^[8]") {
        auto gp = grid_partition(8, 2, FactorMethod::Symmetric, 0);
        CHECK(gp.cell_count() == 36);
        std::vector<Mask> seen;
        for (std::uint64_t cell = 0; cell < gp.cell_count(); ++cell) {
            auto masks = gp.cell_masks(cell);
            seen.insert(seen.end(), masks.begin(), masks.end());
        }
        std::sort(seen.begin(), seen.end());
        REQUIRE(seen.size() == 256);
        for (std::size_t i = 0; i < seen.size(); ++i) REQUIRE(seen[i] == i);
    }
    SECTION("phi isomorphism, exhaustive for n <= 10 at d = 2") {
        for (int n : {4, 6, 8, 10}) {
            auto gp = grid_partition(n, 2, FactorMethod::Symmetric, 0);
            for (std::uint64_t cell = 0; cell < gp.cell_count(); ++cell)
                check_cell_isomorphism(gp, cell);
        }
    }
    SECTION("d = 1 cells are exactly the factor chains when nothing splits") {
        auto gp = grid_partition(4, 1, FactorMethod::Symmetric, 0);
        auto direct = symmetric_decomposition(4);
        REQUIRE(gp.cell_count() == direct.chain_count());
        for (std::uint64_t cell = 0; cell < gp.cell_count(); ++cell)
            CHECK(gp.cell_masks(cell) == direct.chains[cell].elems);
    }
    SECTION("d = 1 long chains are cut at the size threshold") {
        // n = 6: the size-7 symmetric chain exceeds s(1 + n^(-1/20)) ~ 6.13
        // and is cut into pieces of size round(s) = 3
        auto gp = grid_partition(6, 1, FactorMethod::Symmetric, 0);
        CHECK(gp.cell_count() == 22); // 20 chains + 2 extra pieces
        std::vector<Mask> seen;
        for (std::uint64_t cell = 0; cell < gp.cell_count(); ++cell) {
            auto masks = gp.cell_masks(cell);
            CHECK(masks.size() <= 5); // the unsplit size-5 chains stay whole
            CHECK(Chain(masks).valid(6));
            seen.insert(seen.end(), masks.begin(), masks.end());
        }
        std::sort(seen.begin(), seen.end());
        REQUIRE(seen.size() == 64);
        for (std::size_t i = 0; i < seen.size(); ++i) REQUIRE(seen[i] == i);
    }
    SECTION("uniform factors partition as well") {
        auto gp = grid_partition(14, 2, FactorMethod::Uniform, 5);
        std::uint64_t covered = 0;
        for (std::uint64_t cell = 0; cell < gp.cell_count(); ++cell)
            covered += gp.cell_masks(cell).size();
        CHECK(covered == (std::uint64_t{1} << 14));
        for (std::uint64_t cell = 0; cell < std::min<std::uint64_t>(gp.cell_count(), 40); ++cell)
            check_cell_isomorphism(gp, cell);
    }
    SECTION("range guards") {
        CHECK_THROWS_AS(grid_partition(5, 3, FactorMethod::Symmetric, 0), CapabilityError);
        CHECK_THROWS_AS(grid_partition(10, 4, FactorMethod::Symmetric, 0), CapabilityError);
    }
}

TEST_CASE("per-cell caps aggregate to lattice bounds") {
    const auto comp = comparable_pair_configuration();
    SECTION("comparable pairs: cells cap the largest antichain, tight for symmetric factors") {
        for (int n : {4, 6, 8, 10}) {
            auto gp = grid_partition(n, 2, FactorMethod::Symmetric, 0);
            std::uint64_t sum = 0;
            for (std::uint64_t cell = 0; cell < gp.cell_count(); ++cell) {
                const Grid g = gp.cell_grid(cell);
                const auto cap =
                    g.size() <= 36
                        ? ex_oracle(g, comp)
                        : std::min<std::uint64_t>(g.dims[0], g.dims[1]);
                // a cell is a product of two chains: its largest antichain is
                // the staircase across the shorter side
                CHECK(cap == std::min<std::uint64_t>(g.dims[0], g.dims[1]));
                sum += cap;
            }
            CHECK(sum == binomial(n, n / 2)); // tight at this factor choice
        }
    }
    SECTION("corner: summed cell caps bound the exact lattice value, n <= 5") {
        const auto corner = corner_configuration();
        for (int n : {4, 5}) {
            const auto exact = ex_oracle(BooleanLatticeAmbient(n), corner);
            auto gp = grid_partition(n, 2, FactorMethod::Symmetric, 0);
            std::uint64_t sum = 0;
            for (std::uint64_t cell = 0; cell < gp.cell_count(); ++cell)
                sum += ex_oracle(gp.cell_grid(cell), corner);
            CHECK(exact <= sum);
        }
    }
}

TEST_CASE("density bound formulas") {
    SECTION("comparable pairs at d = 1 recover the middle-binomial asymptote") {
        const int n = 1000;
        const double bound = theorem_grid_bound(n, 1, 1.0, 1.0);
        CHECK(bound == Catch::Approx(std::sqrt(2.0 / (M_PI * n)) * std::ldexp(1.0, n)));
    }
    SECTION("union-free at d = 2 carries the 2 sqrt(2) coefficient") {
        const int n = 64;
        const double bound = theorem_grid_bound(n, 2, 2.0, 1.0);
        const double middle = std::exp(log_binomial(n, n / 2));
        CHECK(bound / middle == Catch::Approx(2.0 * std::sqrt(2.0)).epsilon(0.02));
    }
    SECTION("two-dimensional algebras: plain and refined coefficients") {
        const int n = 100;
        CHECK(theorem_grid_bound(n, 2, 1.0, 0.5) ==
              Catch::Approx(std::pow(4.0 / (M_PI * n), 0.25) * std::ldexp(1.0, n)));
        CHECK(boolean_algebra_refined_bound(n) ==
              Catch::Approx(std::pow(2.0 / (M_PI * n), 0.25) * std::ldexp(1.0, n)));
        CHECK(boolean_algebra_refined_bound(n) < theorem_grid_bound(n, 2, 1.0, 0.5));
    }
    CHECK_THROWS_AS(theorem_grid_bound(10, 1, 1.0, 2.0), DomainError);
}

TEST_CASE("configuration catalog") {
    SECTION("a two-chain poset gives the comparable-pair configuration") {
        Poset p;
        p.size = 2;
        p.less[0][1] = true;
        p.close();
        auto cfg = weak_poset_configuration(p);
        BooleanLatticeAmbient amb(3);
        std::vector<Mask> chain = {0b001, 0b011};
        std::vector<Mask> anti = {0b001, 0b010};
        CHECK(contains_configuration(chain, cfg, amb));
        CHECK_FALSE(contains_configuration(anti, cfg, amb));
    }
    SECTION("induced two-antichain forbids exactly incomparable pairs") {
        Poset p;
        p.size = 2;
        p.close();
        auto cfg = induced_poset_configuration(p);
        BooleanLatticeAmbient amb(3);
        std::vector<Mask> chain = {0b001, 0b011};
        std::vector<Mask> anti = {0b001, 0b010};
        CHECK_FALSE(contains_configuration(chain, cfg, amb));
        CHECK(contains_configuration(anti, cfg, amb));
    }
    SECTION("two-dimensional algebras over grids are exactly the rectangles") {
        const auto cfg = boolean_algebra_configuration(2);
        Grid g({3, 3});
        for (unsigned sub = 0; sub < (1u << 9); ++sub) {
            std::vector<Grid::Point> h;
            for (unsigned i = 0; i < 9; ++i)
                if (sub & (1u << i)) h.push_back(i);
            bool rect = false;
            for (int a = 0; a < 3 && !rect; ++a)
                for (int a2 = a + 1; a2 < 3 && !rect; ++a2)
                    for (int b = 0; b < 3 && !rect; ++b)
                        for (int b2 = b + 1; b2 < 3 && !rect; ++b2)
                            rect = (sub & (1u << (a + 3 * b))) && (sub & (1u << (a2 + 3 * b))) &&
                                   (sub & (1u << (a + 3 * b2))) && (sub & (1u << (a2 + 3 * b2)));
            REQUIRE(contains_configuration(h, cfg, g) == rect);
        }
    }
    SECTION("cycles are rejected") {
        Poset p;
        p.size = 2;
        p.less[0][1] = p.less[1][0] = true;
        CHECK_THROWS_AS(p.close(), DomainError);
    }
}
