#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "chainlat/numerics.hpp"

using namespace chainlat;

TEST_CASE("exact binomial tables") {
    BigBinomialTable tab(200);
    CHECK(tab.at(200, 100) ==
          BigInt("90548514656103281165404177077484163874504589675413336841320"));
    CHECK(tab.at(10, 3) == 120);
    CHECK(std::exp(log_binomial(52, 5)) == Catch::Approx(2598960.0).epsilon(1e-9));
}

TEST_CASE("binomial estimate battery") {
    SECTION("part 1: middle binomial density at n = 10^4") {
        auto rep = binomial_estimate_check(1, {10'000});
        CHECK(rep.pass);
        CHECK(rep.max_rel_deviation < 1e-4);
    }
    SECTION("part 2: gaussian level profile within 5% at n = 10^4") {
        auto rep = binomial_estimate_check(2, {10'000});
        CHECK(rep.pass);
        CHECK(rep.max_rel_deviation < 0.05);
    }
    SECTION("part 3: tail bound exact for n <= 200") {
        std::vector<std::int64_t> grid(200);
        std::iota(grid.begin(), grid.end(), std::int64_t{1});
        auto rep = binomial_estimate_check(3, grid);
        CHECK(rep.pass);
        CHECK(rep.violations.empty());
    }
    SECTION("part 3 example: n = 100, l = 10") {
        CHECK(binomial_estimate_check(3, {100}).pass);
        BigBinomialTable tab(100);
        BigInt tail = 0;
        for (int i = 61; i <= 100; ++i) tail += tab.at(100, i);
        CHECK(BigFloat(tail) <= pow(BigFloat(2), 100) * exp(BigFloat(-2)));
    }
    SECTION("part 4: exact for even n; the lower bound fails for odd n as printed") {
        std::vector<std::int64_t> evens, odds;
        for (int n = 2; n <= 200; n += 2) evens.push_back(n);
        for (int n = 3; n <= 199; n += 2) odds.push_back(n);
        CHECK(binomial_estimate_check(4, evens).pass);
        auto odd_rep = binomial_estimate_check(4, odds);
        CHECK_FALSE(odd_rep.pass);
        REQUIRE(!odd_rep.violations.empty());
        // first counterexample: C(5,4) = 5 < 6 = C(5,3)(1 - 2/5)
        CHECK(odd_rep.violations.front() == "part4-lower: n=5 l=1");
        for (const auto& v : odd_rep.violations) CHECK(v.find("lower") != std::string::npos);
    }
    SECTION("part 5: consecutive-level gaps against the factored model") {
        auto rep = binomial_estimate_check(5, {10'000});
        CHECK(rep.pass);
        CHECK(rep.measured_lo >= 0.3);
        CHECK(rep.measured_hi <= 2.1);
        CHECK(rep.measured_lo < 0.5); // the quartic correction bites near l = 10 sqrt(n)
    }
    SECTION("part 6: tail lower bound strict at n = 10^4") {
        auto rep = binomial_estimate_check(6, {10'000});
        CHECK(rep.pass);
        CHECK(rep.measured_lo > 1.0);
    }
    CHECK_THROWS_AS(binomial_estimate_check(0, {10}), DomainError);
    CHECK_THROWS_AS(binomial_estimate_check(3, {201}), DomainError);
}

TEST_CASE("quadrature") {
    SECTION("gaussian integral against the closed form") {
        // integral_0^inf e^{-2x^2} = sqrt(pi/8)
        CHECK(gaussian_integral(0, 20) == Catch::Approx(std::sqrt(M_PI / 8)).epsilon(1e-12));
        CHECK(gaussian_integral(0.3, 1.7) ==
              Catch::Approx(std::sqrt(M_PI / 8) *
                            (std::erf(std::sqrt(2.0) * 1.7) - std::erf(std::sqrt(2.0) * 0.3)))
                  .epsilon(1e-12));
    }
    SECTION("empty range") { CHECK(gaussian_integral(1.0, 1.0) == 0.0); }
    SECTION("halving the tolerance moves the value by less than 1e-9") {
        const double a = integrate([](double x) { return std::exp(-2 * x * x); }, 0, 3.5, 1e-12);
        const double b = integrate([](double x) { return std::exp(-2 * x * x); }, 0, 3.5, 5e-13);
        CHECK(std::abs(a - b) < 1e-9);
    }
}

TEST_CASE("fixed point of the step function") {
    SECTION("left endpoint: empty integration range") {
        auto sol = solve_f(step_chain_anchor());
        CHECK(sol.value == Catch::Approx(0.0).margin(1e-12));
        CHECK(sol.residual <= 1e-10);
    }
    SECTION("table anchor r_1") {
        auto sol = solve_f(0.709375);
        CHECK(sol.residual <= 1e-10);
        CHECK(step_chain_r(0.709375) == Catch::Approx(0.4653).margin(1e-4 + 1e-12));
    }
    SECTION("monotone over a grid") {
        double prev = -1.0;
        for (int i = 0; i <= 100; ++i) {
            const double r = step_chain_anchor() + (4.0 - step_chain_anchor()) * i / 100.0;
            const auto sol = solve_f(r);
            REQUIRE(sol.value > prev);
            REQUIRE(sol.residual <= 1e-10);
            prev = sol.value;
        }
    }
    SECTION("slope stays below 0.98 (sampled finite differences)") {
        const double h = 1e-3;
        for (double r = step_chain_anchor() + h; r < 4.0 - h; r += 0.11) {
            const double slope = (solve_f(r + h).value - solve_f(r - h).value) / (2 * h);
            REQUIRE(slope < 0.98);
            REQUIRE(slope > 0.0);
        }
    }
    SECTION("domain guard") {
        CHECK_THROWS_AS(solve_f(0.5), DomainError);
        CHECK_THROWS_AS(solve_f(4.5), DomainError);
    }
}

TEST_CASE("published step table") {
    auto rep = appendix_table_check();
    SECTION("all rows reproduce to printed precision") {
        CHECK(rep.rows_ok);
        for (const auto& row : rep.rows) {
            CHECK(row.l_ok);
            CHECK(row.r_ok);
        }
        CHECK(rep.rows[0].computed_l == Catch::Approx(0.4559).margin(1e-4));
        CHECK(rep.rows[5].computed_l == Catch::Approx(0.0473).margin(1e-4));
        CHECK(rep.rows[5].computed_r == Catch::Approx(0.1052).margin(1e-4));
    }
    SECTION("all twelve chaining links hold on computed values") {
        CHECK(rep.chaining_ok);
        CHECK(rep.chain_failures.empty());
        CHECK(rep.rows[0].computed_l < step_chain_r(rep.rows[1].r));
    }
    SECTION("the damped chain holds too; its first link has almost no slack") {
        CHECK(rep.damped_chaining_ok);
        CHECK(rep.damped_chain_failures.empty());
        const double slack = 0.98 * step_chain_r(rep.rows[1].r) - rep.rows[0].computed_l;
        CHECK(slack > 0);
        CHECK(slack < 1e-4); // r_1 was evidently picked to make this tight
    }
}
