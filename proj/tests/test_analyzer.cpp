#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "advbound/analyzer.hpp"

using namespace advbound;

TEST_CASE("query exponents match the closed form for every k up to 10") {
    const Rat expected[] = {Rat(2, 3),     Rat(5, 7),     Rat(11, 15),
                            Rat(23, 31),   Rat(47, 63),   Rat(95, 127),
                            Rat(191, 255), Rat(383, 511), Rat(767, 1023)};
    for (int k = 2; k <= 10; ++k) {
        KDistPlan plan = kdist_plan(k);
        CHECK(plan.k == k);
        CHECK(plan.exponent == expected[k - 2]);
        CHECK(plan.johnson_exponent == Rat(k, k + 1));
    }
}

TEST_CASE("exponents stay below 3/4, increase with k, and beat the baseline") {
    Rat prev{0};
    for (int k = 2; k <= 12; ++k) {
        KDistPlan plan = kdist_plan(k);
        CHECK(plan.exponent < Rat(3, 4));
        CHECK(plan.exponent > prev);
        if (k == 2)
            CHECK(plan.exponent == plan.johnson_exponent);
        else
            CHECK(plan.exponent < plan.johnson_exponent);
        prev = plan.exponent;
    }
}

TEST_CASE("the balanced profile equalizes every loading stage and the last uncover") {
    for (int k = 2; k <= 10; ++k) {
        KDistPlan plan = kdist_plan(k);
        REQUIRE(plan.stage.size() == static_cast<std::size_t>(2 * k - 1));
        REQUIRE(plan.rho.size() == static_cast<std::size_t>(k - 1));

        CHECK(plan.rho[0] == plan.exponent);
        for (int i = 1; i < k - 1; ++i)
            CHECK(plan.rho[i] == (Rat(1) + plan.rho[i - 1]) / Rat(2));

        for (int s = 1; s <= k - 1; ++s) {
            CHECK(plan.stage[s - 1] == "I." + std::to_string(s));
            CHECK(plan.stage_exponent[s - 1] == plan.exponent);
        }
        for (int s = 1; s <= k; ++s) {
            CHECK(plan.stage[k - 1 + s - 1] == "II." + std::to_string(s));
            if (s < k)
                CHECK(plan.stage_exponent[k - 1 + s - 1] < plan.exponent);
            else
                CHECK(plan.stage_exponent[k - 1 + s - 1] == plan.exponent);
        }
    }
}

TEST_CASE("k = 3 stage exponents are frozen") {
    KDistPlan plan = kdist_plan(3);
    REQUIRE(plan.stage_exponent.size() == 5);
    CHECK(plan.stage_exponent[0] == Rat(5, 7));   // I.1
    CHECK(plan.stage_exponent[1] == Rat(5, 7));   // I.2
    CHECK(plan.stage_exponent[2] == Rat(1, 2));   // II.1
    CHECK(plan.stage_exponent[3] == Rat(9, 14));  // II.2
    CHECK(plan.stage_exponent[4] == Rat(5, 7));   // II.3
    CHECK(plan.rho[1] == Rat(6, 7));
}

TEST_CASE("numeric stage costs balance at the profile sizes") {
    SUBCASE("k = 2, n = 1e6") {
        StageCosts costs = stage_costs(2, 1e6, {10000});
        REQUIRE(costs.stage.size() == 3);
        CHECK(costs.cost[0] == doctest::Approx(10000));  // I.1 = r
        CHECK(costs.cost[1] == doctest::Approx(1000));   // II.1 = sqrt(n)
        CHECK(costs.cost[2] == doctest::Approx(10000));  // II.2 = n/sqrt(r)
        CHECK(costs.total == doctest::Approx(21000));
        CHECK((costs.binding == 0 || costs.binding == 2));
    }
    SUBCASE("k = 3, n = 1e6 at the rounded profile") {
        std::vector<long long> sizes = sizes_from_profile(3, 1e6);
        StageCosts costs = stage_costs(
            3, 1e6, {static_cast<double>(sizes[0]), static_cast<double>(sizes[1])});
        REQUIRE(costs.stage.size() == 5);
        double target = std::pow(1e6, 5.0 / 7.0);
        double peak = costs.cost[costs.binding];
        CHECK(peak == doctest::Approx(target).epsilon(0.01));
        // Both loading stages and the last uncover sit at the peak.
        CHECK(costs.cost[0] == doctest::Approx(peak).epsilon(0.01));
        CHECK(costs.cost[1] == doctest::Approx(peak).epsilon(0.01));
        CHECK(costs.cost[4] == doctest::Approx(peak).epsilon(0.01));
        // The intermediate uncover stages are strictly dominated.
        CHECK(costs.cost[2] < 0.9 * peak);
        CHECK(costs.cost[3] < 0.9 * peak);
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(stage_costs(1, 100, {}), std::invalid_argument);
        CHECK_THROWS_AS(stage_costs(3, 100, {5}), std::invalid_argument);
        CHECK_THROWS_AS(stage_costs(2, -1, {5}), std::invalid_argument);
        CHECK_THROWS_AS(stage_costs(2, 100, {0}), std::invalid_argument);
    }
}

TEST_CASE("profile sizes round up from the exact exponents") {
    CHECK(sizes_from_profile(2, 1e6) == std::vector<long long>{10000});
    CHECK(sizes_from_profile(3, 1e6) == std::vector<long long>{19307, 138950});
}

TEST_CASE("graph collision plan picks the cube-root subset size") {
    GcPlan plan = gc_plan(1024, 64);
    CHECK(plan.r == 256);
    CHECK(plan.predicted == doctest::Approx(96.0));
    CHECK(plan.w0 == doctest::Approx(0.25));
    CHECK(plan.w1 == doctest::Approx(4.0));
    CHECK(plan.wII1 == doctest::Approx(0.03125));
    CHECK(plan.wII2 == doctest::Approx(0.015625));

    // Clamping keeps the subset inside the vertex set.
    CHECK(gc_plan(5, 1).r == 3);
    CHECK(gc_plan(1000, 1000).r == 100);
    CHECK_THROWS_AS(gc_plan(2, 1), std::invalid_argument);
    CHECK_THROWS_AS(gc_plan(10, 11), std::invalid_argument);
}

TEST_CASE("the exponent table serializes every row") {
    std::vector<ExponentRow> rows = exponent_table(5);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].k == 2);
    CHECK(rows[3].exponent == Rat(23, 31));
    std::string csv = exponent_table_csv(rows);
    CHECK(csv.find("2,2/3,") != std::string::npos);
    CHECK(csv.find("5,23/31,") != std::string::npos);

    nlohmann::json j = kdist_plan(3).to_json();
    CHECK(j["exponent"]["num"] == 5);
    CHECK(j["exponent"]["den"] == 7);
    CHECK(j["stages"].size() == 5);
}
