#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "race/dynamics.hpp"
#include "race/errors.hpp"
#include "race/exact_small.hpp"
#include "race/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

using namespace race;

TEST_CASE("closed-form N=3 stationary law") {
    const StationaryN3 s = solve_n3();
    CHECK(s.pi0 == Rat(1, 4));
    CHECK(s.speed == Rat(3, 2));
    CHECK(s.tail_rate == Rat(1, 2));

    // masses sum to one over the truncated window plus the geometric tail
    Rat total = n3_stationary_mass(0);
    for (int k = 1; k <= 60; ++k) total += n3_stationary_mass(k);
    // remaining tail is 3/2^{62}; the partial sums stay below 1
    CHECK(total < Rat(1));
    CHECK(Rat(1) - total == Rat(3, 1ll << 62));

    // speed identity 2 pi0 + (4/3)(1 - pi0)
    CHECK(Rat(2) * s.pi0 + Rat(4, 3) * (Rat(1) - s.pi0) == s.speed);
}

TEST_CASE("N=3 balance residuals vanish exactly") {
    for (int k = 0; k <= 12; ++k) CHECK(n3_balance_residual(k) == Rat(0));
    CHECK(n3_balance_residual(5) == Rat(0));
}

TEST_CASE("N=4 kernel agrees with the one-step oracle on a box") {
    for (int k = 0; k <= 5; ++k) {
        for (int l = 0; l <= 5; ++l) {
            std::map<std::pair<int, int>, Rat> from_kernel;
            for (const auto& [s, p] : n4_kernel(k, l)) from_kernel[s] += p;
            std::map<std::pair<int, int>, Rat> from_oracle;
            for (const auto& [y, p] : one_step_distribution(GapState{{k, l}}))
                from_oracle[{y.gaps[0], y.gaps[1]}] += p;
            CHECK(from_kernel == from_oracle);
        }
    }
}

TEST_CASE("truncated N=4 solve reproduces the known speed") {
    const StationaryN4 s = solve_n4(200, 1e-12);
    CHECK(s.speed > 1.3938);
    CHECK(s.speed < 1.3978);
    CHECK(s.speed == doctest::Approx(1.3958).epsilon(0.002));

    // V(4) = 10/7 - (2/7) Pi0
    CHECK(std::abs(s.speed - (10.0 / 7.0 - 2.0 / 7.0 * s.regions[0])) < 1e-9);

    CHECK(s.balance1 < 1e-9);
    CHECK(s.balance2 < 1e-9);

    double region_sum = 0;
    for (double r : s.regions) region_sum += r;
    CHECK(std::abs(region_sum - 1.0) < 1e-12);

    auto [lo, hi] = n4_bounds();
    CHECK(lo.to_double() <= s.speed);
    CHECK(s.speed <= hi.to_double());
}

TEST_CASE("truncation is stable in L") {
    const StationaryN4 a = solve_n4(100, 1e-12);
    const StationaryN4 b = solve_n4(200, 1e-12);
    CHECK(std::abs(a.speed - b.speed) < 1e-11);
}

TEST_CASE("N=4 bounds and their consistency") {
    auto [lo, hi] = n4_bounds();
    CHECK(lo == Rat(26, 19));
    CHECK(hi == Rat(10, 7));
    CHECK(Rat(8, 7) < lo);                       // improves the trivial bound
    CHECK(hi == Rat(10, 7) - Rat(2, 7) * Rat(0));  // upper = identity at Pi0 = 0
}

TEST_CASE("solver contract errors") {
    CHECK_THROWS_AS(solve_n4(5, 1e-12), contract_error);
    CHECK_THROWS_AS(solve_n4(100, -1.0), contract_error);
}

TEST_CASE("simulated region occupancies match the solved stationary masses") {
    const StationaryN4 solved = solve_n4(150, 1e-12);
    // walk the N=4 gap chain directly and tally the four boundary regions
    SplitMix64 rng(SplitMix64::derive_stream(2718, 0));
    long long counts[4] = {0, 0, 0, 0};
    long long lv[4] = {0, 0, 0, 0};
    const long long steps = 4'000'000;
    for (long long s = -20'000; s < steps; ++s) {
        const auto [i, j] = pair_from_index(rng.next_below(6), 4);
        if (lv[i] == lv[j]) {
            ++lv[i];
            ++lv[j];
        } else if (lv[i] < lv[j]) {
            ++lv[i];
        } else {
            ++lv[j];
        }
        if (s < 0) continue;  // burn-in
        long long ord[4] = {lv[0], lv[1], lv[2], lv[3]};
        std::sort(ord, ord + 4, std::greater<>());
        const bool k_pos = ord[1] > ord[2];
        const bool l_pos = ord[2] > ord[3];
        counts[k_pos ? (l_pos ? 3 : 1) : (l_pos ? 2 : 0)] += 1;
    }
    for (int r = 0; r < 4; ++r) {
        const double freq = double(counts[r]) / double(steps);
        CHECK(std::abs(freq - solved.regions[r]) < 0.003);
    }
}
