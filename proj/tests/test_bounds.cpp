#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "race/bounds.hpp"
#include "race/config_algebra.hpp"
#include "race/dynamics.hpp"
#include "race/errors.hpp"
#include "race/lp_opt.hpp"

#include <cmath>

using namespace race;

TEST_CASE("the upper-bound test function f") {
    for (int n : {4, 5, 9, 16}) {
        TestFunction f = upper_test_function(n);
        CHECK(f(-1) == Rat(0));
        CHECK(f(n - 1) == Rat(0));
        CHECK(f(1) == Rat(1));  // (x+1)/2 - (x^2-1)/(2(N-2)) at x = 1
        REQUIRE(f.quad_params());
        CHECK(f.quad_params()->first == Rat(-1, 2ll * (n - 2)));
        CHECK(f.quad_params()->second == Rat(1, 2));
    }
}

TEST_CASE("appendix closed forms equal the drift functional exactly, N = 5..30") {
    auto config_for = [](const std::string& tag, int n) -> Configuration {
        for (const auto& [t, c] : worst_case_candidates(n))
            if (t == tag) return c;
        throw std::logic_error("missing candidate " + tag);
    };
    for (int n = 5; n <= 30; ++n) {
        for (const auto& [tag, closed] : appendix_a_table(n)) {
            const Configuration c = config_for(tag, n);
            const std::string note = "case " + tag + " at N=" + std::to_string(n);
            CHECK_MESSAGE(s_alpha(c) == closed, note);
        }
    }
}

TEST_CASE("finite upper bound: candidate max equals full-enumeration max") {
    for (int n = 5; n <= 12; ++n) {
        const BoundReport r = finite_upper_bound(n);
        CHECK(*r.exact == exhaustive_upper_bound(n));
    }
}

TEST_CASE("finite upper bound witnesses and pinned values") {
    // N=5: the worst candidates tie at S = -2/5, bound 1.4
    CHECK(*finite_upper_bound(5).exact == Rat(7, 5));
    CHECK(*finite_upper_bound(7).exact == Rat(1) + Rat(12, 35));
    CHECK(*finite_upper_bound(9).exact == Rat(1) + Rat(9, 28));
    // the three-equal-levels witness for N divisible by 3 (N >= 9)
    CHECK(finite_upper_bound(9).witness == "(3,3,3)");
    CHECK(finite_upper_bound(12).witness == "(4,4,4)");
    CHECK_THROWS_AS(finite_upper_bound(4), contract_error);
}

TEST_CASE("the printed mod-3 bound disagrees with the candidate max at N=6 and N=8") {
    // the balanced two-level candidate dips below the three-level family
    // there: S((3,3)) = -3/8 < -11/30 and S((4,4)) = -1/3 < -2997/9072
    CHECK(remark_upper_bound(6) == Rat(41, 30));
    CHECK(*finite_upper_bound(6).exact == Rat(11, 8));
    CHECK(finite_upper_bound(6).witness == "(3,3)");
    CHECK(remark_upper_bound(8) == Rat(1) + Rat(2997, 9072));
    CHECK(*finite_upper_bound(8).exact == Rat(4, 3));
    for (int n : {5, 7, 9, 10, 11, 12, 13, 14, 15, 16}) {
        CHECK(*finite_upper_bound(n).exact == remark_upper_bound(n));
    }
}

TEST_CASE("asymptotic level scan and the 34/27 bound") {
    auto scan = asymptotic_level_scan();
    CHECK(scan[0].second == Rat(0));        // one level
    CHECK(scan[1].second == Rat(-1, 4));    // S(2)
    CHECK(scan[2].second == Rat(-7, 27));   // S(3)
    CHECK(scan[3].second == Rat(-1, 4));    // S(4)
    const BoundReport r = asymptotic_upper();
    CHECK(*r.exact == Rat(34, 27));
    CHECK(r.witness.find("k = 3") != std::string::npos);
}

TEST_CASE("finite bounds approach 34/27 from above") {
    double prev_gap = 1.0;
    for (int n : {10, 20, 40, 100}) {
        const double gap = finite_upper_bound(n).value - 34.0 / 27.0;
        CHECK(gap > 0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 0.02);  // N = 100
}

TEST_CASE("lower-bound scenario functionals") {
    CHECK(lower_scenario_singletons(0.5) == doctest::Approx(7.0 / 6.0).epsilon(1e-15));
    const double b_star = 1.0 / 3.0 + std::sqrt(3.0) / 18.0;
    CHECK(lower_scenario_singletons(b_star) ==
          doctest::Approx(1.0 + std::sqrt(3.0) / 18.0).epsilon(1e-12));

    // H(B, z) = G(B, 0, z)
    for (double b : {3.0 / 7.0, 0.45, 0.5}) {
        for (double z = 1.0 - b; z <= 1.0; z += 0.05) {
            CHECK(lower_scenario_large_level(b, 0.0, z) ==
                  doctest::Approx(lower_scenario_no_singletons(b, z)).epsilon(1e-12));
        }
    }

    // dG/dy = 3y^2 + y(6z - 4B) + 3z^2 - 4Bz, checked by finite differences
    // at the edge B = 3/7 where it stays non-negative
    const double b = 3.0 / 7.0;
    for (double z = 1.0 - b + 0.01; z < 0.99; z += 0.07) {
        for (double y = 0.01; y + z < 0.99; y += 0.07) {
            const double eps = 1e-6;
            const double fd = (lower_scenario_large_level(b, y + eps, z) -
                               lower_scenario_large_level(b, y - eps, z)) /
                              (2 * eps);
            const double formula = 3 * y * y + y * (6 * z - 4 * b) + 3 * z * z - 4 * b * z;
            CHECK(fd == doctest::Approx(formula).epsilon(1e-6));
            CHECK(formula >= -1e-12);
        }
    }
    CHECK_THROWS_AS(lower_scenario_large_level(0.2, 0.0, 0.9), contract_error);
    CHECK_THROWS_AS(lower_scenario_large_level(0.45, -0.1, 0.6), contract_error);
}

TEST_CASE("singleton drift sum converges to its closed-form limit") {
    // sum g(k) E[dX_k] over the all-singleton configuration tends to 1/3 - B
    for (double bval : {0.45, 0.5}) {
        const long n = 10000;
        const Rat b(static_cast<long long>(bval * 100), 100);
        const Rat a = Rat(-1, 2 * (n - 2));
        long double acc = 0;
        for (long k = 1; k <= n - 2; ++k) {
            const long double g =
                a.to_double() * (double(k) * k - 1) + b.to_double() * (k + 1);
            acc += g * (-2.0L / (double(n) * (n - 1)));
        }
        CHECK(std::abs(double(acc) - (1.0 / 3.0 - bval)) < 0.01);
    }
}

TEST_CASE("H minimizer and envelope stationarity") {
    const double b_star = 1.0 / 3.0 + std::sqrt(3.0) / 18.0;
    // dH/dz = 2z(1-3B) + z^2 vanishes at z = 2(3B-1)
    for (double b : {3.0 / 7.0 + 1e-3, b_star, 0.49}) {
        const double z = 2 * (3 * b - 1);
        CHECK(2 * z * (1 - 3 * b) + z * z == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(z >= 1 - b - 1e-9);
        CHECK(z <= 1.0 + 1e-9);
        CHECK(lower_scenario_no_singletons(b, z) ==
              doctest::Approx(lower_envelope_closed_form(b)).epsilon(1e-12));
    }
    // d/dB [2/3 + B - (4/3)(3B-1)^3] = 1 - 12(3B-1)^2 = 0 at B*
    const double deriv = 1 - 12 * std::pow(3 * b_star - 1, 2);
    CHECK(std::abs(deriv) < 1e-12);
    // and the envelope value there is the certified constant itself
    CHECK(lower_envelope_closed_form(b_star) ==
          doctest::Approx(1.0 + std::sqrt(3.0) / 27.0).epsilon(1e-14));
}

TEST_CASE("grid optimizer matches the analytic lower bound") {
    const LowerOptimum opt = lower_bound_optimize(2000);
    CHECK(opt.analytic_value == doctest::Approx(1.0641500).epsilon(1e-6));
    CHECK(std::abs(opt.grid_value - opt.analytic_value) < 1e-9);
    CHECK(std::abs(opt.grid_b - opt.analytic_b) < 1e-6);
    CHECK(opt.analytic_b == doctest::Approx(0.42955838).epsilon(1e-6));
    CHECK_THROWS_AS(lower_bound_optimize(10), contract_error);
}

TEST_CASE("soundness sandwich against short simulations") {
    const double lower = 1.0 + std::sqrt(3.0) / 27.0;
    for (int n = 5; n <= 16; ++n) {
        const SpeedEstimate est = simulate_speed(n, 400'000, default_burn_in(n), 3);
        CHECK(finite_upper_bound(n).value >= est.mean - 3 * est.std_error);
        CHECK(lower <= est.mean + 3 * est.std_error);
    }
}
