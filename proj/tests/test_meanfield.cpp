#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "race/dynamics.hpp"
#include "race/errors.hpp"
#include "race/meanfield.hpp"

#include <cmath>
#include <vector>

using namespace race;

namespace {

// phi_2(t) = int_0^t phi_1(s)^2 exp(-[(t-s) + e^{-t} - e^{-s}]) ds with
// phi_1(s) = 1 - e^{-s}; composite Simpson, independent of the integrator.
double phi2_quadrature(double t, int intervals = 4096) {
    auto f = [t](double s) {
        const double p1 = 1.0 - std::exp(-s);
        return p1 * p1 * std::exp(-((t - s) + std::exp(-t) - std::exp(-s)));
    };
    const double h = t / intervals;
    double acc = f(0.0) + f(t);
    for (int i = 1; i < intervals; ++i) acc += f(i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// phi_3(t) by the same recursion over the phi_2 oracle: tabulate phi_2 on a
// grid, build its cumulative integral, then apply the outer Simpson rule.
double phi3_quadrature(double t) {
    const int m = 4096;  // divisible by 4
    const double h = t / m;
    std::vector<double> p2(m + 1);
    for (int i = 0; i <= m; ++i) p2[i] = phi2_quadrature(i * h, 512);
    std::vector<double> cum(m / 2 + 1, 0.0);  // integral of phi_2 up to even nodes
    for (int j = 1; j <= m / 2; ++j)
        cum[j] = cum[j - 1] + h / 3.0 * (p2[2 * j - 2] + 4.0 * p2[2 * j - 1] + p2[2 * j]);
    const double total = cum[m / 2];
    auto g = [&](int j) {  // outer integrand at even node 2j
        return p2[2 * j] * p2[2 * j] * std::exp(-(total - cum[j]));
    };
    double acc = g(0) + g(m / 2);
    for (int j = 1; j < m / 2; ++j) acc += g(j) * (j % 2 ? 4.0 : 2.0);
    return acc * (2.0 * h) / 3.0;
}

}  // namespace

TEST_CASE("phi_1 matches 1 - e^{-t} to 1e-8 on [0, 10] at dt = 1e-3") {
    const MeanFieldState st = integrate(20, 10.0, 1e-3);
    for (double t = 0.0; t <= 10.0; t += 0.1) {
        CHECK(std::abs(st.phi_at(1, t) - (1.0 - std::exp(-t))) < 1e-8);
    }
    for (int k = 1; k <= 20; ++k) CHECK(st.phi[k].front() == 0.0);
}

TEST_CASE("phi_2 and phi_3 match the recursive quadrature oracle") {
    const MeanFieldState st = integrate(12, 8.0, 1e-3);
    for (double t : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        CHECK(std::abs(st.phi_at(2, t) - phi2_quadrature(t)) < 1e-6);
    }
    for (double t : {1.0, 3.0, 6.0}) {
        CHECK(std::abs(st.phi_at(3, t) - phi3_quadrature(t)) < 1e-5);
    }
}

TEST_CASE("level ordering and unit-interval bounds hold on the whole grid") {
    const MeanFieldState st = integrate(60, 60.0, 2e-3);
    for (size_t si = 0; si < st.sample_times.size(); ++si) {
        for (int k = 0; k <= 60; ++k) {
            const double v = st.phi[k][si];
            CHECK(v >= -1e-12);
            CHECK(v <= 1.0 + 1e-12);
            if (k > 0) CHECK(st.phi[k][si] <= st.phi[k - 1][si] + 1e-12);
        }
    }
    // phi_k non-decreasing in t
    for (int k = 1; k <= 60; k += 7) {
        for (size_t si = 1; si < st.sample_times.size(); ++si)
            CHECK(st.phi[k][si] >= st.phi[k][si - 1] - 1e-12);
    }
}

TEST_CASE("halving dt gains about four orders: observed order >= 3.5") {
    const MeanFieldState ref = integrate(12, 5.0, 5e-4, Hierarchy::counter_race, 5.0);
    double err[2];
    int idx = 0;
    for (double dt : {0.04, 0.02}) {
        const MeanFieldState a = integrate(12, 5.0, dt, Hierarchy::counter_race, 5.0);
        double worst = 0;
        for (int k = 1; k <= 12; ++k)
            worst = std::max(worst, std::abs(a.phi[k].back() - ref.phi[k].back()));
        err[idx++] = worst;
    }
    CHECK(std::log2(err[0] / err[1]) >= 3.5);
}

TEST_CASE("oversized steps trip the ordering guard") {
    CHECK_THROWS_AS(integrate(10, 20.0, 4.0, Hierarchy::counter_race, 4.0),
                    convergence_error);
}

TEST_CASE("wave speed, spacing convergence, and the profile collapse") {
    const MeanFieldState st = integrate(200, 400.0, 1e-3);
    const WaveEstimate w = wave_speed(st);
    CHECK(w.speed_psi > 1.23);
    CHECK(w.speed_psi < 1.255);
    CHECK(w.speed_psi == doctest::Approx(2.0 * w.speed_native).epsilon(1e-12));

    // consecutive crossing spacings settle down
    for (int k = 100; k < 199; ++k) {
        const double d1 = st.crossing_times[k] - st.crossing_times[k - 1];
        const double d2 = st.crossing_times[k + 1] - st.crossing_times[k];
        CHECK(std::abs(d2 - d1) < 1e-3);
    }
    for (int k = 1; k <= 199; ++k)
        CHECK(st.crossing_times[k] < st.crossing_times[k + 1]);  // strictly increasing

    // phi_k((k+x)/c) curves overlap for k = 60, 80, 100
    const double c_phi = w.speed_native;
    for (double x = -3.0; x <= 3.0; x += 0.25) {
        const double a = st.phi_at(60, (60 + x) / c_phi);
        const double b = st.phi_at(80, (80 + x) / c_phi);
        const double c = st.phi_at(100, (100 + x) / c_phi);
        CHECK(std::abs(a - b) < 0.01);
        CHECK(std::abs(a - c) < 0.01);
    }
}

TEST_CASE("tail diagnostics resolve one exponential and one double-exponential side") {
    const MeanFieldState st = integrate(200, 400.0, 1e-3);
    const WaveEstimate w = wave_speed(st);
    const TailReport rep = tail_diagnostics(w);
    CHECK(rep.sufficient_range);
    CHECK(rep.h_min < 1e-8);
    CHECK(1.0 - rep.h_max < 1e-8);
    // saturated side: log(1 - H) is linear in x to high fidelity, with the
    // rate of the linearized wave equation (c lambda = 1 - e^{-lambda})
    CHECK(rep.right_single.r2 > 0.999);
    CHECK(rep.right_single.slope == doctest::Approx(-1.044).epsilon(0.01));
    // tip side: the double-exponential reading fits far better than the
    // single-exponential one
    CHECK(rep.left_double.r2 > 0.99);
    CHECK(rep.left_double.r2 > rep.left.r2);
    // profile limits
    CHECK(w.profile_h.front() < 1e-6);
    CHECK(w.profile_h.back() > 1.0 - 1e-6);
}

TEST_CASE("power-of-two baseline front moves at unit speed") {
    const MeanFieldState st = integrate(200, 300.0, 1e-3, Hierarchy::power_of_two);
    const WaveEstimate w = wave_speed(st);
    CHECK(std::abs(w.speed_native - 1.0) < 0.02);
    CHECK(w.speed_psi == w.speed_native);  // no time rescaling for this mode
}

TEST_CASE("empirical particle tails follow psi_k(t) = phi_k(2t) at N = 2000") {
    const MeanFieldState st = integrate(14, 5.0, 1e-3);
    const int reps = 4;
    std::vector<TailMeasurement> runs;
    for (int r = 0; r < reps; ++r) runs.push_back(empirical_tails(2000, 2.0, 400 + r, 0.5));
    for (size_t ti = 0; ti < runs[0].times.size(); ++ti) {
        const double t = runs[0].times[ti];
        for (int k = 0; k <= 6; ++k) {
            double mean = 0;
            for (const auto& run : runs) mean += run.values[ti][k];
            mean /= reps;
            CHECK(std::abs(mean - st.psi_at(k, t)) < 0.02);
        }
    }
}
