#include "race/bounds.hpp"

#include "race/errors.hpp"
#include "race/lp_opt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace race {

TestFunction upper_test_function(int n) {
    require(n >= 4, "upper_test_function: need N >= 4");
    return TestFunction::quadratic(n, Rat(-1, 2ll * (n - 2)), Rat(1, 2));
}

Rat s_alpha(const Configuration& c) {
    return drift_functional(c, upper_test_function(c.n), Rat(1));
}

BoundReport finite_upper_bound(int n) {
    require(n >= 5, "finite_upper_bound: need N >= 5 (N <= 4 is solved exactly)");
    std::optional<Rat> best;
    Configuration witness;
    for (const auto& [tag, c] : worst_case_candidates(n)) {
        Rat s = s_alpha(c);
        if (!best || s < *best || (s == *best && c.alpha < witness.alpha)) {
            best = s;
            witness = c;
        }
    }
    BoundReport r;
    r.n = n;
    r.direction = BoundReport::Direction::upper;
    r.exact = Rat(1) - *best;
    r.value = r.exact->to_double();
    r.witness = witness.to_string();
    r.method = "test-function f over worst-case candidates";
    return r;
}

Rat exhaustive_upper_bound(int n) {
    std::optional<Rat> worst;
    for (const auto& c : enumerate_configurations(n)) {
        Rat s = s_alpha(c);
        if (!worst || s < *worst) worst = s;
    }
    return Rat(1) - *worst;
}

Rat remark_upper_bound(int n) {
    require(n >= 5, "remark_upper_bound: stated for N >= 5");
    const long long nn = n;
    switch (n % 3) {
        case 0:
            return Rat(1) + Rat(nn * (7 * nn - 9), 27 * (nn * nn - 3 * nn + 2));
        case 1:
            return Rat(1) + Rat(7 * nn * nn - 2 * nn - 5, 27 * nn * (nn - 2));
        default:
            return Rat(1) + Rat(7 * nn * nn * nn - 9 * nn * nn - 3 * nn + 13,
                                27 * nn * (nn * nn - 3 * nn + 2));
    }
}

std::map<std::string, Rat> appendix_a_table(int n) {
    require(n >= 5, "appendix_a_table: need N >= 5");
    const long long nn = n;
    const long long d2 = nn * (nn - 2);              // N(N-2)
    const long long d3 = nn * (nn - 1) * (nn - 2);   // N(N^2-3N+2)
    std::map<std::string, Rat> t;
    t["i"] = Rat(0);
    t["ii"] = Rat(-(nn - 1), d2);
    t["iii"] = Rat(-2, nn);
    if (n % 2 == 0) {
        t["iv"] = Rat(-nn, 4 * (nn - 2));
        t["v"] = Rat(-nn * nn * nn + nn * nn + 2 * nn - 4, 4 * d3);
        t["vi"] = Rat(-(nn * nn + nn + 2), 4 * nn * (nn - 1));
    } else {
        t["iv"] = Rat(-(nn * nn - 1), 4 * d2);
        // the ((N-1)/2, (N-1)/2, 1) case; equals the odd case (iv) value
        t["v"] = Rat(-(nn * nn - 1), 4 * d2);
        t["vi"] = Rat(-(nn * nn - 1), 4 * d2);
    }
    switch (n % 3) {
        case 0:
            t["vii"] = Rat(-nn * (7 * nn - 9), 27 * (nn - 1) * (nn - 2));
            t["viii"] = Rat(-(7 * nn * nn * nn - 12 * nn * nn + 27), 27 * d3);
            t["ix"] = Rat(-(7 * nn * nn * nn - 15 * nn * nn + 27 * nn - 27), 27 * d3);
            break;
        case 1:
            t["vii"] = Rat(-(7 * nn * nn - 2 * nn - 5), 27 * d2);
            t["viii"] = Rat(-(7 * nn * nn - 5 * nn - 2), 27 * d2);
            t["ix"] = Rat(-(7 * nn * nn * nn - 15 * nn * nn + 27 * nn - 19), 27 * d3);
            break;
        default:
            t["vii"] = Rat(-(7 * nn * nn * nn - 9 * nn * nn - 3 * nn + 13), 27 * d3);
            t["viii"] = Rat(-(7 * nn * nn * nn - 12 * nn * nn + 19), 27 * d3);
            if (n >= 8)  // the N=5 instance violates alpha_1 >= 2 and is dropped
                t["ix"] = Rat(-(7 * nn * nn - nn + 28), 27 * nn * (nn - 1));
            break;
    }
    return t;
}

std::vector<std::pair<int, Rat>> asymptotic_level_scan(int k_max) {
    std::vector<std::pair<int, Rat>> out;
    for (int k = 1; k <= k_max; ++k) {
        const long long kk = k;
        Rat s = Rat(-2 * (kk * kk - 1), 3 * kk * kk) + Rat(kk + 1, 2 * kk) - Rat(1, kk);
        out.emplace_back(k, std::move(s));
    }
    return out;
}

BoundReport asymptotic_upper() {
    Rat worst(0);
    int arg = 1;
    for (const auto& [k, s] : asymptotic_level_scan()) {
        if (s < worst) {
            worst = s;
            arg = k;
        }
    }
    BoundReport r;
    r.direction = BoundReport::Direction::upper;
    r.exact = Rat(1) - worst;
    r.value = r.exact->to_double();
    r.witness = "k = " + std::to_string(arg) + " equal levels";
    r.method = "asymptotic worst-case scan, B = 1/2";
    return r;
}

double lower_scenario_singletons(double b) {
    require(b > 0 && b < 1, "lower_scenario_singletons: need B in (0,1)");
    return 2.0 / 3.0 + b;
}

double lower_scenario_large_level(double b, double y, double z) {
    require(b >= 3.0 / 7.0 - 1e-12 && b <= 0.5 + 1e-12,
            "lower_scenario_large_level: need B in [3/7, 1/2]");
    require(y >= 0, "lower_scenario_large_level: need y >= 0");
    require(z >= 1 - b - 1e-12, "lower_scenario_large_level: need z >= 1 - B");
    require(y + z <= 1 + 1e-12, "lower_scenario_large_level: need y + z <= 1");
    const double s = y + z;
    return 2.0 / 3.0 + b + z * z * (1 - 2 * b) + (2.0 / 3.0) * y * y * y - b * y * y -
           2 * b * z * y + 2 * z * y * y + 2 * z * z * y + s * s * s / 3.0 - b * s * s;
}

double lower_scenario_no_singletons(double b, double z) {
    return 2.0 / 3.0 + b + z * z * (1 - 3 * b) + z * z * z / 3.0;
}

double lower_envelope_closed_form(double b) {
    const double t = 3 * b - 1;
    return 2.0 / 3.0 + b - (4.0 / 3.0) * t * t * t;
}

namespace {

// golden-section minimization of a unimodal function on [lo, hi]
double golden_min(const std::function<double(double)>& f, double lo, double hi, double tol,
                  double* arg = nullptr) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    double x = (a + b) / 2;
    if (arg) *arg = x;
    return f(x);
}

// min over the feasible (y, z) wedge of G(B, ., .), grid pass then local
// golden refinement in each coordinate
double min_large_level(double b, long res) {
    const double z_lo = 1 - b;
    double best = HUGE_VAL, by = 0, bz = z_lo;
    const long nz = std::max<long>(res / 8, 64);
    for (long iz = 0; iz <= nz; ++iz) {
        const double z = z_lo + (1.0 - z_lo) * double(iz) / double(nz);
        const long ny = std::max<long>(res / 32, 16);
        for (long iy = 0; iy <= ny; ++iy) {
            const double y = (1.0 - z) * double(iy) / double(ny);
            const double g = lower_scenario_large_level(b, y, z);
            if (g < best) {
                best = g;
                by = y;
                bz = z;
            }
        }
    }
    // coordinate descent with golden refinement
    for (int round = 0; round < 4; ++round) {
        golden_min([&](double z) { return lower_scenario_large_level(b, std::min(by, 1 - z), z); },
                   z_lo, 1.0, 1e-11, &bz);
        by = std::min(by, 1 - bz);
        golden_min([&](double y) { return lower_scenario_large_level(b, y, bz); }, 0.0,
                   1.0 - bz, 1e-11, &by);
    }
    return lower_scenario_large_level(b, by, bz);
}

double envelope(double b, long res) {
    return std::min(lower_scenario_singletons(b), min_large_level(b, res));
}

}  // namespace

// Both scenario caps are available exactly on B in [3/7, 1/2] (the window
// where the interior minimizer z = 2(3B-1) of H stays admissible), so the
// search runs there.
LowerOptimum lower_bound_optimize(long grid_resolution) {
    require(grid_resolution >= 1000, "lower_bound_optimize: need grid_resolution >= 1000");
    LowerOptimum opt;
    opt.analytic_b = 1.0 / 3.0 + std::sqrt(3.0) / 18.0;
    opt.analytic_value = 1.0 + std::sqrt(3.0) / 27.0;

    const double b_lo = 3.0 / 7.0, b_hi = 0.5;
    double best_b = b_lo, best_v = -HUGE_VAL;
    const long nb = std::max<long>(grid_resolution / 8, 128);
    for (long ib = 0; ib <= nb; ++ib) {
        const double b = b_lo + (b_hi - b_lo) * double(ib) / double(nb);
        const double v = envelope(b, grid_resolution / 4);
        if (v > best_v) {
            best_v = v;
            best_b = b;
        }
    }
    const double span = (b_hi - b_lo) / double(nb);
    double lo = std::max(b_lo, best_b - 2 * span);
    double hi = std::min(b_hi, best_b + 2 * span);
    golden_min([&](double b) { return -envelope(b, grid_resolution); }, lo, hi, 1e-9,
               &opt.grid_b);
    opt.grid_value = envelope(opt.grid_b, 4 * grid_resolution);
    return opt;
}

BoundReport asymptotic_lower(long grid_resolution) {
    LowerOptimum opt = lower_bound_optimize(std::max(grid_resolution, 1000l));
    BoundReport r;
    r.direction = BoundReport::Direction::lower;
    r.value = opt.analytic_value;
    r.witness = "B = 1/3 + sqrt(3)/18, large level at z = 2(3B-1)";
    r.method = "scenario envelope, analytic optimum cross-checked on a grid";
    return r;
}

}  // namespace race
