#pragma once

#include "race/config_algebra.hpp"
#include "race/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace race {

struct BoundReport {
    std::optional<int> n;  // nullopt = asymptotic
    enum class Direction { upper, lower } direction = Direction::upper;
    double value = 0.0;
    std::optional<Rat> exact;
    std::string witness;
    std::string method;
};

// f(x) = (x+1)/2 - (x^2-1)/(2(N-2)): the quadratic family with
// A = -1/(2(N-2)), B = 1/2. f(-1) = f(N-1) = 0.
TestFunction upper_test_function(int n);

// S(alpha): the drift functional of f at v = 1. The certified upper bound
// is 1 + max over configurations of (-S).
Rat s_alpha(const Configuration& c);

// Upper bound certified by f over the worst-case candidate list, with the
// attaining configuration as witness.
BoundReport finite_upper_bound(int n);

// Same maximization over every configuration of N (2^(N-2) of them);
// cross-check that the candidate list loses nothing.
Rat exhaustive_upper_bound(int n);

// The three mod-3 closed forms printed for the finite-N bound.
Rat remark_upper_bound(int n);

// Closed-form S(alpha) for the nine candidate cases, keyed "i".."ix".
std::map<std::string, Rat> appendix_a_table(int n);

// S(k) for k equal large levels plus a singleton, in the N -> infinity
// limit at B = 1/2; exact rationals.
std::vector<std::pair<int, Rat>> asymptotic_level_scan(int k_max = 10);

// 1 + 7/27 = 34/27, attained at k = 3.
BoundReport asymptotic_upper();

// Lower-bound scenario values (asymptotic in N).
double lower_scenario_singletons(double b);               // 2/3 + B
double lower_scenario_large_level(double b, double y, double z);  // G(B,y,z)
double lower_scenario_no_singletons(double b, double z);  // H(B,z) = G(B,0,z)
double lower_envelope_closed_form(double b);  // 2/3 + B - (4/3)(3B-1)^3

struct LowerOptimum {
    double grid_b = 0.0;       // arg max found by the grid optimizer
    double grid_value = 0.0;   // envelope value there
    double analytic_b = 0.0;   // 1/3 + sqrt(3)/18
    double analytic_value = 0.0;  // 1 + sqrt(3)/27
};

// Maximizes min(singletons, min_{y,z} G) over B in (0, 1/2] by grid search
// with golden-section refinement; the analytic optimum rides along.
LowerOptimum lower_bound_optimize(long grid_resolution);

BoundReport asymptotic_lower(long grid_resolution = 2000);

}  // namespace race
