#pragma once

#include "race/config_algebra.hpp"
#include "race/rational.hpp"

#include <string>
#include <vector>

namespace race {

// All compositions alpha of N with alpha_1 >= 2, alpha_i >= 1. There are
// 2^(N-2) of them. Enumeration is capped at N = 20.
std::vector<Configuration> enumerate_configurations(int n);

// One row per configuration: coeff . (h_1..h_{N-2}, v) >= rhs, where
// coeff = (E[dX_1|alpha], .., E[dX_{N-2}|alpha], 1) and rhs = V_alpha(N).
struct LpConstraint {
    std::vector<Rat> coeff;
    Rat rhs;
};

struct LpProblem {
    int n = 0;       // the N this problem was built for
    int n_vars = 0;  // N-1: the h values plus the bound variable v
    std::vector<LpConstraint> constraints;
    std::vector<Configuration> configs;  // parallel to constraints
};

LpProblem build_lp(int n);

// Same constraint structure over an arbitrary configuration set.
LpProblem build_lp_from(int n, const std::vector<Configuration>& configs);

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::optimal;
    Rat bound_exact;                 // optimal v
    double bound = 0.0;
    std::vector<Rat> h_exact;        // h(1)..h(N-2)
    std::vector<double> h_values;
    std::vector<int> active_set;     // indices of binding constraints
    bool exact_verified = false;     // every constraint rechecked in rationals
    long iterations = 0;
};

// Minimizes v. Exact Bland simplex for moderate sizes; larger instances run
// a floating simplex first and finish with exact iterations from that
// basis, so the returned vertex is always exact and exactly feasible.
LpSolution solve_lp(const LpProblem& p);

// Smallest v keeping the given h feasible: max over constraints of
// rhs - sum_k h(k) E[dX_k | alpha].
Rat lp_objective_at(const LpProblem& p, const TestFunction& h);

// Least-squares a k^2 + b k + c over k = 1..len(h); for input lying in the
// family A(x^2-1) + B(x+1) this recovers (a, b) = (A, B) with c = B - A.
struct ParabolaFit {
    double a = 0, b = 0, c = 0;
    double vertex_x = 0, vertex_y = 0;
    double rms = 0;
    bool degenerate = false;  // zero curvature (all values equal)
};

ParabolaFit fit_parabola(const std::vector<double>& h);

}  // namespace race
