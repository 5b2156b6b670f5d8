#pragma once

#include "race/rational.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace race {

// N counters; each step an unordered pair of distinct counters is drawn
// uniformly at random. If their levels differ the lower one is incremented;
// if they tie, both are. The canonical start is all counters at level 0,
// which keeps at least two counters at the top level forever.
struct CounterState {
    std::vector<long long> levels;
    int n() const { return static_cast<int>(levels.size()); }
};

// Gaps X_1..X_{N-2} between consecutive ordered counters, starting from the
// second-highest one (the top two always share a level). All entries >= 0.
struct GapState {
    std::vector<int> gaps;
    int n() const { return static_cast<int>(gaps.size()) + 2; }
    bool operator==(const GapState&) const = default;
    auto operator<=>(const GapState&) const = default;
};

struct StepResult {
    CounterState state;
    int updated;  // 1 or 2
};

// One transition for the chosen pair (i, j), 0 <= i < j < N.
StepResult step(const CounterState& s, int i, int j);

GapState gaps_of(const CounterState& s);

// Counters placed at descending levels realizing x, top level at 0.
CounterState representative_state(const GapState& x);

// Exhaustive one-step law of the gap chain at x: each reachable gap state
// with its exact probability m / C(N,2). Canonical: sorted, duplicates
// merged, probabilities summing to one.
std::vector<std::pair<GapState, Rat>> one_step_distribution(const GapState& x);

// Expected number of counters updated in one step from x. Equals
// V_alpha(N) = 1 + sum alpha_i(alpha_i - 1) / (N(N-1)).
Rat expected_updates(const GapState& x);

struct SpeedEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    uint64_t steps = 0;
    uint64_t burn_in = 0;
    uint64_t seed = 0;
};

// 100 * N * C(N,2); comfortably past the drift-threshold mixing scale at
// desk sizes.
uint64_t default_burn_in(int n);

// Monte Carlo estimate of V(N): counters updated per step over the
// post-burn-in window. Bitwise reproducible for fixed (n, steps, burn_in,
// seed); std_error from batch means over 100 batches.
SpeedEstimate simulate_speed(int n, uint64_t steps, uint64_t burn_in, uint64_t seed);

// Empirical stationary frequency of the all-equal gap state for N=3;
// second value is a batch-means standard error.
std::pair<double, double> simulate_n3_zero_frequency(uint64_t steps, uint64_t burn_in,
                                                     uint64_t seed);

// psi^(N)_k(t) = (1/N) #{i : C_i(floor(tN)) >= k}, counters started at 0.
struct TailMeasurement {
    int n = 0;
    uint64_t seed = 0;
    std::vector<double> times;                // psi-time grid
    std::vector<int> levels;                  // k grid
    std::vector<std::vector<double>> values;  // values[ti][ki] in [0,1]
    double at(int ti, int ki) const { return values[ti][ki]; }
};

TailMeasurement empirical_tails(int n, double horizon, uint64_t seed, double t_step = 0.5);

// E_x L(X(1)) - L(x) for L(x) = sum x_i^2, exact over the one-step law.
Rat quadratic_drift(const GapState& x);

// E_x L(X(1)) - L(x) for L(x) = sum exp(r x_i), exact probabilities with
// floating evaluation. Requires 0 < r <= 1.
double exponential_drift(const GapState& x, double r);

// Drift turns uniformly negative past these radii (quadratic / exponential
// Lyapunov functions respectively).
inline double quadratic_drift_threshold(int n) { return 1.25 * n * (n + 1); }
double exponential_drift_threshold(int n);  // 2 ln(16 N^2)

}  // namespace race
