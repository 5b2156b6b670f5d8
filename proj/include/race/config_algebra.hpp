#pragma once

#include "race/dynamics.hpp"
#include "race/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace race {

// Occupancy counts of the distinct occupied levels, top block first.
// alpha[0] >= 2 (the top level always holds at least two counters),
// alpha[i] >= 1 otherwise, and sum alpha = N.
struct Configuration {
    std::vector<int> alpha;
    int n = 0;

    static Configuration of(std::vector<int> alpha);

    int levels() const { return static_cast<int>(alpha.size()); }   // M
    int cum(int i) const;                                           // l_i, cum(0) = 0
    std::string to_string() const;                                  // "(a1,a2,...)"

    bool operator==(const Configuration&) const = default;
    auto operator<=>(const Configuration&) const = default;
};

Configuration configuration_of(const GapState& x);

// Values h(-1..N) with h(-1) = 0. The quadratic family
// h(x) = A(x^2 - 1) + B(x + 1) satisfies that by construction.
class TestFunction {
public:
    static TestFunction tabulated(int n, std::vector<Rat> values_from_minus_one);
    static TestFunction quadratic(int n, Rat a, Rat b);

    const Rat& operator()(int k) const;         // k in [-1, n]
    Rat delta(int k) const;                     // h(k+1) - h(k), k in [-1, n-1]
    int n() const { return n_; }
    const std::optional<std::pair<Rat, Rat>>& quad_params() const { return quad_; }

private:
    int n_ = 0;
    std::vector<Rat> values_;  // index k + 1
    std::optional<std::pair<Rat, Rat>> quad_;
};

// V_alpha(N) = 1 + sum alpha_i (alpha_i - 1) / (N(N-1)): expected counters
// updated in one step from any state with configuration alpha.
Rat v_alpha(const Configuration& c);

// E[Delta X_k] for every position k in [1, N-2]; entries not present are
// zero. Level 1 contributes C(alpha_1,2)/C(N,2) at position 1 when
// alpha_1 >= 3; each lower level contributes per its (alpha_{i+1}, alpha_i)
// case at positions l_i - 1, l_i, l_i + 1.
std::map<int, Rat> expected_increments(const Configuration& c);

// E*(l,c) = [c(2l+c-1) Dh(l-1) + c(c-1) Dh(l) - c(c-1)] / (N(N-1)),
// the per-level drift contribution in telescoped form.
Rat e_star(int l, int c, const TestFunction& h, int n);

// Contribution E(l_i, alpha_i, alpha_{i+1}) of one level, indicator form.
Rat level_contribution(int l_i, int alpha_i, int alpha_ip1, const TestFunction& h, int n);

// L_alpha h = v - 1 + sum_{i=0}^{M-1} E*(l_i, alpha_{i+1}) - boundary terms.
// Upper bounds need L_alpha h >= 0 for every alpha; lower bounds reverse it.
Rat drift_functional(const Configuration& c, const TestFunction& h, const Rat& v);

// Q_0 = 0, Q_1 = 2 beta (a-b-beta), Q_2 = -2 beta (a-b-beta)(a+b-1):
// the change of the script-E operator on binomial-coefficient polynomials
// under moving beta counters between adjacent levels.
Rat q_n(int order, long long a, long long b, long long beta);

// D_k(beta) = L_alpha h - L_alphahat h for the quadratic family, where
// alphahat moves beta counters from level k-1 to level k. Requires
// 2 <= k <= M, -alpha_k <= beta <= alpha_{k-1}, and not (k == M with
// alpha_M in {1,2}).
Rat d_k(const Configuration& c, int k, int beta, const Rat& a, const Rat& b);

// The configuration reached by moving beta counters from level k-1 to k;
// emptied levels are dropped.
Configuration move_counters(const Configuration& c, int k, int beta);

// Merge threshold N(B) = (N-2)(1-B) + 3/2: merging adjacent levels whose
// sizes sum to at most this is monotone for the upper-bound family.
Rat merge_threshold(int n, const Rat& b);

// The nine terminal candidates (with mod-3 subcases) of the worst-case
// reduction at B = 1/2, instantiated for N; entries violating the
// configuration invariant are dropped.
std::vector<Configuration> worst_case_reduce(int n, const Rat& b);
std::vector<std::pair<std::string, Configuration>> worst_case_candidates(int n);

// Iterated merge/rebalance at B = 1/2 until no move applies. Every move is
// drift-monotone for the upper-bound f; the trace records each state.
struct ReductionTrace {
    std::vector<Configuration> states;  // first = input, last = terminal
};
ReductionTrace reduce_to_worst(const Configuration& c);

}  // namespace race
