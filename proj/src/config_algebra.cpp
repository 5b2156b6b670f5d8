#include "race/config_algebra.hpp"

#include "race/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace race {

Configuration Configuration::of(std::vector<int> alpha) {
    require(!alpha.empty(), "Configuration: empty occupancy vector");
    require(alpha.front() >= 2, "Configuration: top level needs at least two counters");
    for (size_t i = 1; i < alpha.size(); ++i)
        require(alpha[i] >= 1, "Configuration: lower levels need at least one counter");
    Configuration c;
    c.n = std::accumulate(alpha.begin(), alpha.end(), 0);
    c.alpha = std::move(alpha);
    return c;
}

int Configuration::cum(int i) const {
    int l = 0;
    for (int j = 0; j < i; ++j) l += alpha[j];
    return l;
}

std::string Configuration::to_string() const {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < alpha.size(); ++i) os << (i ? "," : "") << alpha[i];
    os << ")";
    return os.str();
}

Configuration configuration_of(const GapState& x) {
    std::vector<int> alpha;
    int run = 2;  // the top two counters share a level
    for (int g : x.gaps) {
        require(g >= 0, "configuration_of: gaps must be non-negative");
        if (g == 0) {
            ++run;
        } else {
            alpha.push_back(run);
            run = 1;
        }
    }
    alpha.push_back(run);
    return Configuration::of(std::move(alpha));
}

TestFunction TestFunction::tabulated(int n, std::vector<Rat> values_from_minus_one) {
    require(n >= 2, "TestFunction: need N >= 2");
    require(values_from_minus_one.size() == size_t(n) + 2,
            "TestFunction: need values for every k in [-1, N]");
    require(values_from_minus_one.front().is_zero(), "TestFunction: h(-1) must be 0");
    TestFunction h;
    h.n_ = n;
    h.values_ = std::move(values_from_minus_one);
    return h;
}

TestFunction TestFunction::quadratic(int n, Rat a, Rat b) {
    std::vector<Rat> values;
    values.reserve(n + 2);
    for (int k = -1; k <= n; ++k)
        values.push_back(a * Rat(static_cast<long long>(k) * k - 1) + b * Rat(k + 1));
    TestFunction h = tabulated(n, std::move(values));
    h.quad_ = std::make_pair(std::move(a), std::move(b));
    return h;
}

const Rat& TestFunction::operator()(int k) const {
    require(k >= -1 && k <= n_, "TestFunction: argument outside [-1, N]");
    return values_[k + 1];
}

Rat TestFunction::delta(int k) const { return (*this)(k + 1) - (*this)(k); }

Rat v_alpha(const Configuration& c) {
    long long s = 0;
    for (int a : c.alpha) s += static_cast<long long>(a) * (a - 1);
    return Rat(1) + Rat(s, static_cast<long long>(c.n) * (c.n - 1));
}

std::map<int, Rat> expected_increments(const Configuration& c) {
    const int n = c.n;
    require(n >= 3, "expected_increments: need N >= 3");
    const Rat denom(static_cast<long long>(n) * (n - 1));
    std::map<int, Rat> inc;

    // level 1: positions 1..alpha_1-2 exist only when alpha_1 >= 3
    if (c.alpha[0] >= 3)
        inc[1] += Rat(static_cast<long long>(c.alpha[0]) * (c.alpha[0] - 1)) / denom;

    for (int i = 1; i < c.levels(); ++i) {
        const long long a = c.alpha[i];      // alpha_{i+1}, this level
        const long long u = c.alpha[i - 1];  // alpha_i, level above
        const long long l = c.cum(i);        // l_i
        const long long lprev = l - u;       // l_{i-1}

        long long at_lm1 = -(2 * l * a + a * (a - 1));
        if (u == 2) at_lm1 += 2;
        if (u == 1) at_lm1 += 2 * lprev;
        inc[static_cast<int>(l) - 1] += Rat(at_lm1) / denom;

        if (a >= 2) inc[static_cast<int>(l)] += Rat(2 * l * a) / denom;
        if (a >= 3) inc[static_cast<int>(l) + 1] += Rat(a * (a - 1)) / denom;
    }
    std::erase_if(inc, [](const auto& kv) { return kv.second.is_zero(); });
    return inc;
}

Rat e_star(int l, int c, const TestFunction& h, int n) {
    require(0 <= l && l <= n && l + 1 <= n, "e_star: level offset out of range");
    require(c >= 1, "e_star: block size must be positive");
    const Rat cc(c);
    const Rat cm1(static_cast<long long>(c) * (c - 1));
    return (cc * Rat(2 * static_cast<long long>(l) + c - 1) * h.delta(l - 1) +
            cm1 * h.delta(l) - cm1) /
           Rat(static_cast<long long>(n) * (n - 1));
}

Rat level_contribution(int l_i, int alpha_i, int alpha_ip1, const TestFunction& h, int n) {
    const Rat scale = Rat(2, static_cast<long long>(n) * (n - 1));
    Rat e = e_star(l_i, alpha_ip1, h, n);
    if (alpha_i == 2) e += scale * h(l_i - 1);
    if (alpha_i == 1) e += scale * Rat(l_i - 1) * h(l_i - 1);
    if (alpha_ip1 == 2) e -= scale * h(l_i + 1);
    if (alpha_ip1 == 1) e -= scale * Rat(l_i) * h(l_i);
    return e;
}

Rat drift_functional(const Configuration& c, const TestFunction& h, const Rat& v) {
    require(h.n() >= c.n, "drift_functional: test function too short for N");
    Rat out = v - Rat(1);
    for (int i = 0; i < c.levels(); ++i) out += e_star(c.cum(i), c.alpha[i], h, c.n);
    const Rat scale = Rat(2, static_cast<long long>(c.n) * (c.n - 1));
    const int last = c.alpha.back();
    if (last == 2) out -= scale * h(c.n - 1);
    if (last == 1) out -= scale * Rat(c.n - 1) * h(c.n - 1);
    return out;
}

Rat q_n(int order, long long a, long long b, long long beta) {
    require(order >= 0 && order <= 2, "q_n: order must be 0, 1 or 2");
    if (order == 0) return Rat(0);
    const Rat core = Rat(2) * Rat(beta) * Rat(a - b - beta);
    if (order == 1) return core;
    return -core * Rat(a + b - 1);
}

Rat d_k(const Configuration& c, int k, int beta, const Rat& a, const Rat& b) {
    const int m = c.levels();
    require(2 <= k && k <= m, "d_k: level index outside [2, M]");
    require(!(k == m && (c.alpha[m - 1] == 1 || c.alpha[m - 1] == 2)),
            "d_k: the last level is kept as is when alpha_M in {1,2}");
    const int upper = c.alpha[k - 2];  // alpha_{k-1}
    const int lower = c.alpha[k - 1];  // alpha_k
    require(-lower <= beta && beta <= upper, "d_k: beta outside [-alpha_k, alpha_{k-1}]");
    const Rat factor = Rat(2) * a * Rat(lower + upper) - Rat(3) * a - b + Rat(1);
    return Rat(-2) * Rat(beta) * Rat(static_cast<long long>(upper) - lower - beta) * factor /
           Rat(static_cast<long long>(c.n) * (c.n - 1));
}

Configuration move_counters(const Configuration& c, int k, int beta) {
    const int m = c.levels();
    require(2 <= k && k <= m, "move_counters: level index outside [2, M]");
    require(-c.alpha[k - 1] <= beta && beta <= c.alpha[k - 2],
            "move_counters: beta outside [-alpha_k, alpha_{k-1}]");
    std::vector<int> alpha = c.alpha;
    alpha[k - 2] -= beta;
    alpha[k - 1] += beta;
    std::erase(alpha, 0);
    return Configuration::of(std::move(alpha));
}

Rat merge_threshold(int n, const Rat& b) {
    return Rat(n - 2) * (Rat(1) - b) + Rat(3, 2);
}

std::vector<std::pair<std::string, Configuration>> worst_case_candidates(int n) {
    require(n >= 5, "worst_case_reduce: N < 5 is covered by the exact small-N solvers");
    std::vector<std::pair<std::string, std::vector<int>>> raw;
    raw.emplace_back("i", std::vector<int>{n});
    raw.emplace_back("ii", std::vector<int>{n - 1, 1});
    raw.emplace_back("iii", std::vector<int>{n - 2, 2});
    if (n % 2 == 0) {
        raw.emplace_back("iv", std::vector<int>{n / 2, n / 2});
        raw.emplace_back("v", std::vector<int>{n / 2, n / 2 - 1, 1});
        raw.emplace_back("vi", std::vector<int>{n / 2 - 1, n / 2 - 1, 2});
    } else {
        raw.emplace_back("iv", std::vector<int>{(n - 1) / 2, (n + 1) / 2});
        raw.emplace_back("v", std::vector<int>{(n - 1) / 2, (n - 1) / 2, 1});
        raw.emplace_back("vi", std::vector<int>{(n - 1) / 2, (n - 3) / 2, 2});
    }
    switch (n % 3) {
        case 0:
            raw.emplace_back("vii", std::vector<int>{n / 3, n / 3, n / 3});
            raw.emplace_back("viii", std::vector<int>{n / 3, n / 3, n / 3 - 1, 1});
            raw.emplace_back("ix", std::vector<int>{n / 3, n / 3 - 1, n / 3 - 1, 2});
            break;
        case 1:
            raw.emplace_back("vii", std::vector<int>{(n + 2) / 3, (n - 1) / 3, (n - 1) / 3});
            raw.emplace_back("viii",
                             std::vector<int>{(n - 1) / 3, (n - 1) / 3, (n - 1) / 3, 1});
            raw.emplace_back("ix", std::vector<int>{(n - 1) / 3, (n - 1) / 3, (n - 4) / 3, 2});
            break;
        default:
            raw.emplace_back("vii", std::vector<int>{(n + 1) / 3, (n + 1) / 3, (n - 2) / 3});
            raw.emplace_back("viii",
                             std::vector<int>{(n + 1) / 3, (n - 2) / 3, (n - 2) / 3, 1});
            raw.emplace_back("ix", std::vector<int>{(n - 2) / 3, (n - 2) / 3, (n - 2) / 3, 2});
            break;
    }
    std::vector<std::pair<std::string, Configuration>> out;
    for (auto& [tag, alpha] : raw) {
        const bool valid = alpha.front() >= 2 &&
                           std::all_of(alpha.begin(), alpha.end(), [](int a) { return a >= 1; });
        if (valid) out.emplace_back(tag, Configuration::of(std::move(alpha)));
    }
    return out;
}

std::vector<Configuration> worst_case_reduce(int n, const Rat& b) {
    require(b == Rat(1, 2), "worst_case_reduce: only the B = 1/2 regime is supported");
    std::vector<Configuration> out;
    for (auto& [tag, c] : worst_case_candidates(n)) out.push_back(std::move(c));
    return out;
}

ReductionTrace reduce_to_worst(const Configuration& start) {
    ReductionTrace trace;
    trace.states.push_back(start);
    Configuration c = start;
    const int n = c.n;
    // merge when 2(alpha_{k-1}+alpha_k) <= N+1, rebalance when above and
    // levels differ by 2 or more; the last level is frozen when it holds
    // one or two counters
    const long long cap = 4ll * n * n + 64;
    for (long long iter = 0; iter < cap; ++iter) {
        const int m = c.levels();
        auto valid_k = [&](int k) {
            return !(k == m && (c.alpha[m - 1] == 1 || c.alpha[m - 1] == 2));
        };
        int pick = 0, beta = 0;
        for (int k = m; k >= 2; --k) {  // bottom-most merge first
            if (!valid_k(k)) continue;
            if (2 * (c.alpha[k - 2] + c.alpha[k - 1]) <= n + 1) {
                pick = k;
                beta = c.alpha[k - 2];
                break;
            }
        }
        if (pick == 0) {
            for (int k = 2; k <= m; ++k) {
                if (!valid_k(k)) continue;
                const int diff = c.alpha[k - 2] - c.alpha[k - 1];
                if (2 * (c.alpha[k - 2] + c.alpha[k - 1]) > n + 1 &&
                    (diff >= 2 || diff <= -2)) {
                    pick = k;
                    // odd differences leave the lower level one counter ahead
                    beta = (diff % 2 == 0) ? diff / 2 : (diff + 1) / 2;
                    break;
                }
            }
        }
        if (pick == 0) return trace;
        c = move_counters(c, pick, beta);
        trace.states.push_back(c);
    }
    throw invariant_error("reduce_to_worst: reduction failed to terminate");
}

}  // namespace race
