#include "race/dynamics.hpp"

#include "race/errors.hpp"
#include "race/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace race {

StepResult step(const CounterState& s, int i, int j) {
    const int n = s.n();
    require(0 <= i && i < j && j < n, "step: pair indices must satisfy 0 <= i < j < N");
    StepResult out{s, 1};
    auto& lv = out.state.levels;
    if (lv[i] == lv[j]) {
        ++lv[i];
        ++lv[j];
        out.updated = 2;
    } else if (lv[i] < lv[j]) {
        ++lv[i];
    } else {
        ++lv[j];
    }
    return out;
}

GapState gaps_of(const CounterState& s) {
    require(s.n() >= 2, "gaps_of: need at least two counters");
    std::vector<long long> sorted = s.levels;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    GapState x;
    x.gaps.reserve(s.n() - 2);
    for (int j = 1; j + 1 < s.n(); ++j)
        x.gaps.push_back(static_cast<int>(sorted[j] - sorted[j + 1]));
    return x;
}

CounterState representative_state(const GapState& x) {
    CounterState s;
    s.levels.reserve(x.n());
    s.levels.push_back(0);
    s.levels.push_back(0);
    for (int g : x.gaps) {
        require(g >= 0, "representative_state: gaps must be non-negative");
        s.levels.push_back(s.levels.back() - g);
    }
    return s;
}

std::vector<std::pair<GapState, Rat>> one_step_distribution(const GapState& x) {
    const int n = x.n();
    require(n >= 3, "one_step_distribution: need N >= 3");
    const CounterState rep = representative_state(x);
    const long long pairs = static_cast<long long>(n) * (n - 1) / 2;
    std::map<GapState, long long> counts;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) counts[gaps_of(step(rep, i, j).state)] += 1;
    std::vector<std::pair<GapState, Rat>> out;
    out.reserve(counts.size());
    for (auto& [state, m] : counts) out.emplace_back(state, Rat(m, pairs));
    return out;
}

Rat expected_updates(const GapState& x) {
    const int n = x.n();
    require(n >= 2, "expected_updates: need N >= 2");
    const CounterState rep = representative_state(x);
    long long total = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) total += step(rep, i, j).updated;
    return Rat(total, static_cast<long long>(n) * (n - 1) / 2);
}

uint64_t default_burn_in(int n) {
    return 100ull * uint64_t(n) * (uint64_t(n) * (n - 1) / 2);
}

namespace {

struct BatchAccumulator {
    // batch boundaries at floor(b * steps / nbatches)
    uint64_t steps, nbatches;
    std::vector<double> batch_means;
    uint64_t batch_updates = 0, batch_start = 0, next_boundary = 0, done = 0;

    BatchAccumulator(uint64_t total_steps, uint64_t wanted)
        : steps(total_steps), nbatches(std::min<uint64_t>(wanted, total_steps)) {
        next_boundary = boundary(1);
    }
    uint64_t boundary(uint64_t b) const {
        return static_cast<uint64_t>((__uint128_t(steps) * b) / nbatches);
    }
    void add(int updated) {
        batch_updates += updated;
        ++done;
        if (done == next_boundary) {
            batch_means.push_back(double(batch_updates) / double(done - batch_start));
            batch_updates = 0;
            batch_start = done;
            next_boundary = boundary(batch_means.size() + 1);
        }
    }
    double std_error(double mean) const {
        const size_t b = batch_means.size();
        if (b < 2) return 0.0;
        double ss = 0.0;
        for (double m : batch_means) ss += (m - mean) * (m - mean);
        return std::sqrt(ss / (double(b) * double(b - 1)));
    }
};

}  // namespace

SpeedEstimate simulate_speed(int n, uint64_t steps, uint64_t burn_in, uint64_t seed) {
    require(n >= 2, "simulate_speed: need N >= 2");
    require(steps >= 1, "simulate_speed: need steps >= 1");
    SplitMix64 rng(SplitMix64::derive_stream(seed, 0));
    std::vector<long long> levels(n, 0);
    const uint64_t pairs = uint64_t(n) * (n - 1) / 2;

    auto one_step = [&]() -> int {
        auto [i, j] = pair_from_index(rng.next_below(pairs), n);
        if (levels[i] == levels[j]) {
            ++levels[i];
            ++levels[j];
            return 2;
        }
        if (levels[i] < levels[j])
            ++levels[i];
        else
            ++levels[j];
        return 1;
    };

    for (uint64_t s = 0; s < burn_in; ++s) one_step();

    BatchAccumulator acc(steps, 100);
    uint64_t total = 0;
    for (uint64_t s = 0; s < steps; ++s) {
        int u = one_step();
        total += u;
        acc.add(u);
    }
    SpeedEstimate est;
    est.mean = double(total) / double(steps);
    est.std_error = acc.std_error(est.mean);
    est.steps = steps;
    est.burn_in = burn_in;
    est.seed = seed;
    return est;
}

std::pair<double, double> simulate_n3_zero_frequency(uint64_t steps, uint64_t burn_in,
                                                     uint64_t seed) {
    SplitMix64 rng(SplitMix64::derive_stream(seed, 0));
    long long lv[3] = {0, 0, 0};
    auto one_step = [&]() {
        auto [i, j] = pair_from_index(rng.next_below(3), 3);
        if (lv[i] == lv[j]) {
            ++lv[i];
            ++lv[j];
        } else if (lv[i] < lv[j]) {
            ++lv[i];
        } else {
            ++lv[j];
        }
    };
    for (uint64_t s = 0; s < burn_in; ++s) one_step();
    BatchAccumulator acc(steps, 100);
    uint64_t hits = 0;
    for (uint64_t s = 0; s < steps; ++s) {
        one_step();
        const bool at_zero = lv[0] == lv[1] && lv[1] == lv[2];
        hits += at_zero;
        acc.add(at_zero ? 1 : 0);
    }
    const double mean = double(hits) / double(steps);
    return {mean, acc.std_error(mean)};
}

TailMeasurement empirical_tails(int n, double horizon, uint64_t seed, double t_step) {
    require(n >= 3, "empirical_tails: need N >= 3");
    require(horizon > 0, "empirical_tails: need horizon > 0");
    require(t_step > 0, "empirical_tails: need t_step > 0");

    TailMeasurement tm;
    tm.n = n;
    tm.seed = seed;
    for (double t = 0.0; t <= horizon + 1e-12; t += t_step) tm.times.push_back(t);
    // front advances at most 2 levels per unit of psi-time
    const int kmax = static_cast<int>(std::ceil(2.0 * horizon)) + 2;
    for (int k = 0; k <= kmax; ++k) tm.levels.push_back(k);

    SplitMix64 rng(SplitMix64::derive_stream(seed, 0));
    std::vector<long long> levels(n, 0);
    const uint64_t pairs = uint64_t(n) * (n - 1) / 2;
    uint64_t done = 0;

    auto snapshot = [&]() {
        std::vector<double> row(tm.levels.size(), 0.0);
        for (size_t ki = 0; ki < tm.levels.size(); ++ki) {
            int cnt = 0;
            for (long long lv : levels) cnt += lv >= tm.levels[ki];
            row[ki] = double(cnt) / double(n);
        }
        tm.values.push_back(std::move(row));
    };

    for (double t : tm.times) {
        const auto target = static_cast<uint64_t>(std::floor(t * n + 1e-9));
        while (done < target) {
            auto [i, j] = pair_from_index(rng.next_below(pairs), n);
            if (levels[i] == levels[j]) {
                ++levels[i];
                ++levels[j];
            } else if (levels[i] < levels[j]) {
                ++levels[i];
            } else {
                ++levels[j];
            }
            ++done;
        }
        snapshot();
    }
    return tm;
}

Rat quadratic_drift(const GapState& x) {
    auto lyap = [](const GapState& s) {
        long long v = 0;
        for (int g : s.gaps) v += static_cast<long long>(g) * g;
        return Rat(v);
    };
    Rat drift;
    const Rat base = lyap(x);
    for (const auto& [y, p] : one_step_distribution(x)) drift += p * (lyap(y) - base);
    return drift;
}

double exponential_drift(const GapState& x, double r) {
    require(r > 0 && r <= 1, "exponential_drift: need 0 < r <= 1");
    auto lyap = [r](const GapState& s) {
        double v = 0;
        for (int g : s.gaps) v += std::exp(r * g);
        return v;
    };
    double drift = 0.0;
    const double base = lyap(x);
    for (const auto& [y, p] : one_step_distribution(x))
        drift += p.to_double() * (lyap(y) - base);
    return drift;
}

double exponential_drift_threshold(int n) { return 2.0 * std::log(16.0 * n * n); }

}  // namespace race
