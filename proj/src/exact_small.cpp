#include "race/exact_small.hpp"

#include "race/errors.hpp"

#include <cmath>
#include <string>

namespace race {

StationaryN3 solve_n3() {
    StationaryN3 s{Rat(1, 4), Rat(1, 2), Rat(3, 2)};
    // the closed form must satisfy the balance equations on a window
    for (int k = 0; k <= 24; ++k)
        if (!n3_balance_residual(k).is_zero())
            throw invariant_error("solve_n3: closed form violates balance at k=" +
                                  std::to_string(k));
    return s;
}

Rat n3_stationary_mass(int k) {
    require(k >= 0, "n3_stationary_mass: level must be non-negative");
    if (k == 0) return Rat(1, 4);
    return Rat(3, 1ll << (k + 2));
}

Rat n3_balance_residual(int k) {
    require(k >= 0, "n3_balance_residual: level must be non-negative");
    // inflow: k=0 from 1 (down, 2/3); k=1 from 0 (up, 1) and 2 (down);
    // k>=2 from k-1 (up, 1/3) and k+1 (down, 2/3)
    Rat inflow;
    if (k == 0) {
        inflow = Rat(2, 3) * n3_stationary_mass(1);
    } else if (k == 1) {
        inflow = n3_stationary_mass(0) + Rat(2, 3) * n3_stationary_mass(2);
    } else {
        inflow = Rat(1, 3) * n3_stationary_mass(k - 1) + Rat(2, 3) * n3_stationary_mass(k + 1);
    }
    return n3_stationary_mass(k) - inflow;
}

std::vector<std::pair<std::pair<int, int>, Rat>> n4_kernel(int k, int l) {
    require(k >= 0 && l >= 0, "n4_kernel: state must lie in the quadrant");
    std::vector<std::pair<std::pair<int, int>, Rat>> out;
    if (k == 0 && l == 0) {
        out.push_back({{1, 0}, Rat(1)});
    } else if (l == 0) {
        out.push_back({{k + 1, 0}, Rat(1, 6)});
        out.push_back({{k - 1, 0}, Rat(1, 6)});
        out.push_back({{k - 1, 1}, Rat(2, 3)});
    } else if (k == 0) {
        out.push_back({{0, l - 1}, Rat(1, 2)});
        out.push_back({{1, l}, Rat(1, 2)});
    } else {
        out.push_back({{k + 1, l}, Rat(1, 6)});
        out.push_back({{k, l - 1}, Rat(1, 2)});
        out.push_back({{k - 1, l + 1}, Rat(1, 3)});
    }
    return out;
}

StationaryN4 solve_n4(int truncation, double tol) {
    require(truncation >= 10, "solve_n4: need L >= 10");
    require(tol > 0, "solve_n4: need tol > 0");
    const int L = truncation;
    const size_t side = size_t(L) + 1;
    const size_t cells = side * side;
    std::vector<double> cur(cells, 0.0), nxt(cells);
    auto at = [side](std::vector<double>& v, int k, int l) -> double& {
        return v[size_t(k) * side + l];
    };
    cur[0] = 1.0;

    const long cap = 10'000'000;
    long iter = 0;
    double diff = 1.0;
    // plain power iteration; out-of-box transitions stay at their source
    while (iter < cap) {
        std::fill(nxt.begin(), nxt.end(), 0.0);
        for (int k = 0; k <= L; ++k) {
            for (int l = 0; l <= L; ++l) {
                const double p = cur[size_t(k) * side + l];
                if (p == 0.0) continue;
                auto push = [&](int kk, int ll, double w) {
                    if (kk > L || ll > L)
                        at(nxt, k, l) += p * w;  // reflected back onto the source cell
                    else
                        at(nxt, kk, ll) += p * w;
                };
                if (k == 0 && l == 0) {
                    push(1, 0, 1.0);
                } else if (l == 0) {
                    push(k + 1, 0, 1.0 / 6.0);
                    push(k - 1, 0, 1.0 / 6.0);
                    push(k - 1, 1, 2.0 / 3.0);
                } else if (k == 0) {
                    push(0, l - 1, 0.5);
                    push(1, l, 0.5);
                } else {
                    push(k + 1, l, 1.0 / 6.0);
                    push(k, l - 1, 0.5);
                    push(k - 1, l + 1, 1.0 / 3.0);
                }
            }
        }
        diff = 0.0;  // total-variation change between consecutive iterates
        for (size_t i = 0; i < cells; ++i) diff += std::abs(nxt[i] - cur[i]);
        diff *= 0.5;
        cur.swap(nxt);
        ++iter;
        if (diff < tol) break;
    }
    if (diff >= tol)
        throw convergence_error("solve_n4: power iteration did not reach tolerance", diff);

    StationaryN4 out;
    out.truncation = L;
    out.iterations = iter;
    out.residual = diff;
    out.mass = std::move(cur);
    out.regions = {out.pi(0, 0), 0.0, 0.0, 0.0};
    for (int k = 1; k <= L; ++k) out.regions[1] += out.pi(k, 0);
    for (int l = 1; l <= L; ++l) out.regions[2] += out.pi(0, l);
    for (int k = 1; k <= L; ++k)
        for (int l = 1; l <= L; ++l) out.regions[3] += out.pi(k, l);
    const auto& r = out.regions;
    out.speed = 1.0 + r[0] + r[1] / 3.0 + r[2] / 2.0 + r[3] / 6.0;
    out.balance1 = std::abs(r[0] - 2.0 / 3.0 * r[1] + 0.5 * r[2] - r[3] / 6.0);
    out.balance2 = std::abs(2.0 / 3.0 * r[1] - 0.5 * r[2] - r[3] / 6.0);
    return out;
}

std::pair<Rat, Rat> n4_bounds() { return {Rat(26, 19), Rat(10, 7)}; }

}  // namespace race
