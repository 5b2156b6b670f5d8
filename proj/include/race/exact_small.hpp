#pragma once

#include "race/rational.hpp"

#include <array>
#include <utility>
#include <vector>

namespace race {

// N = 3: the gap X to the lowest counter is a reflected walk with
// P(0 -> 1) = 1, P(k -> k+1) = 1/3, P(k -> k-1) = 2/3.
struct StationaryN3 {
    Rat pi0;        // 1/4
    Rat tail_rate;  // pi(k+1)/pi(k) = 1/2 for k >= 1
    Rat speed;      // 2 pi0 + (4/3)(1 - pi0) = 3/2
};

StationaryN3 solve_n3();

// pi(0) = 1/4, pi(k) = 3 / 2^(k+2)
Rat n3_stationary_mass(int k);

// pi(k) - (flow into k); identically zero for the closed form.
Rat n3_balance_residual(int k);

// N = 4: transition kernel of the reflected walk (X1, X2) at (k, l),
// exact probabilities.
std::vector<std::pair<std::pair<int, int>, Rat>> n4_kernel(int k, int l);

struct StationaryN4 {
    int truncation = 0;       // L
    std::vector<double> mass;  // (L+1) x (L+1), row-major over (k, l)
    std::array<double, 4> regions{};  // Pi_0..Pi_3
    double speed = 0.0;        // 1 + Pi0 + Pi1/3 + Pi2/2 + Pi3/6
    double residual = 0.0;     // total-variation |piP - pi| at convergence
    double balance1 = 0.0;     // |Pi0 - (2/3)Pi1 + (1/2)Pi2 - (1/6)Pi3|
    double balance2 = 0.0;     // |(2/3)Pi1 - (1/2)Pi2 - (1/6)Pi3|
    long iterations = 0;

    double pi(int k, int l) const { return mass[size_t(k) * (truncation + 1) + l]; }
};

// Power iteration on the L x L truncation; probability leaving the box is
// kept at its source cell. Throws convergence_error past the iteration cap.
StationaryN4 solve_n4(int truncation, double tol);

// (26/19, 10/7)
std::pair<Rat, Rat> n4_bounds();

}  // namespace race
