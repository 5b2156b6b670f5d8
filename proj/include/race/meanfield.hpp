#pragma once

#include <string>
#include <vector>

namespace race {

// Which tail hierarchy to integrate:
//   counter_race: phi'_{k+1} = phi_k (phi_k - phi_{k+1})   (phi time; the
//     particle tails follow psi_k(t) = phi_k(2t))
//   power_of_two: u'_{k+1} = u_k^2 - u_{k+1}^2              (own time; the
//     front moves at speed 1, used as a regression baseline)
enum class Hierarchy { counter_race, power_of_two };

struct MeanFieldState {
    Hierarchy kind = Hierarchy::counter_race;
    int levels = 0;    // K
    double dt = 0.0;
    double horizon = 0.0;
    std::vector<double> sample_times;
    std::vector<std::vector<double>> phi;  // phi[k][si], k = 0..K
    std::vector<double> crossing_times;    // first time phi_k = 1/2 (nan if never)

    double phi_at(int k, double t) const;  // linear interpolation in t
    // particle-scale tails: psi_k(t) = phi_k(2t) for the counter-race
    // hierarchy (the stored matrix is phi-time; psi time runs twice as fast)
    double psi_at(int k, double t) const;
    const char* time_scale() const {
        return kind == Hierarchy::counter_race ? "phi" : "native";
    }
};

// Classical fourth-order one-step integration of the triangular hierarchy
// with phi_0 = 1, phi_k(0) = 0 for k >= 1. Levels outside the moving front
// window (phi below 1e-15 or within 1e-15 of saturation) are frozen.
// Throws a step-size error if the level ordering breaks.
MeanFieldState integrate(int levels, double horizon, double dt,
                         Hierarchy kind = Hierarchy::counter_race,
                         double sample_step = 0.1);

struct TailFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int points = 0;
};

struct WaveEstimate {
    std::vector<double> crossing_times;  // native time of the hierarchy
    double spacing_last = 0.0;           // t_{K} - t_{K-1}
    double spacing_drift = 0.0;          // |last spacing change| over the window
    double speed_native = 0.0;           // 1 / extrapolated spacing
    double speed_psi = 0.0;              // psi convention (x2 for counter_race)
    std::vector<double> profile_x;       // wave profile H on an x grid
    std::vector<double> profile_h;
};

// Crossing times of 1/2 by linear interpolation; spacing extrapolated by a
// least-squares fit of spacing ~ a + b/k over the trailing window (default:
// last quarter of crossed levels).
WaveEstimate wave_speed(const MeanFieldState& st, int level_window = 0);

struct TailReport {
    // H -> 0 side: fits of log H and log(-log H) against x
    TailFit left;         // exponential law
    TailFit left_double;  // double-exponential law
    // H -> 1 side: fits of log(1-H) and log(-log(1-H)) against x
    TailFit right_single;
    TailFit right;        // the double-exponential reading
    double h_min = 0;     // sampled dynamic range of the profile
    double h_max = 0;
    bool sufficient_range = false;  // both tails span >= 4 decades
};

// Exploratory: no pass/fail, just the fitted tail laws of the profile.
// The better-fitting law per side announces itself through the r2 values.
TailReport tail_diagnostics(const WaveEstimate& w);

}  // namespace race
