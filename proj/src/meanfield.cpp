#include "race/meanfield.hpp"

#include "race/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace race {

namespace {
constexpr double kFrontCut = 1e-15;

// derivative of levels lo..hi given the vector (phi[0] fixed at 1)
void derivative(Hierarchy kind, const std::vector<double>& u, int lo, int hi,
                std::vector<double>& out) {
    for (int k = lo; k <= hi; ++k) {
        const double above = u[k - 1];
        if (kind == Hierarchy::counter_race)
            out[k] = above * (above - u[k]);
        else
            out[k] = above * above - u[k] * u[k];
    }
}
}  // namespace

double MeanFieldState::phi_at(int k, double t) const {
    const auto& ts = sample_times;
    require(k >= 0 && k <= levels, "phi_at: level out of range");
    require(!ts.empty() && t >= ts.front() - 1e-12 && t <= ts.back() + 1e-12,
            "phi_at: time outside the integrated horizon");
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    if (it == ts.begin()) return phi[k].front();
    if (it == ts.end()) return phi[k].back();
    const size_t hi = size_t(it - ts.begin());
    const size_t lo = hi - 1;
    const double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
    return (1 - w) * phi[k][lo] + w * phi[k][hi];
}

double MeanFieldState::psi_at(int k, double t) const {
    require(kind == Hierarchy::counter_race, "psi_at: psi time applies to the race hierarchy");
    return phi_at(k, 2.0 * t);
}

MeanFieldState integrate(int levels, double horizon, double dt, Hierarchy kind,
                         double sample_step) {
    require(levels >= 2, "integrate: need K >= 2");
    require(horizon > 0 && dt > 0, "integrate: need T > 0 and dt > 0");
    require(sample_step >= dt, "integrate: sample_step must be at least dt");

    MeanFieldState st;
    st.kind = kind;
    st.levels = levels;
    st.dt = dt;
    st.horizon = horizon;
    st.crossing_times.assign(levels + 1, std::numeric_limits<double>::quiet_NaN());
    st.crossing_times[0] = 0.0;

    std::vector<double> u(levels + 1, 0.0), k1(levels + 1), k2(levels + 1), k3(levels + 1),
        k4(levels + 1), tmp(levels + 1);
    u[0] = 1.0;

    const long steps = std::lround(horizon / dt);
    const long stride = std::max(1l, std::lround(sample_step / dt));
    int lo = 1, hi = 1;  // active window: lo..hi integrate, below lo saturated

    auto sample = [&](double t) {
        st.sample_times.push_back(t);
        for (int k = 0; k <= levels; ++k) {
            if (st.phi.size() <= size_t(k)) st.phi.emplace_back();
            st.phi[k].push_back(u[k]);
        }
    };
    sample(0.0);

    for (long s = 0; s < steps; ++s) {
        const double t = double(s) * dt;
        // RK4 over the active window. The stages reach three levels past
        // the last one above the cut, so a step here matches the unwindowed
        // step to within the cut; the frozen boundary value u[lo-1] feeds
        // the first active level.
        const int he = std::min(levels, hi + 2);
        derivative(kind, u, lo, he, k1);
        tmp = u;
        for (int k = lo; k <= he; ++k) tmp[k] = u[k] + 0.5 * dt * k1[k];
        derivative(kind, tmp, lo, he, k2);
        for (int k = lo; k <= he; ++k) tmp[k] = u[k] + 0.5 * dt * k2[k];
        derivative(kind, tmp, lo, he, k3);
        for (int k = lo; k <= he; ++k) tmp[k] = u[k] + dt * k3[k];
        derivative(kind, tmp, lo, he, k4);
        for (int k = lo; k <= he; ++k) {
            const double prev = u[k];
            u[k] += dt / 6.0 * (k1[k] + 2.0 * (k2[k] + k3[k]) + k4[k]);
            if (prev < 0.5 && u[k] >= 0.5)
                st.crossing_times[k] = t + dt * (0.5 - prev) / (u[k] - prev);
        }
        for (int k = lo; k <= he; ++k) {
            if (!(u[k] >= -1e-9 && u[k] <= 1.0 + 1e-9))
                throw convergence_error(
                    "integrate: level left [0,1], reduce the step size", u[k]);
            if (k < he && u[k + 1] > u[k] + 1e-12)
                throw convergence_error(
                    "integrate: level ordering violated, reduce the step size",
                    u[k + 1] - u[k]);
        }
        while (hi < levels && u[hi] > kFrontCut) ++hi;
        while (lo < hi && 1.0 - u[lo] < kFrontCut) ++lo;
        if ((s + 1) % stride == 0 || s + 1 == steps) sample(double(s + 1) * dt);
    }
    return st;
}

namespace {

TailFit line_fit(const std::vector<double>& x, const std::vector<double>& y) {
    TailFit f;
    f.points = int(x.size());
    if (x.size() < 2) return f;
    const double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        ss_res += r * r;
    }
    f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

}  // namespace

WaveEstimate wave_speed(const MeanFieldState& st, int level_window) {
    WaveEstimate w;
    w.crossing_times = st.crossing_times;
    int last = st.levels;
    while (last >= 1 && std::isnan(st.crossing_times[last])) --last;
    require(last >= 8, "wave_speed: front not developed, increase the horizon");

    if (level_window <= 0) level_window = std::max(4, last / 4);
    const int k_lo = std::max(1, last - level_window + 1);

    // spacings converge like a + b/k; extrapolate a
    std::vector<double> xs, ys;
    for (int k = k_lo; k <= last; ++k) {
        xs.push_back(1.0 / double(k));
        ys.push_back(st.crossing_times[k] - st.crossing_times[k - 1]);
    }
    const TailFit fit = line_fit(xs, ys);
    const double spacing = fit.intercept;
    w.spacing_last = ys.back();
    w.spacing_drift = std::abs(ys.back() - ys[ys.size() - 2]);
    w.speed_native = 1.0 / spacing;
    w.speed_psi = st.kind == Hierarchy::counter_race ? 2.0 * w.speed_native : w.speed_native;

    // profile H(x) = phi_k(t*) against x = c t* - k, sampled while the
    // front still has ~50 levels of room above it so both tails resolve
    const int k_ref = std::max(8, last - 50);
    double t_star = st.crossing_times[k_ref];
    if (std::isnan(t_star) || t_star > st.sample_times.back())
        t_star = st.sample_times.back();
    auto it = std::lower_bound(st.sample_times.begin(), st.sample_times.end(), t_star);
    const size_t si = std::min<size_t>(it - st.sample_times.begin(),
                                       st.sample_times.size() - 1);
    t_star = st.sample_times[si];
    for (int k = 1; k <= st.levels; ++k) {
        const double h = st.phi[k][si];
        if (h <= 0.0) break;
        w.profile_x.push_back(w.speed_native * t_star - double(k));
        w.profile_h.push_back(h);
    }
    std::reverse(w.profile_x.begin(), w.profile_x.end());
    std::reverse(w.profile_h.begin(), w.profile_h.end());
    return w;
}

TailReport tail_diagnostics(const WaveEstimate& w) {
    TailReport rep;
    require(!w.profile_h.empty(), "tail_diagnostics: empty profile");
    rep.h_min = 1.0;
    rep.h_max = 0.0;
    for (double h : w.profile_h) {
        if (h > 0) rep.h_min = std::min(rep.h_min, h);
        rep.h_max = std::max(rep.h_max, h);
    }
    std::vector<double> lx, l_log, l_loglog, rx, r_log, r_loglog;
    for (size_t i = 0; i < w.profile_h.size(); ++i) {
        const double h = w.profile_h[i];
        if (h > std::max(rep.h_min * 2, 1e-280) && h < 1e-2) {
            lx.push_back(w.profile_x[i]);
            l_log.push_back(std::log(h));
            l_loglog.push_back(std::log(-std::log(h)));
        }
        // below ~1e-10 the saturated side stalls at the rounding floor of
        // values near one, so the window stays above it
        // TODO: carry 1-phi in a compensated variable to push this floor down
        const double q = 1.0 - h;
        if (q > 1e-10 && q < 1e-2) {
            rx.push_back(w.profile_x[i]);
            r_log.push_back(std::log(q));
            r_loglog.push_back(std::log(-std::log1p(-h)));
        }
    }
    rep.left = line_fit(lx, l_log);
    rep.left_double = line_fit(lx, l_loglog);
    rep.right_single = line_fit(rx, r_log);
    rep.right = line_fit(rx, r_loglog);
    rep.sufficient_range = rep.h_min < 1e-4 && 1.0 - rep.h_max < 1e-4;
    return rep;
}

}  // namespace race
