// Command-line front end: run experiments and emit machine-readable records
// for every quantity the library computes.
#include "race/bounds.hpp"
#include "race/config_algebra.hpp"
#include "race/dynamics.hpp"
#include "race/errors.hpp"
#include "race/exact_small.hpp"
#include "race/lp_opt.hpp"
#include "race/meanfield.hpp"
#include "race/rng.hpp"
#include "race/serialize.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace {

using race::json;

struct Output {
    std::string path;
    std::string format = "json";  // json | csv | tsv
    std::ostringstream buf;

    char table_sep() const { return format == "tsv" ? '\t' : ','; }

    template <typename T>
    Output& operator<<(const T& v) {
        buf << v;
        return *this;
    }
    int flush() {
        if (path.empty()) {
            std::cout << buf.str();
            return 0;
        }
        std::ofstream f(path);
        if (!f) {
            std::cerr << "cannot open output path: " << path << "\n";
            return 2;
        }
        f << buf.str();
        return 0;
    }
};

// one record: JSON line by default, or a key line plus a value line when
// csv/tsv is requested (nested values stay JSON-encoded inside their cell)
void emit_record(Output& out, const json& j) {
    if (out.format == "json") {
        out << j.dump() << "\n";
        return;
    }
    const char sep = out.table_sep();
    std::string keys, values;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!keys.empty()) {
            keys += sep;
            values += sep;
        }
        keys += it.key();
        std::string cell =
            it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
        if (sep == ',' && cell.find(',') != std::string::npos) cell = '"' + cell + '"';
        values += cell;
    }
    out << keys << "\n" << values << "\n";
}

uint64_t default_seed() {
    if (const char* env = std::getenv("COUNTER_RACE_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            std::cerr << "ignoring unparsable COUNTER_RACE_SEED\n";
        }
    }
    return 12345;
}

uint64_t as_count(double v, const char* what) {
    race::require(v >= 0 && v <= 9.2e18, std::string(what) + " out of range");
    return static_cast<uint64_t>(v);
}

int cmd_simulate(int n, double steps_d, double burn_d, uint64_t seed, int replicas,
                 int threads, Output& out) {
    race::require(n >= 2, "simulate: need N >= 2");
    race::require(replicas >= 1, "simulate: need at least one replica");
    const uint64_t steps = as_count(steps_d, "steps");
    race::require(steps >= 1, "simulate: need steps >= 1");
    const uint64_t burn = burn_d < 0 ? race::default_burn_in(n) : as_count(burn_d, "burn-in");
    std::vector<race::SpeedEstimate> est(replicas);
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    std::exception_ptr worker_error;
    std::mutex error_mutex;
    const int workers = std::max(1, std::min(threads, replicas));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            try {
                for (int r; (r = next.fetch_add(1)) < replicas;)
                    est[r] = race::simulate_speed(n, steps, burn,
                                                  race::SplitMix64::derive_stream(seed, r));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!worker_error) worker_error = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    if (worker_error) std::rethrow_exception(worker_error);

    double pooled = 0, var = 0;
    for (int r = 0; r < replicas; ++r) {
        json j = race::to_json(est[r]);
        j["n"] = n;
        j["replica"] = r;
        emit_record(out, j);
        pooled += est[r].mean;
        var += est[r].std_error * est[r].std_error;
    }
    pooled /= replicas;
    json j{{"n", n},
           {"pooled_mean", pooled},
           {"pooled_stderr", std::sqrt(var) / replicas},
           {"replicas", replicas},
           {"seed", seed}};
    emit_record(out, j);
    return 0;
}

int cmd_bounds(int n, bool asymptotic, long grid, Output& out) {
    if (asymptotic) {
        emit_record(out, race::to_json(race::asymptotic_upper()));
        race::LowerOptimum lo = race::lower_bound_optimize(grid);
        race::BoundReport r = race::asymptotic_lower(grid);
        json j = race::to_json(r);
        j["grid_b"] = lo.grid_b;
        j["grid_value"] = lo.grid_value;
        j["analytic_b"] = lo.analytic_b;
        emit_record(out, j);
        return 0;
    }
    if (n < 5) {
        std::cerr << "finite bounds start at N = 5; N = 3, 4 are solved exactly "
                     "(see the `exact` command)\n";
        return 2;
    }
    race::BoundReport r = race::finite_upper_bound(n);
    json j = race::to_json(r);
    j["remark_closed_form"] = race::remark_upper_bound(n).to_string();
    emit_record(out, j);
    json table = json::object();
    for (const auto& [tag, s] : race::appendix_a_table(n)) table[tag] = s.to_string();
    emit_record(out, json{{"n", n}, {"appendix_s_values", table}});
    return 0;
}

int cmd_exact(int n, int big_l, double tol, Output& out) {
    if (n == 3) {
        race::StationaryN3 s = race::solve_n3();
        emit_record(out, race::to_json(s));
        return 0;
    }
    if (n == 4) {
        race::StationaryN4 s = race::solve_n4(big_l, tol);
        json j = race::to_json(s);
        auto [lo, hi] = race::n4_bounds();
        j["lower"] = lo.to_string();
        j["upper"] = hi.to_string();
        emit_record(out, j);
        return 0;
    }
    std::cerr << "exact solves exist for N = 3 and N = 4 only\n";
    return 2;
}

int cmd_lp(int n, Output& out) {
    race::LpProblem p = race::build_lp(n);
    race::LpSolution s = race::solve_lp(p);
    json j = race::to_json(s);
    j["n"] = n;
    j["constraints"] = p.constraints.size();
    if (s.status == race::LpStatus::optimal && s.h_values.size() >= 3) {
        race::ParabolaFit fit = race::fit_parabola(s.h_values);
        j["parabola"] = {{"a", fit.a}, {"b", fit.b}, {"c", fit.c}, {"rms", fit.rms}};
    }
    emit_record(out, j);
    return 0;
}

int cmd_table3(int n_max, Output& out) {
    const char sep = out.table_sep();
    out << "N";
    for (int k = 1; k <= n_max - 2; ++k) out << sep << "f(" << k << ")";
    out << sep << "bound\n";
    for (int n = 4; n <= n_max; ++n) {
        race::LpSolution s = race::solve_lp(race::build_lp(n));
        out << n;
        char cell[32];
        for (int k = 0; k < n_max - 2; ++k) {
            if (k < int(s.h_values.size())) {
                std::snprintf(cell, sizeof cell, "%.2f", s.h_values[k]);
                out << sep << cell;
            } else {
                out << sep;
            }
        }
        std::snprintf(cell, sizeof cell, "%.2f", s.bound);
        out << sep << cell << "\n";
    }
    return 0;
}

int cmd_table4(double steps_d, uint64_t seed, Output& out) {
    const uint64_t steps = as_count(steps_d, "steps");
    std::vector<double> theoretical, numerical, simulated;
    for (int n = 4; n <= 16; ++n) {
        theoretical.push_back(n == 4 ? race::exhaustive_upper_bound(4).to_double()
                                     : race::finite_upper_bound(n).value);
        numerical.push_back(race::solve_lp(race::build_lp(n)).bound);
        simulated.push_back(
            race::simulate_speed(n, steps, race::default_burn_in(n), seed).mean);
    }
    const char sep = out.table_sep();
    out << "row";
    for (int n = 4; n <= 16; ++n) out << sep << n;
    out << "\n";
    auto row = [&](const char* name, const std::vector<double>& v, const char* fmt) {
        out << name;
        char cell[32];
        for (double x : v) {
            std::snprintf(cell, sizeof cell, fmt, x);
            out << sep << cell;
        }
        out << "\n";
    };
    row("theoretical_bound", theoretical, "%.4f");
    row("numerical_bound", numerical, "%.4f");
    row("simulated_velocity", simulated, "%.4f");
    return 0;
}

int cmd_meanfield(int levels, double horizon, double dt, bool power2,
                  const std::vector<int>& curves, Output& out) {
    const race::Hierarchy kind =
        power2 ? race::Hierarchy::power_of_two : race::Hierarchy::counter_race;
    race::MeanFieldState st = race::integrate(levels, horizon, dt, kind);
    if (!curves.empty()) {  // plot data: t column then one column per level
        out << "t";
        for (int k : curves) out << "\tphi_" << k;
        out << "\n";
        for (size_t si = 0; si < st.sample_times.size(); ++si) {
            out << st.sample_times[si];
            for (int k : curves) {
                race::require(k >= 0 && k <= levels, "curve level out of range");
                out << "\t" << st.phi[k][si];
            }
            out << "\n";
        }
        return 0;
    }
    race::WaveEstimate w = race::wave_speed(st);
    json j = race::to_json(w);
    j["hierarchy"] = power2 ? "power_of_two" : "counter_race";
    j["time_scale"] = st.time_scale();
    j["levels"] = levels;
    j["dt"] = dt;
    j["horizon"] = horizon;
    race::TailReport tails = race::tail_diagnostics(w);
    auto fit_json = [](const race::TailFit& f) {
        return json{{"slope", f.slope}, {"r2", f.r2}, {"points", f.points}};
    };
    j["tails"] = {{"left_log", fit_json(tails.left)},
                  {"left_loglog", fit_json(tails.left_double)},
                  {"right_log", fit_json(tails.right_single)},
                  {"right_loglog", fit_json(tails.right)},
                  {"sufficient_range", tails.sufficient_range}};
    emit_record(out, j);
    return 0;
}

int cmd_drift(int n, int samples, uint64_t seed, Output& out) {
    race::SplitMix64 rng(race::SplitMix64::derive_stream(seed, 7));
    const auto quad_radius = static_cast<int>(std::ceil(race::quadratic_drift_threshold(n)));
    const auto exp_radius = static_cast<int>(std::ceil(race::exponential_drift_threshold(n)));
    double worst_quad = -1e300, worst_exp = -1e300;
    for (int s = 0; s < samples; ++s) {
        for (int mode = 0; mode < 2; ++mode) {
            const int radius = mode == 0 ? quad_radius : exp_radius;
            race::GapState x;
            x.gaps.resize(n - 2);
            for (int& g : x.gaps) g = static_cast<int>(rng.next_below(radius + 1));
            x.gaps[rng.next_below(n - 2)] = radius + 1 + static_cast<int>(rng.next_below(40));
            if (mode == 0) {
                worst_quad = std::max(worst_quad, race::quadratic_drift(x).to_double());
            } else {
                worst_exp = std::max(worst_exp, race::exponential_drift(x, 0.5));
            }
        }
    }
    const bool certified = worst_quad <= -1.0 && worst_exp <= -1.0;
    json j{{"n", n},
           {"samples", samples},
           {"seed", seed},
           {"quadratic_threshold", quad_radius},
           {"exponential_threshold", exp_radius},
           {"worst_quadratic_drift", worst_quad},
           {"worst_exponential_drift", worst_exp},
           {"certified", certified}};
    emit_record(out, j);
    if (!certified) {
        std::cerr << "drift exceeded -1 beyond a Lyapunov threshold (the exponential "
                     "bound fails on deep sandwiched gaps; the quadratic one holds)\n";
        return 4;
    }
    return 0;
}

int cmd_tails(int n, double horizon, double t_step, uint64_t seed, Output& out) {
    emit_record(out, race::to_json(race::empirical_tails(n, horizon, seed, t_step)));
    return 0;
}

int cmd_cases(int n, int l, Output& out) {
    // Table of per-case expected increments at a level junction l_i = l,
    // exact rationals, one row per (alpha_{i+1}, alpha_i) case. Positions a
    // case does not define are printed as "-".
    race::require(l >= 5, "cases: need junction l >= 5 to embed every case");
    race::require(n >= l + 4, "cases: need N >= l + 4");
    const char sep = out.table_sep();
    out << "case" << sep << "alpha_ip1" << sep << "alpha_i" << sep << "E[dX_" << l - 1 << "]"
        << sep << "E[dX_" << l << "]" << sep << "E[dX_" << l + 1 << "]\n";
    const int sizes[3] = {3, 2, 1};
    int id = 1;
    for (int low : sizes) {
        for (int up : sizes) {
            // l - up counters on top, the case pair at the junction, then
            // singletons; the singleton tail never touches the printed
            // positions
            std::vector<int> alpha{l - up, up, low};
            for (int i = 0; i < n - l - low; ++i) alpha.push_back(1);
            auto inc = race::expected_increments(race::Configuration::of(alpha));
            out << "(" << id++ << ")" << sep << (low == 3 ? ">=3" : std::to_string(low))
                << sep << (up == 3 ? ">=3" : std::to_string(up));
            for (int pos = l - 1; pos <= l + 1; ++pos) {
                if (pos > l - 2 + low) {  // outside this level's variables
                    out << sep << "-";
                    continue;
                }
                auto it = inc.find(pos);
                out << sep << (it == inc.end() ? "0" : it->second.to_string());
            }
            out << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"counter race process laboratory"};
    app.require_subcommand(1);
    app.fallthrough();  // --out may follow the subcommand
    Output out;
    app.add_option("--out", out.path, "write output to a file instead of stdout");
    app.add_option("--format", out.format, "json, csv or tsv")
        ->check(CLI::IsMember({"json", "csv", "tsv"}));

    uint64_t seed = default_seed();
    int n = 5, replicas = 1, threads = int(std::thread::hardware_concurrency());
    double steps = 1e6, burn = -1;

    auto* sim = app.add_subcommand("simulate", "Monte Carlo speed estimate");
    sim->add_option("--n", n, "number of counters")->required();
    sim->add_option("--steps", steps, "steps per replica (post burn-in)");
    sim->add_option("--burn-in", burn, "burn-in steps (default 100 N C(N,2))");
    sim->add_option("--seed", seed, "base seed");
    sim->add_option("--replicas", replicas, "independent replicas");
    sim->add_option("--threads", threads, "worker threads");

    bool asymptotic = false;
    long grid = 2000;
    auto* bnd = app.add_subcommand("bounds", "speed bounds from test functions");
    bnd->add_option("--n", n, "number of counters");
    bnd->add_flag("--asymptotic", asymptotic, "the two limit theorems");
    bnd->add_option("--lower-grid", grid, "grid resolution for the lower-bound search");

    int big_l = 200;
    double tol = 1e-12;
    auto* exa = app.add_subcommand("exact", "exact small-N stationary analysis");
    exa->add_option("--n", n, "3 or 4")->required();
    exa->add_option("--L", big_l, "truncation radius for N=4");
    exa->add_option("--tol", tol, "solver tolerance");

    auto* lp = app.add_subcommand("lp", "optimal test function by linear programming");
    lp->add_option("--n", n, "number of counters")->required();

    int n_max = 16;
    auto* t3 = app.add_subcommand("table3", "optimal test functions, CSV");
    t3->add_option("--n-max", n_max, "largest N");

    auto* t4 = app.add_subcommand("table4", "bounds vs simulation comparison, CSV");
    t4->add_option("--steps", steps, "simulation steps per N");
    t4->add_option("--seed", seed, "simulation seed");

    int levels = 200;
    double horizon = 400, dt = 1e-3;
    bool power2 = false;
    std::vector<int> curves;
    auto* mf = app.add_subcommand("meanfield", "tail hierarchy integration and wave speed");
    mf->add_option("--k", levels, "number of levels");
    mf->add_option("--t", horizon, "integration horizon");
    mf->add_option("--dt", dt, "step size");
    mf->add_flag("--power-of-2", power2, "integrate the power-of-two baseline");
    mf->add_option("--curves", curves, "emit phi_k(t) plot data for these levels (TSV)")
        ->delimiter(',');

    int samples = 1000;
    auto* dr = app.add_subcommand("drift", "Foster-Lyapunov drift verification");
    dr->add_option("--n", n, "number of counters")->required();
    dr->add_option("--samples", samples, "states sampled beyond each threshold");
    dr->add_option("--seed", seed, "sampling seed");

    double t_step = 0.5;
    auto* tl = app.add_subcommand("tails", "empirical level-occupancy tails");
    tl->add_option("--n", n, "number of counters")->required();
    tl->add_option("--horizon", horizon, "psi-time horizon");
    tl->add_option("--t-step", t_step, "snapshot spacing");
    tl->add_option("--seed", seed, "seed");

    int junction = 3;
    auto* cs = app.add_subcommand("cases", "per-case expected increments, CSV");
    cs->add_option("--n", n, "number of counters")->required();
    cs->add_option("--l", junction, "junction position l_i");

    CLI11_PARSE(app, argc, argv);

    try {
        int rc = 0;
        if (sim->parsed())
            rc = cmd_simulate(n, steps, burn, seed, replicas, threads, out);
        else if (bnd->parsed())
            rc = cmd_bounds(n, asymptotic, grid, out);
        else if (exa->parsed())
            rc = cmd_exact(n, big_l, tol, out);
        else if (lp->parsed())
            rc = cmd_lp(n, out);
        else if (t3->parsed())
            rc = cmd_table3(n_max, out);
        else if (t4->parsed())
            rc = cmd_table4(steps, seed, out);
        else if (mf->parsed())
            rc = cmd_meanfield(levels, horizon, dt, power2, curves, out);
        else if (dr->parsed())
            rc = cmd_drift(n, samples, seed, out);
        else if (tl->parsed())
            rc = cmd_tails(n, horizon, t_step, seed, out);
        else if (cs->parsed())
            rc = cmd_cases(n, junction, out);
        const int frc = out.flush();
        return rc != 0 ? rc : frc;
    } catch (const race::contract_error& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const race::convergence_error& e) {
        std::cerr << "convergence failure: " << e.what() << " (residual " << e.residual
                  << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}
