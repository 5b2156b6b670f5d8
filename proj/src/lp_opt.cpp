#include "race/lp_opt.hpp"

#include "race/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace race {

std::vector<Configuration> enumerate_configurations(int n) {
    require(n >= 3, "enumerate_configurations: need N >= 3");
    require(n <= 20, "enumerate_configurations: full enumeration capped at N = 20; "
                     "use the reduced candidate set beyond that");
    std::vector<Configuration> out;
    std::vector<int> parts;
    std::function<void(int, int)> rec = [&](int rest, int min_first) {
        if (rest == 0) {
            out.push_back(Configuration::of(parts));
            return;
        }
        for (int a = min_first; a <= rest; ++a) {
            if (rest - a == 0 || rest - a >= 1) {
                parts.push_back(a);
                rec(rest - a, 1);
                parts.pop_back();
            }
        }
    };
    rec(n, 2);
    return out;
}

LpProblem build_lp_from(int n, const std::vector<Configuration>& configs) {
    LpProblem p;
    p.n = n;
    p.n_vars = n - 1;
    p.configs = configs;
    for (const auto& c : configs) {
        LpConstraint row;
        row.coeff.assign(p.n_vars, Rat(0));
        for (const auto& [pos, e] : expected_increments(c)) row.coeff[pos - 1] = e;
        row.coeff[p.n_vars - 1] = Rat(1);  // the bound variable v
        row.rhs = v_alpha(c);
        p.constraints.push_back(std::move(row));
    }
    return p;
}

LpProblem build_lp(int n) {
    require(n >= 4, "build_lp: need N >= 4");
    return build_lp_from(n, enumerate_configurations(n));
}

namespace {

// field plumbing so the same simplex body serves Rat and double
inline bool fpos(const Rat& x) { return x.sign() > 0; }
inline bool fneg(const Rat& x) { return x.sign() < 0; }
inline bool fpos(double x) { return x > 1e-9; }
inline bool fneg(double x) { return x < -1e-9; }
inline Rat fconv(const Rat& x, const Rat*) { return x; }
inline double fconv(const Rat& x, const double*) { return x.to_double(); }

// Revised primal simplex on: maximize c . y  s.t.  A y = b, y >= 0.
// Columns with index >= ncols are artificials (unit columns, phase 1 only).
template <typename T>
class StandardSimplex {
public:
    StandardSimplex(const LpProblem& p) : rows_(p.n_vars), ncols_(int(p.constraints.size())) {
        cols_.resize(ncols_);
        c_.resize(ncols_);
        for (int j = 0; j < ncols_; ++j) {
            cols_[j].reserve(rows_);
            for (int i = 0; i < rows_; ++i)
                cols_[j].push_back(fconv(p.constraints[j].coeff[i], (T*)nullptr));
            c_[j] = fconv(p.constraints[j].rhs, (T*)nullptr);
        }
        b_.assign(rows_, T(0));
        b_[rows_ - 1] = T(1);  // gradient of the primal objective (min v)
    }

    int artificial_row(int j) const { return j - ncols_; }
    bool is_artificial(int j) const { return j >= ncols_; }

    T column_entry(int j, int i) const {
        if (is_artificial(j)) return artificial_row(j) == i ? T(1) : T(0);
        return cols_[j][i];
    }

    std::vector<T> apply_binv(int j) const {  // B^{-1} A_j
        std::vector<T> d(rows_, T(0));
        if (is_artificial(j)) {
            int r = artificial_row(j);
            for (int i = 0; i < rows_; ++i) d[i] = binv_[i][r];
            return d;
        }
        for (int i = 0; i < rows_; ++i) {
            T acc(0);
            for (int k = 0; k < rows_; ++k) {
                if (!(binv_[i][k] == T(0)) && !(cols_[j][k] == T(0)))
                    acc += binv_[i][k] * cols_[j][k];
            }
            d[i] = acc;
        }
        return d;
    }

    void pivot(int leave_row, int enter, const std::vector<T>& d) {
        const T piv = d[leave_row];
        for (int k = 0; k < rows_; ++k) binv_[leave_row][k] /= piv;
        xb_[leave_row] /= piv;
        for (int i = 0; i < rows_; ++i) {
            if (i == leave_row || d[i] == T(0)) continue;
            const T f = d[i];
            for (int k = 0; k < rows_; ++k) binv_[i][k] -= f * binv_[leave_row][k];
            xb_[i] -= f * xb_[leave_row];
        }
        basis_[leave_row] = enter;
    }

    // objective coefficient under the active phase
    T phase_cost(int j, bool phase1) const {
        if (phase1) return is_artificial(j) ? T(-1) : T(0);
        return is_artificial(j) ? T(0) : c_[j];
    }

    std::vector<T> duals(bool phase1) const {
        std::vector<T> pi(rows_, T(0));
        for (int i = 0; i < rows_; ++i) {
            const T ci = phase_cost(basis_[i], phase1);
            if (ci == T(0)) continue;
            for (int k = 0; k < rows_; ++k) pi[k] += ci * binv_[i][k];
        }
        return pi;
    }

    // bland = true: smallest improving index (guaranteed finite);
    // bland = false: steepest reduced cost.
    LpStatus run(bool phase1, bool bland, long cap, long& iters) {
        while (iters < cap) {
            const std::vector<T> pi = duals(phase1);
            int enter = -1;
            T best_rc(0);
            const int total = ncols_ + (phase1 ? rows_ : 0);
            for (int j = 0; j < total; ++j) {
                if (!phase1 && is_artificial(j)) continue;
                T rc = phase_cost(j, phase1);
                if (is_artificial(j)) {
                    rc -= pi[artificial_row(j)];
                } else {
                    for (int k = 0; k < rows_; ++k)
                        if (!(cols_[j][k] == T(0))) rc -= pi[k] * cols_[j][k];
                }
                if (fpos(rc)) {
                    if (bland) {
                        enter = j;
                        break;
                    }
                    if (enter < 0 || best_rc < rc) {
                        enter = j;
                        best_rc = rc;
                    }
                }
            }
            if (enter < 0) return LpStatus::optimal;
            const std::vector<T> d = apply_binv(enter);
            int leave = -1;
            for (int i = 0; i < rows_; ++i) {
                if (!fpos(d[i])) continue;
                if (leave < 0) {
                    leave = i;
                    continue;
                }
                const T lhs = xb_[i] * d[leave];
                const T rhs = xb_[leave] * d[i];
                if (lhs < rhs || (lhs == rhs && basis_[i] < basis_[leave])) leave = i;
            }
            if (leave < 0) return LpStatus::unbounded;
            pivot(leave, enter, d);
            ++iters;
        }
        throw invariant_error("simplex: iteration cap reached");
    }

    void start_with_artificials() {
        basis_.resize(rows_);
        for (int i = 0; i < rows_; ++i) basis_[i] = ncols_ + i;
        binv_.assign(rows_, std::vector<T>(rows_, T(0)));
        for (int i = 0; i < rows_; ++i) binv_[i][i] = T(1);
        xb_ = b_;
    }

    bool artificials_cleared() const {
        for (int i = 0; i < rows_; ++i)
            if (is_artificial(basis_[i]) && fpos(xb_[i])) return false;
        return true;
    }

    // exact warm start from a candidate basis; false when the basis is
    // singular or infeasible
    bool try_warm_start(const std::vector<int>& basis) {
        if (int(basis.size()) != rows_) return false;
        std::vector<std::vector<T>> m(rows_, std::vector<T>(2 * rows_, T(0)));
        for (int i = 0; i < rows_; ++i) {
            for (int r = 0; r < rows_; ++r) m[r][i] = column_entry(basis[i], r);
            m[i][rows_ + i] = T(1);
        }
        for (int col = 0; col < rows_; ++col) {  // Gauss-Jordan
            int piv = -1;
            for (int r = col; r < rows_; ++r)
                if (!(m[r][col] == T(0))) {
                    piv = r;
                    break;
                }
            if (piv < 0) return false;
            std::swap(m[col], m[piv]);
            const T p = m[col][col];
            for (int k = col; k < 2 * rows_; ++k) m[col][k] /= p;
            for (int r = 0; r < rows_; ++r) {
                if (r == col || m[r][col] == T(0)) continue;
                const T f = m[r][col];
                for (int k = col; k < 2 * rows_; ++k) m[r][k] -= f * m[col][k];
            }
        }
        binv_.assign(rows_, std::vector<T>(rows_, T(0)));
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < rows_; ++k) binv_[i][k] = m[i][rows_ + k];
        xb_.assign(rows_, T(0));
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < rows_; ++k) xb_[i] += binv_[i][k] * b_[k];
        for (int i = 0; i < rows_; ++i)
            if (fneg(xb_[i])) return false;
        // a leftover artificial must sit at exactly zero, else the basis
        // solves a perturbed system
        for (int i = 0; i < rows_; ++i)
            if (is_artificial(basis[i]) && !(xb_[i] == T(0))) return false;
        basis_ = basis;
        return true;
    }

    const std::vector<int>& basis() const { return basis_; }
    const std::vector<T>& basic_values() const { return xb_; }

    int rows_, ncols_;
    std::vector<std::vector<T>> cols_;
    std::vector<T> b_, c_;
    std::vector<int> basis_;
    std::vector<std::vector<T>> binv_;
    std::vector<T> xb_;
};

LpSolution finish_exact(const LpProblem& p, StandardSimplex<Rat>& sx, long& iters) {
    LpStatus st = sx.run(false, true, 2'000'000, iters);
    if (st != LpStatus::optimal) {
        LpSolution out;
        // the solver works on the dual: an unbounded dual means an
        // infeasible primal
        out.status = LpStatus::infeasible;
        out.iterations = iters;
        return out;
    }
    LpSolution out;
    out.status = LpStatus::optimal;
    out.iterations = iters;
    const std::vector<Rat> u = sx.duals(false);  // optimal (h, v)
    out.h_exact.assign(u.begin(), u.end() - 1);
    out.bound_exact = u.back();
    out.bound = out.bound_exact.to_double();
    for (const Rat& h : out.h_exact) out.h_values.push_back(h.to_double());
    for (int i = 0; i < sx.rows_; ++i)
        if (!sx.is_artificial(sx.basis()[i])) out.active_set.push_back(sx.basis()[i]);
    std::sort(out.active_set.begin(), out.active_set.end());

    // exact feasibility recheck of the returned vertex, no tolerance
    out.exact_verified = true;
    for (const auto& row : p.constraints) {
        Rat lhs(0);
        for (int k = 0; k < p.n_vars - 1; ++k)
            if (!row.coeff[k].is_zero()) lhs += row.coeff[k] * out.h_exact[k];
        lhs += out.bound_exact;
        if (lhs < row.rhs) {
            out.exact_verified = false;
            break;
        }
    }
    if (!out.exact_verified)
        throw invariant_error("solve_lp: exact verification failed at the returned vertex");
    return out;
}

}  // namespace

LpSolution solve_lp(const LpProblem& p) {
    require(p.n_vars >= 2 && !p.constraints.empty(), "solve_lp: malformed problem");
    for (const auto& row : p.constraints)
        require(int(row.coeff.size()) == p.n_vars, "solve_lp: ragged constraint matrix");

    long iters = 0;
    StandardSimplex<Rat> exact(p);

    // A floating pass locates the optimal basis cheaply; exact iterations
    // take over from it and certify. Cold exact Bland from the artificial
    // basis stays as the fallback.
    if (p.constraints.size() > 16) {
        try {
            StandardSimplex<double> fl(p);
            long fiters = 0;
            fl.start_with_artificials();
            LpStatus st = fl.run(true, false, 100'000, fiters);
            if (st == LpStatus::optimal && fl.artificials_cleared()) {
                st = fl.run(false, false, 100'000, fiters);
                if (st == LpStatus::optimal && exact.try_warm_start(fl.basis()))
                    return finish_exact(p, exact, iters);
            }
        } catch (const invariant_error&) {
            // float pass hit its cap; solve exactly from scratch
        }
    }

    exact.start_with_artificials();
    LpStatus st = exact.run(true, true, 2'000'000, iters);
    if (st != LpStatus::optimal || !exact.artificials_cleared()) {
        LpSolution out;
        // infeasible dual: the primal objective is unbounded below
        out.status = LpStatus::unbounded;
        out.iterations = iters;
        return out;
    }
    return finish_exact(p, exact, iters);
}

Rat lp_objective_at(const LpProblem& p, const TestFunction& h) {
    require(h.n() >= p.n, "lp_objective_at: test function too short");
    Rat best;
    bool first = true;
    for (const auto& row : p.constraints) {
        Rat v = row.rhs;
        for (int k = 0; k < p.n_vars - 1; ++k)
            if (!row.coeff[k].is_zero()) v -= row.coeff[k] * h(k + 1);
        if (first || best < v) {
            best = v;
            first = false;
        }
    }
    return best;
}

ParabolaFit fit_parabola(const std::vector<double>& h) {
    require(h.size() >= 3, "fit_parabola: need at least three values");
    const size_t n = h.size();
    // normal equations for sum (a k^2 + b k + c - h_k)^2, k = 1..n
    double s[5] = {0, 0, 0, 0, 0};
    double t[3] = {0, 0, 0};
    for (size_t i = 0; i < n; ++i) {
        const double k = double(i + 1);
        double kp = 1;
        for (int d = 0; d <= 4; ++d, kp *= k) s[d] += kp;
        t[0] += h[i];
        t[1] += h[i] * k;
        t[2] += h[i] * k * k;
    }
    const double m[3][3] = {{s[4], s[3], s[2]}, {s[3], s[2], s[1]}, {s[2], s[1], s[0]}};
    const double rhs[3] = {t[2], t[1], t[0]};
    auto det3 = [](const double a[3][3]) {
        return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
               a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    };
    const double d0 = det3(m);
    double mm[3][3];
    double sol[3];
    for (int v = 0; v < 3; ++v) {
        std::copy(&m[0][0], &m[0][0] + 9, &mm[0][0]);
        for (int r = 0; r < 3; ++r) mm[r][v] = rhs[r];
        sol[v] = det3(mm) / d0;
    }
    ParabolaFit fit;
    fit.a = sol[0];
    fit.b = sol[1];
    fit.c = sol[2];
    double ss = 0;
    for (size_t i = 0; i < n; ++i) {
        const double k = double(i + 1);
        const double r = fit.a * k * k + fit.b * k + fit.c - h[i];
        ss += r * r;
    }
    fit.rms = std::sqrt(ss / double(n));
    fit.degenerate = std::abs(fit.a) < 1e-13;
    if (!fit.degenerate) {
        fit.vertex_x = -fit.b / (2 * fit.a);
        fit.vertex_y = fit.c - fit.b * fit.b / (4 * fit.a);
    }
    return fit;
}

}  // namespace race
