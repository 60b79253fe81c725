#include "ftloc/simplex.hpp"

#include <cmath>
#include <limits>

namespace ftloc {

LinearProgram::LinearProgram(Eigen::Index n) : c_(Vec::Zero(n)), free_(static_cast<size_t>(n), false) {}

void LinearProgram::add_ub(const Vec& row, double rhs) {
    require_dim(row, c_.size(), "LP row");
    ub_.push_back(row);
    ub_rhs_.push_back(rhs);
}

void LinearProgram::add_eq(const Vec& row, double rhs) {
    require_dim(row, c_.size(), "LP row");
    eq_.push_back(row);
    eq_rhs_.push_back(rhs);
}

const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::IterationLimit: return "iteration-limit";
    }
    return "?";
}

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kCostTol = 1e-11;

// Tableau T: rows 0..m-1 constraints, row m objective (reduced costs); last column rhs.
struct Tableau {
    Mat T;
    std::vector<Eigen::Index> basis;
    Eigen::Index m, n;

    void pivot(Eigen::Index r, Eigen::Index col) {
        T.row(r) /= T(r, col);
        for (Eigen::Index i = 0; i <= m; ++i) {
            if (i == r) continue;
            double f = T(i, col);
            if (f != 0.0) T.row(i) -= f * T.row(r);
        }
        basis[r] = col;
    }

    // Dantzig pricing with a switch to Bland's rule after a run of degenerate pivots
    // (which guarantees termination). Ratio ties go to the largest pivot element.
    LpStatus run(Eigen::Index ncols, int& iters, int max_iters) {
        int degenerate = 0;
        while (true) {
            if (iters >= max_iters) return LpStatus::IterationLimit;
            const bool bland = degenerate > 50;
            Eigen::Index enter = -1;
            double most = -kCostTol;
            for (Eigen::Index j = 0; j < ncols; ++j)
                if (T(m, j) < most) {
                    enter = j;
                    if (bland) break;
                    most = T(m, j);
                }
            if (enter < 0) return LpStatus::Optimal;
            Eigen::Index leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < m; ++i) {
                double a = T(i, enter);
                if (a <= kPivotTol) continue;
                double ratio = T(i, n) / a;
                double slack = 1e-12 * (1.0 + std::abs(best));
                bool better = leave < 0 || ratio < best - slack;
                bool tie = !better && ratio <= best + slack;
                if (tie) better = bland ? basis[i] < basis[leave] : a > T(leave, enter);
                if (better) {
                    best = std::min(best, ratio);
                    leave = i;
                }
            }
            if (leave < 0) return LpStatus::Unbounded;
            degenerate = T(leave, n) <= 1e-12 ? degenerate + 1 : 0;
            pivot(leave, enter);
            ++iters;
        }
    }
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, int max_iterations) {
    const Eigen::Index nv = lp.num_vars();
    // Column map: each original variable gets one column, free ones get a second (negative part).
    std::vector<Eigen::Index> pos(nv), neg(nv, -1);
    Eigen::Index ncol = 0;
    for (Eigen::Index j = 0; j < nv; ++j) {
        pos[j] = ncol++;
        if (lp.is_free(j)) neg[j] = ncol++;
    }
    const Eigen::Index mu = static_cast<Eigen::Index>(lp.ub_rows().size());
    const Eigen::Index me = static_cast<Eigen::Index>(lp.eq_rows().size());
    const Eigen::Index m = mu + me;
    const Eigen::Index nslack = mu;
    const Eigen::Index nstruct = ncol + nslack;

    // Decide which rows need an artificial variable.
    std::vector<bool> needs_art(m, true);
    for (Eigen::Index i = 0; i < mu; ++i) needs_art[i] = lp.ub_rhs()[i] < 0.0;
    Eigen::Index nart = 0;
    for (bool b : needs_art) nart += b;
    const Eigen::Index n = nstruct + nart;

    Tableau tb;
    tb.m = m;
    tb.n = n;
    tb.T = Mat::Zero(m + 1, n + 1);
    tb.basis.assign(m, -1);

    auto fill_row = [&](Eigen::Index r, const Vec& row, double rhs) {
        for (Eigen::Index j = 0; j < nv; ++j) {
            tb.T(r, pos[j]) = row(j);
            if (neg[j] >= 0) tb.T(r, neg[j]) = -row(j);
        }
        tb.T(r, n) = rhs;
    };
    for (Eigen::Index i = 0; i < mu; ++i) {
        fill_row(i, lp.ub_rows()[i], lp.ub_rhs()[i]);
        tb.T(i, ncol + i) = 1.0;
    }
    for (Eigen::Index i = 0; i < me; ++i) fill_row(mu + i, lp.eq_rows()[i], lp.eq_rhs()[i]);

    Eigen::Index a = nstruct;
    for (Eigen::Index i = 0; i < m; ++i) {
        if (tb.T(i, n) < 0.0) tb.T.row(i) *= -1.0;
        if (needs_art[i]) {
            tb.T(i, a) = 1.0;
            tb.basis[i] = a++;
        } else {
            tb.basis[i] = ncol + i;
        }
    }

    LpResult res;
    int iters = 0;

    // Phase 1: minimize the sum of artificials.
    if (nart > 0) {
        tb.T.row(m).setZero();
        for (Eigen::Index i = 0; i < m; ++i)
            if (needs_art[i]) tb.T.row(m) -= tb.T.row(i);
        for (Eigen::Index j = nstruct; j < n; ++j) tb.T(m, j) = 0.0;
        LpStatus st = tb.run(n, iters, max_iterations);
        if (st == LpStatus::IterationLimit) {
            res.status = st;
            res.iterations = iters;
            return res;
        }
        double scale = 1.0;
        for (Eigen::Index i = 0; i < m; ++i) scale = std::max(scale, std::abs(tb.T(i, n)));
        if (-tb.T(m, n) > 1e-9 * scale) {
            res.status = LpStatus::Infeasible;
            res.iterations = iters;
            return res;
        }
        // Drive artificials out of the basis; rows that cannot pivot are redundant.
        std::vector<bool> keep(m, true);
        for (Eigen::Index i = 0; i < m; ++i) {
            if (tb.basis[i] < nstruct) continue;
            Eigen::Index col = -1;
            for (Eigen::Index j = 0; j < nstruct; ++j)
                if (std::abs(tb.T(i, j)) > 1e-9) {
                    col = j;
                    break;
                }
            if (col >= 0)
                tb.pivot(i, col);
            else
                keep[i] = false;
        }
        Eigen::Index mk = 0;
        for (bool k : keep) mk += k;
        Mat T2 = Mat::Zero(mk + 1, nstruct + 1);
        std::vector<Eigen::Index> b2;
        Eigen::Index r = 0;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (!keep[i]) continue;
            T2.row(r).head(nstruct) = tb.T.row(i).head(nstruct);
            T2(r, nstruct) = tb.T(i, n);
            b2.push_back(tb.basis[i]);
            ++r;
        }
        tb.T = std::move(T2);
        tb.basis = std::move(b2);
        tb.m = mk;
        tb.n = nstruct;
    }

    // Phase 2 objective row.
    const Eigen::Index M = tb.m, N = tb.n;
    tb.T.row(M).setZero();
    for (Eigen::Index j = 0; j < nv; ++j) {
        tb.T(M, pos[j]) = lp.cost()(j);
        if (neg[j] >= 0) tb.T(M, neg[j]) = -lp.cost()(j);
    }
    for (Eigen::Index i = 0; i < M; ++i) {
        double f = tb.T(M, tb.basis[i]);
        if (f != 0.0) tb.T.row(M) -= f * tb.T.row(i);
    }
    LpStatus st = tb.run(N, iters, max_iterations);
    res.iterations = iters;
    res.status = st;
    if (st != LpStatus::Optimal) return res;

    Vec xs = Vec::Zero(N);
    for (Eigen::Index i = 0; i < M; ++i) xs(tb.basis[i]) = tb.T(i, N);
    res.x = Vec::Zero(nv);
    for (Eigen::Index j = 0; j < nv; ++j) {
        res.x(j) = xs(pos[j]);
        if (neg[j] >= 0) res.x(j) -= xs(neg[j]);
    }
    res.objective = lp.cost().dot(res.x);
    return res;
}

}  // namespace ftloc
