#include "ftloc/ftcore.hpp"

#include <cmath>
#include <limits>

#include "ftloc/simplex.hpp"

namespace ftloc {

namespace {

// Orthonormal basis (columns) of the null space of M.
Mat null_space(const Mat& M, Eigen::Index d) {
    if (M.rows() == 0) return Mat::Identity(d, d);
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
    const Vec& s = svd.singularValues();
    double thr = 1e-10 * std::max(1.0, s.size() ? s(0) : 0.0);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > thr) ++r;
    return svd.matrixV().rightCols(d - r);
}

// Orthonormal basis of the column span of M.
Mat range_basis(const Mat& M) {
    if (M.cols() == 0) return Mat(M.rows(), 0);
    Eigen::ColPivHouseholderQR<Mat> qr(M);
    qr.setThreshold(1e-10);
    Mat Q = qr.householderQ();
    return Q.leftCols(qr.rank());
}

}  // namespace

void Instance::validate() const {
    if (sites.empty()) throw EmptyInstance("instance has no sites");
    if (dimension <= 0) throw DimensionMismatch("instance dimension must be positive");
    for (size_t i = 0; i < sites.size(); ++i) {
        const Site& s = sites[i];
        if (s.set.dim() != dimension || s.gauge.dim() != dimension)
            throw DimensionMismatch("site " + std::to_string(i) + " has the wrong dimension");
        if (!(s.weight > 0.0) || !std::isfinite(s.weight))
            throw InvalidSet("site " + std::to_string(i) + " weight must be positive and finite");
    }
    if (constraint && constraint->dim() != dimension) throw DimensionMismatch("constraint has the wrong dimension");
}

bool Instance::polyhedral() const {
    for (const Site& s : sites)
        if (!s.gauge.polytopal() || !s.set.polyhedral()) return false;
    return !constraint || constraint->polyhedral();
}

bool Instance::all_singletons() const {
    for (const Site& s : sites)
        if (s.set.kind() != ConvexSet::Kind::Singleton) return false;
    return true;
}

Certificate certificate_from_norming(const std::vector<Vec>& norming) {
    Certificate c;
    for (const Vec& v : norming) c.phis.push_back(-v);
    return c;
}

const char* to_string(Method m) { return m == Method::LP ? "lp" : "subgradient"; }

Objective::Objective(const Instance& inst) : dim_(inst.dimension) {
    inst.validate();
    for (const Site& s : inst.sites) terms_.emplace_back(s.gauge.scaled(s.weight), s.set);
}

double Objective::operator()(const Vec& x) const {
    require_dim(x, dim_, "objective argument");
    double f = 0.0;
    for (const SiteTerm& t : terms_) f += t.value(x);
    return f;
}

double Objective::value_and_subgradient(const Vec& x, Vec& g) const {
    require_dim(x, dim_, "objective argument");
    g = Vec::Zero(dim_);
    double f = 0.0;
    Vec gi;
    for (const SiteTerm& t : terms_) {
        f += t.value_and_subgradient(x, gi);
        g += gi;
    }
    return f;
}

double Objective::lipschitz() const {
    double L = 0.0;
    for (const SiteTerm& t : terms_) L += t.lipschitz();
    return L;
}

double objective_eval(const Instance& inst, const Vec& x) { return Objective(inst)(x); }

namespace {

Solution solve_lp_route(const Instance& inst, const Objective& obj) {
    const int d = inst.dimension;
    // Variable layout: x | per site (params, t) | constraint params.
    Eigen::Index nv = d;
    std::vector<Eigen::Index> param_off, param_cnt, t_idx;
    for (const Site& s : inst.sites) {
        Eigen::Index k = 0;
        if (s.set.kind() == ConvexSet::Kind::Polytope) k = s.set.points().rows();
        if (s.set.kind() == ConvexSet::Kind::Flat) k = s.set.basis().cols();
        param_off.push_back(nv);
        param_cnt.push_back(k);
        nv += k;
        t_idx.push_back(nv++);
    }
    Eigen::Index c_off = nv, c_cnt = 0;
    if (inst.constraint) {
        const ConvexSet& K0 = *inst.constraint;
        if (K0.kind() == ConvexSet::Kind::Polytope) c_cnt = K0.points().rows();
        if (K0.kind() == ConvexSet::Kind::Flat) c_cnt = K0.basis().cols();
        nv += c_cnt;
    }
    LinearProgram lp(nv);
    for (Eigen::Index j = 0; j < d; ++j) lp.set_free(j);
    for (size_t i = 0; i < inst.sites.size(); ++i) {
        const Site& s = inst.sites[i];
        const Mat& F = obj.terms()[i].gauge().facets();
        lp.cost()(t_idx[i]) = 1.0;
        Mat Y;  // d x k generators
        Vec y0 = Vec::Zero(d);
        switch (s.set.kind()) {
            case ConvexSet::Kind::Singleton: y0 = s.set.anchor(); break;
            case ConvexSet::Kind::Polytope: {
                Y = s.set.points().transpose();
                Vec row = lp.zero_row();
                row.segment(param_off[i], param_cnt[i]).setOnes();
                lp.add_eq(row, 1.0);
                break;
            }
            case ConvexSet::Kind::Flat:
                Y = s.set.basis();
                y0 = s.set.base();
                for (Eigen::Index j = 0; j < param_cnt[i]; ++j) lp.set_free(param_off[i] + j);
                break;
            case ConvexSet::Kind::Ball: throw Error("ball site in LP route");
        }
        // <a, y0 + Y mu> - <a, x> - t <= 0
        for (Eigen::Index j = 0; j < F.rows(); ++j) {
            Vec a = F.row(j).transpose();
            Vec row = lp.zero_row();
            row.head(d) = -a;
            if (param_cnt[i] > 0) row.segment(param_off[i], param_cnt[i]) = Y.transpose() * a;
            row(t_idx[i]) = -1.0;
            lp.add_ub(row, -a.dot(y0));
        }
    }
    if (inst.constraint) {
        const ConvexSet& K0 = *inst.constraint;
        Mat Y;
        Vec y0 = Vec::Zero(d);
        if (K0.kind() == ConvexSet::Kind::Singleton) y0 = K0.anchor();
        if (K0.kind() == ConvexSet::Kind::Polytope) {
            Y = K0.points().transpose();
            Vec row = lp.zero_row();
            row.segment(c_off, c_cnt).setOnes();
            lp.add_eq(row, 1.0);
        }
        if (K0.kind() == ConvexSet::Kind::Flat) {
            Y = K0.basis();
            y0 = K0.base();
            for (Eigen::Index j = 0; j < c_cnt; ++j) lp.set_free(c_off + j);
        }
        // x - Y nu = y0
        for (Eigen::Index r = 0; r < d; ++r) {
            Vec row = lp.zero_row();
            row(r) = 1.0;
            if (c_cnt > 0) row.segment(c_off, c_cnt) = -Y.row(r).transpose();
            lp.add_eq(row, y0(r));
        }
    }
    LpResult r = solve_lp(lp);
    Solution sol;
    sol.method = Method::LP;
    sol.iterations = r.iterations;
    if (r.status == LpStatus::Unbounded) {
        sol.status = SolveStatus::NonattainmentSuspected;
        sol.point = Vec::Zero(d);
        sol.value = obj(sol.point);
        return sol;
    }
    if (r.status != LpStatus::Optimal) throw Error(std::string("location LP failed: ") + to_string(r.status));
    sol.point = r.x.head(d);
    if (inst.constraint) sol.point = inst.constraint->project(sol.point);
    sol.value = obj(sol.point);
    sol.residual = std::abs(sol.value - r.objective);
    return sol;
}

struct Param {
    Vec base;
    Mat Q;  // d x k, orthonormal columns
    bool feasibility_cuts = false;
    bool bounded = false;
    double radius = 0.0;
};

Param parameterize(const Instance& inst, const Objective& obj, const Vec& start) {
    const int d = inst.dimension;
    Param p;
    // Directions along which every site is invariant (all flats).
    bool all_flats = true;
    for (const Site& s : inst.sites) all_flats = all_flats && s.set.kind() == ConvexSet::Kind::Flat;
    Mat L;  // basis of the common invariance subspace
    if (all_flats) {
        Mat stack(0, d);
        for (const Site& s : inst.sites) {
            Mat Pp = Mat::Identity(d, d) - s.set.basis() * s.set.basis().transpose();
            Mat nxt(stack.rows() + d, d);
            nxt << stack, Pp;
            stack = nxt;
        }
        L = null_space(stack, d);
    } else {
        L = Mat(d, 0);
    }
    auto drop_invariant = [&](const Mat& M) -> Mat {
        if (L.cols() == 0 || M.cols() == 0) return M;
        Mat Pm = M - L * (L.transpose() * M);
        return range_basis(Pm);
    };

    Vec anchor_mean = Vec::Zero(d);
    for (const Site& s : inst.sites) anchor_mean += s.set.anchor();
    anchor_mean /= static_cast<double>(inst.sites.size());

    if (!inst.constraint) {
        p.base = start.size() == d ? start : anchor_mean;
        p.Q = drop_invariant(Mat::Identity(d, d));
    } else {
        const ConvexSet& K0 = *inst.constraint;
        switch (K0.kind()) {
            case ConvexSet::Kind::Singleton:
                p.base = K0.anchor();
                p.Q = Mat(d, 0);
                break;
            case ConvexSet::Kind::Flat:
                p.base = K0.project(start.size() == d ? start : anchor_mean);
                p.Q = drop_invariant(K0.basis());
                break;
            case ConvexSet::Kind::Polytope:
                p.base = K0.anchor();
                p.Q = range_basis((K0.points().rowwise() - p.base.transpose()).transpose());
                p.feasibility_cuts = true;
                break;
            case ConvexSet::Kind::Ball:
                p.base = K0.center();
                p.Q = Mat::Identity(d, d);
                p.feasibility_cuts = true;
                break;
        }
    }
    // Radius of a ball around base that contains a minimizer.
    double R = std::numeric_limits<double>::infinity();
    double f0 = obj(p.base);
    for (size_t i = 0; i < inst.sites.size(); ++i) {
        const ConvexSet& K = inst.sites[i].set;
        if (!K.bounded()) continue;
        double r = (K.anchor() - p.base).norm() + K.spread() + f0 * obj.terms()[i].gauge().outer_radius();
        R = std::min(R, r);
    }
    if (inst.constraint && inst.constraint->bounded())
        R = std::min(R, (inst.constraint->anchor() - p.base).norm() + inst.constraint->spread());
    p.bounded = std::isfinite(R);
    if (!p.bounded) {
        double spread = 0.0, outer = 0.0;
        for (size_t i = 0; i < inst.sites.size(); ++i) {
            spread = std::max(spread, (inst.sites[i].set.anchor() - p.base).norm());
            outer = std::max(outer, obj.terms()[i].gauge().outer_radius());
        }
        R = 10.0 * (1.0 + spread + f0 * outer);
    }
    p.radius = R * 1.01 + 1e-9;
    return p;
}

struct RunResult {
    Vec best;
    double fbest;
    double lower;
    int iterations;
};

RunResult ellipsoid_run(const Instance& inst, const Objective& obj, const Param& p, double R, int max_iter) {
    const Eigen::Index k = p.Q.cols();
    RunResult rr;
    rr.best = p.base;
    rr.fbest = obj(p.base);
    rr.lower = -std::numeric_limits<double>::infinity();
    rr.iterations = 0;
    if (k == 0) {
        rr.lower = rr.fbest;
        return rr;
    }
    auto infeasible_normal = [&](const Vec& x, Vec& n) {
        if (!p.feasibility_cuts) return false;
        Vec px = inst.constraint->project(x);
        n = x - px;
        return n.norm() > 1e-13 * (1.0 + x.norm());
    };
    auto consider = [&](const Vec& x, double f) {
        if (f < rr.fbest) {
            rr.fbest = f;
            rr.best = x;
        }
    };
    Vec g, n;
    if (k == 1) {
        double lo = -R, hi = R;
        for (int it = 0; it < 300 && hi - lo > 1e-15 * (1.0 + R); ++it) {
            ++rr.iterations;
            double mid = 0.5 * (lo + hi);
            Vec x = p.base + p.Q.col(0) * mid;
            double s;
            if (infeasible_normal(x, n)) {
                s = p.Q.col(0).dot(n);
            } else {
                double f = obj.value_and_subgradient(x, g);
                consider(x, f);
                s = p.Q.col(0).dot(g);
                rr.lower = std::max(rr.lower, f - std::abs(s) * 0.5 * (hi - lo));
            }
            if (s > 0)
                hi = mid;
            else if (s < 0)
                lo = mid;
            else
                break;
        }
        return rr;
    }
    const double nn = static_cast<double>(k);
    Vec c = Vec::Zero(k);
    Mat P = Mat::Identity(k, k) * R * R;
    for (int it = 0; it < max_iter; ++it) {
        ++rr.iterations;
        Vec x = p.base + p.Q * c;
        Vec gz;
        if (infeasible_normal(x, n)) {
            gz = p.Q.transpose() * n;
        } else {
            double f = obj.value_and_subgradient(x, g);
            consider(x, f);
            gz = p.Q.transpose() * g;
            if (gz.norm() == 0.0) {
                rr.lower = f;
                break;
            }
            double spread = std::sqrt(std::max(0.0, gz.dot(P * gz)));
            rr.lower = std::max(rr.lower, f - spread);
        }
        Vec Pg = P * gz;
        double den = std::sqrt(std::max(gz.dot(Pg), 0.0));
        if (!(den > 0.0)) break;
        Vec gt = Pg / den;
        c -= gt / (nn + 1.0);
        P = (nn * nn / (nn * nn - 1.0)) * (P - (2.0 / (nn + 1.0)) * gt * gt.transpose());
        P = 0.5 * (P + P.transpose());
        if (std::sqrt(P.trace()) <= 1e-12 * (1.0 + x.norm())) break;
    }
    Vec xc = p.base + p.Q * c;
    if (!infeasible_normal(xc, n)) consider(xc, obj(xc));
    return rr;
}

}  // namespace

Solution solve(const Instance& inst, const SolveOptions& opts) {
    inst.validate();
    Objective obj(inst);
    Solution sol;
    if (inst.polyhedral()) {
        sol = solve_lp_route(inst, obj);
    } else {
        sol.method = Method::Subgradient;
        Param p = parameterize(inst, obj, opts.start);
        double R = p.radius;
        RunResult rr;
        for (int attempt = 0;; ++attempt) {
            rr = ellipsoid_run(inst, obj, p, R, opts.max_iterations);
            bool near_boundary = (rr.best - p.base).norm() > 0.5 * R;
            if (p.bounded || !near_boundary) break;
            if (attempt >= 8) {
                sol.status = SolveStatus::NonattainmentSuspected;
                sol.recession = (rr.best - p.base).normalized();
                break;
            }
            R *= 10.0;
        }
        sol.point = rr.best;
        sol.value = rr.fbest;
        sol.iterations = rr.iterations;
        sol.residual = std::isfinite(rr.lower) ? std::max(0.0, rr.fbest - rr.lower) : 0.0;
    }
    if (opts.attach_certificate && sol.status == SolveStatus::Optimal) {
        double tol = sol.method == Method::LP ? 1e-8 : 1e-7;
        sol.certificate = find_certificate(inst, sol.point, tol);
    }
    return sol;
}

}  // namespace ftloc
