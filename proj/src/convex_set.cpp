#include "ftloc/convex_set.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "ftloc/projection.hpp"
#include "ftloc/simplex.hpp"

namespace ftloc {

namespace {

void check_finite(const Mat& m, const char* what) {
    if (!m.allFinite()) throw InvalidSet(std::string(what) + ": non-finite entries");
}

// Smallest t in [0, hi] with gap(t) <= 0, where gap is convex, gap(0) > 0 and gap(hi) <= 0.
// Returns the witness produced at the final feasible t.
Vec smallest_feasible_t(const std::function<double(double, Vec&)>& gap, double hi) {
    Vec w_hi, w_tmp;
    double g_hi = gap(hi, w_hi);
    if (g_hi > 0.0) {
        // The upper bound is only slightly infeasible from rounding; widen it.
        for (int k = 0; k < 60 && g_hi > 0.0; ++k) {
            hi *= 1.0 + 1e-9 * (1 << std::min(k, 30));
            g_hi = gap(hi, w_hi);
        }
    }
    double lo = 0.0;
    double g_lo = gap(lo, w_tmp);
    int side = 0;
    for (int it = 0; it < 300; ++it) {
        if (hi - lo <= 1e-15 * (1.0 + hi)) break;
        double t;
        if (g_lo > 0.0 && g_hi < 0.0) {
            t = (lo * g_hi - hi * g_lo) / (g_hi - g_lo);
            if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
        } else {
            t = 0.5 * (lo + hi);
        }
        if (it % 4 == 3) t = 0.5 * (lo + hi);
        Vec w;
        double gt = gap(t, w);
        if (gt <= 0.0) {
            hi = t;
            g_hi = gt;
            w_hi = w;
            if (side == -1) g_lo *= 0.5;
            side = -1;
            if (gt == 0.0) break;
        } else {
            lo = t;
            g_lo = gt;
            if (side == 1) g_hi *= 0.5;
            side = 1;
        }
    }
    return w_hi;
}

}  // namespace

ConvexSet ConvexSet::point(const Vec& p) {
    if (p.size() == 0) throw InvalidSet("point: empty coordinates");
    check_finite(p, "point");
    ConvexSet s;
    s.kind_ = Kind::Singleton;
    s.dim_ = static_cast<int>(p.size());
    s.P_ = p.transpose();
    return s;
}

ConvexSet ConvexSet::polytope(const Mat& points) {
    if (points.rows() == 0 || points.cols() == 0) throw InvalidSet("polytope: no points");
    check_finite(points, "polytope");
    ConvexSet s;
    s.kind_ = Kind::Polytope;
    s.dim_ = static_cast<int>(points.cols());
    s.P_ = points;
    return s;
}

ConvexSet ConvexSet::segment(const Vec& a, const Vec& b) {
    require_dim(b, a.size(), "segment endpoint");
    Mat P(2, a.size());
    P.row(0) = a.transpose();
    P.row(1) = b.transpose();
    return polytope(P);
}

ConvexSet ConvexSet::flat(const Vec& base, const Mat& directions) {
    if (base.size() == 0) throw InvalidSet("flat: empty base point");
    check_finite(base, "flat");
    check_finite(directions, "flat");
    if (directions.rows() > 0 && directions.cols() != base.size())
        throw DimensionMismatch("flat: direction dimension differs from base point");
    ConvexSet s;
    s.kind_ = Kind::Flat;
    s.dim_ = static_cast<int>(base.size());
    s.base_ = base;
    s.U_ = directions.rows() > 0 ? directions : Mat(0, base.size());
    if (directions.rows() > 0) {
        Eigen::ColPivHouseholderQR<Mat> qr(directions.transpose());
        qr.setThreshold(1e-10);
        Eigen::Index r = qr.rank();
        if (r < directions.rows()) throw InvalidSet("flat: directions are linearly dependent");
        Mat Qfull = qr.householderQ();
        s.Q_ = Qfull.leftCols(r);
    } else {
        s.Q_ = Mat(base.size(), 0);
    }
    return s;
}

ConvexSet ConvexSet::ball(const Vec& center, double radius) {
    if (center.size() == 0) throw InvalidSet("ball: empty center");
    check_finite(center, "ball");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidSet("ball: radius must be positive and finite");
    ConvexSet s;
    s.kind_ = Kind::Ball;
    s.dim_ = static_cast<int>(center.size());
    s.base_ = center;
    s.r_ = radius;
    return s;
}

Support ConvexSet::support(const Vec& phi) const {
    require_dim(phi, dim_, "support argument");
    switch (kind_) {
        case Kind::Singleton:
        case Kind::Polytope: return {(P_ * phi).maxCoeff(), false};
        case Kind::Flat: {
            double along = Q_.cols() ? (Q_.transpose() * phi).norm() : 0.0;
            if (along > 1e-10 * std::max(1.0, phi.norm())) return {std::numeric_limits<double>::infinity(), true};
            return {phi.dot(base_), false};
        }
        case Kind::Ball: return {phi.dot(base_) + r_ * phi.norm(), false};
    }
    return {};
}

Vec ConvexSet::project(const Vec& x) const {
    require_dim(x, dim_, "projection argument");
    switch (kind_) {
        case Kind::Singleton: return P_.row(0).transpose();
        case Kind::Polytope: return project_hull(x, P_).point;
        case Kind::Flat: return project_flat(x, base_, Q_);
        case Kind::Ball: {
            Vec d = x - base_;
            double n = d.norm();
            return n <= r_ ? x : Vec(base_ + d * (r_ / n));
        }
    }
    return x;
}

bool ConvexSet::contains(const Vec& x, double tol) const {
    require_dim(x, dim_, "membership argument");
    return (project(x) - x).norm() <= tol * (1.0 + x.norm());
}

Vec ConvexSet::anchor() const {
    switch (kind_) {
        case Kind::Singleton: return P_.row(0).transpose();
        case Kind::Polytope: return P_.colwise().mean().transpose();
        case Kind::Flat:
        case Kind::Ball: return base_;
    }
    return base_;
}

double ConvexSet::spread() const {
    switch (kind_) {
        case Kind::Singleton: return 0.0;
        case Kind::Polytope: return (P_.rowwise() - anchor().transpose()).rowwise().norm().maxCoeff();
        case Kind::Flat: return Q_.cols() ? std::numeric_limits<double>::infinity() : 0.0;
        case Kind::Ball: return r_;
    }
    return 0.0;
}

Distance set_distance(const Gauge& g, const Vec& x, const ConvexSet& K) {
    if (g.dim() != K.dim()) throw DimensionMismatch("gauge and set dimensions differ");
    require_dim(x, g.dim(), "distance argument");
    const int d = g.dim();

    if (K.kind() == ConvexSet::Kind::Singleton) {
        Vec p = K.anchor();
        return {g.eval(p - x), p};
    }
    Vec px = K.project(x);
    if ((px - x).norm() <= 1e-14 * (1.0 + x.norm())) return {0.0, x};

    if (g.polytopal() && K.polyhedral()) {
        // min t  s.t.  <a_j, y - x> <= t,  y parameterized over K.
        const Mat& F = g.facets();
        Eigen::Index np = K.kind() == ConvexSet::Kind::Polytope ? K.points().rows() : K.basis().cols();
        LinearProgram lp(np + 1);
        lp.cost()(np) = 1.0;
        Mat Y;  // d x np generator matrix
        Vec y0 = Vec::Zero(d);
        if (K.kind() == ConvexSet::Kind::Polytope) {
            Y = K.points().transpose();
            Vec row = lp.zero_row();
            row.head(np).setOnes();
            lp.add_eq(row, 1.0);
        } else {
            Y = K.basis();
            y0 = K.base();
            for (Eigen::Index j = 0; j < np; ++j) lp.set_free(j);
        }
        for (Eigen::Index j = 0; j < F.rows(); ++j) {
            Vec row = lp.zero_row();
            row.head(np) = Y.transpose() * F.row(j).transpose();
            row(np) = -1.0;
            lp.add_ub(row, F.row(j).dot(x - y0));
        }
        LpResult r = solve_lp(lp);
        if (r.status != LpStatus::Optimal) throw Error(std::string("distance LP failed: ") + to_string(r.status));
        Vec y = y0 + Y * r.x.head(np);
        return {g.eval(y - x), y};
    }

    if (g.polytopal()) {
        // Polytope gauge, ball site: shrink x + tB until it touches the ball.
        const Mat& V = g.vertices();
        const Vec c = K.center();
        const double rad = K.radius();
        auto gap = [&](double t, Vec& w) {
            if (t <= 0.0) {
                w = x;
                return (x - c).norm() - rad;
            }
            Mat P = (t * V).rowwise() + (x - c).transpose();
            MinNormResult m = min_norm_point(P);
            w = c + m.point;
            return m.point.norm() - rad;
        };
        Vec y = smallest_feasible_t(gap, g.eval(c - x));
        y = K.project(y);
        return {g.eval(y - x), y};
    }

    // Ellipsoid gauge: in coordinates w = A z the gauge ball becomes Euclidean.
    const Mat& A = g.matrix();
    const Vec Ac = A * g.center();
    const Vec Ax = A * x;
    const Mat Ainv = A.inverse();

    if (K.kind() == ConvexSet::Kind::Flat) {
        Mat AU = A * K.basis();
        Mat Q;
        if (AU.cols() > 0) {
            Eigen::HouseholderQR<Mat> qr(AU);
            Q = Mat(qr.householderQ()).leftCols(AU.cols());
        } else {
            Q = Mat(d, 0);
        }
        auto perp = [&](const Vec& v) -> Vec { return Q.cols() ? Vec(v - Q * (Q.transpose() * v)) : v; };
        Vec p0 = perp(Ax - A * K.base());
        Vec q = perp(Ac);
        double a = 1.0 - q.squaredNorm();
        double b = p0.dot(q);
        double cc = p0.squaredNorm();
        double t = (b + std::sqrt(b * b + a * cc)) / a;
        Vec center = Ax + t * Ac;
        Vec Ar = A * K.base();
        Vec w = Q.cols() ? Vec(Ar + Q * (Q.transpose() * (center - Ar))) : Ar;
        Vec y = Ainv * w;
        y = K.project(y);
        return {g.eval(y - x), y};
    }

    std::function<double(double, Vec&)> gap;
    Mat AP;
    EllipsoidProjector ep;
    if (K.kind() == ConvexSet::Kind::Polytope) {
        AP = K.points() * A.transpose();  // rows A p_k
        gap = [&](double t, Vec& y) {
            Vec ctr = Ax + t * Ac;
            MinNormResult m = min_norm_point(AP.rowwise() - ctr.transpose());
            y = K.points().transpose() * m.weights;
            return m.point.norm() - t;
        };
    } else {
        const double r = K.radius();
        ep = EllipsoidProjector(A * K.center(), (Ainv * Ainv) / (r * r));
        gap = [&](double t, Vec& y) {
            Vec ctr = Ax + t * Ac;
            Vec w = ep.project(ctr);
            y = Ainv * w;
            return (w - ctr).norm() - t;
        };
    }
    Vec y = smallest_feasible_t(gap, g.eval(K.anchor() - x));
    y = K.project(y);
    return {g.eval(y - x), y};
}

bool normal_cone_contains(const ConvexSet& K, const Vec& x, const Vec& phi, double tol) {
    require_dim(x, K.dim(), "normal cone point");
    require_dim(phi, K.dim(), "normal cone functional");
    if (!K.contains(x, std::max(tol, 1e-9))) throw PreconditionError("normal cone: point lies outside the set");
    Support s = K.support(phi);
    if (s.infinite) return false;
    return s.value - phi.dot(x) <= tol * (1.0 + phi.norm());
}

bool dist_subdifferential_contains(const Gauge& g, const Vec& x, const ConvexSet& K, const Vec& phi,
                                   double tol) {
    require_dim(phi, g.dim(), "subgradient");
    if (g.polar(-phi) > 1.0 + tol) return false;
    Support s = K.support(phi);
    if (s.infinite) return false;
    double dist = set_distance(g, x, K).value;
    return std::abs(s.value + dist - phi.dot(x)) <= tol * (1.0 + std::abs(phi.dot(x)));
}

}  // namespace ftloc
