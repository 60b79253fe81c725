#include "ftloc/euclid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ftloc/projection.hpp"

namespace ftloc {

namespace {

bool is_euclidean(const Gauge& g) {
    if (g.polytopal()) return false;
    const int d = g.dim();
    return (g.matrix() - Mat::Identity(d, d)).norm() <= 1e-12 && g.center().norm() <= 1e-12;
}

// Euclidean projection onto the normal cone of K at x (x in K).
Vec project_normal_cone(const ConvexSet& K, const Vec& x, const Vec& y) {
    switch (K.kind()) {
        case ConvexSet::Kind::Singleton: return y;
        case ConvexSet::Kind::Flat: return y - K.basis() * (K.basis().transpose() * y);
        case ConvexSet::Kind::Ball: {
            Vec n = x - K.center();
            if (n.norm() < K.radius() * (1.0 - 1e-9)) return Vec::Zero(y.size());
            n.normalize();
            return std::max(0.0, n.dot(y)) * n;
        }
        case ConvexSet::Kind::Polytope: {
            // Moreau: P_N(y) = y - P_{N°}(y) with N° = cone{v_k - x}.
            Mat G = K.points().rowwise() - x.transpose();
            Vec b = nnls(G, y);
            return y - G.transpose() * b;
        }
    }
    return y;
}

bool inside(const ConvexSet& K, const Vec& x) { return K.contains(x, 1e-9); }

Vec unit_toward(const ConvexSet& K, const Vec& x) {
    Vec r = K.project(x) - x;
    return r / r.norm();
}

}  // namespace

void EuclidInstance::validate() const {
    if (sites.empty()) throw EmptyInstance("instance has no sites");
    for (const EuclidSite& s : sites) {
        if (s.set.dim() != dimension) throw DimensionMismatch("site dimension differs from the instance");
        if (!(s.weight > 0.0) || !std::isfinite(s.weight)) throw InvalidSet("site weight must be positive");
    }
}

Instance EuclidInstance::to_instance() const {
    validate();
    Instance inst;
    inst.dimension = dimension;
    Gauge e = Gauge::euclidean(dimension);
    for (const EuclidSite& s : sites) inst.sites.push_back({s.set, e, s.weight});
    return inst;
}

EuclidInstance EuclidInstance::from_instance(const Instance& inst) {
    inst.validate();
    if (inst.constraint) throw PreconditionError("euclidean tests do not take a constraint set");
    EuclidInstance e;
    e.dimension = inst.dimension;
    for (const Site& s : inst.sites) {
        if (!is_euclidean(s.gauge)) throw PreconditionError("euclidean tests require the Euclidean gauge at every site");
        e.sites.push_back({s.set, s.weight});
    }
    return e;
}

double cone_cap_sum_residual(const std::vector<ConvexSet>& sets, const std::vector<double>& radii, const Vec& x,
                             const Vec& u, double tol, int* sweeps) {
    const size_t m = sets.size();
    if (sweeps) *sweeps = 0;
    if (m == 0) return u.norm();
    const Eigen::Index d = u.size();
    auto project_B = [&](const std::vector<Vec>& z) {
        std::vector<Vec> out(m);
        for (size_t i = 0; i < m; ++i) {
            // For a closed convex cone C, P_{C ∩ B(0,r)} = P_{B(0,r)} ∘ P_C.
            Vec c = project_normal_cone(sets[i], x, z[i]);
            double n = c.norm();
            out[i] = n > radii[i] ? Vec(c * (radii[i] / n)) : c;
        }
        return out;
    };
    auto project_A = [&](const std::vector<Vec>& z) {
        Vec s = Vec::Zero(d);
        for (const Vec& zi : z) s += zi;
        Vec corr = (u - s) / static_cast<double>(m);
        std::vector<Vec> out(z);
        for (Vec& zi : out) zi += corr;
        return out;
    };
    auto residual_of = [&](const std::vector<Vec>& z) {
        Vec s = Vec::Zero(d);
        for (const Vec& zi : z) s += zi;
        return (s - u).norm();
    };

    std::vector<Vec> xk(m, u / static_cast<double>(m)), p(m, Vec::Zero(d)), q(m, Vec::Zero(d));
    xk = project_B(xk);
    double res = residual_of(xk);
    const int max_sweeps = 10000;
    const int kRestart = 20;
    int k = 0;
    for (; k < max_sweeps && res > tol; ++k) {
        // Periodic restarts from the current iterate: Dykstra then targets the projection of a
        // point that is already close to the intersection, which avoids its slow sublinear tail
        // on tangential configurations.
        if (k % kRestart == 0)
            for (size_t i = 0; i < m; ++i) p[i].setZero(), q[i].setZero();
        std::vector<Vec> a(m), b(m);
        for (size_t i = 0; i < m; ++i) a[i] = xk[i] + p[i];
        std::vector<Vec> y = project_A(a);
        for (size_t i = 0; i < m; ++i) {
            p[i] = a[i] - y[i];
            b[i] = y[i] + q[i];
        }
        std::vector<Vec> xn = project_B(b);
        double change = 0.0;
        for (size_t i = 0; i < m; ++i) {
            q[i] = b[i] - xn[i];
            change += (xn[i] - xk[i]).squaredNorm();
        }
        xk = std::move(xn);
        res = residual_of(xk);
        if (std::sqrt(change) <= 1e-16 * (1.0 + u.norm())) {
            ++k;
            break;
        }
    }
    if (sweeps) *sweeps = k;
    return res;
}

EuclidOptimality euclid_optimality(const EuclidInstance& inst, const Vec& x, double tol) {
    inst.validate();
    require_dim(x, inst.dimension, "point");
    EuclidOptimality r;
    r.u = Vec::Zero(inst.dimension);
    std::vector<ConvexSet> caps;
    std::vector<double> radii;
    for (size_t i = 0; i < inst.sites.size(); ++i) {
        const EuclidSite& s = inst.sites[i];
        if (inside(s.set, x)) {
            r.containing.push_back(static_cast<int>(i));
            caps.push_back(s.set);
            radii.push_back(s.weight);
        } else {
            Vec t = unit_toward(s.set, x);
            r.z.push_back(-t);
            r.u += s.weight * t;
        }
    }
    r.residual = cone_cap_sum_residual(caps, radii, x, r.u, tol, &r.sweeps);
    r.optimal = r.residual <= tol;
    return r;
}

bool euclid_optimal(const EuclidInstance& inst, const Vec& x, double tol) {
    return euclid_optimality(inst, x, tol).optimal;
}

EuclidVerdict flat_case_test(const EuclidInstance& inst, const Vec& x, FlatCase which) {
    inst.validate();
    require_dim(x, inst.dimension, "point");
    const double tol = 1e-9;
    const size_t n = inst.sites.size();
    const size_t others = which == FlatCase::Floating ? n : n - 1;
    if (which != FlatCase::Floating) {
        const ConvexSet& K = inst.sites.back().set;
        if (which == FlatCase::PointAbsorbed &&
            (K.kind() != ConvexSet::Kind::Singleton || (K.anchor() - x).norm() > tol * (1.0 + x.norm())))
            throw PreconditionError("point-absorbed case: the last site must be the point itself");
        if (which == FlatCase::FlatAbsorbed && (K.kind() != ConvexSet::Kind::Flat || !inside(K, x)))
            throw PreconditionError("flat-absorbed case: the last site must be a flat through the point");
    }
    EuclidVerdict v;
    v.v = Vec::Zero(inst.dimension);
    for (size_t i = 0; i < others; ++i) {
        if (inside(inst.sites[i].set, x))
            throw PreconditionError(std::string(to_string(which)) + " case: the point lies in site " + std::to_string(i));
        v.v += inst.sites[i].weight * unit_toward(inst.sites[i].set, x);
    }
    switch (which) {
        case FlatCase::Floating:
            v.bound = 0.0;
            v.residual = v.v.norm();
            v.optimal = v.residual <= tol;
            break;
        case FlatCase::PointAbsorbed:
            v.bound = inst.sites.back().weight;
            v.residual = std::max(0.0, v.v.norm() - v.bound);
            v.optimal = v.residual <= tol;
            break;
        case FlatCase::FlatAbsorbed: {
            const Mat& Q = inst.sites.back().set.basis();
            double along = (Q.transpose() * v.v).norm();
            v.bound = inst.sites.back().weight;
            v.alpha = v.v.norm() > 0 ? std::atan2((v.v - Q * (Q.transpose() * v.v)).norm(), along) : 0.0;
            v.residual = std::max(along, std::max(0.0, v.v.norm() - v.bound));
            v.optimal = v.residual <= tol;
            break;
        }
    }
    return v;
}

EuclidVerdict flat_point_absorbed_test(const EuclidInstance& inst, const Vec& x) {
    inst.validate();
    require_dim(x, inst.dimension, "point");
    const size_t n = inst.sites.size();
    if (n < 2) throw PreconditionError("flat-point-absorbed case needs a point site and a flat site");
    const ConvexSet& P = inst.sites[n - 2].set;
    const ConvexSet& F = inst.sites[n - 1].set;
    const double tol = 1e-9;
    if (P.kind() != ConvexSet::Kind::Singleton || (P.anchor() - x).norm() > tol * (1.0 + x.norm()))
        throw PreconditionError("flat-point-absorbed case: the second to last site must be the point itself");
    if (F.kind() != ConvexSet::Kind::Flat || !inside(F, x))
        throw PreconditionError("flat-point-absorbed case: the last site must be a flat through the point");
    const Eigen::Index k = F.basis().cols();
    if (k < 1 || k > inst.dimension - 1) throw PreconditionError("flat-point-absorbed case: flat dimension out of range");
    if (inst.sites[n - 2].weight != 1.0 || inst.sites[n - 1].weight != 1.0)
        throw PreconditionError("flat-point-absorbed case: the absorbing sites must have unit weight");

    EuclidVerdict v;
    v.v = Vec::Zero(inst.dimension);
    for (size_t i = 0; i + 2 < n; ++i) {
        if (inside(inst.sites[i].set, x))
            throw PreconditionError("flat-point-absorbed case: the point lies in site " + std::to_string(i));
        v.v += inst.sites[i].weight * unit_toward(inst.sites[i].set, x);
    }
    const Mat& Q = F.basis();
    Vec vV = Q * (Q.transpose() * v.v);
    double r = v.v.norm();
    v.alpha = r > 0 ? std::atan2((v.v - vV).norm(), vV.norm()) : 0.0;
    v.bound = v.alpha <= M_PI / 4 ? 1.0 / std::cos(v.alpha) : 2.0 * std::sin(v.alpha);
    v.optimal = r <= v.bound + 1e-9;

    // Membership of v in (V^perp ∩ B) + B, decided by Dykstra.
    v.residual = cone_cap_sum_residual({P, F}, {1.0, 1.0}, x, v.v, 1e-7);
    bool member = v.residual <= 1e-7;
    if (member != v.optimal && std::abs(r - v.bound) > 1e-6)
        throw Error("flat-point-absorbed case: angle bound and membership test disagree");
    return v;
}

double directional_derivative(const ConvexSet& K, const Vec& x, const Vec& y) {
    require_dim(x, K.dim(), "point");
    require_dim(y, K.dim(), "direction");
    Vec p = K.project(x);
    double dist = (x - p).norm();
    if (dist > 1e-12 * (1.0 + x.norm())) return (x - p).dot(y) / dist;
    return project_normal_cone(K, p, y).norm();
}

Multiplicity multiplicity_classify(const ConvexSet& F, const std::vector<Vec>& points, double tol) {
    if (F.kind() != ConvexSet::Kind::Flat && F.kind() != ConvexSet::Kind::Singleton)
        throw PreconditionError("multiplicity_classify: F must be an affine flat");
    if (points.empty()) throw EmptyInstance("multiplicity_classify: no points");
    const int d = F.dim();
    for (const Vec& p : points) require_dim(p, d, "point");
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i + 1; j < points.size(); ++j)
            if ((points[i] - points[j]).norm() <= tol * (1.0 + points[i].norm()))
                throw PreconditionError("multiplicity_classify: duplicate points");

    const Vec base = F.anchor();
    const Mat Q = F.kind() == ConvexSet::Kind::Flat ? F.basis() : Mat(d, 0);
    const size_t n = points.size();
    double scale = 1.0 + base.norm();
    for (const Vec& p : points) scale = std::max(scale, 1.0 + p.norm());
    Multiplicity out;

    if (n == 1) {
        if (!F.contains(points[0], tol)) {
            out.verdict = Multiplicity::Verdict::Multiple;
            out.which = 1;
            out.locus_a = points[0];
            out.locus_b = F.project(points[0]);
        }
        return out;
    }

    // Collinearity and the common line c + t e.
    Vec c = Vec::Zero(d);
    for (const Vec& p : points) c += p;
    c /= static_cast<double>(n);
    Mat C(n, d);
    for (size_t i = 0; i < n; ++i) C.row(i) = (points[i] - c).transpose();
    Eigen::JacobiSVD<Mat> svd(C, Eigen::ComputeThinV);
    const Vec& s = svd.singularValues();
    bool collinear = s.size() < 2 || s(1) <= tol * scale;
    if (!collinear) return out;
    Vec e = svd.matrixV().col(0);
    std::vector<std::pair<double, Vec>> sorted;
    for (const Vec& p : points) sorted.emplace_back((p - c).dot(e), p);
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    if (n % 2 == 0) {
        bool line_in_F = F.contains(c, tol) && (e - Q * (Q.transpose() * e)).norm() <= tol;
        if (line_in_F) {
            out.verdict = Multiplicity::Verdict::Multiple;
            out.which = 2;
            out.locus_a = sorted[n / 2 - 1].second;
            out.locus_b = sorted[n / 2].second;
        }
        return out;
    }

    bool orthogonal = (Q.transpose() * e).norm() <= tol;
    if (!orthogonal) return out;
    Vec r = c - base;
    Vec perp = r - Q * (Q.transpose() * r) - e * e.dot(r);
    if (perp.norm() > tol * scale) return out;
    const Vec& median = sorted[n / 2].second;
    if (F.contains(median, tol)) return out;
    // Minimizers of the sum of |t - t_k| over the points and the meeting point p0 = L ∩ F.
    double t0 = -e.dot(r);
    std::vector<double> ts;
    for (const auto& pr : sorted) {
        ts.push_back(pr.first);
        if (std::abs(pr.first - t0) <= tol * scale) out.degenerate = true;
    }
    ts.push_back(t0);
    std::sort(ts.begin(), ts.end());
    out.verdict = Multiplicity::Verdict::Multiple;
    out.which = 3;
    out.locus_a = c + ts[(n + 1) / 2 - 1] * e;
    out.locus_b = c + ts[(n + 1) / 2] * e;
    return out;
}

const char* to_string(FlatCase c) {
    switch (c) {
        case FlatCase::Floating: return "floating";
        case FlatCase::PointAbsorbed: return "point-absorbed";
        case FlatCase::FlatAbsorbed: return "flat-absorbed";
    }
    return "?";
}

const char* to_string(Multiplicity::Verdict v) { return v == Multiplicity::Verdict::Unique ? "unique" : "multiple"; }

}  // namespace ftloc
