#include "ftloc/geometry2d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "ftloc/oracle.hpp"

namespace ftloc {

namespace {

double cross(const Point2& a, const Point2& b) { return a.x() * b.y() - a.y() * b.x(); }
Point2 perp(const Point2& a) { return Point2(-a.y(), a.x()); }
Point2 to2(const Vec& v) { return Point2(v(0), v(1)); }
Vec toV(const Point2& p) { return Vec(p); }

double segment_distance(const Point2& p, const Point2& a, const Point2& b) {
    Point2 ab = b - a;
    double l2 = ab.squaredNorm();
    double t = l2 > 0 ? std::clamp((p - a).dot(ab) / l2, 0.0, 1.0) : 0.0;
    return (a + t * ab - p).norm();
}

void require_planar(const Instance& inst, const char* what) {
    inst.validate();
    if (inst.dimension != 2) throw PreconditionError(std::string(what) + " requires a planar instance");
}

void require_points_polytopal(const Instance& inst, const char* what) {
    require_planar(inst, what);
    if (!inst.all_singletons()) throw PreconditionError(std::string(what) + " requires singleton sites");
    for (const Site& s : inst.sites)
        if (!s.gauge.polytopal()) throw PreconditionError(std::string(what) + " requires polytopal gauges");
}

// Polygon {z : w gamma(p - z) <= alpha} for a polytopal gauge, i.e. p - alpha * B_w.
std::vector<Point2> scaled_ball_around(const Site& s, double alpha) {
    Gauge g = s.gauge.scaled(s.weight);
    std::vector<Point2> pts;
    Point2 p = to2(s.set.anchor());
    if (g.polytopal()) {
        const Mat& V = g.vertices();
        for (Eigen::Index k = 0; k < V.rows(); ++k) pts.push_back(p - alpha * Point2(V(k, 0), V(k, 1)));
    } else {
        // Circumscribed polygon of the ellipsoidal ball via its support function.
        const int m = 256;
        for (int k = 0; k < m; ++k) {
            double t = 2.0 * M_PI * k / m;
            Vec u(2);
            u << std::cos(t), std::sin(t);
            Vec v(2);
            v << std::cos(t + 2.0 * M_PI / m), std::sin(t + 2.0 * M_PI / m);
            // Intersection of consecutive supporting lines <u, z> = h(u), <v, z> = h(v).
            Eigen::Matrix2d M;
            M << u(0), u(1), v(0), v(1);
            Eigen::Vector2d rhs(g.polar(u), g.polar(v));
            Eigen::Vector2d z = M.inverse() * rhs;
            pts.push_back(p - alpha * z);
        }
    }
    return pts;
}

}  // namespace

const char* to_string(Polygon::Rank r) {
    switch (r) {
        case Polygon::Rank::Empty: return "empty";
        case Polygon::Rank::Point: return "point";
        case Polygon::Rank::Segment: return "segment";
        case Polygon::Rank::Area: return "polygon";
    }
    return "?";
}

Polygon make_polygon(std::vector<Point2> pts, double rank_tol) {
    Polygon poly;
    if (pts.empty()) return poly;
    double scale = 1.0;
    for (const Point2& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());
    const double tol = rank_tol * scale;
    std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    // Andrew's monotone chain, dropping collinear points.
    std::vector<Point2> hull(2 * pts.size());
    size_t k = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k > 1 ? k - 1 : k);
    if (hull.empty()) hull.push_back(pts.front());

    // Diameter and width decide the rank.
    double diam = 0.0;
    Point2 a = hull[0], b = hull[0];
    for (size_t i = 0; i < hull.size(); ++i)
        for (size_t j = i + 1; j < hull.size(); ++j) {
            double dd = (hull[i] - hull[j]).norm();
            if (dd > diam) {
                diam = dd;
                a = hull[i];
                b = hull[j];
            }
        }
    if (diam <= tol) {
        Point2 c = Point2::Zero();
        for (const Point2& p : hull) c += p;
        poly.rank = Polygon::Rank::Point;
        poly.vertices = {c / static_cast<double>(hull.size())};
        return poly;
    }
    double width = std::numeric_limits<double>::infinity();
    if (hull.size() >= 3) {
        for (size_t i = 0; i < hull.size(); ++i) {
            Point2 p = hull[i], q = hull[(i + 1) % hull.size()];
            Point2 e = (q - p).normalized();
            double far = 0.0;
            for (const Point2& r : hull) far = std::max(far, std::abs(cross(e, r - p)));
            width = std::min(width, far);
        }
    } else {
        width = 0.0;
    }
    if (width <= tol) {
        poly.rank = Polygon::Rank::Segment;
        poly.vertices = {a, b};
        return poly;
    }
    poly.rank = Polygon::Rank::Area;
    poly.vertices = hull;
    return poly;
}

std::vector<Point2> clip(const std::vector<Point2>& poly, const Point2& n, double b, double eps) {
    std::vector<Point2> out;
    const size_t m = poly.size();
    if (m == 0) return out;
    auto val = [&](const Point2& p) { return n.dot(p) - b; };
    if (m == 1) {
        if (val(poly[0]) <= eps) out.push_back(poly[0]);
        return out;
    }
    for (size_t i = 0; i < m; ++i) {
        const Point2& cur = poly[i];
        const Point2& prev = poly[(i + m - 1) % m];
        double vc = val(cur), vp = val(prev);
        bool in_c = vc <= eps, in_p = vp <= eps;
        if (in_c != in_p) {
            double t = vp / (vp - vc);
            out.push_back(prev + t * (cur - prev));
        }
        if (in_c) out.push_back(cur);
    }
    // Drop consecutive duplicates.
    std::vector<Point2> clean;
    for (const Point2& p : out)
        if (clean.empty() || (clean.back() - p).norm() > 1e-15 * (1.0 + p.norm())) clean.push_back(p);
    while (clean.size() > 1 && (clean.front() - clean.back()).norm() <= 1e-15 * (1.0 + clean.back().norm()))
        clean.pop_back();
    return clean;
}

bool Polygon::contains(const Point2& p, double tol) const { return distance(p) <= tol; }

double Polygon::distance(const Point2& p) const {
    switch (rank) {
        case Rank::Empty: return std::numeric_limits<double>::infinity();
        case Rank::Point: return (p - vertices[0]).norm();
        case Rank::Segment: return segment_distance(p, vertices[0], vertices[1]);
        case Rank::Area: {
            bool inside = true;
            double dmin = std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < vertices.size(); ++i) {
                const Point2& a = vertices[i];
                const Point2& b = vertices[(i + 1) % vertices.size()];
                if (cross(b - a, p - a) < 0) inside = false;
                dmin = std::min(dmin, segment_distance(p, a, b));
            }
            return inside ? 0.0 : dmin;
        }
    }
    return 0.0;
}

double Polygon::area() const {
    if (rank != Rank::Area) return 0.0;
    double s = 0.0;
    for (size_t i = 0; i < vertices.size(); ++i) s += cross(vertices[i], vertices[(i + 1) % vertices.size()]);
    return 0.5 * s;
}

std::vector<Point2> Polygon::samples() const {
    std::vector<Point2> out(vertices.begin(), vertices.end());
    if (vertices.size() >= 2) {
        Point2 c = Point2::Zero();
        for (size_t i = 0; i < vertices.size(); ++i) {
            out.push_back(0.5 * (vertices[i] + vertices[(i + 1) % vertices.size()]));
            c += vertices[i];
        }
        out.push_back(c / static_cast<double>(vertices.size()));
    }
    return out;
}

double hausdorff(const Polygon& a, const Polygon& b) {
    if (a.rank == Polygon::Rank::Empty || b.rank == Polygon::Rank::Empty)
        return a.rank == b.rank ? 0.0 : std::numeric_limits<double>::infinity();
    double h = 0.0;
    for (const Point2& p : a.vertices) h = std::max(h, b.distance(p));
    for (const Point2& p : b.vertices) h = std::max(h, a.distance(p));
    return h;
}

bool dseg_contains(const Gauge& g, const Vec& x, const Vec& y, const Vec& z, double tol) {
    require_dim(x, g.dim(), "d-segment endpoint");
    require_dim(y, g.dim(), "d-segment endpoint");
    require_dim(z, g.dim(), "d-segment point");
    return g.eval(x - z) + g.eval(z - y) <= g.eval(x - y) + tol;
}

Polygon sublevel_polygon(const Instance& inst, double alpha) {
    require_points_polytopal(inst, "sublevel_polygon");
    if (!(alpha >= 0.0)) throw EmptySublevel("sublevel level is below the minimum");
    Objective obj(inst);
    std::vector<Point2> poly = make_polygon(scaled_ball_around(inst.sites[0], alpha)).vertices;
    std::vector<Point2> P;
    for (const Site& s : inst.sites) P.push_back(to2(s.set.anchor()));
    const double viol = 1e-9 * (1.0 + std::abs(alpha));
    for (int iter = 0; iter < 100000; ++iter) {
        // Most violated vertex.
        double worst = viol;
        int wi = -1;
        for (size_t i = 0; i < poly.size(); ++i) {
            double f = obj(toV(poly[i]));
            if (f - alpha > worst) {
                worst = f - alpha;
                wi = static_cast<int>(i);
            }
        }
        if (wi < 0) break;
        // Affine minorant of f that is exact at the violating vertex.
        Point2 n = Point2::Zero();
        double b = alpha;
        for (size_t i = 0; i < inst.sites.size(); ++i) {
            const Mat& F = obj.terms()[i].gauge().facets();
            Vec u = toV(P[i] - poly[wi]);
            Eigen::Index j;
            (F * u).maxCoeff(&j);
            Point2 a(F(j, 0), F(j, 1));
            n -= a;
            b -= a.dot(P[i]);
        }
        double eps = 1e-12 * (1.0 + std::abs(b) + n.norm());
        poly = clip(poly, n, b, eps);
        if (poly.empty()) throw EmptySublevel("sublevel level is below the minimum");
        poly = make_polygon(poly, 1e-13).vertices;
    }
    return make_polygon(poly);
}

Polygon dseg_polygon(const Gauge& g, const Point2& x, const Point2& y) {
    if (g.dim() != 2 || !g.polytopal()) throw PreconditionError("dseg_polygon requires a planar polytopal gauge");
    Instance inst;
    inst.dimension = 2;
    inst.sites.push_back({ConvexSet::point(toV(x)), g, 1.0});
    inst.sites.push_back({ConvexSet::point(toV(y)), g.opposite(), 1.0});
    double alpha = g.eval(toV(x - y));
    if (alpha == 0.0) return make_polygon({x});
    return sublevel_polygon(inst, alpha);
}

Polygon ft_locus_polygon(const Instance& inst, const Vec& xbar, const Certificate& cert) {
    require_planar(inst, "ft_locus_polygon");
    if (!inst.all_singletons()) throw PreconditionError("ft_locus_polygon requires singleton sites");
    if (!certify_points(inst, xbar, cert, 1e-6).accepted)
        throw PreconditionError("ft_locus_polygon: certificate is not valid at the given point");
    Objective obj(inst);
    const double fstar = obj(xbar);
    bool polytopal = true;
    for (const Site& s : inst.sites) polytopal = polytopal && s.gauge.polytopal();
    for (const Site& s : inst.sites)
        if ((s.set.anchor() - xbar).norm() <= 1e-12 * (1.0 + xbar.norm())) {
            // The optimum sits on a site: the cone construction does not apply.
            if (polytopal) return sublevel_polygon(inst, fstar);
            return make_polygon({to2(xbar)});
        }

    std::vector<Point2> poly =
        make_polygon(scaled_ball_around(inst.sites[0], fstar * (1.0 + 1e-6) + 1e-9)).vertices;
    for (size_t i = 0; i < inst.sites.size(); ++i) {
        Gauge g = inst.sites[i].gauge.scaled(inst.sites[i].weight);
        Vec psi = -cert.phis[i];
        Point2 p = to2(inst.sites[i].set.anchor());
        std::vector<Point2> face;
        if (g.polytopal()) {
            const Mat& V = g.vertices();
            for (Eigen::Index k = 0; k < V.rows(); ++k)
                if (1.0 - V.row(k).dot(psi) <= 1e-8) face.emplace_back(V(k, 0), V(k, 1));
        } else {
            Vec w = g.matrix().inverse() * psi;
            Vec z = g.center() + g.matrix().inverse() * (w / w.norm());
            face.push_back(to2(z));
        }
        if (face.empty()) throw PreconditionError("ft_locus_polygon: exposed face is empty");
        // Directions of p - cone(face), ordered by angle around their mean.
        Point2 mean = Point2::Zero();
        for (const Point2& f : face) mean -= f.normalized();
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        Point2 ulo, uhi;
        for (const Point2& f : face) {
            Point2 u = -f;
            double th = std::atan2(cross(mean, u), mean.dot(u));
            if (th < lo) {
                lo = th;
                ulo = u;
            }
            if (th > hi) {
                hi = th;
                uhi = u;
            }
        }
        ulo.normalize();
        uhi.normalize();
        double scale = 1.0 + p.norm();
        double eps = 1e-10 * scale;
        if (hi - lo < 1e-12) {
            Point2 nrm = perp(ulo);
            poly = clip(poly, nrm, nrm.dot(p), eps);
            poly = clip(poly, -nrm, -nrm.dot(p), eps);
            poly = clip(poly, -ulo, -ulo.dot(p), eps);
        } else {
            Point2 n1 = -perp(ulo), n2 = perp(uhi);
            poly = clip(poly, n1, n1.dot(p), eps);
            poly = clip(poly, n2, n2.dot(p), eps);
        }
        if (poly.empty()) throw PreconditionError("ft_locus_polygon: cones do not intersect");
    }
    return make_polygon(poly);
}

namespace {

std::optional<ExtremePointWitness> search_form(const Instance& inst, double alpha, const Point2& v, bool sets) {
    const double tol = 1e-7;
    for (size_t i = 0; i < inst.sites.size(); ++i) {
        const Site& s = inst.sites[i];
        std::vector<Point2> ext;
        if (s.set.kind() == ConvexSet::Kind::Singleton || (sets && s.set.kind() == ConvexSet::Kind::Polytope)) {
            Polygon hull = make_polygon([&] {
                std::vector<Point2> pts;
                for (Eigen::Index k = 0; k < s.set.points().rows(); ++k) pts.push_back(to2(s.set.points().row(k).transpose()));
                return pts;
            }());
            ext = hull.vertices;
        }
        if (!s.gauge.polytopal()) continue;
        const Mat V = -s.gauge.scaled(s.weight).vertices();
        for (const Point2& p : ext) {
            if ((v - p).norm() <= tol) return ExtremePointWitness{i, 0.0, Point2::Zero(), p};
            for (Eigen::Index k = 0; k < V.rows(); ++k) {
                Point2 w(V(k, 0), V(k, 1));
                double lam = (v - p).dot(w) / w.squaredNorm();
                if (lam < -tol || lam > alpha + tol) continue;
                if ((p + lam * w - v).norm() <= tol) return ExtremePointWitness{i, lam, w, p};
            }
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<ExtremePointWitness> verify_extreme_point_form(const Instance& inst, double alpha, const Point2& v) {
    require_points_polytopal(inst, "verify_extreme_point_form");
    return search_form(inst, alpha, v, false);
}

std::optional<ExtremePointWitness> extreme_point_form_sets(const Instance& inst, double alpha, const Point2& v) {
    require_planar(inst, "extreme_point_form_sets");
    return search_form(inst, alpha, v, true);
}

TriangleEquality triangle_equality_face(const Gauge& g, const Vec& x, const Vec& y) {
    double gx = g.eval(x), gy = g.eval(y);
    if (gx == 0.0 || gy == 0.0) throw PreconditionError("triangle_equality_face requires nonzero vectors");
    TriangleEquality te;
    te.additive = std::abs(g.eval(x + y) - gx - gy) <= 1e-9 * (1.0 + gx + gy);
    Vec a = x / gx, b = y / gy;
    te.segment_on_sphere = true;
    for (int k = 0; k <= 20; ++k) {
        double t = k / 20.0;
        if (std::abs(g.eval((1.0 - t) * a + t * b) - 1.0) > 1e-7) te.segment_on_sphere = false;
    }
    if (te.additive != te.segment_on_sphere)
        throw Error("triangle_equality_face: additivity and sphere-segment tests disagree");
    return te;
}

NormReport norm_characterization_report(const Gauge& g, int trials) {
    if (g.dim() != 2) throw PreconditionError("norm_characterization_report requires a planar gauge");
    NormReport rep;
    rep.is_norm = g.is_symmetric(1e-9);
    rep.strictly_convex = !g.polytopal();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(-2.0, 2.0), T(0.0, 1.0);
    auto rnd = [&] {
        Vec v(2);
        v << U(rng), U(rng);
        return v;
    };
    if (rep.is_norm) {
        rep.trials = trials;
        for (int t = 0; t < trials; ++t) {
            Vec x = rnd(), y = rnd();
            Instance inst;
            inst.dimension = 2;
            inst.sites = {{ConvexSet::point(x), g, 1.0}, {ConvexSet::point(y), g, 1.0}};
            SolveOptions so;
            so.attach_certificate = false;
            double v = solve(inst, so).value;
            Objective f(inst);
            bool ok = std::abs(v - g.eval(x - y)) <= 1e-7 * (1.0 + v);
            for (double s : {0.0, 0.25, 0.5, T(rng), 1.0}) ok = ok && std::abs(f((1.0 - s) * x + s * y) - v) <= 1e-7 * (1.0 + v);
            rep.trials_passed += ok;
        }
    } else {
        AsymmetryWitness w = asymmetry_witness(g);
        rep.witness = w;
        Instance inst;
        inst.dimension = 2;
        inst.sites = {{ConvexSet::point(w.x0), g, 1.0}, {ConvexSet::point(Vec::Zero(2)), g, 1.0}};
        GridSpec spec;
        double R = 2.0 * (1.0 + w.x0.norm());
        spec.low = Vec::Constant(2, -R);
        spec.high = Vec::Constant(2, R);
        spec.resolution = 41;
        spec.levels = 4;
        OracleResult out = grid_minimize(inst, spec);
        rep.witness_confirmed = argmin_set_matches(inst, out, std::vector<Vec>{Vec::Zero(2)}, 1e-2);
    }
    if (!g.polytopal()) {
        bool ok = true;
        for (int t = 0; t < trials; ++t) {
            Vec x = rnd(), y = rnd();
            for (int k = 0; k <= 10; ++k) ok = ok && dseg_contains(g, x, y, x + (y - x) * (k / 10.0), 1e-9);
            Vec dir(2);
            dir << -(y - x)(1), (y - x)(0);
            if (dir.norm() == 0.0) continue;
            dir.normalize();
            for (int k = 1; k < 10; ++k) ok = ok && !dseg_contains(g, x, y, x + (y - x) * (k / 10.0) + 1e-3 * dir, 1e-9);
        }
        rep.straight_dsegments = ok;
    } else {
        std::vector<Point2> pts;
        for (Eigen::Index k = 0; k < g.vertices().rows(); ++k) pts.push_back(to2(g.vertices().row(k).transpose()));
        Polygon ball = make_polygon(pts);
        Vec z1 = toV(ball.vertices[0]), z2 = toV(ball.vertices[1]);
        Vec x = z1 + z2, y = Vec::Zero(2);
        rep.counterexample = std::array<Vec, 3>{x, y, z1};
        bool on_segment = make_polygon({to2(x), to2(y)}).distance(to2(z1)) <= 1e-9;
        rep.counterexample_confirmed = dseg_contains(g, x, y, z1, 1e-9) && !on_segment;
    }
    return rep;
}

}  // namespace ftloc
