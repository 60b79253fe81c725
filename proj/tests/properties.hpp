#pragma once

// Randomized property checks shared by the doctest suites and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "ftloc/simplex.hpp"
#include "support.hpp"

namespace properties {

using namespace ftloc;
using fixtures::Random;

struct Outcome {
    bool ok = true;
    long checks = 0;
    std::string detail;

    void expect(bool cond, const std::string& what) {
        ++checks;
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

inline std::string num(double x) {
    std::ostringstream s;
    s.precision(6);
    s << x;
    return s.str();
}

inline std::vector<Gauge> gauge_zoo(Random& R, int d) {
    std::vector<Gauge> gs = {Gauge::euclidean(d), Gauge::l1(d), Gauge::linf(d)};
    if (d == 2) gs.push_back(fixtures::five_form());
    for (int k = 0; k < 4; ++k) gs.push_back(R.polytope_gauge(d));
    for (int k = 0; k < 3; ++k) gs.push_back(R.ellipsoid_gauge(d));
    return gs;
}

// Positive homogeneity, subadditivity and definiteness on random pairs.
inline Outcome gauge_axioms(unsigned seed, int pairs = 1000) {
    Random R(seed);
    Outcome out;
    for (int d : {2, 3}) {
        std::vector<Gauge> gs = gauge_zoo(R, d);
        for (int t = 0; t < pairs; ++t) {
            const Gauge& g = gs[static_cast<size_t>(t) % gs.size()];
            Vec x = R.box(d, 5.0), y = R.box(d, 5.0);
            double lam = R.uniform(0.0, 10.0), gx = g.eval(x);
            out.expect(std::abs(g.eval(lam * x) - lam * gx) <= 1e-9 * (1.0 + lam * gx), "homogeneity at " + num(lam));
            out.expect(g.eval(x + y) <= gx + g.eval(y) + 1e-9, "subadditivity");
            out.expect(gx > 0.0, "definiteness");
        }
        for (const Gauge& g : gs) out.expect(g.eval(Vec::Zero(d)) == 0.0, "gauge of zero");
    }
    return out;
}

// -g°(-phi) g(x) <= <phi, x> <= g°(phi) g(x).
inline Outcome cauchy_schwarz(unsigned seed, int samples = 1000) {
    Random R(seed);
    Outcome out;
    for (int d : {2, 3}) {
        std::vector<Gauge> gs = gauge_zoo(R, d);
        for (int t = 0; t < samples; ++t) {
            const Gauge& g = gs[static_cast<size_t>(t) % gs.size()];
            Vec x = R.box(d, 5.0), phi = R.box(d, 5.0);
            double s = phi.dot(x), gx = g.eval(x);
            double scale = 1e-9 * (1.0 + std::abs(s) + g.polar(phi) * gx + g.polar(-phi) * gx);
            out.expect(s <= g.polar(phi) * gx + scale, "upper Cauchy-Schwarz");
            out.expect(-g.polar(-phi) * gx <= s + scale, "lower Cauchy-Schwarz");
        }
    }
    return out;
}

// gamma(x) = max over polar-ball extreme points; the norming functional attains it.
inline Outcome bipolar_max(unsigned seed, int samples = 300) {
    Random R(seed);
    Outcome out;
    for (int d : {2, 3}) {
        std::vector<Gauge> gs = gauge_zoo(R, d);
        for (int t = 0; t < samples; ++t) {
            const Gauge& g = gs[static_cast<size_t>(t) % gs.size()];
            Vec x = R.box(d, 5.0);
            double gx = g.eval(x);
            double best = -1e300;
            if (g.polytopal()) {
                best = (g.facets() * x).maxCoeff();
            } else {
                for (int k = 0; k < 200; ++k) {
                    Vec u = R.unit(d);
                    Vec phi = u / g.polar(u);
                    double v = phi.dot(x);
                    out.expect(v <= gx + 1e-9 * (1.0 + gx), "polar-ball point exceeds the gauge");
                    best = std::max(best, v);
                }
            }
            Vec phi = g.norming_functional(x);
            out.expect(std::abs(g.polar(phi) - 1.0) <= 1e-7, "norming functional off the polar sphere");
            out.expect(std::abs(phi.dot(x) - gx) <= 1e-7 * (1.0 + gx), "norming functional does not attain");
            best = std::max(best, phi.dot(x));
            out.expect(std::abs(best - gx) <= 1e-7 * (1.0 + gx), "bipolar maximum " + num(best) + " vs " + num(gx));
        }
    }
    return out;
}

// dist(x, C) = h(x, C° ∩ (-B°)) for a planar polyhedral cone C (truncated far away).
inline Outcome cone_distance_identity(unsigned seed, int samples = 200) {
    Random R(seed);
    Outcome out;
    const double far = 1e4;
    for (int t = 0; t < samples; ++t) {
        Gauge g = t % 3 == 0 ? fixtures::five_form() : R.polytope_gauge(2);
        Vec g1 = R.unit(2), g2 = R.unit(2);
        if (std::abs(g1(0) * g2(1) - g1(1) * g2(0)) < 0.1) continue;  // keep the cone pointed
        ConvexSet C = ConvexSet::polytope(fixtures::rows({{0, 0}, {far * g1(0), far * g1(1)}, {far * g2(0), far * g2(1)}}));
        Vec x = R.box(2, 5.0);
        double dist = set_distance(g, x, C).value;
        // Support of the polar intersection by LP: max <phi, x>, <phi, g_k> <= 0, <-phi, v> <= 1.
        LinearProgram lp(2);
        lp.cost() = -x;
        lp.set_free(0);
        lp.set_free(1);
        lp.add_ub(g1, 0.0);
        lp.add_ub(g2, 0.0);
        for (Eigen::Index k = 0; k < g.vertices().rows(); ++k) lp.add_ub(-g.vertices().row(k).transpose(), 1.0);
        LpResult r = solve_lp(lp);
        out.expect(r.status == LpStatus::Optimal, "cone support LP failed");
        double h = -r.objective;
        out.expect(std::abs(dist - h) <= 1e-6, "cone distance " + num(dist) + " vs support " + num(h));
    }
    return out;
}

// Subdifferential of the distance to a flat r + U equals U⊥ ∩ (-B°) ∩ {dist = <phi, x - r>}.
inline Outcome flat_subdifferential(unsigned seed, int samples = 300) {
    Random R(seed);
    Outcome out;
    for (int t = 0; t < samples; ++t) {
        int d = 2 + t % 2;
        Gauge g = t % 2 ? R.polytope_gauge(d) : R.ellipsoid_gauge(d);
        int k = R.integer(1, d - 1);
        Mat U(k, d);
        for (int i = 0; i < k; ++i) U.row(i) = R.normal(d).transpose();
        Vec r = R.box(d, 2.0);
        ConvexSet K = ConvexSet::flat(r, U);
        Vec x = t % 5 == 0 ? K.project(R.box(d, 3.0)) : R.box(d, 3.0);
        double dist = set_distance(g, x, K).value;
        const Mat& Q = K.basis();

        std::vector<Vec> candidates;
        Vec sg;
        SiteTerm(g, K).value_and_subgradient(x, sg);
        candidates.push_back(sg);
        candidates.push_back(R.normal(d));
        Vec perp = R.normal(d);
        perp -= Q * (Q.transpose() * perp);
        candidates.push_back(perp / g.polar(-perp));
        candidates.push_back(Vec::Zero(d));
        for (const Vec& phi : candidates) {
            bool accepted = dist_subdifferential_contains(g, x, K, phi, 1e-9);
            bool in_perp = (Q.transpose() * phi).norm() <= 1e-7;
            bool in_ball = g.polar(-phi) <= 1.0 + 1e-7;
            bool equality = std::abs(dist - phi.dot(x - r)) <= 1e-7 * (1.0 + dist);
            bool listed = in_perp && in_ball && equality;
            out.expect(accepted == listed, "flat subdifferential mismatch (accepted " + std::to_string(accepted) + ")");
        }
        out.expect(dist_subdifferential_contains(g, x, K, sg, 1e-7), "solver subgradient rejected");
    }
    return out;
}

// One-sided directional derivative of the Euclidean distance against forward differences.
inline Outcome directional_derivatives(unsigned seed, int samples = 400) {
    Random R(seed);
    Outcome out;
    const double h = 1e-6;
    for (int t = 0; t < samples; ++t) {
        int d = 2 + t % 2;
        ConvexSet K = [&]() -> ConvexSet {
            switch (t % 4) {
                case 0: return ConvexSet::ball(R.box(d, 1.0), R.uniform(0.5, 2.0));
                case 1: return R.polyhedral_site(d, 1.0);
                case 2: {
                    Mat U(1, d);
                    U.row(0) = R.normal(d).transpose();
                    return ConvexSet::flat(R.box(d, 1.0), U);
                }
                default: {
                    Mat P(d + 2, d);
                    for (int k = 0; k < d + 2; ++k) P.row(k) = R.box(d, 1.5).transpose();
                    return ConvexSet::polytope(P);
                }
            }
        }();
        auto dist = [&](const Vec& z) { return (z - K.project(z)).norm(); };
        Vec x = R.box(d, 3.0);
        bool boundary = t % 3 == 0;
        if (boundary) x = K.project(x);  // a boundary point (or the set itself for points)
        else if (dist(x) < 0.2) continue;
        Vec y = R.unit(d);
        double dd = directional_derivative(K, x, y);
        double fd = (dist(x + h * y) - dist(x)) / h;
        out.expect(std::abs(dd - fd) <= 10 * h, "directional derivative " + num(dd) + " vs difference " + num(fd));
    }
    return out;
}

// Is x optimal for the instance? Polyhedral: certificate search. Otherwise compare with a fresh solve.
inline bool confirmed_optimal(const Instance& inst, const Vec& x) {
    if (inst.polyhedral() && !inst.constraint) return find_certificate(inst, x, 1e-7).has_value();
    double fx = objective_eval(inst, x);
    SolveOptions so;
    so.attach_certificate = false;
    double best = solve(inst, so).value;
    return fx <= best + 1e-6 * (1.0 + std::abs(best));
}

inline Instance random_points_instance(Random& R, int n, bool smooth) {
    Gauge g = smooth ? R.ellipsoid_gauge(2) : R.polytope_gauge(2);
    std::vector<Vec> pts;
    for (int i = 0; i < n; ++i) pts.push_back(R.box(2, 3.0));
    Instance inst = fixtures::points_instance(pts, g);
    for (Site& s : inst.sites) s.gauge = R.integer(0, 2) ? g : (smooth ? R.ellipsoid_gauge(2) : R.polytope_gauge(2));
    return inst;
}

// Absorption, scaling toward the optimum, removal and splitting for point sites.
inline Outcome point_set_operations(unsigned seed, int trials = 30) {
    Random R(seed);
    Outcome out;
    SolveOptions so;
    so.attach_certificate = false;
    for (int t = 0; t < trials; ++t) {
        bool smooth = t % 3 == 2;
        Instance inst = random_points_instance(R, R.integer(3, 5), smooth);
        Vec p0 = solve(inst, so).point;

        Instance absorbed = inst;
        absorbed.sites.push_back({ConvexSet::point(p0), inst.sites[0].gauge, 1.0});
        out.expect(confirmed_optimal(absorbed, p0), "absorption");

        Instance scaled = inst;
        for (Site& s : scaled.sites) {
            double lam = R.uniform(0.05, 1.0);
            s.set = ConvexSet::point(p0 + lam * (s.set.anchor() - p0));
        }
        out.expect(confirmed_optimal(scaled, p0), "scaling toward the optimum");

        bool at_site = false;
        for (const Site& s : inst.sites) at_site = at_site || (s.set.anchor() - p0).norm() <= 1e-7;
        if (!at_site) {
            Instance removed = inst;
            removed.sites.back().set = ConvexSet::point(p0);
            out.expect(confirmed_optimal(removed, p0), "removal");
        }
    }
    // Splitting: symmetric pairs around a common center under norms.
    for (int t = 0; t < trials; ++t) {
        Gauge g = t % 3 == 0 ? Gauge::euclidean(2) : t % 3 == 1 ? Gauge::l1(2) : Gauge::linf(2);
        Vec c = R.box(2, 2.0);
        std::vector<Instance> parts;
        Instance full;
        full.dimension = 2;
        for (int j = 0; j < 3; ++j) {
            Vec u = R.box(2, 2.0);
            Instance part = fixtures::points_instance({c + u, c - u}, g);
            for (const Site& s : part.sites) full.sites.push_back(s);
            parts.push_back(part);
        }
        double fstar = objective_eval(full, c);
        std::vector<double> part_star;
        for (const Instance& p : parts) part_star.push_back(objective_eval(p, c));
        out.expect(confirmed_optimal(full, c), "common minimizer not optimal for the union");
        for (int k = 0; k < 40; ++k) {
            Vec z = c + R.box(2, k < 20 ? 0.3 : 2.0);
            bool full_opt = objective_eval(full, z) <= fstar + 1e-9;
            bool all_parts = true;
            for (size_t j = 0; j < parts.size(); ++j)
                all_parts = all_parts && objective_eval(parts[j], z) <= part_star[j] + 1e-9;
            out.expect(full_opt == all_parts, "splitting: locus differs from the intersection");
        }
    }
    return out;
}

// Midpoints of two optimal points stay optimal; strictly convex gauges give one optimum.
inline Outcome locus_shape(unsigned seed, int trials = 20) {
    Random R(seed);
    Outcome out;
    for (int t = 0; t < trials; ++t) {
        Instance inst = random_points_instance(R, R.integer(2, 4), false);
        for (Site& s : inst.sites) s.gauge = inst.sites[0].gauge;
        double fstar = solve(inst).value;
        Polygon P = sublevel_polygon(inst, fstar);
        Objective f(inst);
        for (size_t i = 0; i < P.vertices.size(); ++i)
            for (size_t j = i + 1; j < P.vertices.size(); ++j) {
                Vec m = Vec(0.5 * (P.vertices[i] + P.vertices[j]));
                out.expect(f(m) <= fstar + 1e-7, "midpoint of two optima is not optimal");
            }
    }
    for (int t = 0; t < trials; ++t) {
        Instance inst = random_points_instance(R, 3, true);
        SolveOptions a, b;
        a.attach_certificate = b.attach_certificate = false;
        a.start = inst.sites[0].set.anchor();
        b.start = inst.sites[2].set.anchor() + fixtures::vec({3.0, -2.0});
        Vec xa = solve(inst, a).point, xb = solve(inst, b).point;
        out.expect((xa - xb).norm() <= 1e-6, "multi-start solves disagree: " + num((xa - xb).norm()));
    }
    return out;
}

}  // namespace properties
