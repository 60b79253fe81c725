#pragma once

#include <random>

#include "ftloc/euclid.hpp"
#include "ftloc/geometry2d.hpp"
#include "ftloc/oracle.hpp"

namespace fixtures {

using namespace ftloc;

inline Vec vec(std::initializer_list<double> xs) {
    Vec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

inline Mat rows(std::initializer_list<std::initializer_list<double>> rs) {
    Mat m(static_cast<Eigen::Index>(rs.size()), static_cast<Eigen::Index>(rs.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& r : rs) m.row(i++) = vec(r).transpose();
    return m;
}

// The asymmetric five-form gauge gamma = max{-x/2, x+y, x-y, x/2+y, x/2-y}.
inline Gauge five_form() { return Gauge::h_polytope(rows({{-0.5, 0}, {1, 1}, {1, -1}, {0.5, 1}, {0.5, -1}})); }

inline Instance points_instance(const std::vector<Vec>& pts, const Gauge& g) {
    Instance inst;
    inst.dimension = static_cast<int>(pts.front().size());
    for (const Vec& p : pts) inst.sites.push_back({ConvexSet::point(p), g, 1.0});
    return inst;
}

inline Instance two_point_asymmetric() { return points_instance({vec({-2, 2}), vec({-2, -2})}, five_form()); }

inline Instance l1_three_points() {
    return points_instance({vec({1, 0, -1}), vec({0, -1, 1}), vec({-1, 1, 0})}, Gauge::l1(3));
}

inline Instance chebyshev_segments() {
    Instance inst;
    inst.dimension = 2;
    Gauge g = Gauge::linf(2);
    inst.sites = {{ConvexSet::segment(vec({-4, -1}), vec({4, -1})), g, 1.0},
                  {ConvexSet::segment(vec({-4, 1}), vec({4, 1})), g, 1.0},
                  {ConvexSet::segment(vec({-1, -4}), vec({-1, 4})), g, 1.0},
                  {ConvexSet::segment(vec({1, -4}), vec({1, 4})), g, 1.0}};
    return inst;
}

inline ConvexSet x_axis() { return ConvexSet::flat(vec({0, 0}), rows({{1, 0}})); }

inline Instance heron() {
    Instance inst = points_instance({vec({0, 1}), vec({2, 1})}, Gauge::euclidean(2));
    inst.constraint = x_axis();
    return inst;
}

inline EuclidInstance euclid_points(const std::vector<Vec>& pts) {
    EuclidInstance e;
    e.dimension = static_cast<int>(pts.front().size());
    for (const Vec& p : pts) e.sites.push_back({ConvexSet::point(p), 1.0});
    return e;
}

class Random {
public:
    explicit Random(unsigned seed) : rng_(seed) {}

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
    Vec normal(int d) {
        std::normal_distribution<double> N;
        Vec v(d);
        for (int i = 0; i < d; ++i) v(i) = N(rng_);
        return v;
    }
    Vec unit(int d) {
        Vec v = normal(d);
        return v / v.norm();
    }
    Vec box(int d, double r) {
        Vec v(d);
        for (int i = 0; i < d; ++i) v(i) = uniform(-r, r);
        return v;
    }

    // Polytope ball around the origin: the 2d coordinate tips plus random extra points.
    Gauge polytope_gauge(int d) {
        int extra = d == 2 ? integer(2, 6) : integer(3, 8);
        Mat V(2 * d + extra, d);
        for (int i = 0; i < d; ++i) {
            V.row(2 * i) = (uniform(0.5, 2.0) * Vec::Unit(d, i)).transpose();
            V.row(2 * i + 1) = (-uniform(0.5, 2.0) * Vec::Unit(d, i)).transpose();
        }
        for (int k = 0; k < extra; ++k) V.row(2 * d + k) = (uniform(0.5, 2.0) * unit(d)).transpose();
        switch (integer(0, 5)) {
            case 0: return Gauge::l1(d);
            case 1: return Gauge::linf(d);
            case 2: {
                Gauge g = Gauge::v_polytope(V);
                return Gauge::h_polytope(g.facets());
            }
            default: return Gauge::v_polytope(V);
        }
    }

    Gauge ellipsoid_gauge(int d) {
        Mat R(d, d);
        for (int i = 0; i < d; ++i) R.row(i) = normal(d).transpose();
        Mat A = R * R.transpose() + 0.5 * Mat::Identity(d, d);
        // Shift the center so that ||A c|| stays below 1.
        Vec c = A.inverse() * (uniform(0.0, 0.6) * unit(d));
        return Gauge::ellipsoid(A, c);
    }

    ConvexSet polyhedral_site(int d, double spread) {
        Vec c = box(d, spread);
        switch (integer(0, 3)) {
            case 0:
            case 1: return ConvexSet::point(c);
            case 2: return ConvexSet::segment(c, c + uniform(0.3, 2.0) * unit(d));
            default: {
                int m = integer(d + 1, d + 3);
                Mat P(m, d);
                for (int k = 0; k < m; ++k) P.row(k) = (c + uniform(0.2, 1.0) * unit(d)).transpose();
                return ConvexSet::polytope(P);
            }
        }
    }

    ConvexSet mixed_site(int d, double spread) {
        if (integer(0, 4) == 0) return ConvexSet::ball(box(d, spread), uniform(0.2, 1.0));
        return polyhedral_site(d, spread);
    }

    // Bounded polyhedral sites, polytope gauges, weights in [1/2, 2].
    Instance polyhedral_instance(int d) {
        Instance inst;
        inst.dimension = d;
        int n = integer(3, 5);
        for (int i = 0; i < n; ++i) inst.sites.push_back({polyhedral_site(d, 3.0), polytope_gauge(d), uniform(0.5, 2.0)});
        return inst;
    }

    Instance mixed_instance(int d) {
        Instance inst;
        inst.dimension = d;
        int n = integer(2, 5);
        for (int i = 0; i < n; ++i) {
            Gauge g = integer(0, 1) ? polytope_gauge(d) : ellipsoid_gauge(d);
            inst.sites.push_back({mixed_site(d, 3.0), g, uniform(0.5, 2.0)});
        }
        return inst;
    }

    std::mt19937& engine() { return rng_; }

private:
    std::mt19937 rng_;
};

}  // namespace fixtures
