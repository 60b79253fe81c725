#pragma once

#include <optional>

#include "ftloc/gauge.hpp"

namespace ftloc {

struct Support {
    double value = 0.0;
    bool infinite = false;
};

// Closed convex sets: singleton, polytope (hull of finitely many points), flat
// (base + span of directions) and Euclidean ball.
class ConvexSet {
public:
    enum class Kind { Singleton, Polytope, Flat, Ball };

    static ConvexSet point(const Vec& p);
    static ConvexSet polytope(const Mat& points);  // rows are points
    static ConvexSet segment(const Vec& a, const Vec& b);
    static ConvexSet flat(const Vec& base, const Mat& directions);  // rows are directions
    static ConvexSet ball(const Vec& center, double radius);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    bool bounded() const { return kind_ != Kind::Flat; }
    bool polyhedral() const { return kind_ != Kind::Ball; }

    Support support(const Vec& phi) const;
    bool contains(const Vec& x, double tol = 1e-9) const;
    Vec project(const Vec& x) const;  // Euclidean projection
    // Representative point: the point, the centroid, the base or the center.
    Vec anchor() const;
    // Max Euclidean distance from anchor() over the set (infinite for flats).
    double spread() const;

    const Mat& points() const { return P_; }        // singleton / polytope
    const Vec& base() const { return base_; }       // flat
    const Mat& directions() const { return U_; }    // flat, as given
    const Mat& basis() const { return Q_; }         // flat, orthonormal columns
    const Vec& center() const { return base_; }     // ball
    double radius() const { return r_; }            // ball

private:
    Kind kind_ = Kind::Singleton;
    int dim_ = 0;
    Mat P_;
    Vec base_;
    Mat U_, Q_;
    double r_ = 0.0;
};

struct Distance {
    double value = 0.0;
    Vec witness;  // a nearest point of K
};

// dist_gamma(x, K) = inf_{y in K} gamma(y - x) together with a minimizer.
Distance set_distance(const Gauge& g, const Vec& x, const ConvexSet& K);

// Is phi in the normal cone of K at x (x is assumed to lie in K)?
bool normal_cone_contains(const ConvexSet& K, const Vec& x, const Vec& phi, double tol = 1e-9);

// Is phi in the subdifferential of dist_gamma(., K) at x?
bool dist_subdifferential_contains(const Gauge& g, const Vec& x, const ConvexSet& K, const Vec& phi,
                                   double tol = 1e-9);

}  // namespace ftloc
