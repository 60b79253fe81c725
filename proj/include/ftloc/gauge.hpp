#pragma once

#include <vector>

#include "ftloc/common.hpp"

namespace ftloc {

// Generators of the set of norming functionals of a gauge at a point.
// When the point is the origin the set is the whole polar ball; for polytopal
// gauges the generators then list the polar vertices.
struct NormingSet {
    bool whole_polar_ball = false;
    std::vector<Vec> generators;
};

struct AsymmetryWitness {
    Vec x0;        // a point of the unit sphere where gamma(-x)/gamma(x) is largest
    double ratio;  // gamma(-x0) / gamma(x0)
};

// Minkowski functional of a compact convex body with the origin in its interior.
// Polytopal gauges are normalized at construction: facets() holds the nonredundant
// functionals {a_j} with B = {z : <a_j,z> <= 1} and vertices() the extreme points of B.
class Gauge {
public:
    enum class Kind { HPolytope, VPolytope, Ellipsoid };

    static Gauge h_polytope(const Mat& functionals);  // rows are a_j
    static Gauge v_polytope(const Mat& vertices);     // rows are vertices of B
    // B = {z : ||A (z - c)|| <= 1}, A symmetric positive definite, ||A c|| < 1.
    static Gauge ellipsoid(const Mat& A, const Vec& center);
    static Gauge euclidean(int d);
    static Gauge l1(int d);
    static Gauge linf(int d);

    Kind kind() const { return kind_; }
    bool polytopal() const { return kind_ != Kind::Ellipsoid; }
    int dim() const { return dim_; }

    double eval(const Vec& x) const;
    double polar(const Vec& phi) const;  // support function of B
    NormingSet norming_functionals(const Vec& x) const;
    // One norming functional (the gradient where gamma is smooth).
    Vec norming_functional(const Vec& x) const;

    Gauge opposite() const;          // gauge of -B
    Gauge scaled(double w) const;    // the gauge w * gamma, ball B / w
    double lipschitz() const;        // Lipschitz constant of gamma w.r.t. the Euclidean norm
    double inner_radius() const;     // largest r with the Euclidean r-ball inside B
    double outer_radius() const;     // max Euclidean norm over B

    // Polytope data.
    const Mat& facets() const;
    const Mat& vertices() const;
    const Mat& given() const { return given_; }  // generators exactly as supplied
    // Ellipsoid data.
    const Mat& matrix() const;
    const Vec& center() const;

    bool is_symmetric(double tol = 1e-9) const;

private:
    Kind kind_ = Kind::Ellipsoid;
    int dim_ = 0;
    Mat given_;
    Mat facets_, vertices_;
    Mat A_;
    Vec c_;
    Mat Ainv_;
    Vec Ac_;
    double acn2_ = 0.0;  // ||A c||^2
};

// Vertices of {z : M z <= 1}; throws InvalidGauge when the region is unbounded.
Mat enumerate_vertices(const Mat& M, double tol = 1e-9);

AsymmetryWitness asymmetry_witness(const Gauge& g);

}  // namespace ftloc
