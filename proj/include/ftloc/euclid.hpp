#pragma once

#include <vector>

#include "ftloc/ftcore.hpp"

namespace ftloc {

struct EuclidSite {
    ConvexSet set;
    double weight = 1.0;
};

// Minsum instance in which every site is measured with the Euclidean norm.
struct EuclidInstance {
    int dimension = 0;
    std::vector<EuclidSite> sites;

    void validate() const;
    Instance to_instance() const;
    // Throws PreconditionError unless every gauge is the Euclidean norm and there is no constraint.
    static EuclidInstance from_instance(const Instance& inst);
};

struct EuclidOptimality {
    bool optimal = false;
    Vec u;                    // sum of weighted unit vectors toward the projections
    double residual = 0.0;    // distance of u from the sum of normal-cone caps (Dykstra)
    std::vector<int> containing;  // sites that contain the point
    std::vector<Vec> z;       // unit vectors (x - Proj) / ||x - Proj|| for the other sites
    int sweeps = 0;
};

EuclidOptimality euclid_optimality(const EuclidInstance& inst, const Vec& x, double tol = 1e-7);
bool euclid_optimal(const EuclidInstance& inst, const Vec& x, double tol = 1e-7);

// Decides whether u lies in the Minkowski sum of nor(x, K_i) ∩ B(0, r_i) by Dykstra's
// algorithm on the product space. Returns the final residual; sweeps receives the count.
double cone_cap_sum_residual(const std::vector<ConvexSet>& sets, const std::vector<double>& radii, const Vec& x,
                             const Vec& u, double tol, int* sweeps = nullptr);

enum class FlatCase { Floating, PointAbsorbed, FlatAbsorbed };

struct EuclidVerdict {
    bool optimal = false;
    Vec v;
    double alpha = 0.0;
    double bound = 0.0;
    double residual = 0.0;
};

// The absorbed site (a point or flat) is the last one; structural violations throw PreconditionError.
EuclidVerdict flat_case_test(const EuclidInstance& inst, const Vec& x, FlatCase which);

// Point {x} is the second to last site, the flat through x is the last one. The angle
// bound verdict is cross-checked against the cone-cap membership test.
EuclidVerdict flat_point_absorbed_test(const EuclidInstance& inst, const Vec& x);

// One-sided directional derivative of dist(., K) at x along y.
double directional_derivative(const ConvexSet& K, const Vec& x, const Vec& y);

struct Multiplicity {
    enum class Verdict { Unique, Multiple };
    Verdict verdict = Verdict::Unique;
    int which = 0;        // 1, 2 or 3 when Multiple
    Vec locus_a, locus_b;  // the minimizing segment when Multiple
    bool degenerate = false;  // the line meets F in one of the points
};

// Does dist(x, F) + sum ||p_i - x|| have more than one minimizer? F is a flat or a point.
Multiplicity multiplicity_classify(const ConvexSet& F, const std::vector<Vec>& points, double tol = 1e-9);

const char* to_string(FlatCase c);
const char* to_string(Multiplicity::Verdict v);

}  // namespace ftloc
