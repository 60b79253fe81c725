#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ftloc/ftcore.hpp"

namespace ftloc {

using Point2 = Eigen::Vector2d;

// Convex polygon with explicit rank: a single point, a segment or a 2-D region.
// Vertices are counterclockwise; rays are only present for unbounded regions.
struct Polygon {
    enum class Rank { Empty, Point, Segment, Area };
    Rank rank = Rank::Empty;
    std::vector<Point2> vertices;
    std::vector<Point2> rays;

    bool unbounded() const { return !rays.empty(); }
    bool contains(const Point2& p, double tol = 1e-9) const;
    double distance(const Point2& p) const;  // Euclidean distance (bounded polygons)
    double area() const;
    // Points spread over the polygon: vertices, edge midpoints and the centroid.
    std::vector<Point2> samples() const;
};

const char* to_string(Polygon::Rank r);

// Normalize a raw vertex list into a convex polygon and classify its rank.
Polygon make_polygon(std::vector<Point2> pts, double rank_tol = 1e-8);
// Halfplane clipping {z : <n, z> <= b}; keeps degenerate results.
std::vector<Point2> clip(const std::vector<Point2>& poly, const Point2& n, double b, double eps);
double hausdorff(const Polygon& a, const Polygon& b);

bool dseg_contains(const Gauge& g, const Vec& x, const Vec& y, const Vec& z, double tol = 1e-9);
Polygon dseg_polygon(const Gauge& g, const Point2& x, const Point2& y);

// Sublevel set {f <= alpha} for singleton sites with polytopal gauges.
Polygon sublevel_polygon(const Instance& inst, double alpha);

// Solution locus as an intersection of cones p_i - cone(face of B_i exposed by -phi_i).
// The certificate uses the stored (set-problem) convention.
Polygon ft_locus_polygon(const Instance& inst, const Vec& xbar, const Certificate& cert);

struct ExtremePointWitness {
    size_t site = 0;
    double lambda = 0.0;
    Point2 w = Point2::Zero();
    Point2 p = Point2::Zero();  // the extreme point of the site used
};

// Search v = p_i + lambda w with w a vertex of -B_i (weighted) and lambda in [0, alpha].
std::optional<ExtremePointWitness> verify_extreme_point_form(const Instance& inst, double alpha, const Point2& v);
// The same search for set sites, with p ranging over the extreme points of each site.
std::optional<ExtremePointWitness> extreme_point_form_sets(const Instance& inst, double alpha, const Point2& v);

struct TriangleEquality {
    bool additive = false;           // gamma(x+y) = gamma(x) + gamma(y)
    bool segment_on_sphere = false;  // [x/gamma(x), y/gamma(y)] lies on the unit sphere
};
TriangleEquality triangle_equality_face(const Gauge& g, const Vec& x, const Vec& y);

struct NormReport {
    bool is_norm = false;
    bool strictly_convex = false;
    int trials = 0;
    int trials_passed = 0;  // pairs whose segment points all attain the two-point optimum
    std::optional<AsymmetryWitness> witness;
    bool witness_confirmed = false;  // oracle locates ft({x0, 0}) at the origin only
    bool straight_dsegments = false;  // ellipsoids: d-segment membership only on [x, y]
    std::optional<std::array<Vec, 3>> counterexample;  // x, y, z with z in [x,y]_gamma off [x,y]
    bool counterexample_confirmed = false;
};
NormReport norm_characterization_report(const Gauge& g, int trials = 20);

}  // namespace ftloc
