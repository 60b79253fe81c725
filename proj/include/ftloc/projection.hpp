#pragma once

#include "ftloc/common.hpp"

namespace ftloc {

struct MinNormResult {
    Vec point;    // minimum-norm point of conv(rows of P)
    Vec weights;  // convex weights over the rows of P
};

// Wolfe's algorithm for the minimum-norm point of the convex hull of the rows of P.
MinNormResult min_norm_point(const Mat& P);

// Euclidean projection of x onto conv(rows of P).
MinNormResult project_hull(const Vec& x, const Mat& P);

// Euclidean projection onto base + span(Q), Q with orthonormal columns.
Vec project_flat(const Vec& x, const Vec& base, const Mat& Q);

// Nonnegative least squares: minimize ||G^T b - y|| over b >= 0 (rows of G are generators).
// Returns b; the projection onto cone(rows of G) is G^T b.
Vec nnls(const Mat& G, const Vec& y);

// Euclidean projection onto {w : (w-c)^T Q (w-c) <= 1} with Q symmetric positive definite.
class EllipsoidProjector {
public:
    EllipsoidProjector() = default;
    EllipsoidProjector(const Vec& center, const Mat& Q);
    Vec project(const Vec& x) const;
    const Vec& center() const { return c_; }

private:
    Vec c_;
    Mat V_;
    Vec lambda_;
};

}  // namespace ftloc
