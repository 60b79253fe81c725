#pragma once

#include "ftloc/convex_set.hpp"

namespace ftloc {

// Polyhedral description of a set of functionals:
//   phi = G^T beta with beta >= 0 (and sum beta = 1 when `hull`), or phi free when G has no rows
//   and `free_phi` is set; then <ineq_i, phi> <= ineq_rhs_i and <eq_i, phi> = eq_rhs_i.
struct FunctionalSet {
    Mat generators;
    bool hull = true;
    bool free_phi = false;
    Mat ineq;
    Vec ineq_rhs;
    Mat eq;
    Vec eq_rhs;
};

// Normal cone nor(x, K) as a FunctionalSet (x is assumed to lie in K).
FunctionalSet normal_cone_description(const ConvexSet& K, const Vec& x);

// One term w * dist_gamma(., K) of the objective with the weight folded into the gauge.
// Precomputes an exact facet table for polytopal gauges and polyhedral sites in low dimension.
class SiteTerm {
public:
    SiteTerm(const Gauge& weighted_gauge, const ConvexSet& K);

    double value(const Vec& x) const;
    double value_and_subgradient(const Vec& x, Vec& g) const;
    Distance distance(const Vec& x) const { return set_distance(gauge_, x, set_); }
    // The subdifferential at x. Points within snap_tol of K are treated as lying in K.
    FunctionalSet subdifferential(const Vec& x, double snap_tol) const;

    const Gauge& gauge() const { return gauge_; }
    const ConvexSet& set() const { return set_; }
    double lipschitz() const { return lipschitz_; }
    bool has_table() const { return table_normals_.rows() > 0; }

private:
    Gauge gauge_;
    ConvexSet set_;
    double lipschitz_;
    // Rows n with (<n,x> - hK) / hB over all rows giving the distance when positive.
    Mat table_normals_;
    Vec table_hk_, table_hb_;
    void build_table();
};

}  // namespace ftloc
