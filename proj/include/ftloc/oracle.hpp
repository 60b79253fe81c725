#pragma once

#include <vector>

#include "ftloc/geometry2d.hpp"

namespace ftloc {

struct GridSpec {
    Vec low, high;
    int resolution = 20;      // cells per axis on the first level
    int levels = 4;           // refinement levels after the first grid (each divides cells by 3)
    size_t max_cells = 2000;  // refinement budget per level; the best cells are kept

    void validate(int dim) const;
};

struct OracleResult {
    double value = 0.0;
    Vec best;
    std::vector<Vec> argmin_cells;  // centers within cell_size * lipschitz of the best value
    double cell_size = 0.0;         // final cell edge (largest axis)
    double lipschitz = 0.0;         // sum of weighted gauge Lipschitz bounds
    long evaluations = 0;

    double argmin_diameter() const;
};

// Box around all site generators, inflated by the objective value at their centroid.
GridSpec default_grid(const Instance& inst, int resolution = 20, int levels = 4);

// Multi-level grid search. With a constraint K0 the objective is evaluated at the
// Euclidean projection onto K0, which has the same minimum and Lipschitz bound.
OracleResult grid_minimize(const Instance& inst, const GridSpec& spec);

// Every near-optimal cell lies within tol + cell_size of the candidate, and every sampled
// candidate point attains the oracle value within tol + cell_size * lipschitz.
bool argmin_set_matches(const Instance& inst, const OracleResult& out, const std::vector<Vec>& candidate, double tol);
bool argmin_set_matches(const Instance& inst, const OracleResult& out, const Polygon& candidate, double tol);

}  // namespace ftloc
