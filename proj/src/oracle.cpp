#include "ftloc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ftloc {

void GridSpec::validate(int dim) const {
    if (low.size() != dim || high.size() != dim) throw DimensionMismatch("grid box has the wrong dimension");
    if (!low.allFinite() || !high.allFinite() || !((high - low).array() > 0.0).all())
        throw PreconditionError("grid box is degenerate");
    if (resolution < 3) throw PreconditionError("grid resolution must be at least 3");
    if (levels < 1) throw PreconditionError("grid levels must be at least 1");
}

double OracleResult::argmin_diameter() const {
    double d = 0.0;
    for (size_t i = 0; i < argmin_cells.size(); ++i)
        for (size_t j = i + 1; j < argmin_cells.size(); ++j) d = std::max(d, (argmin_cells[i] - argmin_cells[j]).norm());
    return d;
}

GridSpec default_grid(const Instance& inst, int resolution, int levels) {
    inst.validate();
    const int d = inst.dimension;
    Vec lo = Vec::Constant(d, std::numeric_limits<double>::infinity());
    Vec hi = -lo;
    Vec sum = Vec::Zero(d);
    int count = 0;
    auto include = [&](const Vec& p) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
        sum += p;
        ++count;
    };
    auto include_set = [&](const ConvexSet& K) {
        switch (K.kind()) {
            case ConvexSet::Kind::Singleton:
            case ConvexSet::Kind::Polytope:
                for (Eigen::Index k = 0; k < K.points().rows(); ++k) include(K.points().row(k).transpose());
                break;
            case ConvexSet::Kind::Flat: include(K.base()); break;
            case ConvexSet::Kind::Ball:
                include(K.center() - Vec::Constant(d, K.radius()));
                include(K.center() + Vec::Constant(d, K.radius()));
                break;
        }
    };
    for (const Site& s : inst.sites) include_set(s.set);
    if (inst.constraint) include_set(*inst.constraint);
    Vec centroid = sum / count;
    if (inst.constraint) centroid = inst.constraint->project(centroid);
    double margin = objective_eval(inst, centroid);
    margin = std::max(margin, 1e-3 * (1.0 + (hi - lo).norm())) + 1e-6;
    GridSpec g;
    g.low = lo.array() - margin;
    g.high = hi.array() + margin;
    g.resolution = resolution;
    g.levels = levels;
    return g;
}

namespace {

struct Cell {
    Vec center;
    double f;
};

}  // namespace

OracleResult grid_minimize(const Instance& inst, const GridSpec& spec) {
    inst.validate();
    const int d = inst.dimension;
    spec.validate(d);
    Objective obj(inst);
    OracleResult out;
    out.lipschitz = obj.lipschitz();
    auto feasible = [&](const Vec& x) -> Vec { return inst.constraint ? inst.constraint->project(x) : x; };
    auto eval = [&](const Vec& x) {
        ++out.evaluations;
        return obj(feasible(x));
    };

    Vec h = (spec.high - spec.low) / static_cast<double>(spec.resolution);
    std::vector<Cell> cells;
    {
        long total = 1;
        for (int i = 0; i < d; ++i) total *= spec.resolution;
        std::vector<int> idx(d, 0);
        cells.reserve(static_cast<size_t>(total));
        for (long c = 0; c < total; ++c) {
            Vec x(d);
            for (int i = 0; i < d; ++i) x(i) = spec.low(i) + (idx[i] + 0.5) * h(i);
            cells.push_back({x, eval(x)});
            for (int i = 0; i < d; ++i) {
                if (++idx[i] < spec.resolution) break;
                idx[i] = 0;
            }
        }
    }
    auto select = [&](std::vector<Cell>& cs, double band) {
        double best = std::numeric_limits<double>::infinity();
        for (const Cell& c : cs) best = std::min(best, c.f);
        std::vector<Cell> kept;
        for (Cell& c : cs)
            if (c.f <= best + band) kept.push_back(std::move(c));
        std::stable_sort(kept.begin(), kept.end(), [](const Cell& a, const Cell& b) { return a.f < b.f; });
        if (kept.size() > spec.max_cells) kept.resize(spec.max_cells);
        return kept;
    };

    long nchild = 1;
    for (int i = 0; i < d; ++i) nchild *= 3;
    for (int level = 0; level < spec.levels; ++level) {
        double band = out.lipschitz * 0.5 * h.norm();
        std::vector<Cell> kept = select(cells, band);
        h /= 3.0;
        cells.clear();
        cells.reserve(kept.size() * static_cast<size_t>(nchild));
        for (const Cell& parent : kept) {
            std::vector<int> off(d, -1);
            for (long c = 0; c < nchild; ++c) {
                bool center = std::all_of(off.begin(), off.end(), [](int o) { return o == 0; });
                Vec x = parent.center;
                for (int i = 0; i < d; ++i) x(i) += off[i] * h(i);
                cells.push_back({x, center ? parent.f : eval(x)});
                for (int i = 0; i < d; ++i) {
                    if (++off[i] <= 1) break;
                    off[i] = -1;
                }
            }
        }
    }
    out.cell_size = h.maxCoeff();
    double best = std::numeric_limits<double>::infinity();
    size_t ib = 0;
    for (size_t i = 0; i < cells.size(); ++i)
        if (cells[i].f < best) {
            best = cells[i].f;
            ib = i;
        }
    out.value = best;
    out.best = feasible(cells[ib].center);
    std::vector<Cell> ties = select(cells, out.cell_size * out.lipschitz);
    for (const Cell& c : ties) out.argmin_cells.push_back(feasible(c.center));
    return out;
}

namespace {

bool value_check(const Objective& obj, const Instance& inst, const OracleResult& out, const std::vector<Vec>& pts,
                 double tol) {
    const double slack = tol + out.cell_size * out.lipschitz;
    for (const Vec& p : pts) {
        Vec q = inst.constraint ? inst.constraint->project(p) : p;
        if (std::abs(obj(q) - out.value) > slack) return false;
    }
    return true;
}

}  // namespace

bool argmin_set_matches(const Instance& inst, const OracleResult& out, const std::vector<Vec>& candidate, double tol) {
    if (candidate.empty()) return false;
    Objective obj(inst);
    const double reach = tol + out.cell_size;
    for (const Vec& c : out.argmin_cells) {
        double dmin = std::numeric_limits<double>::infinity();
        for (const Vec& p : candidate) dmin = std::min(dmin, (c - p).norm());
        if (dmin > reach) return false;
    }
    return value_check(obj, inst, out, candidate, tol);
}

bool argmin_set_matches(const Instance& inst, const OracleResult& out, const Polygon& candidate, double tol) {
    if (inst.dimension != 2) throw DimensionMismatch("polygon candidates require a planar instance");
    if (candidate.rank == Polygon::Rank::Empty) return false;
    Objective obj(inst);
    const double reach = tol + out.cell_size;
    for (const Vec& c : out.argmin_cells)
        if (candidate.distance(Point2(c(0), c(1))) > reach) return false;
    std::vector<Vec> pts;
    for (const Point2& p : candidate.samples()) pts.push_back(Vec(p));
    return value_check(obj, inst, out, pts, tol);
}

}  // namespace ftloc
