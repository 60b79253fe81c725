#include "ftloc/site_term.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "ftloc/simplex.hpp"

namespace ftloc {

namespace {

Mat stack_rows(const std::vector<Vec>& rows, Eigen::Index d) {
    Mat M(static_cast<Eigen::Index>(rows.size()), d);
    for (size_t i = 0; i < rows.size(); ++i) M.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    return M;
}

// Unit directions, deduplicated up to sign.
void add_direction(std::vector<Vec>& dirs, const Vec& v) {
    double n = v.norm();
    if (n < 1e-12) return;
    Vec u = v / n;
    for (const Vec& w : dirs)
        if ((w - u).norm() < 1e-9 || (w + u).norm() < 1e-9) return;
    dirs.push_back(u);
}

void add_normal(std::vector<Vec>& normals, const Vec& v) {
    double n = v.norm();
    if (n < 1e-10) return;
    Vec u = v / n;
    for (const Vec& w : normals)
        if ((w - u).norm() < 1e-9) return;
    normals.push_back(u);
}

// Boundary points of the polar ball of an ellipsoidal gauge.
Mat polar_ball_samples(const Gauge& g) {
    const int d = g.dim();
    std::vector<Vec> dirs;
    if (d == 1) {
        dirs.push_back(Vec::Ones(1));
        dirs.push_back(-Vec::Ones(1));
    } else if (d == 2) {
        for (int k = 0; k < 720; ++k) {
            double t = 2.0 * M_PI * k / 720.0;
            Vec u(2);
            u << std::cos(t), std::sin(t);
            dirs.push_back(u);
        }
    } else if (d == 3) {
        const int n = 2000;
        const double ga = M_PI * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < n; ++k) {
            double z = 1.0 - 2.0 * (k + 0.5) / n;
            double r = std::sqrt(1.0 - z * z);
            Vec u(3);
            u << r * std::cos(ga * k), r * std::sin(ga * k), z;
            dirs.push_back(u);
        }
    } else {
        std::mt19937_64 rng(777);
        std::normal_distribution<double> nd;
        for (int k = 0; k < 3000; ++k) {
            Vec u(d);
            for (int i = 0; i < d; ++i) u(i) = nd(rng);
            dirs.push_back(u.normalized());
        }
    }
    Mat S(static_cast<Eigen::Index>(dirs.size()), d);
    for (size_t k = 0; k < dirs.size(); ++k) S.row(static_cast<Eigen::Index>(k)) = g.norming_functional(dirs[k]).transpose();
    return S;
}

FunctionalSet single(const Vec& phi) {
    FunctionalSet fs;
    fs.generators = phi.transpose();
    return fs;
}

}  // namespace

FunctionalSet normal_cone_description(const ConvexSet& K, const Vec& x) {
    const Eigen::Index d = K.dim();
    FunctionalSet fs;
    fs.generators = Mat(0, d);
    fs.ineq = Mat(0, d);
    fs.eq = Mat(0, d);
    switch (K.kind()) {
        case ConvexSet::Kind::Singleton: fs.free_phi = true; break;
        case ConvexSet::Kind::Polytope:
            fs.free_phi = true;
            fs.ineq = K.points().rowwise() - x.transpose();
            fs.ineq_rhs = Vec::Zero(fs.ineq.rows());
            break;
        case ConvexSet::Kind::Flat:
            fs.free_phi = true;
            fs.eq = K.basis().transpose();
            fs.eq_rhs = Vec::Zero(fs.eq.rows());
            break;
        case ConvexSet::Kind::Ball: {
            Vec n = x - K.center();
            if (n.norm() >= K.radius() * (1.0 - 1e-9)) {
                fs.generators = n.normalized().transpose();
                fs.hull = false;
            } else {
                fs.generators = Mat::Zero(1, d);
            }
            break;
        }
    }
    if (fs.ineq_rhs.size() != fs.ineq.rows()) fs.ineq_rhs = Vec::Zero(fs.ineq.rows());
    if (fs.eq_rhs.size() != fs.eq.rows()) fs.eq_rhs = Vec::Zero(fs.eq.rows());
    return fs;
}

SiteTerm::SiteTerm(const Gauge& weighted_gauge, const ConvexSet& K)
    : gauge_(weighted_gauge), set_(K), lipschitz_(weighted_gauge.lipschitz()) {
    if (gauge_.dim() != set_.dim()) throw DimensionMismatch("site gauge and set dimensions differ");
    if (gauge_.polytopal() && set_.polyhedral() && set_.kind() != ConvexSet::Kind::Singleton && gauge_.dim() <= 3)
        build_table();
}

void SiteTerm::build_table() {
    const int d = gauge_.dim();
    const Mat& V = gauge_.vertices();
    std::vector<Vec> dirs;
    for (Eigen::Index i = 0; i < V.rows(); ++i)
        for (Eigen::Index j = i + 1; j < V.rows(); ++j) add_direction(dirs, (V.row(i) - V.row(j)).transpose());
    if (set_.kind() == ConvexSet::Kind::Polytope) {
        const Mat& P = set_.points();
        for (Eigen::Index i = 0; i < P.rows(); ++i)
            for (Eigen::Index j = i + 1; j < P.rows(); ++j) add_direction(dirs, (P.row(i) - P.row(j)).transpose());
    } else {
        for (Eigen::Index k = 0; k < set_.basis().cols(); ++k) add_direction(dirs, set_.basis().col(k));
    }
    std::vector<Vec> normals;
    if (d == 1) {
        normals.push_back(Vec::Ones(1));
        normals.push_back(-Vec::Ones(1));
    } else if (d == 2) {
        for (const Vec& u : dirs) {
            Vec n(2);
            n << -u(1), u(0);
            add_normal(normals, n);
            add_normal(normals, -n);
        }
    } else {
        if (dirs.size() * dirs.size() > 40000) return;
        for (size_t i = 0; i < dirs.size(); ++i)
            for (size_t j = i + 1; j < dirs.size(); ++j) {
                Eigen::Vector3d a = dirs[i], b = dirs[j];
                Vec n = a.cross(b);
                add_normal(normals, n);
                add_normal(normals, -n);
            }
    }
    std::vector<Vec> rows;
    std::vector<double> hk, hb;
    for (const Vec& n : normals) {
        Support s = set_.support(n);
        if (s.infinite) continue;
        double h = (V * (-n)).maxCoeff();
        rows.push_back(n / h);
        hk.push_back(s.value / h);
        hb.push_back(h);
    }
    if (rows.empty()) return;
    table_normals_ = stack_rows(rows, d);
    table_hk_ = Eigen::Map<Vec>(hk.data(), static_cast<Eigen::Index>(hk.size()));
    table_hb_ = Eigen::Map<Vec>(hb.data(), static_cast<Eigen::Index>(hb.size()));
}

double SiteTerm::value(const Vec& x) const {
    if (set_.kind() == ConvexSet::Kind::Singleton) return gauge_.eval(set_.anchor() - x);
    if (has_table()) return std::max(0.0, (table_normals_ * x - table_hk_).maxCoeff());
    return distance(x).value;
}

double SiteTerm::value_and_subgradient(const Vec& x, Vec& g) const {
    const Eigen::Index d = gauge_.dim();
    if (set_.kind() == ConvexSet::Kind::Singleton) {
        Vec u = set_.anchor() - x;
        double v = gauge_.eval(u);
        g = v > 0.0 ? Vec(-gauge_.norming_functional(u)) : Vec(Vec::Zero(d));
        return v;
    }
    if (has_table()) {
        Eigen::Index j;
        double v = (table_normals_ * x - table_hk_).maxCoeff(&j);
        if (v <= 0.0) {
            g = Vec::Zero(d);
            return 0.0;
        }
        g = table_normals_.row(j).transpose();
        return v;
    }
    Distance D = distance(x);
    if (D.value <= 0.0) {
        g = Vec::Zero(d);
        return 0.0;
    }
    if (!gauge_.polytopal()) {
        g = -gauge_.norming_functional(D.witness - x);
    } else if (set_.kind() == ConvexSet::Kind::Ball) {
        Vec n = (D.witness - set_.center()).normalized();
        g = n / gauge_.polar(-n);
    } else {
        // Pick any point of the polyhedral subdifferential.
        FunctionalSet fs = subdifferential(x, 0.0);
        const Eigen::Index k = fs.generators.rows();
        LinearProgram lp(k);
        lp.add_eq(Vec::Ones(k), 1.0);
        for (Eigen::Index i = 0; i < fs.ineq.rows(); ++i)
            lp.add_ub(fs.generators * fs.ineq.row(i).transpose(), fs.ineq_rhs(i) + 1e-12 * (1.0 + D.value));
        for (Eigen::Index i = 0; i < fs.eq.rows(); ++i)
            lp.add_eq(fs.generators * fs.eq.row(i).transpose(), fs.eq_rhs(i));
        LpResult r = solve_lp(lp);
        if (r.status != LpStatus::Optimal) throw Error("subgradient LP failed");
        g = fs.generators.transpose() * r.x;
    }
    return D.value;
}

FunctionalSet SiteTerm::subdifferential(const Vec& x, double snap_tol) const {
    const Eigen::Index d = gauge_.dim();
    Distance D = distance(x);
    double delta = D.value;
    Vec xe = x;
    const bool inside = delta <= snap_tol;
    if (inside) {
        delta = 0.0;
        xe = set_.project(x);
    }
    FunctionalSet fs;
    fs.ineq = Mat(0, d);
    fs.ineq_rhs = Vec(0);
    fs.eq = Mat(0, d);
    fs.eq_rhs = Vec(0);

    if (set_.kind() == ConvexSet::Kind::Ball) {
        if (!inside) {
            if (gauge_.polytopal()) {
                Vec n = (D.witness - set_.center()).normalized();
                return single(n / gauge_.polar(-n));
            }
            return single(-gauge_.norming_functional(D.witness - x));
        }
        Vec n = xe - set_.center();
        if (n.norm() >= set_.radius() * (1.0 - 1e-9)) {
            n.normalize();
            fs.generators = Mat::Zero(2, d);
            fs.generators.row(1) = (n / gauge_.polar(-n)).transpose();
        } else {
            fs.generators = Mat::Zero(1, d);
        }
        return fs;
    }

    if (!gauge_.polytopal() && !inside) return single(-gauge_.norming_functional(D.witness - x));

    fs.generators = gauge_.polytopal() ? Mat(-gauge_.facets()) : Mat(-polar_ball_samples(gauge_));
    switch (set_.kind()) {
        case ConvexSet::Kind::Singleton:
            if (!inside) {
                fs.ineq = (set_.anchor() - xe).transpose();
                fs.ineq_rhs = Vec::Constant(1, -delta);
            }
            break;
        case ConvexSet::Kind::Polytope:
            fs.ineq = set_.points().rowwise() - xe.transpose();
            fs.ineq_rhs = Vec::Constant(fs.ineq.rows(), -delta);
            break;
        case ConvexSet::Kind::Flat:
            fs.eq = set_.basis().transpose();
            fs.eq_rhs = Vec::Zero(fs.eq.rows());
            fs.ineq = (set_.base() - xe).transpose();
            fs.ineq_rhs = Vec::Constant(1, -delta);
            break;
        case ConvexSet::Kind::Ball: break;
    }
    return fs;
}

}  // namespace ftloc
