#include "ftloc/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ftloc/simplex.hpp"

namespace ftloc {

namespace {

// max <e, z> over {z : M z <= 1}; returns false when unbounded.
bool bounded_in_direction(const Mat& M, const Vec& e) {
    LinearProgram lp(M.cols());
    for (Eigen::Index j = 0; j < M.cols(); ++j) lp.set_free(j);
    lp.cost() = -e;
    for (Eigen::Index i = 0; i < M.rows(); ++i) lp.add_ub(M.row(i).transpose(), 1.0);
    LpResult r = solve_lp(lp);
    return r.status == LpStatus::Optimal;
}

bool next_combination(std::vector<Eigen::Index>& idx, Eigen::Index n) {
    const Eigen::Index k = static_cast<Eigen::Index>(idx.size());
    for (Eigen::Index i = k - 1; i >= 0; --i) {
        if (idx[i] < n - k + i) {
            ++idx[i];
            for (Eigen::Index j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

Mat enumerate_vertices(const Mat& M, double tol) {
    const Eigen::Index d = M.cols(), m = M.rows();
    if (d == 0) throw InvalidGauge("zero-dimensional gauge");
    if (!M.allFinite()) throw InvalidGauge("non-finite entries");
    if (m < d + 1) throw InvalidGauge("region {z : Mz <= 1} is unbounded (too few rows)");
    for (Eigen::Index i = 0; i < d; ++i) {
        Vec e = Vec::Zero(d);
        e(i) = 1.0;
        if (!bounded_in_direction(M, e) || !bounded_in_direction(M, -e))
            throw InvalidGauge("region {z : Mz <= 1} is unbounded");
    }
    std::vector<Vec> out;
    std::vector<Eigen::Index> idx(d);
    for (Eigen::Index i = 0; i < d; ++i) idx[i] = i;
    Mat S(d, d);
    do {
        for (Eigen::Index i = 0; i < d; ++i) S.row(i) = M.row(idx[i]);
        Eigen::FullPivLU<Mat> lu(S);
        lu.setThreshold(1e-10);
        if (lu.rank() < d) continue;
        Vec z = lu.solve(Vec::Ones(d));
        if (!z.allFinite()) continue;
        double scale = 1.0 + z.norm();
        if (((M * z).array() <= 1.0 + tol * scale).all()) {
            bool dup = false;
            for (const Vec& w : out)
                if ((w - z).norm() <= tol * scale) {
                    dup = true;
                    break;
                }
            if (!dup) out.push_back(z);
        }
    } while (next_combination(idx, m));
    Mat V(static_cast<Eigen::Index>(out.size()), d);
    for (size_t k = 0; k < out.size(); ++k) V.row(static_cast<Eigen::Index>(k)) = out[k].transpose();
    return V;
}

Gauge Gauge::h_polytope(const Mat& functionals) {
    Gauge g;
    g.kind_ = Kind::HPolytope;
    g.dim_ = static_cast<int>(functionals.cols());
    g.given_ = functionals;
    g.vertices_ = enumerate_vertices(functionals);
    g.facets_ = enumerate_vertices(g.vertices_);
    return g;
}

Gauge Gauge::v_polytope(const Mat& vertices) {
    Gauge g;
    g.kind_ = Kind::VPolytope;
    g.dim_ = static_cast<int>(vertices.cols());
    g.given_ = vertices;
    try {
        g.facets_ = enumerate_vertices(vertices);
    } catch (const InvalidGauge&) {
        throw InvalidGauge("v-polytope gauge: origin is not an interior point of the hull");
    }
    g.vertices_ = enumerate_vertices(g.facets_);
    return g;
}

Gauge Gauge::ellipsoid(const Mat& A, const Vec& center) {
    const Eigen::Index d = A.rows();
    if (d == 0 || A.cols() != d) throw InvalidGauge("ellipsoid matrix must be square and nonempty");
    require_dim(center, d, "ellipsoid center");
    if (!A.allFinite() || !center.allFinite()) throw InvalidGauge("non-finite entries");
    if ((A - A.transpose()).norm() > 1e-12 * (1.0 + A.norm()))
        throw InvalidGauge("ellipsoid matrix must be symmetric");
    Eigen::LLT<Mat> llt(A);
    if (llt.info() != Eigen::Success) throw InvalidGauge("ellipsoid matrix must be positive definite");
    Gauge g;
    g.kind_ = Kind::Ellipsoid;
    g.dim_ = static_cast<int>(d);
    g.A_ = A;
    g.c_ = center;
    g.Ainv_ = A.inverse();
    g.Ac_ = A * center;
    g.acn2_ = g.Ac_.squaredNorm();
    if (g.acn2_ >= 1.0) throw InvalidGauge("ellipsoid does not contain the origin in its interior");
    return g;
}

Gauge Gauge::euclidean(int d) { return ellipsoid(Mat::Identity(d, d), Vec::Zero(d)); }

Gauge Gauge::l1(int d) {
    // Ball is the cross-polytope; its facets are the sign vectors.
    Mat F(1 << d, d);
    for (int s = 0; s < (1 << d); ++s)
        for (int i = 0; i < d; ++i) F(s, i) = (s >> i) & 1 ? -1.0 : 1.0;
    return h_polytope(F);
}

Gauge Gauge::linf(int d) {
    Mat F(2 * d, d);
    F.setZero();
    for (int i = 0; i < d; ++i) {
        F(2 * i, i) = 1.0;
        F(2 * i + 1, i) = -1.0;
    }
    return h_polytope(F);
}

double Gauge::eval(const Vec& x) const {
    require_dim(x, dim_, "gauge argument");
    if (polytopal()) return std::max(0.0, (facets_ * x).maxCoeff());
    Vec Ax = A_ * x;
    double a = 1.0 - acn2_;
    double b = Ax.dot(Ac_);
    double q = Ax.squaredNorm();
    if (q == 0.0) return 0.0;
    double s = std::sqrt(b * b + a * q);
    return b >= 0 ? q / (b + s) : (s - b) / a;
}

double Gauge::polar(const Vec& phi) const {
    require_dim(phi, dim_, "polar argument");
    if (polytopal()) return (vertices_ * phi).maxCoeff();
    return phi.dot(c_) + (Ainv_ * phi).norm();
}

Vec Gauge::norming_functional(const Vec& x) const {
    require_dim(x, dim_, "gauge argument");
    if (polytopal()) {
        Eigen::Index j;
        (facets_ * x).maxCoeff(&j);
        return facets_.row(j).transpose();
    }
    double gx = eval(x);
    if (gx == 0.0) return Vec::Zero(dim_);
    Vec z = x / gx;
    Vec n = A_.transpose() * (A_ * (z - c_));
    return n / n.dot(z);
}

NormingSet Gauge::norming_functionals(const Vec& x) const {
    require_dim(x, dim_, "gauge argument");
    NormingSet ns;
    if (x.norm() == 0.0) {
        ns.whole_polar_ball = true;
        if (polytopal())
            for (Eigen::Index j = 0; j < facets_.rows(); ++j) ns.generators.push_back(facets_.row(j).transpose());
        return ns;
    }
    if (!polytopal()) {
        ns.generators.push_back(norming_functional(x));
        return ns;
    }
    Vec vals = facets_ * x;
    double top = vals.maxCoeff();
    double tol = 1e-8 * (1.0 + std::abs(top));
    for (Eigen::Index j = 0; j < facets_.rows(); ++j)
        if (vals(j) >= top - tol) ns.generators.push_back(facets_.row(j).transpose());
    return ns;
}

Gauge Gauge::opposite() const {
    switch (kind_) {
        case Kind::HPolytope: return h_polytope(-given_);
        case Kind::VPolytope: return v_polytope(-given_);
        case Kind::Ellipsoid: return ellipsoid(A_, -c_);
    }
    return *this;
}

Gauge Gauge::scaled(double w) const {
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidGauge("gauge weight must be positive and finite");
    if (w == 1.0) return *this;
    Gauge g = *this;
    switch (kind_) {
        case Kind::HPolytope:
            g.given_ = given_ * w;
            g.facets_ = facets_ * w;
            g.vertices_ = vertices_ / w;
            break;
        case Kind::VPolytope:
            g.given_ = given_ / w;
            g.facets_ = facets_ * w;
            g.vertices_ = vertices_ / w;
            break;
        case Kind::Ellipsoid: g = ellipsoid(A_ * w, c_ / w); break;
    }
    return g;
}

double Gauge::lipschitz() const {
    if (polytopal()) return facets_.rowwise().norm().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Mat> es(A_);
    return es.eigenvalues().maxCoeff() / (1.0 - std::sqrt(acn2_));
}

double Gauge::inner_radius() const { return 1.0 / lipschitz(); }

double Gauge::outer_radius() const {
    if (polytopal()) return vertices_.rowwise().norm().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Mat> es(A_);
    return c_.norm() + 1.0 / es.eigenvalues().minCoeff();
}

const Mat& Gauge::facets() const {
    if (!polytopal()) throw InvalidGauge("facets() requires a polytopal gauge");
    return facets_;
}

const Mat& Gauge::vertices() const {
    if (!polytopal()) throw InvalidGauge("vertices() requires a polytopal gauge");
    return vertices_;
}

const Mat& Gauge::matrix() const {
    if (polytopal()) throw InvalidGauge("matrix() requires an ellipsoidal gauge");
    return A_;
}

const Vec& Gauge::center() const {
    if (polytopal()) throw InvalidGauge("center() requires an ellipsoidal gauge");
    return c_;
}

bool Gauge::is_symmetric(double tol) const {
    if (!polytopal()) return c_.norm() <= tol;
    for (Eigen::Index i = 0; i < vertices_.rows(); ++i) {
        bool found = false;
        for (Eigen::Index j = 0; j < vertices_.rows() && !found; ++j)
            found = (vertices_.row(i) + vertices_.row(j)).norm() <= tol * (1.0 + vertices_.row(i).norm());
        if (!found) return false;
    }
    return true;
}

AsymmetryWitness asymmetry_witness(const Gauge& g) {
    AsymmetryWitness w;
    if (g.polytopal()) {
        const Mat& V = g.vertices();
        w.ratio = -1.0;
        for (Eigen::Index k = 0; k < V.rows(); ++k) {
            Vec v = V.row(k).transpose();
            double r = g.eval(-v) / g.eval(v);
            if (r > w.ratio + 1e-12) {
                w.ratio = r;
                w.x0 = v;
            }
        }
        return w;
    }
    // Maximize the convex map u -> gamma(-(c + A^{-1} u)) over the unit sphere by the
    // normalized-gradient fixed point iteration, from many starts.
    const int d = g.dim();
    const Mat Ainv = g.matrix().inverse();
    const Vec c = g.center();
    auto F = [&](const Vec& u) { return g.eval(-(c + Ainv * u)); };
    auto grad = [&](const Vec& u) -> Vec { return -Ainv * g.norming_functional(-(c + Ainv * u)); };

    std::vector<Vec> starts;
    for (int i = 0; i < d; ++i) {
        Vec e = Vec::Zero(d);
        e(i) = 1.0;
        starts.push_back(e);
        starts.push_back(-e);
    }
    if (c.norm() > 0) {
        Vec u = g.matrix() * c;
        starts.push_back(u.normalized());
        starts.push_back(-u.normalized());
    }
    if (d == 2) {
        for (int k = 0; k < 720; ++k) {
            double t = 2.0 * M_PI * k / 720.0;
            Vec u(2);
            u << std::cos(t), std::sin(t);
            starts.push_back(u);
        }
    } else {
        std::mt19937_64 rng(12345);
        std::normal_distribution<double> nd;
        for (int k = 0; k < 256; ++k) {
            Vec u(d);
            for (int i = 0; i < d; ++i) u(i) = nd(rng);
            starts.push_back(u.normalized());
        }
    }
    // Keep the best few seeds and polish them.
    std::vector<std::pair<double, Vec>> seeds;
    for (const Vec& s : starts) seeds.emplace_back(F(s), s);
    std::sort(seeds.begin(), seeds.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    if (seeds.size() > 16) seeds.resize(16);
    double best = -1.0;
    Vec bestu;
    for (auto& [val, u0] : seeds) {
        Vec u = u0;
        double fv = val;
        for (int it = 0; it < 5000; ++it) {
            Vec gr = grad(u);
            if (gr.norm() == 0.0) break;
            Vec un = gr.normalized();
            double fn = F(un);
            bool done = (un - u).norm() < 1e-15 || fn <= fv + 1e-16;
            if (fn >= fv) {
                u = un;
                fv = fn;
            }
            if (done) break;
        }
        if (fv > best) {
            best = fv;
            bestu = u;
        }
    }
    w.x0 = c + Ainv * bestu;
    w.ratio = best / g.eval(w.x0);
    return w;
}

}  // namespace ftloc
