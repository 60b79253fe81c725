#include "ftloc/projection.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ftloc {

MinNormResult min_norm_point(const Mat& P) {
    const Eigen::Index m = P.rows();
    if (m == 0) throw InvalidSet("min_norm_point: empty point set");
    double scale = 0.0;
    Eigen::Index start = 0;
    for (Eigen::Index k = 0; k < m; ++k) {
        double nk = P.row(k).squaredNorm();
        scale = std::max(scale, nk);
        if (nk < P.row(start).squaredNorm()) start = k;
    }
    scale = std::max(scale, 1e-300);

    std::vector<Eigen::Index> S{start};
    std::vector<double> lam{1.0};
    Vec x = P.row(start).transpose();

    for (int major = 0; major < 2000; ++major) {
        Eigen::Index j = 0;
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < m; ++k) {
            double v = P.row(k).dot(x);
            if (v < best) {
                best = v;
                j = k;
            }
        }
        if (x.squaredNorm() - best <= 1e-15 * scale) break;
        if (std::find(S.begin(), S.end(), j) != S.end()) break;
        S.push_back(j);
        lam.push_back(0.0);

        for (int minor = 0; minor < 2000; ++minor) {
            const Eigen::Index s = static_cast<Eigen::Index>(S.size());
            Mat K = Mat::Zero(s + 1, s + 1);
            for (Eigen::Index a = 0; a < s; ++a) {
                for (Eigen::Index b = 0; b < s; ++b) K(a, b) = P.row(S[a]).dot(P.row(S[b]));
                K(a, s) = 1.0;
                K(s, a) = 1.0;
            }
            Vec rhs = Vec::Zero(s + 1);
            rhs(s) = 1.0;
            Vec sol = K.completeOrthogonalDecomposition().solve(rhs);
            Vec alpha = sol.head(s);
            if ((alpha.array() > 1e-14).all()) {
                for (Eigen::Index a = 0; a < s; ++a) lam[a] = alpha(a);
                break;
            }
            double theta = 1.0;
            for (Eigen::Index a = 0; a < s; ++a)
                if (alpha(a) <= 1e-14) {
                    double den = lam[a] - alpha(a);
                    if (den > 0) theta = std::min(theta, lam[a] / den);
                }
            for (Eigen::Index a = 0; a < s; ++a) lam[a] += theta * (alpha(a) - lam[a]);
            std::vector<Eigen::Index> S2;
            std::vector<double> l2;
            for (Eigen::Index a = 0; a < s; ++a)
                if (lam[a] > 1e-14) {
                    S2.push_back(S[a]);
                    l2.push_back(lam[a]);
                }
            if (S2.empty()) {
                S2.push_back(S.back());
                l2.push_back(1.0);
            }
            S = std::move(S2);
            lam = std::move(l2);
        }
        double tot = 0.0;
        for (double l : lam) tot += l;
        x.setZero();
        for (size_t a = 0; a < S.size(); ++a) {
            lam[a] /= tot;
            x += lam[a] * P.row(S[a]).transpose();
        }
    }
    MinNormResult r;
    r.point = x;
    r.weights = Vec::Zero(m);
    for (size_t a = 0; a < S.size(); ++a) r.weights(S[a]) = lam[a];
    return r;
}

MinNormResult project_hull(const Vec& x, const Mat& P) {
    require_dim(x, P.cols(), "project_hull");
    Mat Q = P.rowwise() - x.transpose();
    MinNormResult r = min_norm_point(Q);
    r.point = P.transpose() * r.weights;
    return r;
}

Vec project_flat(const Vec& x, const Vec& base, const Mat& Q) {
    if (Q.cols() == 0) return base;
    return base + Q * (Q.transpose() * (x - base));
}

Vec nnls(const Mat& G, const Vec& y) {
    // Lawson-Hanson active set method on A = G^T (d x k).
    const Mat A = G.transpose();
    const Eigen::Index k = A.cols();
    Vec b = Vec::Zero(k);
    if (k == 0) return b;
    std::vector<bool> passive(k, false);
    const double tol = 1e-13 * std::max(1.0, A.norm() * y.norm());
    for (int outer = 0; outer < 3 * static_cast<int>(k) + 10; ++outer) {
        Vec w = A.transpose() * (y - A * b);
        Eigen::Index t = -1;
        double wmax = tol;
        for (Eigen::Index j = 0; j < k; ++j)
            if (!passive[j] && w(j) > wmax) {
                wmax = w(j);
                t = j;
            }
        if (t < 0) break;
        passive[t] = true;
        for (int inner = 0; inner < 3 * static_cast<int>(k) + 10; ++inner) {
            std::vector<Eigen::Index> idx;
            for (Eigen::Index j = 0; j < k; ++j)
                if (passive[j]) idx.push_back(j);
            Mat Ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
            for (size_t a = 0; a < idx.size(); ++a) Ap.col(a) = A.col(idx[a]);
            Vec zp = Ap.completeOrthogonalDecomposition().solve(y);
            Vec z = Vec::Zero(k);
            for (size_t a = 0; a < idx.size(); ++a) z(idx[a]) = zp(a);
            bool ok = true;
            for (Eigen::Index j : idx)
                if (z(j) <= 0) ok = false;
            if (ok) {
                b = z;
                break;
            }
            double alpha = 1.0;
            for (Eigen::Index j : idx)
                if (z(j) <= 0) {
                    double den = b(j) - z(j);
                    if (den > 0) alpha = std::min(alpha, b(j) / den);
                }
            b += alpha * (z - b);
            for (Eigen::Index j : idx)
                if (b(j) <= 1e-15) {
                    b(j) = 0.0;
                    passive[j] = false;
                }
        }
    }
    return b;
}

EllipsoidProjector::EllipsoidProjector(const Vec& center, const Mat& Q) : c_(center) {
    Eigen::SelfAdjointEigenSolver<Mat> es(Q);
    V_ = es.eigenvectors();
    lambda_ = es.eigenvalues();
    if (lambda_.minCoeff() <= 0) throw InvalidSet("ellipsoid: matrix not positive definite");
}

Vec EllipsoidProjector::project(const Vec& x) const {
    Vec y = V_.transpose() * (x - c_);
    auto g = [&](double mu) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            double q = y(i) / (1.0 + mu * lambda_(i));
            s += lambda_(i) * q * q;
        }
        return s - 1.0;
    };
    if (g(0.0) <= 0.0) return x;
    double hi = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) hi += y(i) * y(i) / lambda_(i);
    hi = std::sqrt(hi) + 1e-300;
    double lo = 0.0, mu = 0.0;
    for (int it = 0; it < 200; ++it) {
        double gv = g(mu);
        double dg = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            double den = 1.0 + mu * lambda_(i);
            dg += -2.0 * lambda_(i) * lambda_(i) * y(i) * y(i) / (den * den * den);
        }
        if (gv > 0)
            lo = mu;
        else
            hi = mu;
        double next = (dg < 0) ? mu - gv / dg : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - mu) <= 1e-16 * std::max(1.0, mu)) {
            mu = next;
            break;
        }
        mu = next;
    }
    Vec z(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) z(i) = y(i) / (1.0 + mu * lambda_(i));
    return c_ + V_ * z;
}

}  // namespace ftloc
