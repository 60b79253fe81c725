#include <cmath>

#include "ftloc/ftcore.hpp"
#include "ftloc/simplex.hpp"

namespace ftloc {

void CertificateReport::add(std::string name, bool ok, double residual) {
    conditions.push_back({std::move(name), ok, residual});
    accepted = accepted && ok;
}

std::vector<std::string> CertificateReport::failures() const {
    std::vector<std::string> out;
    for (const Condition& c : conditions)
        if (!c.ok) out.push_back(c.name);
    return out;
}

namespace {

std::string site_label(size_t i) { return "site " + std::to_string(i + 1); }

// Per-site conditions of the set problem; returns the functional sum.
Vec check_sites(const Instance& inst, const Vec& x, const Certificate& cert, double tol, CertificateReport& rep) {
    Vec sum = Vec::Zero(inst.dimension);
    for (size_t i = 0; i < inst.sites.size(); ++i) {
        const Site& s = inst.sites[i];
        const Vec& phi = cert.phis[i];
        require_dim(phi, inst.dimension, "certificate functional");
        Gauge g = s.gauge.scaled(s.weight);
        double pv = g.polar(-phi);
        rep.add(site_label(i) + ": polar bound", pv <= 1.0 + tol, std::max(0.0, pv - 1.0));
        Support h = s.set.support(phi);
        if (h.infinite) {
            rep.add(site_label(i) + ": support finite", false, std::numeric_limits<double>::infinity());
        } else {
            double dist = set_distance(g, x, s.set).value;
            double r = std::abs(h.value + dist - phi.dot(x));
            rep.add(site_label(i) + ": support equality", r <= tol, r);
        }
        sum += phi;
    }
    return sum;
}

bool length_ok(const Instance& inst, const Certificate& cert, CertificateReport& rep) {
    bool ok = cert.phis.size() == inst.sites.size();
    if (!ok) rep.add("certificate length", false, std::abs(double(cert.phis.size()) - double(inst.sites.size())));
    return ok;
}

}  // namespace

CertificateReport certify_sets(const Instance& inst, const Vec& x, const Certificate& cert, double tol) {
    inst.validate();
    require_dim(x, inst.dimension, "certified point");
    CertificateReport rep;
    if (!length_ok(inst, cert, rep)) return rep;
    Vec sum = check_sites(inst, x, cert, tol, rep);
    rep.add("balance", sum.norm() <= tol, sum.norm());
    return rep;
}

CertificateReport certify_heron(const Instance& inst, const Vec& x, const Certificate& cert, double tol) {
    inst.validate();
    require_dim(x, inst.dimension, "certified point");
    if (!inst.constraint) throw PreconditionError("certify_heron: instance has no constraint set");
    if (!inst.constraint->contains(x, tol)) throw PreconditionError("certify_heron: point lies outside the constraint set");
    CertificateReport rep;
    if (!length_ok(inst, cert, rep)) return rep;
    Vec sum = check_sites(inst, x, cert, tol, rep);
    if (!cert.phi0) {
        rep.add("constraint functional present", false, 0.0);
        return rep;
    }
    require_dim(*cert.phi0, inst.dimension, "constraint functional");
    rep.add("constraint normal cone", normal_cone_contains(*inst.constraint, x, *cert.phi0, tol), 0.0);
    sum += *cert.phi0;
    rep.add("balance", sum.norm() <= tol, sum.norm());
    return rep;
}

CertificateReport certify(const Instance& inst, const Vec& x, const Certificate& cert, double tol) {
    return inst.constraint ? certify_heron(inst, x, cert, tol) : certify_sets(inst, x, cert, tol);
}

CertificateReport certify_points(const Instance& inst, const Vec& x, const Certificate& cert, double tol) {
    inst.validate();
    require_dim(x, inst.dimension, "certified point");
    if (!inst.all_singletons()) throw PreconditionError("certify_points: every site must be a singleton");
    CertificateReport rep;
    if (!length_ok(inst, cert, rep)) return rep;
    const size_t n = inst.sites.size();
    // Stored functionals follow the set-problem convention; the point problem uses their negatives.
    std::vector<Vec> psi(n);
    std::vector<Gauge> g;
    size_t at_site = n;
    for (size_t i = 0; i < n; ++i) {
        psi[i] = -cert.phis[i];
        require_dim(psi[i], inst.dimension, "certificate functional");
        g.push_back(inst.sites[i].gauge.scaled(inst.sites[i].weight));
        Vec p = inst.sites[i].set.anchor();
        if (at_site == n && (p - x).norm() <= 1e-12 * (1.0 + p.norm())) at_site = i;
    }
    Vec others = Vec::Zero(inst.dimension);
    for (size_t i = 0; i < n; ++i) {
        if (i == at_site) continue;
        Vec u = inst.sites[i].set.anchor() - x;
        double gu = g[i].eval(u);
        double pv = g[i].polar(psi[i]);
        if (gu > 0.0) {
            rep.add(site_label(i) + ": polar value one", std::abs(pv - 1.0) <= tol, std::abs(pv - 1.0));
            double r = std::abs(psi[i].dot(u) - gu);
            rep.add(site_label(i) + ": norming equality", r <= tol, r);
        } else {
            rep.add(site_label(i) + ": polar bound", pv <= 1.0 + tol, std::max(0.0, pv - 1.0));
        }
        others += psi[i];
    }
    if (at_site == n) {
        rep.add("balance", others.norm() <= tol, others.norm());
    } else {
        double pv = g[at_site].polar(-others);
        rep.add(site_label(at_site) + ": polar bound of the remaining sum", pv <= 1.0 + tol, std::max(0.0, pv - 1.0));
    }
    return rep;
}

std::optional<Certificate> find_certificate(const Instance& inst, const Vec& x, double tol) {
    inst.validate();
    require_dim(x, inst.dimension, "point");
    const Eigen::Index d = inst.dimension;
    const double scale = 1.0 + x.norm();
    const double snap = std::max(tol, 1e-9) * scale;

    std::vector<FunctionalSet> parts;
    for (const Site& s : inst.sites) parts.push_back(SiteTerm(s.gauge.scaled(s.weight), s.set).subdifferential(x, snap));
    bool heron = inst.constraint.has_value();
    if (heron) {
        const ConvexSet& K0 = *inst.constraint;
        Vec px = K0.project(x);
        if ((px - x).norm() > snap) return std::nullopt;
        parts.push_back(normal_cone_description(K0, px));
    }

    // Variables: per part phi (free, d), beta (>= 0); then slack variables.
    std::vector<Eigen::Index> phi_off, beta_off, beta_cnt;
    Eigen::Index nv = 0;
    for (const FunctionalSet& fs : parts) {
        phi_off.push_back(nv);
        nv += d;
        beta_off.push_back(nv);
        Eigen::Index k = fs.free_phi ? 0 : fs.generators.rows();
        beta_cnt.push_back(k);
        nv += k;
    }
    Eigen::Index nslack = 0;
    for (const FunctionalSet& fs : parts) nslack += fs.ineq.rows() + 2 * fs.eq.rows();
    nslack += 2 * d;
    const Eigen::Index slack_off = nv;
    nv += nslack;

    LinearProgram lp(nv);
    lp.cost().segment(slack_off, nslack).setOnes();
    Eigen::Index sl = slack_off;
    for (size_t p = 0; p < parts.size(); ++p) {
        const FunctionalSet& fs = parts[p];
        for (Eigen::Index j = 0; j < d; ++j) lp.set_free(phi_off[p] + j);
        if (!fs.free_phi) {
            // phi - G^T beta = 0
            for (Eigen::Index r = 0; r < d; ++r) {
                Vec row = lp.zero_row();
                row(phi_off[p] + r) = 1.0;
                row.segment(beta_off[p], beta_cnt[p]) = -fs.generators.col(r);
                lp.add_eq(row, 0.0);
            }
            if (fs.hull) {
                Vec row = lp.zero_row();
                row.segment(beta_off[p], beta_cnt[p]).setOnes();
                lp.add_eq(row, 1.0);
            }
        }
        for (Eigen::Index i = 0; i < fs.ineq.rows(); ++i) {
            Vec row = lp.zero_row();
            row.segment(phi_off[p], d) = fs.ineq.row(i).transpose();
            row(sl++) = -1.0;
            lp.add_ub(row, fs.ineq_rhs(i));
        }
        for (Eigen::Index i = 0; i < fs.eq.rows(); ++i) {
            Vec row = lp.zero_row();
            row.segment(phi_off[p], d) = fs.eq.row(i).transpose();
            row(sl++) = 1.0;
            row(sl++) = -1.0;
            lp.add_eq(row, fs.eq_rhs(i));
        }
    }
    for (Eigen::Index r = 0; r < d; ++r) {
        Vec row = lp.zero_row();
        for (size_t p = 0; p < parts.size(); ++p) row(phi_off[p] + r) = 1.0;
        row(sl++) = 1.0;
        row(sl++) = -1.0;
        lp.add_eq(row, 0.0);
    }
    LpResult r = solve_lp(lp);
    if (r.status != LpStatus::Optimal) return std::nullopt;
    if (r.objective > tol * scale) return std::nullopt;

    Certificate cert;
    for (size_t i = 0; i < inst.sites.size(); ++i) cert.phis.push_back(r.x.segment(phi_off[i], d));
    if (heron) cert.phi0 = r.x.segment(phi_off.back(), d);
    return cert;
}

}  // namespace ftloc
